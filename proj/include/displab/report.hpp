#pragma once

#include <string>

#include "displab/sweep.hpp"

namespace displab {

/// result.csv with columns scale,lhs,rhs,ratio (deterministic %.17g floats).
std::string to_csv(const SweepResult& r);

/// result.json: records, fit, target, tolerance, pass flag, fingerprint.
std::string to_json(const SweepResult& r, const std::string& config_echo);

/// Log-log scatter with fitted and theoretical lines.
std::string to_svg(const SweepResult& r);

void write_file(const std::string& path, const std::string& content);

}  // namespace displab
