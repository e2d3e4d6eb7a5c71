#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace displab {

/// One measured point of a dyadic sweep.
struct SweepRecord {
    double scale = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct FitResult {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double r_squared = 1.0;
    bool reliable = true;  // r^2 >= 0.9
};

/// Ordinary least squares on (log2 scale, log2 ratio). Requires >= 4 records
/// with positive scales and ratios; throws otherwise, naming the offender.
FitResult fit_exponent(const std::vector<SweepRecord>& records);

struct SweepResult {
    std::string experiment;
    std::vector<SweepRecord> records;  // sorted by scale
    FitResult fit;
    double target_slope = 0.0;
    double tolerance = 0.0;
    bool slope_asserted = false;
    bool passed = true;
    std::string fingerprint;
    std::vector<std::string> notes;
};

/// FNV-1a hash of a canonical config string; stable across runs/platforms.
std::string fingerprint_of(const std::string& canonical);

}  // namespace displab
