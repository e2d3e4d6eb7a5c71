#pragma once

#include <iosfwd>
#include <string>

#include "displab/field.hpp"

namespace displab {

/// Binary field snapshot. Layout (all little-endian 64-bit):
///   u64 d, u64 n, f64 box_len, f64 time_tag,
/// then n^d interleaved (re, im) f64 pairs in row-major order.
void write_snapshot(std::ostream& os, const Field& f, double time_tag);
Field read_snapshot(std::istream& is, double* time_tag = nullptr);

void save_snapshot(const std::string& path, const Field& f, double time_tag);
Field load_snapshot(const std::string& path, double* time_tag = nullptr);

}  // namespace displab
