#pragma once

#include "displab/grid.hpp"

namespace displab {

/// C^3 polynomial smoothstep: 0 for t <= 0, 1 for t >= 1, and
/// t^4 (35 - 84 t + 70 t^2 - 20 t^3) in between. Satisfies the exact
/// complement identity smoothstep(t) + smoothstep(1 - t) = 1.
double smoothstep(double t);

/// Smooth bump equal to 1 on [lo1, hi1], supported on [lo0, hi0],
/// smoothstep ramps in between.
double ramp_bump(double r, double lo0, double lo1, double hi1, double hi0);

/// Frequency-uniform window family sigma_k(xi) = sigma0(xi - k), k in Z^d,
/// with sigma0 the tensor product of the 1-D profile
///   sigma0(u) = smoothstep(1 + u) on [-1, 0], smoothstep(1 - u) on [0, 1].
/// Translates sum to 1 exactly: sum_k sigma0(u - k) = 1 for every u.
struct WindowFamily {
    static double profile(double u);
    double sigma(const KVec& k, const Vec& xi, int d) const;

    /// Largest window index (per axis) whose cube [k-1, k+1] stays within
    /// the half-Nyquist band of the grid.
    int cover_limit(const Grid& g) const;
    /// max_lattice |sum_k sigma_k(xi) - 1| over the covered band.
    double partition_residual(const Grid& g) const;
};

}  // namespace displab
