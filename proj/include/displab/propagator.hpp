#pragma once

#include <vector>

#include "displab/field.hpp"
#include "displab/modspace.hpp"
#include "displab/sweep.hpp"

namespace displab {

/// Dispersion relation of the linear flow. The propagator multiplies the
/// spectrum by exp(-i t omega(xi)) with
///   parabolic:  omega = |xi|^2        (i u_t + Laplace u = 0)
///   fractional: omega = |xi|^alpha    (alpha > 1)
///   signature:  omega = xi1^2 - xi2^2 (d = 2 only)
struct DispersionSymbol {
    enum class Kind { parabolic, fractional, signature };
    Kind kind = Kind::parabolic;
    double alpha = 2.0;

    static DispersionSymbol parabolic();
    static DispersionSymbol fractional(double alpha);
    static DispersionSymbol signature();

    double omega(const Vec& xi) const;
};

Field evolve_free(const Field& f, double t, const DispersionSymbol& sym);

/// Slices j = evolve_free(f, t0 + j dt); exact per slice, no stepping error.
SpaceTimeField evolve_interval(const Field& f, double t0, double t1, int steps,
                               const DispersionSymbol& sym);

struct KernelSample {
    double t = 0.0;
    double l1 = 0.0;
    double bound_ratio = 0.0;  // l1 / (1 + |t|/lambda^2)^d
};

/// L^1(dx) profile of K(.,t) = \int e^{i(x.xi - t|xi|^2)} a_lambda(xi) dxi with
/// a_lambda a smooth bump on the lambda^{-1}-box at xi0 (|xi0| ~ lambda). The
/// profile is translation invariant, so it is evaluated in the frame moving
/// with the box center (exact Galilean identity). Each value is checked for
/// 2% stability under doubling the grid resolution.
std::vector<KernelSample> kernel_l1_profile(int d, double lambda, double xi0,
                                            const std::vector<double>& times);

struct FixedTimeGrowth {
    std::vector<SweepRecord> records;  // scale = t, ratio = operator witness
    FitResult fit;
    double upper_constant = 0.0;  // max ratio / <t>^{d|1/2-1/p|}
    bool box_escape = false;
};

/// Operator-norm growth of U(t) on M^s_{p,q}, witnessed on the dual datum:
/// for a radial probe with real spectrum in B(0,1), ||U(-t) probe|| equals
/// ||U(t) probe||, so ||probe|| / ||U(t) probe|| is the ratio
/// ||U(t) g_t|| / ||g_t|| attained at g_t = U(-t) probe. Its fitted slope
/// recovers d |1/2 - 1/p|.
FixedTimeGrowth fixed_time_growth(double p, double q, double s,
                                  const std::vector<double>& trange,
                                  const Field& probe,
                                  const WindowFamily& windows);

/// Radial Schwartz-type probe with spectrum a smooth bump inside B(0,1).
Field radial_probe(const Grid& g);

}  // namespace displab
