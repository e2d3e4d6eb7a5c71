#pragma once

#include "displab/field.hpp"

namespace displab {

/// The three extremizer families: anisotropic at unit frequencies (eps),
/// anisotropic at high frequencies (lambda), isotropic annulus with a
/// quadratic chirp (lambda).
struct KnappSpec {
    enum class Family { aniso_unit, aniso_high, isotropic };
    Family family = Family::aniso_unit;
    int d = 1;
    double eps = 0.25;     // aniso_unit
    double lambda = 16.0;  // aniso_high / isotropic
};

/// Spectrum = indicator of (1-eps, 1+eps) x (-eps, eps)^{d-1}, realized
/// bin-wise with boundary bins weighted 1/2. Needs >= 8 frequency bins
/// across each eps-window.
Field make_aniso_unit(double eps, const Grid& g);

/// Spectrum = indicator of (lambda-1, lambda+1) x (-1, 1)^{d-1};
/// lambda must sit below half-Nyquist.
Field make_aniso_high(double lambda, const Grid& g);

/// Radial chirp datum: density theta(|eta|/lambda) e^{-i |eta|^2} with theta
/// the smoothstep annulus bump (1 on [1/2, 2], supported in [1/4, 4]).
/// Under the e^{-i t |xi|^2} propagator convention it refocuses at t = -1.
Field make_isotropic(double lambda, const Grid& g);

/// Refocusing time of the isotropic family under this propagator convention.
inline constexpr double isotropic_focus_time = -1.0;

/// Mixed norm of U g_eps restricted to the moving tube
/// {|x - 2 t e_1| <= 2/eps} over I = [-T, T]; T = 1 for the local regime,
/// T = eps^{-2} for the global one.
double tube_lower_bound(double eps, const Grid& g, double p_t, double q_x,
                        double t_max, int steps = 33);

/// L^{p_t} norm over the refocusing window [-1, -1 + lambda^{-2}/10] of
/// ||U f_lambda(t)||_{q_x}, resolved by >= 16 slices.
double refocus_lower_bound(double lambda, const Grid& g, double p_t, double q_x,
                           int steps = 17);

}  // namespace displab
