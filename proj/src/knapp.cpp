#include "displab/knapp.hpp"

#include <cmath>
#include <stdexcept>

#include "displab/propagator.hpp"
#include "displab/windows.hpp"

namespace displab {

namespace {

/// Bin weight for the sharp indicator of (lo, hi): cells fully inside count
/// 1, cells straddling an endpoint count 1/2.
double bin_weight(double xi, double half_cell, double lo, double hi) {
    double a = xi - half_cell, b = xi + half_cell;
    bool lo_in = a < lo && lo < b;
    bool hi_in = a < hi && hi < b;
    if (lo_in || hi_in) return 0.5;
    return (xi > lo && xi < hi) ? 1.0 : 0.0;
}

}  // namespace

Field make_aniso_unit(double eps, const Grid& g) {
    if (!(eps > 0.0) || eps > 0.5)
        throw std::invalid_argument("make_aniso_unit: eps in (0, 1/2]");
    double dxi = g.freq_spacing();
    if (2.0 * eps / dxi < 8.0)
        throw std::invalid_argument(
            "make_aniso_unit: grid does not resolve the eps-window");
    double hc = 0.5 * dxi;
    return Field::from_density(g, [&](const Vec& xi) {
        double w = bin_weight(xi[0], hc, 1.0 - eps, 1.0 + eps);
        if (g.d == 2) w *= bin_weight(xi[1], hc, -eps, eps);
        return cplx(w, 0.0);
    });
}

Field make_aniso_high(double lambda, const Grid& g) {
    if (!(lambda >= 4.0))
        throw std::invalid_argument("make_aniso_high: lambda >= 4");
    if (lambda + 1.0 > g.half_nyquist())
        throw std::invalid_argument("make_aniso_high: lambda above half-Nyquist");
    double dxi = g.freq_spacing();
    if (2.0 / dxi < 8.0)
        throw std::invalid_argument("make_aniso_high: unit window unresolved");
    double hc = 0.5 * dxi;
    return Field::from_density(g, [&](const Vec& xi) {
        double w = bin_weight(xi[0], hc, lambda - 1.0, lambda + 1.0);
        if (g.d == 2) w *= bin_weight(xi[1], hc, -1.0, 1.0);
        return cplx(w, 0.0);
    });
}

Field make_isotropic(double lambda, const Grid& g) {
    if (!(lambda >= 4.0))
        throw std::invalid_argument("make_isotropic: lambda >= 4");
    if (4.0 * lambda > g.half_nyquist())
        throw std::invalid_argument(
            "make_isotropic: 4*lambda above half-Nyquist");
    return Field::from_density(g, [&](const Vec& eta) {
        double r = std::sqrt(eta[0] * eta[0] + eta[1] * eta[1]) / lambda;
        double amp = ramp_bump(r, 0.25, 0.5, 2.0, 4.0);
        if (amp == 0.0) return cplx(0.0, 0.0);
        double chirp = -(eta[0] * eta[0] + eta[1] * eta[1]);
        return amp * cplx(std::cos(chirp), std::sin(chirp));
    });
}

double tube_lower_bound(double eps, const Grid& g, double p_t, double q_x,
                        double t_max, int steps) {
    if (t_max > 1.0 / (eps * eps) + 1e-9)
        throw std::invalid_argument("tube_lower_bound: window exceeds eps^-2");
    Field f = make_aniso_unit(eps, g);
    double tube_hw = 2.0 / eps;
    double reach = 2.0 * t_max + tube_hw;
    if (reach > 0.5 * g.box_len)
        throw std::invalid_argument("tube_lower_bound: tube escapes the box");

    auto sym = DispersionSymbol::parabolic();
    SpaceTimeField restricted;
    restricted.t_start = -t_max;
    restricted.t_end = t_max;
    double dt = 2.0 * t_max / double(steps - 1);
    for (int j = 0; j < steps; ++j) {
        double t = -t_max + j * dt;
        Field u = evolve_free(f, t, sym);
        // Wave packets at frequency ~ e_1 travel with velocity +2 under the
        // e^{-i t |xi|^2} convention; the tube follows them.
        std::vector<cplx> cut = u.samples();
        const Grid& gg = u.grid();
        for (std::size_t i = 0; i < cut.size(); ++i) {
            Vec x = gg.point(i);
            if (std::abs(x[0] - 2.0 * t) > tube_hw) cut[i] = cplx(0.0, 0.0);
        }
        restricted.slices.push_back(Field::from_samples(gg, std::move(cut)));
    }
    return spacetime_norm(restricted, p_t, q_x);
}

double refocus_lower_bound(double lambda, const Grid& g, double p_t, double q_x,
                           int steps) {
    if (steps < 16)
        throw std::invalid_argument("refocus_lower_bound: >= 16 slices");
    Field f = make_isotropic(lambda, g);
    double window = 0.1 / (lambda * lambda);
    SpaceTimeField u = evolve_interval(f, isotropic_focus_time,
                                       isotropic_focus_time + window, steps,
                                       DispersionSymbol::parabolic());
    return spacetime_norm(u, p_t, q_x);
}

}  // namespace displab
