#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "displab/grid.hpp"

namespace displab {

using cplx = std::complex<double>;

/// Complex field sampled on a Grid. Immutable after construction; the
/// Fourier side is computed lazily and cached (thread-safe). The transform
/// is unitary (forward carries 1/sqrt(total)), so the discrete Parseval
/// identity holds with unit constant.
class Field {
  public:
    Field() = default;

    static Field from_samples(const Grid& g, std::vector<cplx> samples);
    static Field from_spectrum(const Grid& g, std::vector<cplx> spectrum);
    /// Continuum-density constructor: realizes f(x) = \int a(xi) e^{i x.xi} dxi
    /// by a lattice Riemann sum, i.e. samples = sum_m a(xi_m) e^{i x.xi_m} dxi^d.
    static Field from_density(const Grid& g,
                              const std::function<cplx(const Vec&)>& density);
    static Field zero(const Grid& g);

    const Grid& grid() const { return grid_; }
    const std::vector<cplx>& samples() const;
    const std::vector<cplx>& spectrum() const;

    /// New field with spectrum multiplied by m(xi); samples recomputed lazily.
    Field apply_multiplier(const std::function<cplx(const Vec&)>& m) const;

    /// (sum |f(x_j)|^p cellvol)^(1/p); max over grid points for p = inf.
    double lp_norm(double p) const;
    double l2_norm() const { return lp_norm(2.0); }
    double l2_norm_spectral() const;

    /// Fraction of spectral L^2 mass at |xi|_inf above the given frequency.
    double spectral_mass_above(double freq) const;
    /// Fraction of physical L^2 mass at |x|_inf beyond the given radius.
    double mass_outside(double radius) const;

    Field scaled(cplx factor) const;
    Field operator+(const Field& o) const;
    Field operator-(const Field& o) const;
    /// Pointwise product in physical space.
    Field pointwise_mul(const Field& o) const;
    Field conj() const;

  private:
    struct State;
    Grid grid_;
    std::shared_ptr<State> state_;
};

double lp_norm(const Field& f, double p);

/// Uniformly time-sampled sequence of Fields on one Grid over [t_start, t_end].
struct SpaceTimeField {
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<Field> slices;

    double dt() const {
        return slices.size() > 1 ? (t_end - t_start) / double(slices.size() - 1)
                                 : 0.0;
    }
    double time(std::size_t j) const { return t_start + double(j) * dt(); }
    const Grid& grid() const { return slices.at(0).grid(); }
};

/// Mixed norm L^{p_t}_t L^{q_x}_x: composite trapezoid in t of the per-slice
/// spatial norms; max over slices for p_t = inf.
double spacetime_norm(const SpaceTimeField& u, double p_t, double q_x);

}  // namespace displab
