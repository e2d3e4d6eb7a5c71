#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "displab/grid.hpp"

namespace displab {

using Mat = std::array<std::array<double, 2>, 2>;

Mat mat_zero();
Mat mat_identity(int d, int k = 0);  // diag(1,..,1,-1,..,-1) with k minus signs

/// Variable-coefficient phase in canonical form
///   phi(t, x; xi) = <x, xi> + 1/2 <H(t,x) xi, xi>
/// on Z x Xi subset B^{d+1}(0,1) x B^d(0,1). All built-ins (and their
/// parabolic rescalings) are quadratic in xi, so the Hessian H carries the
/// whole variable structure and xi-derivatives of order >= 3 vanish
/// identically. Amplitude a = a1(z) a2(xi) with smoothstep bumps.
///
/// Built-ins:
///   parabolic:  H = t I_d
///   hyperbolic: H = t I^k_d
///   perturbed:  phi_par + eps t^2 x_1 |xi|^2, i.e. H = (t + 2 eps t^2 x_1) I_d
/// plus rescaled phases produced by parabolic_rescale.
class PhaseSpec {
  public:
    enum class Kind { parabolic, hyperbolic, perturbed, rescaled };

    static PhaseSpec parabolic(int d);
    static PhaseSpec hyperbolic(int d, int k);
    static PhaseSpec perturbed(int d, double eps);
    static PhaseSpec rescaled_from(std::shared_ptr<const PhaseSpec> parent,
                                   const Vec& xi0, double rho);

    Kind kind() const { return kind_; }
    int dim() const { return d_; }
    int signature() const { return k_; }
    double eps() const { return eps_; }
    std::string name() const;

    /// Hessian of phi in xi at position z = (t, x).
    Mat H(double t, const Vec& x) const;
    /// dH/dt; analytic for built-ins, central differences (step 1e-4) for
    /// rescaled phases.
    Mat Ht(double t, const Vec& x) const;
    /// dH/dx_l.
    Mat Hx(int l, double t, const Vec& x) const;
    /// d^2 H / dz_a dz_b with z = (t, x_1, ..., x_d); a, b in [0, d].
    Mat Hzz(int a, int b, double t, const Vec& x) const;

    double phi(double t, const Vec& x, const Vec& xi) const;
    /// grad_xi phi = x + H xi.
    Vec grad_xi(double t, const Vec& x, const Vec& xi) const;
    /// grad_x phi (component l: xi_l + 1/2 <dH/dx_l xi, xi>).
    Vec grad_x(double t, const Vec& x, const Vec& xi) const;
    /// d phi / dt = 1/2 <Ht xi, xi>.
    double dphi_dt(double t, const Vec& x, const Vec& xi) const;

    /// Amplitude factors. a1 is 1 on |z| <= a1_flat, supported in
    /// |z| < a1_supp (margin 1 - a1_supp from the boundary of Z).
    double a1(double t, const Vec& x) const;
    double a2(const Vec& xi) const;
    double margin() const { return 1.0 - a1_supp_; }
    double a2_support_radius() const { return a2_supp_; }

    /// Structured form lambda phi(z/lambda; xi) = <x, eta(t, xi)> + beta(t, xi)
    /// available for the built-in (non-rescaled) phases; used by the lattice
    /// evaluators. d = 1 only for the perturbed inverse.
    bool has_linear_x_structure() const { return kind_ != Kind::rescaled; }
    double eta_of_xi(double t, double xi, double lambda) const;
    double xi_of_eta(double t, double eta, double lambda) const;
    double deta_dxi(double t, double xi, double lambda) const;
    double beta(double t, const Vec& xi) const;

    /// Positions solved by damped Newton (tol 1e-12, <= 50 iterations):
    /// Phi: X with grad_xi phi(t, X; xi0) = y.
    Vec solve_position(double t, const Vec& y, const Vec& xi0) const;
    /// Psi: xi with grad_x phi(t, x; xi) = target.
    Vec solve_frequency(double t, const Vec& x, const Vec& target) const;

  private:
    Kind kind_ = Kind::parabolic;
    int d_ = 1;
    int k_ = 0;
    double eps_ = 0.0;
    std::shared_ptr<const PhaseSpec> parent_;
    Vec xi0_{0.0, 0.0};
    double rho_ = 1.0;
    double a1_flat_ = 0.5, a1_supp_ = 0.75;
    double a2_flat_ = 0.5, a2_supp_ = 0.875;
};

}  // namespace displab
