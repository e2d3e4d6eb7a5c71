#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "displab/phase.hpp"

namespace displab {

using cplx = std::complex<double>;
using Density = std::function<cplx(const Vec&)>;

/// Finitely overlapping family of R^{-1/2} caps covering B^d(0,1), realized
/// as translates of the scaled smoothstep profile; the cap windows sum to 1
/// on B^d(0,1) exactly.
struct CapSet {
    int d = 1;
    double R = 16.0;
    double width = 0.25;             // R^{-1/2}
    std::vector<KVec> centers_idx;   // center = idx * width per axis

    static CapSet cover(int d, double R);
    Vec center(std::size_t i) const;
    double window(std::size_t i, const Vec& xi) const;
    /// max |sum_caps window - 1| sampled on B(0,1).
    double partition_residual(int samples_per_axis = 257) const;
};

/// E_h f(t,x) = int_{B^d(0,1)} e^{i(x.xi + t h(xi))} f(xi) dxi by trapezoid
/// quadrature on a uniform mesh (auto-sized from the Nyquist criterion
/// max |x| + |t| sup|grad h| unless mesh_nodes is given; a user mesh below
/// the criterion is rejected). points are (t, x1, x2).
std::vector<cplx> extension_op(const std::function<double(const Vec&)>& h,
                               const Density& f,
                               const std::vector<std::array<double, 3>>& points,
                               int d = 1, int mesh_nodes = 0);

/// T^lambda f(t,x) = a1(z/lambda) int e^{i lambda phi(z/lambda; xi)}
/// a2(xi) f(xi) dxi, direct quadrature at arbitrary points. Points outside
/// the amplitude support give exact 0.
std::vector<cplx> osc_op(const PhaseSpec& phase, double lambda, const Density& f,
                         const std::vector<std::array<double, 3>>& points,
                         int mesh_nodes = 0);

/// w_B(t,x) = (1 + R^{-1}|x - xbar| + R^{-1}|t - tbar|)^{-N}.
double weight_eval(double t, const Vec& x, double t_center, const Vec& x_center,
                   double R, int N_w);

/// Space-time lattice values of an oscillatory integral, spacing 1/4 in t and
/// x, evaluated per time slice with a zero-padded FFT (d = 1).
struct LatticeValues {
    std::vector<double> times;
    double x_spacing = 0.25;
    int fft_size = 0;
    std::vector<std::vector<cplx>> rows;  // rows[j][i] at x = x_of(i)

    double x_of(int i) const {
        int m = i < fft_size / 2 ? i : i - fft_size;
        return m * x_spacing;
    }
};

struct WeightSpec {
    double t_center = 0.0;
    double x_center = 0.0;
    double R = 16.0;
    int N_w = 20;
};

/// Weighted L^p norm over the lattice (cell measure spacing^2 for d = 1).
double weighted_lp(const LatticeValues& v, double p, const WeightSpec& w);

/// l^2 over caps of the weighted L^p norms.
double decoupled_norm(const std::vector<LatticeValues>& cap_values, double p,
                      const WeightSpec& w);

struct DecouplingSetup {
    bool variable = false;          // false: E_h for the parabola h = |xi|^2/2
    PhaseSpec phase = PhaseSpec::parabolic(1);  // for variable runs
    double lambda = 0.0;            // variable runs: lambda >= R
    Density f;
    double p = 4.0;
    int k = 0;                      // signature fed to alpha(p,k)
    int workers = 1;                // cap evaluations run independently
};

struct DecouplingRatio {
    double R = 0.0;
    double plain = 0.0;      // ||E f||_{L^p(w_{B_R})}
    double decoupled = 0.0;  // (sum_caps ||E f_cap||^2)^{1/2}
    double alpha = 0.0;      // alpha(p,k) from the exponent table
    double D = 0.0;          // plain / (R^alpha * decoupled)
    bool refinement_ok = true;
};

/// D(R) for 16 <= R <= 1024 dyadic; norms on a spacing-1/4 lattice inside
/// B_{d+1}(0,R) plus weighted tails; flags >5% instability under mesh
/// refinement. d = 1.
DecouplingRatio decoupling_ratio(const DecouplingSetup& setup, double R);

struct ConditionResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;
    double bound = 0.0;
    double worst_t = 0.0;
    Vec worst_x{0.0, 0.0};
    Vec worst_xi{0.0, 0.0};
};

struct ConditionReport {
    std::vector<ConditionResult> conditions;
    bool all_pass() const;
    const ConditionResult& find(const std::string& name) const;
};

/// Samples H1_1, H2^1_{[k]}, D1^1_1, D1^2_1, D2_A, M_A and the group-velocity
/// consequence |dt grad_xi phi| <= 2|xi| on a Halton sample of Z x Xi.
ConditionReport verify_phase_conditions(const PhaseSpec& phase, double c_par,
                                        double A, int N, int samples = 600);

/// Parabolic rescaling to the cap xi0 + rho^{-1} B^d: returns the rescaled
/// PhaseSpec realizing <x,xi> + int_0^1 (1-r) <H(Phi(t, x/rho); .) xi, xi> dr.
PhaseSpec parabolic_rescale(const PhaseSpec& phase, const Vec& xi0, double rho);

struct ApproximationResult {
    double rel_error = 0.0;   // ||T - E(.-zbar)|| / ||T|| on w_{B(zbar,K)}
    double eig_min = 0.0;     // extremes of |mu|, mu eigenvalue of hess h_zbar
    double eig_max = 0.0;
    double t_norm = 0.0;
};

/// Compares T^lambda f with the frozen-center extension E_{zbar} f_{zbar} on
/// a spacing-1/4 lattice in B(zbar, K); h_zbar, Psi, the Jacobian factor and
/// the phase-adjusted density follow the frozen-center construction.
ApproximationResult approximation_error(const PhaseSpec& phase, double lambda,
                                        double K, double tbar, double xbar,
                                        const Density& f, double p);

}  // namespace displab
