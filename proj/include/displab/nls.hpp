#pragma once

#include <vector>

#include "displab/field.hpp"

namespace displab {

/// Cubic NLS on the line: i u_t + u_xx = sign * |u|^2 u,
/// sign = +1 defocusing, -1 focusing.
struct NlsRun {
    Field initial;
    int sign = +1;
    double horizon = 1.0;
    double dt = 1e-3;
};

/// Strang-split reference solver (half nonlinear phase, full spectral linear
/// step, half nonlinear). Second order in dt; conserves mass to roundoff.
/// Refuses when max|u|^2 dt > 0.1. nonlinear_coeff = 0 gives the free flow.
SpaceTimeField splitstep_solve(const NlsRun& run, double nonlinear_coeff = 1.0);

/// Duhamel trilinear term N3(u1,u2,u3)(t) = -i sign \int_0^t e^{i(t-s)Dxx}
/// (u1 conj(u2) u3)(s) ds, trapezoid in s with exact spectral propagation of
/// each sample. All inputs must share one time grid starting at t = 0.
SpaceTimeField duhamel_n3(const SpaceTimeField& u1, const SpaceTimeField& u2,
                          const SpaceTimeField& u3, int sign = +1);

/// Homogeneous Picard terms A_1 = Lf, A_m = sum over m1+m2+m3=m of
/// N3(A_{m1}, A_{m2}, A_{m3}); zero unless m is odd.
struct PicardSeries {
    std::vector<SpaceTimeField> a;  // a[j] = A_{2j+1}
    bool diverging = false;         // ||A_{m+2}|| / ||A_m|| >= 1 observed
    std::vector<double> term_norms;
};

PicardSeries picard_series(const Field& f, int m_max, double t_end, int steps,
                           int sign = +1);

/// Higher iterates u^0 = Lf, u^1 = N3(u^0 x3), and the grouped recursion;
/// u[j] regroups terms of degree >= 2j+1.
std::vector<SpaceTimeField> higher_iterates(const Field& f, int n, double t_end,
                                            int steps, int sign = +1);

/// Residual of the regrouping identity sum_{k=1}^{j-1} u^k =
/// N3(sum_{k<=j-2} u^k x3), relative L^inf_t L^2_x, for 2 <= j <= n-1.
std::vector<double> iterate_identity_residuals(
    const std::vector<SpaceTimeField>& iterates, int sign = +1);

struct VSolve {
    SpaceTimeField v;
    bool contracted = false;
    int iterations = 0;
    double final_change = 0.0;
};

/// Fixed point of v = N3(v + S, v + S, v + S) - sum_{j>=1} u^j with
/// S = sum_{j<n} u^j, iterated from v = 0 until the successive change in
/// L^inf_t L^2_x drops below tol.
VSolve solve_v(const Field& f, int n, double t_end, int steps, int sign = +1,
               double tol = 1e-8, int max_iter = 100);

/// Per-slice monitors of the Duhamel part v = u - w:
///   M = 1/2 int |v|^2, E = int 1/2 |v_x|^2 + 1/4 |v|^4,
///   Etilde = int 1/2 |v_x|^2 + 1/4 (|v+w|^4 - |w|^4).
struct MonitorSeries {
    std::vector<double> t;
    std::vector<double> mass;     // M(v)
    std::vector<double> energy;   // E(v)
    std::vector<double> etilde;   // Etilde(v)
    double gronwall_constant = 0.0;  // max_t E / (Etilde + M + 1)
};

MonitorSeries energy_monitors(const SpaceTimeField& u, const SpaceTimeField& w);

/// L^inf_t L^2_x distance between two space-time fields on one grid.
double linf_l2_distance(const SpaceTimeField& a, const SpaceTimeField& b);

double linf_l2_norm(const SpaceTimeField& a);

}  // namespace displab
