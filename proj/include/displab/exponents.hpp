#pragma once

namespace displab {

/// All theoretical scaling exponents used by the experiments; single source
/// of truth, experiment code never hardcodes these.
struct ExponentBundle {
    double s_dec = 0.0;      // s(p,d): derivative loss from decoupling
    double alpha_dec = 0.0;  // alpha(p,k): decoupling-constant exponent
    double s_nec_mod = 0.0;  // necessary s for L^p <- M^s_{p,q}
    double s_nec_lp = 0.0;   // necessary s for L^p_t L^q_x <- L^r_s (local)
    bool global_admissible = false;  // 2/p + d/q <= d/r
    double case_b = 0.0;     // smoothing exponent, q >= 2 branch
    double case_c = 0.0;     // smoothing exponent, 1 <= q <= 2 branch
    double fixed_time = 0.0; // operator growth d |1/2 - 1/p| on M^s_{p,q}
};

/// s(p,d) = 0 for 2 <= p <= 2(d+2)/d, else d/2 - (d+2)/p.
double s_exponent(double p, int d);

/// alpha(p,k) = k (1/4 - 1/(2p)) for 2 <= p <= 2(d+2-k)/(d-k),
/// else d/4 - (d+2)/(2p).
double alpha_exponent(double p, int d, int k);

ExponentBundle theoretical_exponents(double p, double q, double r, int d, int k);

}  // namespace displab
