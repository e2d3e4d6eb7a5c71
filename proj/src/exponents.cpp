#include "displab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace displab {

double s_exponent(double p, int d) {
    if (p < 2.0) throw std::domain_error("s_exponent: p >= 2 required");
    double threshold = 2.0 * (d + 2) / double(d);
    if (p <= threshold) return 0.0;
    return 0.5 * d - (d + 2) / p;
}

double alpha_exponent(double p, int d, int k) {
    if (p < 2.0) throw std::domain_error("alpha_exponent: p >= 2 required");
    if (k < 0 || 2 * k > d)
        throw std::domain_error("alpha_exponent: need 0 <= k <= d/2");
    double threshold = 2.0 * (d + 2 - k) / double(d - k);
    if (p <= threshold) return k * (0.25 - 0.5 / p);
    return 0.25 * d - 0.5 * (d + 2) / p;
}

ExponentBundle theoretical_exponents(double p, double q, double r, int d, int k) {
    if (d != 1 && d != 2) throw std::domain_error("theoretical_exponents: d");
    ExponentBundle b;
    b.s_dec = s_exponent(p, d);
    b.alpha_dec = alpha_exponent(p, d, k);
    b.s_nec_mod = std::max(0.0, d - (d + 2) / p - d / q);
    b.s_nec_lp = std::max(0.0, d - d / q - 2.0 / p - d / r);
    b.global_admissible = 2.0 / p + d / q <= d / r + 1e-12;
    b.case_b = d - (d + 2) / p - d / q;
    b.case_c = 2.0 * (1.0 - 1.0 / q) * (0.5 * d - (d + 2) / p);
    b.fixed_time = d * std::abs(0.5 - 1.0 / p);
    return b;
}

}  // namespace displab
