#include "displab/windows.hpp"

#include <cmath>

namespace displab {

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}

double ramp_bump(double r, double lo0, double lo1, double hi1, double hi0) {
    if (r <= lo0 || r >= hi0) return 0.0;
    if (r < lo1) return smoothstep((r - lo0) / (lo1 - lo0));
    if (r <= hi1) return 1.0;
    return smoothstep((hi0 - r) / (hi0 - hi1));
}

double WindowFamily::profile(double u) {
    double a = std::abs(u);
    if (a >= 1.0) return 0.0;
    return smoothstep(1.0 - a);
}

double WindowFamily::sigma(const KVec& k, const Vec& xi, int d) const {
    double v = profile(xi[0] - k[0]);
    if (d == 2) v *= profile(xi[1] - k[1]);
    return v;
}

int WindowFamily::cover_limit(const Grid& g) const {
    return int(std::floor(g.half_nyquist())) - 1;
}

double WindowFamily::partition_residual(const Grid& g) const {
    int K = cover_limit(g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.total(); ++i) {
        Vec xi = g.freq_point(i);
        if (std::abs(xi[0]) > K || (g.d == 2 && std::abs(xi[1]) > K)) continue;
        double s = 0.0;
        int k0 = int(std::floor(xi[0]));
        // Only the two windows per axis adjacent to xi contribute.
        for (int a = k0; a <= k0 + 1; ++a) {
            if (g.d == 1) {
                s += profile(xi[0] - a);
            } else {
                int k1 = int(std::floor(xi[1]));
                for (int b = k1; b <= k1 + 1; ++b)
                    s += profile(xi[0] - a) * profile(xi[1] - b);
            }
        }
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

}  // namespace displab
