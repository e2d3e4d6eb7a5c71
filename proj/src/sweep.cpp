#include "displab/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace displab {

FitResult fit_exponent(const std::vector<SweepRecord>& records) {
    if (records.size() < 4)
        throw std::invalid_argument("fit_exponent: need >= 4 records");
    std::vector<double> xs, ys;
    xs.reserve(records.size());
    ys.reserve(records.size());
    for (const auto& r : records) {
        if (!(r.scale > 0.0) || !(r.ratio > 0.0))
            throw std::invalid_argument(
                "fit_exponent: nonpositive value at scale " +
                std::to_string(r.scale));
        xs.push_back(std::log2(r.scale));
        ys.push_back(std::log2(r.ratio));
    }
    std::size_t m = xs.size();
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    double mx = sx / double(m), my = sy / double(m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    FitResult fit;
    fit.slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double pred = my + fit.slope * (xs[i] - mx);
        double e = ys[i] - pred;
        ss_res += e * e;
    }
    fit.stderr_slope =
        m > 2 ? std::sqrt(ss_res / (double(m) - 2.0) / sxx) : 0.0;
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.reliable = fit.r_squared >= 0.9;
    return fit;
}

std::string fingerprint_of(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace displab
