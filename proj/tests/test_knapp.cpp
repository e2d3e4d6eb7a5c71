#include <doctest.h>

#include <cmath>

#include "displab/knapp.hpp"
#include "displab/propagator.hpp"
#include "displab/sweep.hpp"

using namespace displab;

namespace {

Grid aniso_grid(double eps) {
    double L = 1.05 * 8.0 * M_PI / eps;
    int n = 256;
    while (n < 2.2 * L) n *= 2;
    return make_grid(1, n, L);
}

// L = 16 pi / eps puts the window endpoints 1 -+ eps exactly on bin centers
// (freq spacing eps/8), so the half-weighted indicator integrates to 2 eps
// exactly: the trapezoid rule of the sharp indicator.
Grid aligned_grid(double eps) {
    double L = 16.0 * M_PI / eps;
    int n = 256;
    while (n < 2.2 * L) n *= 2;
    return make_grid(1, n, L);
}

Grid iso_grid(double lam) {
    double L = 24.0 * lam;
    int n = 256;
    while (n < 9.2 * lam * L / M_PI) n *= 2;
    return make_grid(1, n, L);
}

FitResult fit_over(const std::vector<double>& scales,
                   const std::vector<double>& values) {
    std::vector<SweepRecord> recs;
    for (std::size_t i = 0; i < scales.size(); ++i)
        recs.push_back({scales[i], values[i], 1.0, values[i]});
    return fit_exponent(recs);
}

}  // namespace

TEST_CASE("make_aniso_unit: L2 slope, sinc profile, reproducibility") {
    SUBCASE("L2 norm slope d/2 in eps") {
        std::vector<double> scales, values;
        for (double eps : {0.0078125, 0.015625, 0.03125, 0.0625, 0.125}) {
            Grid g = aniso_grid(eps);
            scales.push_back(eps);
            values.push_back(make_aniso_unit(eps, g).l2_norm());
        }
        FitResult fit = fit_over(scales, values);
        CHECK(std::abs(fit.slope - 0.5) <= 0.05);
    }

    SUBCASE("physical profile is 2 eps e^{ix} sinc(eps x)") {
        double eps = 0.0625;
        Grid g = aligned_grid(eps);
        Field f = make_aniso_unit(eps, g);
        const auto& s = f.samples();
        double worst = 0.0;
        for (std::size_t j = 0; j < s.size(); j += 7) {
            double x = g.point(j)[0];
            if (std::abs(x) > 2.0 / eps) continue;
            double sinc = x == 0.0 ? 1.0 : std::sin(eps * x) / (eps * x);
            double expect = 2.0 * eps * std::abs(sinc);
            worst = std::max(worst, std::abs(std::abs(s[j]) - expect));
        }
        CHECK(worst < 1e-2 * 2.0 * eps);
        // peak value 2 eps at x = 0 (density convention keeps the paper's
        // unit constant)
        std::size_t mid = g.total() / 2;
        CHECK(std::abs(s[mid]) == doctest::Approx(2.0 * eps).epsilon(1e-9));
    }

    SUBCASE("sup norm scales like eps (d = 1)") {
        double inf = std::numeric_limits<double>::infinity();
        Grid g = aligned_grid(0.5);
        Field f = make_aniso_unit(0.5, g);
        CHECK(f.lp_norm(inf) == doctest::Approx(1.0).epsilon(1e-3));
    }

    SUBCASE("same spec gives bit-identical fields") {
        Grid g = aniso_grid(0.0625);
        Field a = make_aniso_unit(0.0625, g);
        Field b = make_aniso_unit(0.0625, g);
        CHECK((a - b).lp_norm(2.0) == 0.0);
    }

    SUBCASE("unresolved window is rejected") {
        Grid g = make_grid(1, 64, 8.0);
        CHECK_THROWS(make_aniso_unit(0.01, g));
        CHECK_THROWS(make_aniso_unit(0.7, g));
    }
}

TEST_CASE("make_aniso_high: rescaling identity and norm flatness") {
    SUBCASE("f_lambda(x) = lambda^d g_eps(lambda x) exactly") {
        double lam = 32.0;
        Grid g = make_grid(1, 4096, 128.0);
        Field f = make_aniso_high(lam, g);
        Grid gs = make_grid(1, 4096, 128.0 * lam);
        Field ge = make_aniso_unit(1.0 / lam, gs);
        const auto& a = f.samples();
        const auto& b = ge.samples();
        double worst = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j)
            worst = std::max(worst, std::abs(a[j] - lam * b[j]));
        CHECK(worst < 1e-8);
    }

    SUBCASE("preconditions") {
        Grid g = make_grid(1, 512, 64.0);
        CHECK_THROWS(make_aniso_high(2.0, g));
        CHECK_THROWS(make_aniso_high(100.0, g));  // above half-Nyquist
    }
}

TEST_CASE("make_isotropic: boundedness, decay, norm growth") {
    std::vector<double> lambdas = {16.0, 32.0, 64.0, 128.0};

    SUBCASE("sup bounded uniformly, rapid decay past the wave zone") {
        double inf = std::numeric_limits<double>::infinity();
        double lo = 1e300, hi = 0.0;
        for (double lam : lambdas) {
            Grid g = iso_grid(lam);
            Field f = make_isotropic(lam, g);
            double sup = f.lp_norm(inf);
            lo = std::min(lo, sup);
            hi = std::max(hi, sup);
            // stationary-phase support reaches |x| = 8 lambda; past it the
            // field dies fast
            const auto& s = f.samples();
            double far = 0.0;
            for (std::size_t j = 0; j < s.size(); j += 3) {
                if (std::abs(g.point(j)[0]) > 9.0 * lam)
                    far = std::max(far, std::abs(s[j]));
            }
            CHECK(far < 1e-4 * sup);
        }
        CHECK(hi / lo <= 2.0);
    }

    SUBCASE("Sobolev-Lebesgue growth slope s + d/r") {
        double s = 0.5, r = 4.0;
        std::vector<double> values;
        for (double lam : lambdas) {
            Grid g = iso_grid(lam);
            Field f = make_isotropic(lam, g);
            // <D>^s on the annulus acts like lambda^s; use the r-norm of the
            // multiplied field
            Field fs = f.apply_multiplier([&](const Vec& xi) {
                double r2 = xi[0] * xi[0] + xi[1] * xi[1];
                return cplx(std::pow(1.0 + r2, 0.5 * s / 1.0), 0.0);
            });
            values.push_back(fs.lp_norm(r));
        }
        FitResult fit = fit_over(lambdas, values);
        CHECK(std::abs(fit.slope - (s + 1.0 / r)) <= 0.1);
    }

    SUBCASE("resolution preconditions") {
        Grid g = make_grid(1, 512, 64.0);
        CHECK_THROWS(make_isotropic(64.0, g));
    }
}

TEST_CASE("tube_lower_bound slopes match the paper's two displays") {
    std::vector<double> epss = {0.0078125, 0.015625, 0.03125, 0.0625, 0.125};

    SUBCASE("pointwise center value |U g_eps(0,0)| = 2^d eps^d (1 + o(1))") {
        double eps = 0.03125;
        Grid g = aligned_grid(eps);
        Field f = make_aniso_unit(eps, g);
        std::size_t mid = g.total() / 2;
        CHECK(std::abs(f.samples()[mid]) ==
              doctest::Approx(2.0 * eps).epsilon(1e-3));
    }

    SUBCASE("local window: slope d - d/q at q = 4") {
        std::vector<double> values;
        for (double eps : epss) {
            Grid g = aniso_grid(eps);
            values.push_back(tube_lower_bound(eps, g, 4.0, 4.0, 1.0));
        }
        FitResult fit = fit_over(epss, values);
        CHECK(std::abs(fit.slope - 0.75) <= 0.1);
    }

    SUBCASE("global window: slope d - 2/p - d/q at p = q = 4") {
        std::vector<double> values;
        for (double eps : epss) {
            double L = 4.4 / (eps * eps) + 8.0 / eps;
            int n = 256;
            while (n < 2.2 * L) n *= 2;
            Grid g = make_grid(1, n, L);
            values.push_back(
                tube_lower_bound(eps, g, 4.0, 4.0, 1.0 / (eps * eps)));
        }
        FitResult fit = fit_over(epss, values);
        CHECK(std::abs(fit.slope - 0.25) <= 0.1);
    }

    SUBCASE("tube escape is rejected") {
        Grid g = aniso_grid(0.125);
        CHECK_THROWS(tube_lower_bound(0.125, g, 4.0, 4.0, 1000.0));
    }
}

TEST_CASE("refocus_lower_bound slopes (2.13)") {
    std::vector<double> lambdas = {16.0, 32.0, 64.0, 128.0};

    SUBCASE("p = q = 4: slope 1/4; p = q = 6: slope 1/2") {
        std::vector<double> v44, v66;
        for (double lam : lambdas) {
            Grid g = iso_grid(lam);
            v44.push_back(refocus_lower_bound(lam, g, 4.0, 4.0));
            v66.push_back(refocus_lower_bound(lam, g, 6.0, 6.0));
        }
        FitResult f44 = fit_over(lambdas, v44);
        FitResult f66 = fit_over(lambdas, v66);
        CHECK(std::abs(f44.slope - 0.25) <= 0.15);
        CHECK(std::abs(f66.slope - 0.5) <= 0.15);
    }

    SUBCASE("refocusing beats the datum peak") {
        // |U f_lambda(t ~ focus)| at x = 0 grows with lambda while |f(0)|
        // stays O(1)
        double prev_peak = 0.0;
        for (double lam : {16.0, 32.0, 64.0}) {
            Grid g = iso_grid(lam);
            Field f = make_isotropic(lam, g);
            Field focused =
                evolve_free(f, isotropic_focus_time, DispersionSymbol::parabolic());
            std::size_t mid = g.total() / 2;
            double peak = std::abs(focused.samples()[mid]);
            double datum0 = std::abs(f.samples()[mid]);
            CHECK(peak > 5.0 * datum0);
            CHECK(peak > prev_peak);
            prev_peak = peak;
        }
    }

    SUBCASE("too few slices rejected") {
        Grid g = iso_grid(16.0);
        CHECK_THROWS(refocus_lower_bound(16.0, g, 4.0, 4.0, 8));
    }
}

TEST_CASE("necessary-condition exponents from the isotropic family") {
    // fitted lower-bound exponent >= max(0, d - d/q - 2/p - d/r) - 0.15
    std::vector<double> lambdas = {16.0, 32.0, 64.0, 128.0};
    struct Tuple {
        double p, q, r;
    };
    for (const auto& tup : {Tuple{4, 4, 4}, Tuple{6, 6, 4}, Tuple{16, 8, 4}}) {
        std::vector<double> values;
        for (double lam : lambdas) {
            Grid g = iso_grid(lam);
            double mass = refocus_lower_bound(lam, g, tup.p, tup.q);
            Field f = make_isotropic(lam, g);
            values.push_back(mass / f.lp_norm(tup.r));
        }
        FitResult fit = fit_over(lambdas, values);
        double target =
            std::max(0.0, 1.0 - 1.0 / tup.q - 2.0 / tup.p - 1.0 / tup.r);
        INFO("p=" << tup.p << " q=" << tup.q << " r=" << tup.r
                  << " slope=" << fit.slope);
        CHECK(fit.slope >= target - 0.15);
    }
}

TEST_CASE("Corollary 1.3: admissible global ratio grows (no global estimate)") {
    // d = 1, r = 4, scaling-admissible (p, q): 2/p + 1/q = 1/4; the ratio's
    // slope >= d - 2d/r - 0.15 = 0.35 rules out a uniform constant
    std::vector<double> lambdas = {16.0, 32.0, 64.0, 128.0};
    double p = 16.0, q = 8.0;
    std::vector<double> values;
    for (double lam : lambdas) {
        Grid g = iso_grid(lam);
        double mass = refocus_lower_bound(lam, g, p, q);
        Field f = make_isotropic(lam, g);
        values.push_back(mass / f.lp_norm(4.0));
    }
    FitResult fit = fit_over(lambdas, values);
    CHECK(fit.slope >= 0.5 - 0.15);
}
