#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "displab/experiments.hpp"
#include "displab/knapp.hpp"
#include "displab/modspace.hpp"
#include "displab/sweep.hpp"

using namespace displab;

namespace {
const WindowFamily windows;
const double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("partition of unity is exact on the covered band") {
    Grid g = make_grid(1, 256, 32.0);
    CHECK(windows.partition_residual(g) < 1e-12);
    Grid g2 = make_grid(2, 64, 16.0);
    CHECK(windows.partition_residual(g2) < 1e-12);
}

TEST_CASE("box_decompose splits and reconstructs") {
    Grid g = make_grid(1, 256, 32.0);

    SUBCASE("zero field gives an empty map") {
        CHECK(box_decompose(Field::zero(g), windows).empty());
    }

    SUBCASE("spectrum near one window center stays in one component") {
        // density concentrated where sigma_2 = 1 (within 1/8 of k = 2)
        Field f = Field::from_density(g, [](const Vec& xi) {
            double u = (xi[0] - 2.0) * 8.0;
            return cplx(std::exp(-u * u) * (std::abs(u) < 1.0 ? 1.0 : 0.0), 0.0);
        });
        auto parts = box_decompose(f, windows);
        double total = f.l2_norm();
        double inside = parts.count({2, 0}) ? parts.at({2, 0}).l2_norm() : 0.0;
        CHECK(inside / total > 0.999);
    }

    SUBCASE("reconstruction on random band-limited fields") {
        for (int i = 0; i < 20; ++i) {
            Field f = random_band_limited(g, 0.4 * g.half_nyquist(), 55 + i);
            auto parts = box_decompose(f, windows);
            Field sum = Field::zero(g);
            for (const auto& [k, piece] : parts) sum = sum + piece;
            CHECK((sum - f).l2_norm() / f.l2_norm() < 1e-10);
        }
    }

    SUBCASE("leaking spectrum is rejected") {
        Field f = Field::from_density(g, [&](const Vec& xi) {
            double c = 0.9 * g.nyquist();
            double u = (xi[0] - c) * 4.0;
            return cplx(std::exp(-u * u), 0.0);
        });
        CHECK_THROWS(box_decompose(f, windows));
    }
}

TEST_CASE("modulation_norm single-window and Plancherel comparison") {
    Grid g = make_grid(1, 256, 32.0);

    SUBCASE("single-cube field: norm = <k>^s ||f||_p") {
        Field f = Field::from_density(g, [](const Vec& xi) {
            double u = (xi[0] - 2.0) * 8.0;
            return cplx(std::exp(-u * u) * (std::abs(u) < 1.0 ? 1.0 : 0.0), 0.0);
        });
        double p4 = f.lp_norm(4.0);
        double expect = std::pow(5.0, 0.75) * p4;  // <k>^s at k = 2, s = 1.5
        CHECK(modulation_norm(f, ModNormSpec{1.5, 4.0, 1.0}, windows) ==
              doctest::Approx(expect).epsilon(1e-3));
        CHECK(modulation_norm(f, ModNormSpec{1.5, 4.0, inf}, windows) ==
              doctest::Approx(expect).epsilon(1e-3));
    }

    SUBCASE("M_{2,2} ~ L^2 within 1.5 on 100 random fields") {
        for (int i = 0; i < 100; ++i) {
            Field f = random_band_limited(g, 0.4 * g.half_nyquist(), 300 + i);
            double ratio =
                modulation_norm(f, ModNormSpec{0.0, 2.0, 2.0}, windows) /
                f.l2_norm();
            CHECK(ratio <= 1.5);
            CHECK(ratio >= 1.0 / 1.5);
        }
    }

    SUBCASE("increasing s never decreases the norm") {
        Field f = random_band_limited(g, 0.4 * g.half_nyquist(), 77);
        double n0 = modulation_norm(f, ModNormSpec{0.0, 4.0, 2.0}, windows);
        double n1 = modulation_norm(f, ModNormSpec{1.0, 4.0, 2.0}, windows);
        CHECK(n1 >= n0);
    }
}

TEST_CASE("Knapp datum modulation norm scales like eps^{d - d/r}") {
    // ||g_eps||_{M_{4,t}} ~ eps^{3/4} in d = 1, any t
    std::vector<SweepRecord> records;
    for (double eps : {0.0078125, 0.015625, 0.03125, 0.0625, 0.125}) {
        double L = 1.05 * 8.0 * M_PI / eps;
        int n = 256;
        while (n < 2.2 * L) n *= 2;
        Grid g = make_grid(1, n, L);
        Field f = make_aniso_unit(eps, g);
        SweepRecord rec;
        rec.scale = eps;
        rec.ratio = modulation_norm(f, ModNormSpec{0.0, 4.0, 2.0}, windows);
        rec.lhs = rec.ratio;
        rec.rhs = 1.0;
        records.push_back(rec);
        // t-independence up to constant 2
        double n1 = modulation_norm(f, ModNormSpec{0.0, 4.0, 1.0}, windows);
        double ninf = modulation_norm(f, ModNormSpec{0.0, 4.0, inf}, windows);
        CHECK(n1 / ninf <= 2.0);
    }
    FitResult fit = fit_exponent(records);
    CHECK(std::abs(fit.slope - 0.75) <= 0.1);
}

TEST_CASE("sobolev_lp_norm multiplier behavior") {
    Grid g = make_grid(1, 1024, 64.0);

    SUBCASE("alpha = 0 is the plain norm") {
        Field f = random_band_limited(g, 8.0, 42);
        CHECK(sobolev_lp_norm(f, 0.0, 3.0) ==
              doctest::Approx(f.lp_norm(3.0)).epsilon(1e-12));
    }

    SUBCASE("one-bin spectrum scales by the exact multiplier") {
        std::vector<cplx> spec(g.total(), cplx(0.0, 0.0));
        std::size_t idx = 0;
        double best = 1e300;
        for (std::size_t i = 0; i < g.total(); ++i) {
            double d = std::abs(g.freq_point(i)[0] - 32.0);
            if (d < best) {
                best = d;
                idx = i;
            }
        }
        spec[idx] = 1.0;
        double lam = g.freq_point(idx)[0];
        Field f = Field::from_spectrum(g, std::move(spec));
        double ratio = sobolev_lp_norm(f, 1.0, 2.0) / sobolev_lp_norm(f, 0.0, 2.0);
        CHECK(std::abs(ratio - lam) / lam < 0.1);
    }

    SUBCASE("high-frequency Knapp sobolev slope = s") {
        std::vector<SweepRecord> records;
        for (double lam : {16.0, 32.0, 64.0, 128.0, 256.0}) {
            double L = 8.4 * lam + 270.0;
            int n = 256;
            while (n < 2.0 * L * 1.3 * (lam + 2.0) / M_PI) n *= 2;
            Grid g2 = make_grid(1, n, L);
            Field f = make_aniso_high(lam, g2);
            SweepRecord rec;
            rec.scale = lam;
            rec.ratio = sobolev_lp_norm(f, 0.5, 4.0);
            rec.lhs = rec.ratio;
            rec.rhs = 1.0;
            records.push_back(rec);
        }
        FitResult fit = fit_exponent(records);
        CHECK(std::abs(fit.slope - 0.5) <= 0.1);
    }
}

TEST_CASE("check_embeddings holds with set-wide constant <= 10") {
    Grid g = make_grid(1, 256, 32.0);
    auto corpus = embedding_corpus(g, 40, 9);
    auto rep = check_embeddings(corpus, windows);
    for (const auto& c : rep.checks) {
        INFO(c.name << " constant " << c.worst_constant);
        CHECK(c.worst_constant <= 10.0);
    }
    CHECK(rep.all_ok(10.0));
    // q1 <= q2 embeddings are pointwise l^q monotonicity: constant 1
    for (const auto& c : rep.checks)
        if (c.name == "M_{4,1} >= M_{4,2}") CHECK(c.worst_constant <= 1.0 + 1e-9);
}

TEST_CASE("product_norm_check ratios") {
    Grid g = make_grid(1, 512, 48.0);
    std::vector<cplx> s1(g.total()), s2(g.total());
    for (std::size_t j = 0; j < s1.size(); ++j) {
        double x = g.point(j)[0];
        s1[j] = std::exp(-0.5 * x * x);
        s2[j] = std::exp(-0.5 * x * x);
    }
    Field f1 = Field::from_samples(g, std::move(s1));
    Field f2 = Field::from_samples(g, std::move(s2));

    SUBCASE("zero factor gives ratio 0") {
        CHECK(product_norm_check(f1, Field::zero(g), 0.0, 2.0, 4.0, 4.0,
                                 windows) == 0.0);
    }

    SUBCASE("two unit Gaussians stay under the budget") {
        double r = product_norm_check(f1, f2, 0.0, 2.0, 4.0, 4.0, windows);
        CHECK(r > 0.0);
        CHECK(r <= 20.0);
    }

    SUBCASE("50 random pairs bounded and refinement-stable") {
        // seeded wave packets sample the same continuum function on any grid
        auto packet = [](const Grid& gg, std::uint64_t seed) {
            std::mt19937_64 gen(seed);
            std::uniform_real_distribution<double> uni(-3.0, 3.0);
            std::vector<double> omega(5), amp(5), phase0(5);
            for (int j = 0; j < 5; ++j) {
                omega[j] = uni(gen);
                amp[j] = 0.2 + 0.15 * std::abs(uni(gen));
                phase0[j] = uni(gen);
            }
            std::vector<cplx> s(gg.total());
            for (std::size_t i = 0; i < s.size(); ++i) {
                double x = gg.point(i)[0];
                cplx acc(0.0, 0.0);
                for (int j = 0; j < 5; ++j) {
                    double ph = omega[j] * x + phase0[j];
                    acc += amp[j] * cplx(std::cos(ph), std::sin(ph));
                }
                s[i] = acc * std::exp(-0.5 * x * x / 9.0);
            }
            return Field::from_samples(gg, std::move(s));
        };
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            Field a = packet(g, 1700 + 2 * i);
            Field b = packet(g, 1701 + 2 * i);
            double r = product_norm_check(a, b, 1.0, 2.0, 4.0, 4.0, windows);
            CHECK(r <= 20.0);
            worst = std::max(worst, r);
        }
        Grid g2 = make_grid(1, 1024, 48.0);
        double worst2 = 0.0;
        for (int i = 0; i < 50; ++i) {
            Field a = packet(g2, 1700 + 2 * i);
            Field b = packet(g2, 1701 + 2 * i);
            worst2 = std::max(
                worst2, product_norm_check(a, b, 1.0, 2.0, 4.0, 4.0, windows));
        }
        CHECK(std::abs(worst2 - worst) / worst < 0.05);
    }

    SUBCASE("precondition violations throw") {
        CHECK_THROWS(product_norm_check(f1, f2, 0.0, 2.0, 3.0, 4.0, windows));
        CHECK_THROWS(product_norm_check(f1, f2, -1.0, 2.0, 4.0, 4.0, windows));
    }
}
