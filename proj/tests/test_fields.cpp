#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "displab/experiments.hpp"
#include "displab/field.hpp"
#include "displab/propagator.hpp"
#include "displab/snapshot.hpp"
#include "oracles.hpp"

using namespace displab;

TEST_CASE("make_grid validates and lays out the frequency lattice") {
    Grid g = make_grid(1, 8, 2.0 * M_PI);
    CHECK(g.freq_spacing() == doctest::Approx(1.0));
    // lattice {-4,...,3}
    CHECK(g.freq(4) == doctest::Approx(-4.0));
    CHECK(g.freq(3) == doctest::Approx(3.0));

    Grid g2 = make_grid(2, 256, 128.0);
    CHECK(g2.freq_spacing() == doctest::Approx(M_PI / 64.0));

    CHECK_THROWS(make_grid(1, 7, 10.0));
    CHECK_THROWS(make_grid(3, 16, 1.0));
    CHECK_THROWS(make_grid(1, 16, -1.0));
    CHECK_THROWS(make_grid(1, 4, 1.0));
}

TEST_CASE("lp_norm basics") {
    Grid g = make_grid(1, 64, 8.0);
    CHECK(Field::zero(g).lp_norm(2.0) == 0.0);

    // constant 1 on the box: L^2 = L^{d/2}
    Field ones = Field::from_samples(g, std::vector<cplx>(g.total(), 1.0));
    CHECK(ones.lp_norm(2.0) == doctest::Approx(std::sqrt(8.0)));
    CHECK(ones.lp_norm(std::numeric_limits<double>::infinity()) ==
          doctest::Approx(1.0));

    Grid g2 = make_grid(2, 32, 4.0);
    Field ones2 = Field::from_samples(g2, std::vector<cplx>(g2.total(), 1.0));
    CHECK(ones2.lp_norm(2.0) == doctest::Approx(4.0));
}

TEST_CASE("unit Gaussian L2 norm matches the quadrature oracle") {
    // oracle: closed form pi^{1/4} cross-checked by Simpson
    double oracle2 = oracles::simpson(
        [](double x) { return std::exp(-x * x); }, -20.0, 20.0, 4096);
    double oracle = std::sqrt(oracle2);
    CHECK(oracle == doctest::Approx(std::pow(M_PI, 0.25)).epsilon(1e-10));

    Grid g = make_grid(1, 4096, 64.0);
    std::vector<cplx> s(g.total());
    for (std::size_t j = 0; j < s.size(); ++j) {
        double x = g.point(j)[0];
        s[j] = std::exp(-0.5 * x * x);
    }
    Field f = Field::from_samples(g, std::move(s));
    CHECK(f.lp_norm(2.0) == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("round-trip and Parseval on random band-limited fields") {
    Grid g = make_grid(1, 256, 32.0);
    for (int i = 0; i < 100; ++i) {
        Field f = random_band_limited(g, 0.4 * g.half_nyquist(), 1000 + i);
        // round trip through the spectrum
        Field back = Field::from_spectrum(g, f.spectrum());
        double rel = (back - f).l2_norm() / f.l2_norm();
        CHECK(rel < 1e-12);
        // Parseval with unit constant
        CHECK(std::abs(f.l2_norm() - f.l2_norm_spectral()) <=
              1e-10 * f.l2_norm());
    }
}

TEST_CASE("spacetime_norm agrees with direct quadrature and is monotone") {
    Grid g = make_grid(1, 512, 64.0);
    std::vector<cplx> s(g.total());
    for (std::size_t j = 0; j < s.size(); ++j)
        s[j] = std::exp(-0.5 * g.point(j)[0] * g.point(j)[0]);
    Field f = Field::from_samples(g, std::move(s));

    SUBCASE("zero and time-constant cases") {
        SpaceTimeField z;
        z.t_start = 0.0;
        z.t_end = 1.0;
        for (int j = 0; j < 5; ++j) z.slices.push_back(Field::zero(g));
        CHECK(spacetime_norm(z, 4.0, 4.0) == 0.0);

        SpaceTimeField c;
        c.t_start = 0.0;
        c.t_end = 1.0;
        for (int j = 0; j < 9; ++j) c.slices.push_back(f);
        CHECK(spacetime_norm(c, 2.0, 4.0) ==
              doctest::Approx(f.lp_norm(4.0)).epsilon(1e-12));
        CHECK(spacetime_norm(c, 7.0, 4.0) ==
              doctest::Approx(f.lp_norm(4.0)).epsilon(1e-12));
    }

    SUBCASE("diagonal case equals (d+1)-dimensional quadrature") {
        auto u = evolve_interval(f, -1.0, 1.0, 65,
                                 DispersionSymbol::parabolic());
        double mixed = spacetime_norm(u, 4.0, 4.0);
        // direct 2-D composite trapezoid over the same nodes
        double acc = 0.0;
        for (std::size_t j = 0; j < u.slices.size(); ++j) {
            double wt = (j == 0 || j + 1 == u.slices.size()) ? 0.5 : 1.0;
            const auto& row = u.slices[j].samples();
            double slice = 0.0;
            for (const auto& v : row) {
                double a2 = std::norm(v);
                slice += a2 * a2;
            }
            acc += wt * u.dt() * slice * g.cell_volume();
        }
        CHECK(mixed == doctest::Approx(std::pow(acc, 0.25)).epsilon(1e-8));
    }

    SUBCASE("free Gaussian evolution matches the dense space-time oracle") {
        // trapezoid step fine enough that halving moves the norm < 1e-6
        auto u = evolve_interval(f, -1.0, 1.0, 2049,
                                 DispersionSymbol::parabolic());
        double mixed = spacetime_norm(u, 4.0, 4.0);
        // oracle: |u(t,x)| closed form, 2-D Simpson (independent path)
        auto slice4 = [&](double t) {
            return oracles::simpson(
                [&](double x) {
                    double a = oracles::gaussian_evolution_abs(t, x);
                    return a * a * a * a;
                },
                -32.0, 32.0, 2048);
        };
        double oracle = std::pow(
            oracles::simpson(slice4, -1.0, 1.0, 128), 0.25);
        CHECK(mixed == doctest::Approx(oracle).epsilon(1e-6));
    }

    SUBCASE("monotone in the integrand") {
        auto u = evolve_interval(f, 0.0, 1.0, 17, DispersionSymbol::parabolic());
        SpaceTimeField v = u;
        for (auto& slice : v.slices) slice = slice.scaled(0.5);
        CHECK(spacetime_norm(v, 3.0, 5.0) <= spacetime_norm(u, 3.0, 5.0));
    }
}

TEST_CASE("snapshot round trip and byte layout") {
    Grid g = make_grid(1, 8, 2.0 * M_PI);
    std::vector<cplx> s(g.total());
    for (std::size_t j = 0; j < s.size(); ++j)
        s[j] = cplx(double(j), -double(j) * 0.5);
    Field f = Field::from_samples(g, s);

    std::ostringstream os(std::ios::binary);
    write_snapshot(os, f, 1.5);
    std::string bytes = os.str();
    CHECK(bytes.size() == 4 * 8 + g.total() * 16);
    // header starts with d = 1, n = 8 little-endian
    CHECK(static_cast<unsigned char>(bytes[0]) == 1);
    CHECK(static_cast<unsigned char>(bytes[1]) == 0);
    CHECK(static_cast<unsigned char>(bytes[8]) == 8);

    std::istringstream is(bytes, std::ios::binary);
    double tag = 0.0;
    Field back = read_snapshot(is, &tag);
    CHECK(tag == 1.5);
    CHECK((back - f).l2_norm() == 0.0);
}
