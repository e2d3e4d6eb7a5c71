#include "displab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "displab/decoupling.hpp"
#include "displab/exponents.hpp"
#include "displab/knapp.hpp"
#include "displab/modspace.hpp"
#include "displab/nls.hpp"
#include "displab/propagator.hpp"

namespace displab {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInf = std::numeric_limits<double>::infinity();

int next_pow2(double x) {
    int n = 8;
    while (n < x) n *= 2;
    return n;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string note(const std::string& key, double v) { return key + "=" + fmt(v); }

}  // namespace

std::string ExperimentConfig::canonical(const std::string& experiment) const {
    std::ostringstream os;
    os << "experiment=" << experiment << ";d=" << d << ";n=" << n
       << ";L=" << fmt(L) << ";p=" << fmt(p) << ";q=" << fmt(q)
       << ";r=" << fmt(r) << ";s=" << fmt(s) << ";k=" << k
       << ";eps_phase=" << fmt(eps_phase) << ";scales=";
    for (double sc : scales) os << fmt(sc) << ",";
    os << ";tolerance=" << fmt(tolerance) << ";seed=" << seed
       << ";corpus=" << corpus;
    // workers intentionally excluded: results are scheduling-independent
    return os.str();
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "embedding",      "fixed_time",    "knapp_aniso_local",
        "knapp_aniso_global", "knapp_high", "knapp_iso",
        "strichartz_mod", "strichartz_m41", "mp1",
        "kernel",         "decouple_const", "decouple_var",
        "rescale_check",  "approx_lemma",  "nls_picard",
        "nls_identity",   "nls_monitor"};
    return names;
}

Field random_band_limited(const Grid& g, double band, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cplx> spec(g.total(), cplx(0.0, 0.0));
    // Fixed index order keeps the draw deterministic for a given grid.
    for (std::size_t i = 0; i < spec.size(); ++i) {
        Vec xi = g.freq_point(i);
        double m = std::max(std::abs(xi[0]), std::abs(xi[1]));
        if (m > band) continue;
        double env = std::exp(-(xi[0] * xi[0] + xi[1] * xi[1]) / (band * band));
        spec[i] = cplx(normal(gen), normal(gen)) * env;
    }
    Field f = Field::from_spectrum(g, std::move(spec));
    double n2 = f.l2_norm();
    return n2 > 0.0 ? f.scaled(1.0 / n2) : f;
}

std::vector<Field> embedding_corpus(const Grid& g, int count,
                                    std::uint64_t seed) {
    std::vector<Field> fields;
    double band = 0.4 * g.half_nyquist();
    for (int i = 0; i < count; ++i) {
        if (i % 4 == 3) {
            // modulated Gaussian, width and carrier varied deterministically
            double width = 0.5 + 0.17 * (i % 7);
            double carrier = (i % 5) - 2.0;
            std::vector<cplx> s(g.total());
            for (std::size_t j = 0; j < s.size(); ++j) {
                Vec x = g.point(j);
                double r2 = x[0] * x[0] + x[1] * x[1];
                double ph = carrier * (x[0] + x[1]);
                s[j] = std::exp(-r2 / (2.0 * width * width)) *
                       cplx(std::cos(ph), std::sin(ph));
            }
            fields.push_back(Field::from_samples(g, std::move(s)));
        } else {
            fields.push_back(random_band_limited(g, band, seed + 977 * i));
        }
    }
    return fields;
}

std::vector<SweepRecord> parallel_records(
    int count, int workers, const std::function<SweepRecord(int)>& fn) {
    std::vector<SweepRecord> out(count);
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    int nw = std::min(workers, count);
    std::vector<std::exception_ptr> errors(nw);
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                    out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// per-experiment drivers
// ---------------------------------------------------------------------------

void assert_slope(SweepResult& res) {
    res.fit = fit_exponent(res.records);
    res.slope_asserted = true;
    if (std::abs(res.fit.slope - res.target_slope) > res.tolerance)
        res.passed = false;
}

SweepResult run_embedding(const ExperimentConfig& cfg) {
    SweepResult res;
    Grid g = make_grid(cfg.d, cfg.n ? cfg.n : 256, cfg.L > 0 ? cfg.L : 32.0);
    WindowFamily windows;
    double budget = 10.0;

    double resid = windows.partition_residual(g);
    res.notes.push_back(note("partition_residual", resid));
    if (resid > 1e-12) res.passed = false;

    auto corpus = embedding_corpus(g, cfg.corpus, cfg.seed);
    // reconstruction on the corpus
    double worst_rec = 0.0;
    for (const auto& f : corpus) {
        auto parts = box_decompose(f, windows);
        Field sum = Field::zero(g);
        for (const auto& [k, piece] : parts) sum = sum + piece;
        worst_rec = std::max(worst_rec, (sum - f).l2_norm() / f.l2_norm());
    }
    res.notes.push_back(note("reconstruction_rel_error", worst_rec));
    if (worst_rec > 1e-10) res.passed = false;

    // M_{2,2} vs L^2 two-sided within 1.5
    double lo = 1e300, hi = 0.0;
    for (const auto& f : corpus) {
        double ratio =
            modulation_norm(f, ModNormSpec{0.0, 2.0, 2.0}, windows) / f.l2_norm();
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    res.notes.push_back(note("m22_over_l2_min", lo));
    res.notes.push_back(note("m22_over_l2_max", hi));
    if (lo < 1.0 / 1.5 || hi > 1.5) res.passed = false;

    auto rep = check_embeddings(corpus, windows);
    int idx = 0;
    for (const auto& c : rep.checks) {
        SweepRecord rec;
        rec.scale = ++idx;
        rec.lhs = c.worst_constant;
        rec.rhs = budget;
        rec.ratio = c.worst_constant / budget;
        res.records.push_back(rec);
        res.notes.push_back(note(c.name, c.worst_constant));
        if (c.worst_constant > budget) res.passed = false;
    }
    // s-monotonicity of the <k> weight on one field
    double n_low = modulation_norm(corpus[0], ModNormSpec{0.0, 4.0, 2.0}, windows);
    double n_high =
        modulation_norm(corpus[0], ModNormSpec{0.5, 4.0, 2.0}, windows);
    if (n_high < n_low) res.passed = false;
    return res;
}

SweepResult run_fixed_time(const ExperimentConfig& cfg) {
    SweepResult res;
    Grid g = make_grid(1, cfg.n ? cfg.n : 8192, cfg.L > 0 ? cfg.L : 4096.0);
    WindowFamily windows;
    Field probe = radial_probe(g);
    std::vector<double> times =
        cfg.scales.empty() ? std::vector<double>{16, 32, 64, 128, 256, 512}
                           : cfg.scales;
    auto growth = fixed_time_growth(cfg.p, cfg.q, cfg.s, times, probe, windows);
    res.records = growth.records;
    res.target_slope = theoretical_exponents(cfg.p, cfg.q, 2.0, 1, 0).fixed_time;
    res.tolerance = cfg.tolerance;
    assert_slope(res);
    res.notes.push_back(note("upper_constant", growth.upper_constant));
    if (growth.box_escape) {
        res.notes.push_back("warning=box_escape");
        res.passed = false;
    }
    return res;
}

Grid tube_grid_local(double eps) {
    double L = 1.05 * 8.0 * kPi / eps;
    int n = next_pow2(2.2 * L);
    return make_grid(1, std::max(n, 256), L);
}

Grid tube_grid_global(double eps) {
    double L = 4.4 / (eps * eps) + 8.0 / eps;
    int n = next_pow2(2.2 * L);
    return make_grid(1, std::max(n, 256), L);
}

SweepResult run_knapp_aniso(const ExperimentConfig& cfg, bool global) {
    SweepResult res;
    std::vector<double> epss = cfg.scales.empty()
                                   ? std::vector<double>{0.125, 0.0625, 0.03125,
                                                        0.015625, 0.0078125}
                                   : cfg.scales;
    auto bundle = theoretical_exponents(global ? cfg.p : kInf, cfg.q, kInf, 1, 0);
    res.target_slope = bundle.s_nec_lp;
    res.tolerance = cfg.tolerance;
    res.records = parallel_records(int(epss.size()), cfg.workers, [&](int i) {
        double eps = epss[i];
        Grid g = global ? tube_grid_global(eps) : tube_grid_local(eps);
        double t_max = global ? 1.0 / (eps * eps) : 1.0;
        double mass = tube_lower_bound(eps, g, cfg.p, cfg.q, t_max);
        SweepRecord rec;
        rec.scale = eps;  // mass ~ eps^target
        rec.lhs = mass;
        rec.rhs = 1.0;
        rec.ratio = mass;
        return rec;
    });
    std::sort(res.records.begin(), res.records.end(),
              [](const SweepRecord& a, const SweepRecord& b) {
                  return a.scale < b.scale;
              });
    assert_slope(res);
    return res;
}

Grid high_grid(double lambda) {
    double L = 8.4 * lambda + 270.0;
    int n = next_pow2(2.0 * L * 1.3 * (lambda + 2.0) / kPi);
    return make_grid(1, n, L);
}

SweepResult run_knapp_high(const ExperimentConfig& cfg) {
    // ||f_lambda||_{M^s_{r,t}} ~ lambda^s and the Sobolev analogue.
    SweepResult res;
    std::vector<double> lambdas =
        cfg.scales.empty() ? std::vector<double>{16, 32, 64, 128, 256}
                           : cfg.scales;
    WindowFamily windows;
    double s = cfg.s;
    res.records = parallel_records(int(lambdas.size()), cfg.workers, [&](int i) {
        double lam = lambdas[i];
        Grid g = high_grid(lam);
        Field f = make_aniso_high(lam, g);
        SweepRecord rec;
        rec.scale = lam;
        rec.lhs = sobolev_lp_norm(f, s, cfg.r);
        rec.rhs = modulation_norm(f, ModNormSpec{s, cfg.r, cfg.q}, windows);
        rec.ratio = rec.lhs;
        return rec;
    });
    res.target_slope = s;  // the family is built to norm like lambda^s
    res.tolerance = cfg.tolerance;
    assert_slope(res);
    // the modulation norm must track the same power
    std::vector<SweepRecord> modrec = res.records;
    for (auto& rec : modrec) rec.ratio = rec.rhs;
    FitResult modfit = fit_exponent(modrec);
    res.notes.push_back(note("modulation_slope", modfit.slope));
    if (std::abs(modfit.slope - s) > cfg.tolerance) res.passed = false;
    return res;
}

Grid iso_grid(double lambda) {
    double L = 24.0 * lambda;
    int n = next_pow2(9.2 * lambda * L / kPi);
    return make_grid(1, n, L);
}

SweepResult run_knapp_iso(const ExperimentConfig& cfg) {
    SweepResult res;
    std::vector<double> lambdas = cfg.scales.empty()
                                      ? std::vector<double>{16, 32, 64, 128}
                                      : cfg.scales;
    auto bundle = theoretical_exponents(cfg.p, cfg.q, cfg.r, 1, 0);
    res.records = parallel_records(int(lambdas.size()), cfg.workers, [&](int i) {
        double lam = lambdas[i];
        Grid g = iso_grid(lam);
        double mass = refocus_lower_bound(lam, g, cfg.p, cfg.q);
        Field f = make_isotropic(lam, g);
        SweepRecord rec;
        rec.scale = lam;
        rec.lhs = mass;
        rec.rhs = f.lp_norm(cfg.r);
        rec.ratio = mass / rec.rhs;
        return rec;
    });
    // ratio ~ lambda^(d - d/q - 2/p - d/r); the necessary exponent.
    res.target_slope = bundle.s_nec_lp;
    res.tolerance = cfg.tolerance;
    assert_slope(res);
    res.notes.push_back(std::string("admissible=") +
                        (bundle.global_admissible ? "true" : "false"));
    return res;
}

double spacetime_norm_refocused(const Field& f, double lambda, double p,
                                double window_hi) {
    // L^p over [-1, window_hi] x R with the refocusing window [-1, -1+w]
    // resolved separately (graded composite of two uniform grids).
    double w = 0.1 / (lambda * lambda);
    auto sym = DispersionSymbol::parabolic();
    SpaceTimeField fine = evolve_interval(f, -1.0, -1.0 + w, 17, sym);
    SpaceTimeField coarse = evolve_interval(f, -1.0 + w, window_hi, 33, sym);
    double a = spacetime_norm(fine, p, p);
    double b = spacetime_norm(coarse, p, p);
    return std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
}

SweepResult run_strichartz_mod(const ExperimentConfig& cfg) {
    // || U f ||_{L^p([-1,1] x R)} / || f ||_{M_{p,2}} on the isotropic family;
    // slope squeezed between s(p,d) and the necessary exponent (1.12).
    SweepResult res;
    std::vector<double> lambdas = cfg.scales.empty()
                                      ? std::vector<double>{16, 32, 64, 128}
                                      : cfg.scales;
    WindowFamily windows;
    auto bundle = theoretical_exponents(cfg.p, 2.0, cfg.p, 1, 0);
    res.records = parallel_records(int(lambdas.size()), cfg.workers, [&](int i) {
        double lam = lambdas[i];
        Grid g = iso_grid(lam);
        Field f = make_isotropic(lam, g);
        SweepRecord rec;
        rec.scale = lam;
        rec.lhs = spacetime_norm_refocused(f, lam, cfg.p, 1.0);
        rec.rhs = modulation_norm(f, ModNormSpec{0.0, cfg.p, 2.0}, windows);
        rec.ratio = rec.lhs / rec.rhs;
        return rec;
    });
    res.target_slope = bundle.s_dec;
    res.tolerance = cfg.tolerance;
    assert_slope(res);
    res.notes.push_back(note("s_necessary", bundle.s_nec_mod));
    if (res.fit.slope < bundle.s_nec_mod - cfg.tolerance) res.passed = false;
    return res;
}

SweepResult run_strichartz_m41(const ExperimentConfig& cfg) {
    // case (E): || U f_lambda ||_{L^4([-1,1] x R)} / || f_lambda ||_{M_{4,2}}
    // flat in lambda on the high-frequency family.
    SweepResult res;
    std::vector<double> lambdas =
        cfg.scales.empty() ? std::vector<double>{16, 32, 64, 128, 256}
                           : cfg.scales;
    WindowFamily windows;
    auto bundle = theoretical_exponents(4.0, 2.0, 4.0, 1, 0);
    res.records = parallel_records(int(lambdas.size()), cfg.workers, [&](int i) {
        double lam = lambdas[i];
        Grid g = high_grid(lam);
        Field f = make_aniso_high(lam, g);
        SpaceTimeField u =
            evolve_interval(f, -1.0, 1.0, 33, DispersionSymbol::parabolic());
        SweepRecord rec;
        rec.scale = lam;
        rec.lhs = spacetime_norm(u, 4.0, 4.0);
        rec.rhs = modulation_norm(f, ModNormSpec{0.0, 4.0, 2.0}, windows);
        rec.ratio = rec.lhs / rec.rhs;
        return rec;
    });
    res.target_slope = bundle.s_dec;  // = 0 below the p-threshold
    res.tolerance = cfg.tolerance;
    assert_slope(res);
    return res;
}

SweepResult run_mp1(const ExperimentConfig& cfg) {
    // per-window ratio ||U Box_k f||_{L^p([-1,1] x R)} / ||Box_k f||_{L^p}
    // uniformly bounded over k.
    SweepResult res;
    int kmax = cfg.scales.empty() ? 64 : int(cfg.scales.back());
    Grid g = make_grid(1, cfg.n ? cfg.n : 32768, cfg.L > 0 ? cfg.L : 512.0);
    WindowFamily windows;
    Field f = Field::from_density(g, [&](const Vec& xi) {
        // smooth profile covering k in [0, kmax]
        double v = ramp_bump(xi[0], -2.0, 0.0, kmax, kmax + 2.0);
        return cplx(v, 0.0);
    });
    auto parts = box_decompose(f, windows);
    double lo = 1e300, hi = 0.0;
    std::vector<std::pair<int, Field>> selected;
    for (const auto& [k, piece] : parts)
        if (k[0] >= 0 && k[0] <= kmax) selected.emplace_back(k[0], piece);
    res.records = parallel_records(int(selected.size()), cfg.workers, [&](int i) {
        const auto& [kk, piece] = selected[i];
        SpaceTimeField u =
            evolve_interval(piece, -1.0, 1.0, 33, DispersionSymbol::parabolic());
        SweepRecord rec;
        rec.scale = kk + 1.0;
        rec.lhs = spacetime_norm(u, cfg.p, cfg.p);
        rec.rhs = piece.lp_norm(cfg.p);
        rec.ratio = rec.lhs / rec.rhs;
        return rec;
    });
    for (const auto& rec : res.records) {
        lo = std::min(lo, rec.ratio);
        hi = std::max(hi, rec.ratio);
    }
    res.notes.push_back(note("ratio_min", lo));
    res.notes.push_back(note("ratio_max", hi));
    res.notes.push_back(note("max_over_min", hi / lo));
    if (hi / lo > 3.0) res.passed = false;
    return res;
}

SweepResult run_kernel(const ExperimentConfig& cfg) {
    SweepResult res;
    std::vector<double> lambdas =
        cfg.scales.empty() ? std::vector<double>{8, 16, 32} : cfg.scales;
    double budget = 10.0 * std::pow(2.0, cfg.d);
    for (double lam : lambdas) {
        std::vector<double> times = {0.0, 0.5, 0.25 * lam * lam, lam * lam,
                                     2.0 * lam * lam};
        auto profile = kernel_l1_profile(cfg.d, lam, lam, times);
        for (const auto& samp : profile) {
            SweepRecord rec;
            rec.scale = lam;
            rec.lhs = samp.l1;
            rec.rhs = std::pow(1.0 + std::abs(samp.t) / (lam * lam), cfg.d);
            rec.ratio = samp.bound_ratio;
            res.records.push_back(rec);
            if (samp.bound_ratio > budget) res.passed = false;
        }
    }
    res.notes.push_back(note("bound_budget", budget));
    return res;
}

Density random_density(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto coeffs = std::make_shared<std::vector<cplx>>();
    for (int j = 0; j < 9; ++j)
        coeffs->push_back(cplx(normal(gen), normal(gen)));
    return [coeffs](const Vec& xi) -> cplx {
        double bump = ramp_bump(xi[0], -1.0, -0.75, 0.75, 1.0);
        if (bump == 0.0) return cplx(0.0, 0.0);
        cplx acc(0.0, 0.0);
        for (int j = 0; j < 9; ++j) {
            double ph = (j - 4) * 2.7 * xi[0];
            acc += (*coeffs)[j] * cplx(std::cos(ph), std::sin(ph));
        }
        return acc * bump / 3.0;
    };
}

SweepResult run_decouple(const ExperimentConfig& cfg, bool variable) {
    SweepResult res;
    std::vector<double> rs = cfg.scales.empty()
                                 ? (variable ? std::vector<double>{16, 32}
                                             : std::vector<double>{16, 32, 64,
                                                                  128, 256})
                                 : cfg.scales;
    DecouplingSetup setup;
    setup.variable = variable;
    setup.p = cfg.p;
    setup.k = cfg.k;
    setup.f = random_density(cfg.seed);
    if (variable)
        setup.phase = PhaseSpec::perturbed(1, cfg.eps_phase);

    res.records = parallel_records(int(rs.size()), cfg.workers, [&](int i) {
        DecouplingSetup local = setup;
        if (variable) local.lambda = 4.0 * rs[i];
        auto ratio = decoupling_ratio(local, rs[i]);
        SweepRecord rec;
        rec.scale = rs[i];
        rec.lhs = ratio.plain;
        rec.rhs = ratio.decoupled;
        rec.ratio = ratio.D;
        if (!ratio.refinement_ok) rec.ratio = -rec.ratio;  // flag downstream
        return rec;
    });
    for (auto& rec : res.records) {
        if (rec.ratio < 0.0) {
            res.notes.push_back("warning=refinement_instability");
            rec.ratio = -rec.ratio;
            res.passed = false;
        }
    }
    res.target_slope = 0.0;
    res.tolerance = cfg.tolerance;
    res.fit = fit_exponent(res.records);
    res.slope_asserted = true;
    if (res.fit.slope > res.target_slope + res.tolerance) res.passed = false;
    return res;
}

SweepResult run_rescale_check(const ExperimentConfig& cfg) {
    SweepResult res;
    std::vector<double> rhos =
        cfg.scales.empty() ? std::vector<double>{4, 8, 16, 32} : cfg.scales;
    PhaseSpec base = PhaseSpec::perturbed(1, cfg.eps_phase);
    // deviation of d/dx1 of the xi-Hessian before rescaling
    auto hx_dev = [](const PhaseSpec& ph) {
        double worst = 0.0;
        for (int s = 1; s <= 200; ++s) {
            double t = 2.0 * ((s * 0.618) - std::floor(s * 0.618)) - 1.0;
            double x = 2.0 * ((s * 0.382) - std::floor(s * 0.382)) - 1.0;
            if (t * t + x * x > 0.9) continue;
            Mat m = ph.Hx(0, t, {x, 0.0});
            worst = std::max(worst, std::abs(m[0][0]));
        }
        return worst;
    };
    double base_dev = hx_dev(base);
    res.notes.push_back(note("base_dev", base_dev));
    for (double rho : rhos) {
        PhaseSpec scaled = parabolic_rescale(base, {0.25, 0.0}, rho);
        double dev = hx_dev(scaled);
        SweepRecord rec;
        rec.scale = rho;
        rec.lhs = dev;
        rec.rhs = base_dev / rho;
        rec.ratio = dev / rec.rhs;  // the contraction constant C
        res.records.push_back(rec);
        if (rec.ratio > 4.0) res.passed = false;
    }
    // fixed point: quadratic phases unchanged
    PhaseSpec par = PhaseSpec::parabolic(1);
    PhaseSpec par_rescaled = parabolic_rescale(par, {0.25, 0.0}, 8.0);
    double fixed_dev = 0.0;
    for (int s = 1; s <= 50; ++s) {
        double t = -0.8 + 1.6 * s / 50.0;
        Vec x{0.3, 0.0};
        Vec xi{0.5, 0.0};
        fixed_dev = std::max(fixed_dev, std::abs(par.phi(t, x, xi) -
                                                 par_rescaled.phi(t, x, xi)));
    }
    res.notes.push_back(note("quadratic_fixed_point_dev", fixed_dev));
    if (fixed_dev > 1e-10) res.passed = false;
    return res;
}

SweepResult run_approx_lemma(const ExperimentConfig& cfg) {
    SweepResult res;
    std::vector<double> lambdas =
        cfg.scales.empty() ? std::vector<double>{256, 1024, 4096} : cfg.scales;
    PhaseSpec phase = PhaseSpec::perturbed(1, cfg.eps_phase > 0 ? cfg.eps_phase
                                                                : 0.05);
    Density f = random_density(cfg.seed);
    double prev = 1e300;
    for (double lam : lambdas) {
        double K = std::pow(lam, 0.4);
        double zbar = 0.25 * lam;
        // snap the center to the evaluation lattice
        double tbar = std::round(zbar * 4.0) / 4.0;
        double xbar = tbar;
        auto a = approximation_error(phase, lam, K, tbar, xbar, f, cfg.p);
        SweepRecord rec;
        rec.scale = lam;
        rec.lhs = a.rel_error;
        rec.rhs = prev < 1e299 ? prev : 0.0;
        rec.ratio = a.rel_error;
        res.records.push_back(rec);
        res.notes.push_back(note("eig_min", a.eig_min));
        res.notes.push_back(note("eig_max", a.eig_max));
        if (a.rel_error >= prev) res.passed = false;
        if (a.eig_min < 1.0 / 3.0 || a.eig_max > 3.0) res.passed = false;
        prev = a.rel_error;
    }
    return res;
}

Field small_gaussian(const Grid& g, double amplitude) {
    std::vector<cplx> s(g.total());
    for (std::size_t j = 0; j < s.size(); ++j) {
        Vec x = g.point(j);
        s[j] = amplitude * std::exp(-0.5 * x[0] * x[0]);
    }
    return Field::from_samples(g, std::move(s));
}

SweepResult run_nls_picard(const ExperimentConfig& cfg) {
    SweepResult res;
    Grid g = make_grid(1, cfg.n ? cfg.n : 1024, cfg.L > 0 ? cfg.L : 64.0);
    Field f = small_gaussian(g, 0.3);
    int steps = 129;
    double T = 0.5;
    auto series = picard_series(f, 9, T, steps);
    for (std::size_t j = 0; j < series.term_norms.size(); ++j) {
        SweepRecord rec;
        rec.scale = 2.0 * j + 1.0;
        rec.lhs = series.term_norms[j];
        rec.rhs = 1.0;
        rec.ratio = series.term_norms[j];
        res.records.push_back(rec);
    }
    if (series.diverging) {
        res.notes.push_back("warning=series_not_contracting");
        res.passed = false;
    }
    // homogeneity: A_3(f/2) = A_3(f)/8
    auto half = picard_series(f.scaled(0.5), 3, T, steps);
    double rel = linf_l2_distance(half.a[1], SpaceTimeField{
        0.0, T, [&] {
            std::vector<Field> sc;
            for (const auto& s : series.a[1].slices) sc.push_back(s.scaled(0.125));
            return sc;
        }()});
    double denom = series.term_norms[1] * 0.125;
    res.notes.push_back(note("homogeneity_rel", rel / denom));
    if (rel / denom > 1e-8) res.passed = false;

    // partial sums approach the split-step reference
    NlsRun run{f, +1, T, T / 2048.0};
    auto ref = splitstep_solve(run);
    SpaceTimeField partial = series.a[0];
    std::vector<double> errs;
    for (std::size_t j = 0; j < series.a.size(); ++j) {
        if (j > 0)
            for (std::size_t s = 0; s < partial.slices.size(); ++s)
                partial.slices[s] = partial.slices[s] + series.a[j].slices[s];
        // compare on the coarse grid (reference subsampled)
        SpaceTimeField sub;
        sub.t_start = 0.0;
        sub.t_end = T;
        std::size_t strideref = (ref.slices.size() - 1) / (partial.slices.size() - 1);
        for (std::size_t s = 0; s < partial.slices.size(); ++s)
            sub.slices.push_back(ref.slices[s * strideref]);
        errs.push_back(linf_l2_distance(partial, sub));
    }
    for (std::size_t j = 1; j < errs.size(); ++j) {
        res.notes.push_back(note("series_error_m" + std::to_string(2 * j + 1),
                                 errs[j]));
        if (errs[j] > errs[j - 1] && errs[j] > 1e-7) res.passed = false;
    }
    return res;
}

SweepResult run_nls_identity(const ExperimentConfig& cfg) {
    SweepResult res;
    Grid g = make_grid(1, cfg.n ? cfg.n : 1024, cfg.L > 0 ? cfg.L : 64.0);
    Field f = small_gaussian(g, 0.4);
    auto iterates = higher_iterates(f, 4, 0.5, 129);
    auto residuals = iterate_identity_residuals(iterates);
    for (std::size_t j = 0; j < residuals.size(); ++j) {
        SweepRecord rec;
        rec.scale = j + 2.0;
        rec.lhs = residuals[j];
        rec.rhs = 1e-6;
        rec.ratio = residuals[j];
        res.records.push_back(rec);
        if (residuals[j] > 1e-6) res.passed = false;
    }
    return res;
}

SweepResult run_nls_monitor(const ExperimentConfig& cfg) {
    SweepResult res;
    Grid g = make_grid(1, cfg.n ? cfg.n : 1024, cfg.L > 0 ? cfg.L : 64.0);
    Field f = small_gaussian(g, 0.8);
    double T = 1.0;
    NlsRun run{f, +1, T, 5e-4};
    auto u = splitstep_solve(run);
    SpaceTimeField w;
    w.t_start = 0.0;
    w.t_end = T;
    for (std::size_t s = 0; s < u.slices.size(); ++s)
        w.slices.push_back(evolve_free(f, u.time(s),
                                       DispersionSymbol::parabolic()));
    auto mon = energy_monitors(u, w);
    double supME = 0.0;
    for (std::size_t s = 0; s < mon.t.size(); ++s)
        supME = std::max(supME, mon.mass[s] + mon.energy[s]);
    res.notes.push_back(note("gronwall_constant", mon.gronwall_constant));
    res.notes.push_back(note("sup_M_plus_E", supME));
    if (!std::isfinite(supME) || !std::isfinite(mon.gronwall_constant))
        res.passed = false;
    // subsampled series in the records: scale = t
    std::size_t stride = std::max<std::size_t>(1, mon.t.size() / 64);
    for (std::size_t s = 0; s < mon.t.size(); s += stride) {
        SweepRecord rec;
        rec.scale = mon.t[s] + 1.0;
        rec.lhs = mon.energy[s];
        rec.rhs = mon.etilde[s] + mon.mass[s] + 1.0;
        rec.ratio = mon.energy[s] / rec.rhs;
        res.records.push_back(rec);
    }
    return res;
}

}  // namespace

SweepResult run_experiment(const std::string& kind,
                           const ExperimentConfig& cfg) {
    SweepResult res;
    if (kind == "embedding")
        res = run_embedding(cfg);
    else if (kind == "fixed_time")
        res = run_fixed_time(cfg);
    else if (kind == "knapp_aniso_local")
        res = run_knapp_aniso(cfg, false);
    else if (kind == "knapp_aniso_global")
        res = run_knapp_aniso(cfg, true);
    else if (kind == "knapp_high")
        res = run_knapp_high(cfg);
    else if (kind == "knapp_iso")
        res = run_knapp_iso(cfg);
    else if (kind == "strichartz_mod")
        res = run_strichartz_mod(cfg);
    else if (kind == "strichartz_m41")
        res = run_strichartz_m41(cfg);
    else if (kind == "mp1")
        res = run_mp1(cfg);
    else if (kind == "kernel")
        res = run_kernel(cfg);
    else if (kind == "decouple_const")
        res = run_decouple(cfg, false);
    else if (kind == "decouple_var")
        res = run_decouple(cfg, true);
    else if (kind == "rescale_check")
        res = run_rescale_check(cfg);
    else if (kind == "approx_lemma")
        res = run_approx_lemma(cfg);
    else if (kind == "nls_picard")
        res = run_nls_picard(cfg);
    else if (kind == "nls_identity")
        res = run_nls_identity(cfg);
    else if (kind == "nls_monitor")
        res = run_nls_monitor(cfg);
    else
        throw std::invalid_argument("unknown experiment: " + kind);
    res.experiment = kind;
    res.fingerprint = fingerprint_of(cfg.canonical(kind));
    return res;
}

}  // namespace displab
