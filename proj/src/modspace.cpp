#include "displab/modspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace displab {

namespace {

double bracket(const KVec& k) {
    return std::sqrt(1.0 + double(k[0]) * k[0] + double(k[1]) * k[1]);
}

}  // namespace

std::map<KVec, Field> box_decompose(const Field& f, const WindowFamily& windows) {
    const Grid& g = f.grid();
    const auto& spec = f.spectrum();
    int K = windows.cover_limit(g);
    if (K < 1)
        throw std::invalid_argument("box_decompose: grid band too narrow");

    // Leak guard: spectral mass outside the covered lattice must be tiny.
    double total = 0.0, leaked = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        double m = std::norm(spec[i]);
        total += m;
        Vec xi = g.freq_point(i);
        if (std::abs(xi[0]) > K + 1 || (g.d == 2 && std::abs(xi[1]) > K + 1))
            leaked += m;
    }
    if (total > 0.0 && leaked / total > 1e-10)
        throw std::invalid_argument(
            "box_decompose: spectrum leaks past the covered window lattice");

    std::map<KVec, std::vector<cplx>> parts;
    std::map<KVec, double> part_sup;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (spec[i] == cplx(0.0, 0.0)) continue;
        Vec xi = g.freq_point(i);
        int a0 = int(std::floor(xi[0]));
        int b0 = g.d == 2 ? int(std::floor(xi[1])) : 0;
        int bmax = g.d == 2 ? b0 + 1 : 0;
        for (int a = a0; a <= a0 + 1; ++a) {
            for (int b = b0; b <= bmax; ++b) {
                KVec k{a, g.d == 2 ? b : 0};
                double w = windows.sigma(k, xi, g.d);
                if (w == 0.0) continue;
                auto it = parts.find(k);
                if (it == parts.end())
                    it = parts.emplace(k, std::vector<cplx>(g.total())).first;
                cplx v = spec[i] * w;
                it->second[i] = v;
                double& sup = part_sup[k];
                sup = std::max(sup, std::abs(v));
            }
        }
    }

    std::map<KVec, Field> out;
    for (auto& [k, data] : parts) {
        if (part_sup[k] < 1e-14) continue;
        out.emplace(k, Field::from_spectrum(g, std::move(data)));
    }
    return out;
}

double modulation_norm(const Field& f, const ModNormSpec& spec,
                       const WindowFamily& windows) {
    if (spec.p < 1.0 || spec.q < 1.0)
        throw std::invalid_argument("modulation_norm: p, q must be >= 1");
    auto parts = box_decompose(f, windows);
    if (std::isinf(spec.q)) {
        double m = 0.0;
        for (const auto& [k, piece] : parts)
            m = std::max(m, std::pow(bracket(k), spec.s) * piece.lp_norm(spec.p));
        return m;
    }
    // std::map iteration gives a fixed k-ordering, so the reduction is
    // bit-reproducible regardless of how the pieces were produced.
    double acc = 0.0;
    for (const auto& [k, piece] : parts) {
        double a = piece.lp_norm(spec.p);
        acc += std::pow(bracket(k), spec.q * spec.s) * std::pow(a, spec.q);
    }
    return std::pow(acc, 1.0 / spec.q);
}

double sobolev_lp_norm(const Field& f, double alpha, double p) {
    if (alpha == 0.0) return f.lp_norm(p);
    Field g = f.apply_multiplier([alpha](const Vec& xi) {
        double r2 = xi[0] * xi[0] + xi[1] * xi[1];
        return cplx(std::pow(1.0 + r2, 0.5 * alpha), 0.0);
    });
    return g.lp_norm(p);
}

bool EmbeddingReport::all_ok(double budget) const {
    for (const auto& c : checks)
        if (c.worst_constant > budget) return false;
    return true;
}

namespace {

EmbeddingCheck ratio_check(const std::string& name,
                           const std::vector<double>& lhs,
                           const std::vector<double>& rhs) {
    EmbeddingCheck c;
    c.name = name;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (lhs[i] <= 0.0) continue;
        double need = rhs[i] / lhs[i];  // smallest C with lhs >= rhs / C
        if (need > c.worst_constant) {
            c.worst_constant = need;
            c.worst_index = int(i);
        }
    }
    c.ok = true;
    return c;
}

}  // namespace

EmbeddingReport check_embeddings(const std::vector<Field>& testset,
                                 const WindowFamily& windows) {
    if (testset.empty())
        throw std::invalid_argument("check_embeddings: empty test set");
    EmbeddingReport rep;

    auto mod = [&](const Field& f, double s, double p, double q) {
        return modulation_norm(f, ModNormSpec{s, p, q}, windows);
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::size_t N = testset.size();

    // q-monotonicity (summability embedding), p = 4, q: 1 <= 2 <= inf.
    {
        std::vector<double> a(N), b(N), c(N);
        for (std::size_t i = 0; i < N; ++i) {
            a[i] = mod(testset[i], 0.0, 4.0, 1.0);
            b[i] = mod(testset[i], 0.0, 4.0, 2.0);
            c[i] = mod(testset[i], 0.0, 4.0, inf);
        }
        rep.checks.push_back(ratio_check("M_{4,1} >= M_{4,2}", a, b));
        rep.checks.push_back(ratio_check("M_{4,2} >= M_{4,inf}", b, c));
    }
    // p-monotonicity (Bernstein), q = 2: p 2 <= 4 <= inf.
    {
        std::vector<double> a(N), b(N), c(N);
        for (std::size_t i = 0; i < N; ++i) {
            a[i] = mod(testset[i], 0.0, 2.0, 2.0);
            b[i] = mod(testset[i], 0.0, 4.0, 2.0);
            c[i] = mod(testset[i], 0.0, inf, 2.0);
        }
        rep.checks.push_back(ratio_check("M_{2,2} >~ M_{4,2}", a, b));
        rep.checks.push_back(ratio_check("M_{4,2} >~ M_{inf,2}", b, c));
    }
    // Lebesgue sandwich for p in {2, 4}: M_{p,p'} >~ L^p >~ M_{p,p}.
    for (double p : {2.0, 4.0}) {
        double pp = p / (p - 1.0);
        std::vector<double> a(N), b(N), c(N);
        for (std::size_t i = 0; i < N; ++i) {
            a[i] = mod(testset[i], 0.0, p, pp);
            b[i] = testset[i].lp_norm(p);
            c[i] = mod(testset[i], 0.0, p, p);
        }
        rep.checks.push_back(
            ratio_check("M_{p,p'} >~ L^p (p=" + std::to_string(int(p)) + ")", a, b));
        rep.checks.push_back(
            ratio_check("L^p >~ M_{p,p} (p=" + std::to_string(int(p)) + ")", b, c));
    }
    // Regularity-for-summability trade: s1=1.5, q1=2 vs s2=0, q2=1,
    // valid since 1.5 > d (1/1 - 1/2).
    {
        std::vector<double> a(N), b(N);
        for (std::size_t i = 0; i < N; ++i) {
            a[i] = mod(testset[i], 1.5, 4.0, 2.0);
            b[i] = mod(testset[i], 0.0, 4.0, 1.0);
        }
        rep.checks.push_back(ratio_check("M^{1.5}_{4,2} >~ M_{4,1}", a, b));
    }
    return rep;
}

double product_norm_check(const Field& f1, const Field& f2, double s, double p,
                          double p1, double p2, const WindowFamily& windows) {
    if (s < 0.0) throw std::invalid_argument("product_norm_check: s >= 0");
    if (std::abs(1.0 / p - 1.0 / p1 - 1.0 / p2) > 1e-12)
        throw std::invalid_argument("product_norm_check: need 1/p = 1/p1 + 1/p2");
    Field prod = f1.pointwise_mul(f2);
    double hn = prod.grid().half_nyquist();
    if (prod.spectral_mass_above(hn) > 1e-10)
        throw std::invalid_argument("product_norm_check: product aliases");
    double denom = modulation_norm(f1, ModNormSpec{s, p1, 1.0}, windows) *
                   modulation_norm(f2, ModNormSpec{s, p2, 1.0}, windows);
    if (denom == 0.0) return 0.0;
    return modulation_norm(prod, ModNormSpec{s, p, 1.0}, windows) / denom;
}

}  // namespace displab
