#include "displab/nls.hpp"

#include <cmath>
#include <stdexcept>

#include "displab/fft.hpp"
#include "displab/propagator.hpp"

namespace displab {

namespace {

void check_datum(const Field& f) {
    if (f.grid().d != 1)
        throw std::invalid_argument("nls: d = 1 only");
    if (f.spectral_mass_above(0.25 * f.grid().nyquist()) > 1e-10)
        throw std::invalid_argument("nls: datum must sit below quarter-Nyquist");
    if (f.mass_outside(0.25 * f.grid().box_len) > 1e-8)
        throw std::invalid_argument("nls: datum mass escapes |x| <= L/4");
}

void check_shared_grid(const SpaceTimeField& a, const SpaceTimeField& b) {
    if (!(a.grid() == b.grid()) || a.slices.size() != b.slices.size() ||
        a.t_start != b.t_start || a.t_end != b.t_end)
        throw std::invalid_argument("nls: time grid mismatch");
}

}  // namespace

SpaceTimeField splitstep_solve(const NlsRun& run, double nonlinear_coeff) {
    check_datum(run.initial);
    const Grid& g = run.initial.grid();
    int steps = std::max(1, int(std::llround(run.horizon / run.dt)));
    double dt = run.horizon / steps;

    // Precompute the linear multiplier for one full step.
    std::vector<cplx> lin(g.total());
    for (std::size_t i = 0; i < lin.size(); ++i) {
        double xi = g.freq_point(i)[0];
        double ph = -dt * xi * xi;
        lin[i] = cplx(std::cos(ph), std::sin(ph));
    }

    double scale = 1.0 / std::sqrt(double(g.total()));
    std::vector<cplx> u = run.initial.samples();
    SpaceTimeField out;
    out.t_start = 0.0;
    out.t_end = run.horizon;
    out.slices.reserve(steps + 1);
    out.slices.push_back(run.initial);

    double c = nonlinear_coeff * run.sign;
    auto nonlinear_half = [&](std::vector<cplx>& v) {
        if (c == 0.0) return;
        for (auto& z : v) {
            double a2 = std::norm(z);
            double ph = -0.5 * dt * c * a2;
            z *= cplx(std::cos(ph), std::sin(ph));
        }
    };

    for (int s = 0; s < steps; ++s) {
        if (c != 0.0) {
            double peak = 0.0;
            for (const auto& z : u) peak = std::max(peak, std::norm(z));
            if (peak * dt > 0.1)
                throw std::runtime_error(
                    "splitstep_solve: amplitude guard tripped (max|u|^2 dt > 0.1)");
        }
        nonlinear_half(u);
        fft_forward(1, g.n, u);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] *= lin[i] * scale * scale;
        fft_backward(1, g.n, u);
        // the two 1/sqrt(N) factors above make forward+backward unitary
        nonlinear_half(u);
        out.slices.push_back(Field::from_samples(g, u));
    }
    return out;
}

SpaceTimeField duhamel_n3(const SpaceTimeField& u1, const SpaceTimeField& u2,
                          const SpaceTimeField& u3, int sign) {
    check_shared_grid(u1, u2);
    check_shared_grid(u1, u3);
    if (u1.t_start != 0.0)
        throw std::invalid_argument("duhamel_n3: time grid must start at 0");
    const Grid& g = u1.grid();
    std::size_t m = u1.slices.size();
    double dt = u1.dt();

    // N3(t_j) = -i sign sum_s w_s e^{-i (t_j - s) xi^2} G(s) dt with G the
    // pointwise product; accumulate prefix sums of e^{+i s xi^2} Ghat(s) so
    // the whole series costs one FFT per slice.
    std::vector<double> xi2(g.total());
    for (std::size_t i = 0; i < xi2.size(); ++i) {
        double xi = g.freq_point(i)[0];
        xi2[i] = xi * xi;
    }

    SpaceTimeField out;
    out.t_start = u1.t_start;
    out.t_end = u1.t_end;
    out.slices.reserve(m);

    std::vector<cplx> prefix(g.total(), cplx(0.0, 0.0));
    std::vector<cplx> prev_term;  // e^{+i s xi^2} Ghat(s) at the previous slice
    cplx minus_i(0.0, -1.0);

    for (std::size_t j = 0; j < m; ++j) {
        double t = u1.time(j);
        const auto& a = u1.slices[j].samples();
        const auto& b = u2.slices[j].samples();
        const auto& cc = u3.slices[j].samples();
        std::vector<cplx> gphys(g.total());
        for (std::size_t i = 0; i < gphys.size(); ++i)
            gphys[i] = a[i] * std::conj(b[i]) * cc[i];
        fft_forward(1, g.n, gphys);
        double fw = 1.0 / std::sqrt(double(g.total()));
        std::vector<cplx> term(g.total());
        for (std::size_t i = 0; i < term.size(); ++i) {
            double ph = t * xi2[i];
            term[i] = gphys[i] * fw * cplx(std::cos(ph), std::sin(ph));
        }
        if (j == 0) {
            out.slices.push_back(Field::zero(g));
        } else {
            // extend the trapezoid sum by the panel [t_{j-1}, t_j]
            for (std::size_t i = 0; i < prefix.size(); ++i)
                prefix[i] += 0.5 * dt * (prev_term[i] + term[i]);
            std::vector<cplx> spec(g.total());
            for (std::size_t i = 0; i < spec.size(); ++i) {
                double ph = -t * xi2[i];
                spec[i] = double(sign) * minus_i *
                          cplx(std::cos(ph), std::sin(ph)) * prefix[i];
            }
            out.slices.push_back(Field::from_spectrum(g, std::move(spec)));
        }
        prev_term = std::move(term);
    }
    return out;
}

PicardSeries picard_series(const Field& f, int m_max, double t_end, int steps,
                           int sign) {
    if (m_max < 1 || m_max > 9 || m_max % 2 == 0)
        throw std::invalid_argument("picard_series: odd m_max <= 9");
    check_datum(f);
    PicardSeries out;
    out.a.push_back(evolve_interval(f, 0.0, t_end, steps,
                                    DispersionSymbol::parabolic()));
    // a[j] holds A_{2j+1}; A_m = sum over odd partitions m1+m2+m3 = m.
    for (int m = 3; m <= m_max; m += 2) {
        SpaceTimeField am;
        bool first = true;
        for (int m1 = 1; m1 <= m - 2; m1 += 2) {
            for (int m2 = 1; m1 + m2 <= m - 1; m2 += 2) {
                int m3 = m - m1 - m2;
                if (m3 < 1 || m3 % 2 == 0) continue;
                SpaceTimeField term =
                    duhamel_n3(out.a[(m1 - 1) / 2], out.a[(m2 - 1) / 2],
                               out.a[(m3 - 1) / 2], sign);
                if (first) {
                    am = std::move(term);
                    first = false;
                } else {
                    for (std::size_t s = 0; s < am.slices.size(); ++s)
                        am.slices[s] = am.slices[s] + term.slices[s];
                }
            }
        }
        out.a.push_back(std::move(am));
    }
    for (const auto& a : out.a) out.term_norms.push_back(linf_l2_norm(a));
    for (std::size_t j = 1; j < out.term_norms.size(); ++j)
        if (out.term_norms[j] >= out.term_norms[j - 1]) out.diverging = true;
    return out;
}

std::vector<SpaceTimeField> higher_iterates(const Field& f, int n, double t_end,
                                            int steps, int sign) {
    if (n < 1 || n > 4)
        throw std::invalid_argument("higher_iterates: 1 <= n <= 4");
    check_datum(f);
    std::vector<SpaceTimeField> u;
    u.push_back(evolve_interval(f, 0.0, t_end, steps,
                                DispersionSymbol::parabolic()));
    for (int j = 1; j < n; ++j) {
        SpaceTimeField partial = u[0];
        for (int k = 1; k < j; ++k)
            for (std::size_t s = 0; s < partial.slices.size(); ++s)
                partial.slices[s] = partial.slices[s] + u[k].slices[s];
        SpaceTimeField np = duhamel_n3(partial, partial, partial, sign);
        for (int k = 1; k < j; ++k)
            for (std::size_t s = 0; s < np.slices.size(); ++s)
                np.slices[s] = np.slices[s] - u[k].slices[s];
        u.push_back(std::move(np));
    }
    return u;
}

std::vector<double> iterate_identity_residuals(
    const std::vector<SpaceTimeField>& iterates, int sign) {
    std::vector<double> res;
    int n = int(iterates.size());
    for (int j = 2; j <= n - 1; ++j) {
        SpaceTimeField lhs = iterates[1];
        for (int k = 2; k <= j - 1; ++k)
            for (std::size_t s = 0; s < lhs.slices.size(); ++s)
                lhs.slices[s] = lhs.slices[s] + iterates[k].slices[s];
        SpaceTimeField arg = iterates[0];
        for (int k = 1; k <= j - 2; ++k)
            for (std::size_t s = 0; s < arg.slices.size(); ++s)
                arg.slices[s] = arg.slices[s] + iterates[k].slices[s];
        SpaceTimeField rhs = duhamel_n3(arg, arg, arg, sign);
        double denom = linf_l2_norm(lhs);
        res.push_back(denom > 0.0 ? linf_l2_distance(lhs, rhs) / denom : 0.0);
    }
    return res;
}

VSolve solve_v(const Field& f, int n, double t_end, int steps, int sign,
               double tol, int max_iter) {
    auto iterates = higher_iterates(f, n, t_end, steps, sign);
    const Grid& g = f.grid();

    SpaceTimeField s_sum = iterates[0];
    for (int k = 1; k < n; ++k)
        for (std::size_t s = 0; s < s_sum.slices.size(); ++s)
            s_sum.slices[s] = s_sum.slices[s] + iterates[k].slices[s];

    SpaceTimeField tail;  // sum_{j>=1} u^j
    tail.t_start = s_sum.t_start;
    tail.t_end = s_sum.t_end;
    for (std::size_t s = 0; s < s_sum.slices.size(); ++s)
        tail.slices.push_back(Field::zero(g));
    for (int k = 1; k < n; ++k)
        for (std::size_t s = 0; s < tail.slices.size(); ++s)
            tail.slices[s] = tail.slices[s] + iterates[k].slices[s];

    VSolve out;
    out.v = tail;
    for (auto& slice : out.v.slices) slice = Field::zero(g);

    for (int it = 0; it < max_iter; ++it) {
        SpaceTimeField arg = out.v;
        for (std::size_t s = 0; s < arg.slices.size(); ++s)
            arg.slices[s] = arg.slices[s] + s_sum.slices[s];
        SpaceTimeField next = duhamel_n3(arg, arg, arg, sign);
        for (std::size_t s = 0; s < next.slices.size(); ++s)
            next.slices[s] = next.slices[s] - tail.slices[s];
        out.final_change = linf_l2_distance(next, out.v);
        out.v = std::move(next);
        out.iterations = it + 1;
        if (out.final_change < tol) {
            out.contracted = true;
            break;
        }
    }
    return out;
}

MonitorSeries energy_monitors(const SpaceTimeField& u, const SpaceTimeField& w) {
    check_shared_grid(u, w);
    const Grid& g = u.grid();
    MonitorSeries out;
    double vol = g.cell_volume();
    for (std::size_t s = 0; s < u.slices.size(); ++s) {
        Field v = u.slices[s] - w.slices[s];
        Field vx = v.apply_multiplier(
            [](const Vec& xi) { return cplx(0.0, xi[0]); });
        const auto& vv = v.samples();
        const auto& vxv = vx.samples();
        const auto& wv = w.slices[s].samples();
        double m = 0.0, grad = 0.0, quart = 0.0, mixed = 0.0;
        for (std::size_t i = 0; i < vv.size(); ++i) {
            double v2 = std::norm(vv[i]);
            m += v2;
            grad += std::norm(vxv[i]);
            quart += v2 * v2;
            double vw2 = std::norm(vv[i] + wv[i]);
            double w2 = std::norm(wv[i]);
            mixed += vw2 * vw2 - w2 * w2;
        }
        out.t.push_back(u.time(s));
        out.mass.push_back(0.5 * m * vol);
        out.energy.push_back((0.5 * grad + 0.25 * quart) * vol);
        out.etilde.push_back((0.5 * grad + 0.25 * mixed) * vol);
    }
    for (std::size_t s = 0; s < out.t.size(); ++s) {
        double bound = out.etilde[s] + out.mass[s] + 1.0;
        out.gronwall_constant =
            std::max(out.gronwall_constant, out.energy[s] / bound);
    }
    return out;
}

double linf_l2_distance(const SpaceTimeField& a, const SpaceTimeField& b) {
    check_shared_grid(a, b);
    double m = 0.0;
    for (std::size_t s = 0; s < a.slices.size(); ++s)
        m = std::max(m, (a.slices[s] - b.slices[s]).l2_norm());
    return m;
}

double linf_l2_norm(const SpaceTimeField& a) {
    double m = 0.0;
    for (const auto& s : a.slices) m = std::max(m, s.l2_norm());
    return m;
}

}  // namespace displab
