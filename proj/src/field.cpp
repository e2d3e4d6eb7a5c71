#include "displab/field.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "displab/fft.hpp"

namespace displab {

struct Field::State {
    std::vector<cplx> samples;
    std::vector<cplx> spectrum;
    bool has_samples = false;
    bool has_spectrum = false;
    mutable std::mutex mu;
};

namespace {

std::vector<cplx> to_spectrum(const Grid& g, std::vector<cplx> data) {
    fft_forward(g.d, g.n, data);
    double scale = 1.0 / std::sqrt(double(g.total()));
    for (auto& v : data) v *= scale;
    return data;
}

std::vector<cplx> to_samples(const Grid& g, std::vector<cplx> data) {
    fft_backward(g.d, g.n, data);
    double scale = 1.0 / std::sqrt(double(g.total()));
    for (auto& v : data) v *= scale;
    return data;
}

}  // namespace

Field Field::from_samples(const Grid& g, std::vector<cplx> samples) {
    if (samples.size() != g.total())
        throw std::invalid_argument("Field: sample count does not match grid");
    Field f;
    f.grid_ = g;
    f.state_ = std::make_shared<State>();
    f.state_->samples = std::move(samples);
    f.state_->has_samples = true;
    return f;
}

Field Field::from_spectrum(const Grid& g, std::vector<cplx> spectrum) {
    if (spectrum.size() != g.total())
        throw std::invalid_argument("Field: spectrum size does not match grid");
    Field f;
    f.grid_ = g;
    f.state_ = std::make_shared<State>();
    f.state_->spectrum = std::move(spectrum);
    f.state_->has_spectrum = true;
    return f;
}

Field Field::from_density(const Grid& g,
                          const std::function<cplx(const Vec&)>& density) {
    // f(x_j) = sum_m a(xi_m) e^{i x_j.xi_m} dxi^d. With x_j = -L/2 + j dx the
    // plane wave picks up (-1)^m relative to the raw DFT kernel.
    std::vector<cplx> spec(g.total());
    double w = std::pow(g.freq_spacing(), g.d) * std::sqrt(double(g.total()));
    for (std::size_t i = 0; i < spec.size(); ++i) {
        cplx a = density(g.freq_point(i));
        spec[i] = a * (g.parity(i) * w);
    }
    return from_spectrum(g, std::move(spec));
}

Field Field::zero(const Grid& g) {
    return from_samples(g, std::vector<cplx>(g.total(), cplx(0.0, 0.0)));
}

const std::vector<cplx>& Field::samples() const {
    std::lock_guard<std::mutex> lock(state_->mu);
    if (!state_->has_samples) {
        state_->samples = to_samples(grid_, state_->spectrum);
        state_->has_samples = true;
    }
    return state_->samples;
}

const std::vector<cplx>& Field::spectrum() const {
    std::lock_guard<std::mutex> lock(state_->mu);
    if (!state_->has_spectrum) {
        state_->spectrum = to_spectrum(grid_, state_->samples);
        state_->has_spectrum = true;
    }
    return state_->spectrum;
}

Field Field::apply_multiplier(const std::function<cplx(const Vec&)>& m) const {
    const auto& spec = spectrum();
    std::vector<cplx> out(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i)
        out[i] = spec[i] * m(grid_.freq_point(i));
    return from_spectrum(grid_, std::move(out));
}

double Field::lp_norm(double p) const {
    const auto& s = samples();
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& v : s) m = std::max(m, std::abs(v));
        return m;
    }
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    double acc = 0.0;
    if (p == 2.0) {
        for (const auto& v : s) acc += std::norm(v);
    } else {
        for (const auto& v : s) acc += std::pow(std::abs(v), p);
    }
    return std::pow(acc * grid_.cell_volume(), 1.0 / p);
}

double Field::l2_norm_spectral() const {
    const auto& s = spectrum();
    double acc = 0.0;
    for (const auto& v : s) acc += std::norm(v);
    return std::sqrt(acc * grid_.cell_volume());
}

double Field::spectral_mass_above(double freq) const {
    const auto& s = spectrum();
    double total = 0.0, above = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double m = std::norm(s[i]);
        total += m;
        Vec xi = grid_.freq_point(i);
        if (std::max(std::abs(xi[0]), std::abs(xi[1])) > freq) above += m;
    }
    return total > 0.0 ? above / total : 0.0;
}

double Field::mass_outside(double radius) const {
    const auto& s = samples();
    double total = 0.0, outside = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double m = std::norm(s[i]);
        total += m;
        Vec x = grid_.point(i);
        if (std::max(std::abs(x[0]), std::abs(x[1])) > radius) outside += m;
    }
    return total > 0.0 ? outside / total : 0.0;
}

Field Field::scaled(cplx factor) const {
    std::vector<cplx> out = samples();
    for (auto& v : out) v *= factor;
    return from_samples(grid_, std::move(out));
}

Field Field::operator+(const Field& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("Field+: grid mismatch");
    std::vector<cplx> out = samples();
    const auto& b = o.samples();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return from_samples(grid_, std::move(out));
}

Field Field::operator-(const Field& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("Field-: grid mismatch");
    std::vector<cplx> out = samples();
    const auto& b = o.samples();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return from_samples(grid_, std::move(out));
}

Field Field::pointwise_mul(const Field& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("Field*: grid mismatch");
    std::vector<cplx> out = samples();
    const auto& b = o.samples();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
    return from_samples(grid_, std::move(out));
}

Field Field::conj() const {
    std::vector<cplx> out = samples();
    for (auto& v : out) v = std::conj(v);
    return from_samples(grid_, std::move(out));
}

double lp_norm(const Field& f, double p) { return f.lp_norm(p); }

double spacetime_norm(const SpaceTimeField& u, double p_t, double q_x) {
    if (u.slices.empty())
        throw std::invalid_argument("spacetime_norm: empty field");
    if (std::isinf(p_t)) {
        double m = 0.0;
        for (const auto& s : u.slices) m = std::max(m, s.lp_norm(q_x));
        return m;
    }
    if (u.slices.size() == 1) return u.slices[0].lp_norm(q_x);
    double dt = u.dt();
    double acc = 0.0;
    for (std::size_t j = 0; j < u.slices.size(); ++j) {
        double w = (j == 0 || j + 1 == u.slices.size()) ? 0.5 : 1.0;
        acc += w * dt * std::pow(u.slices[j].lp_norm(q_x), p_t);
    }
    return std::pow(acc, 1.0 / p_t);
}

}  // namespace displab
