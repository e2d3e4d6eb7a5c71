#include "displab/phase.hpp"

#include <cmath>
#include <stdexcept>

#include "displab/windows.hpp"

namespace displab {

namespace {

constexpr double kFdStep = 1e-4;

Vec vadd(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
Vec vsub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
double vnorm(const Vec& a) { return std::hypot(a[0], a[1]); }

Vec matvec(const Mat& m, const Vec& v) {
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

double quad_form(const Mat& m, const Vec& v) {
    Vec mv = matvec(m, v);
    return v[0] * mv[0] + v[1] * mv[1];
}

Mat mat_scale(const Mat& m, double c) {
    Mat r = m;
    for (auto& row : r)
        for (auto& v : row) v *= c;
    return r;
}

Mat mat_sub(const Mat& a, const Mat& b) {
    Mat r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][j] - b[i][j];
    return r;
}

}  // namespace

Mat mat_zero() { return {{{0.0, 0.0}, {0.0, 0.0}}}; }

Mat mat_identity(int d, int k) {
    Mat m = mat_zero();
    for (int i = 0; i < d; ++i) m[i][i] = (i >= d - k) ? -1.0 : 1.0;
    return m;
}

PhaseSpec PhaseSpec::parabolic(int d) {
    PhaseSpec p;
    p.kind_ = Kind::parabolic;
    p.d_ = d;
    return p;
}

PhaseSpec PhaseSpec::hyperbolic(int d, int k) {
    if (k < 0 || 2 * k > d)
        throw std::invalid_argument("hyperbolic phase: need 0 <= k <= d/2");
    PhaseSpec p;
    p.kind_ = Kind::hyperbolic;
    p.d_ = d;
    p.k_ = k;
    return p;
}

PhaseSpec PhaseSpec::perturbed(int d, double eps) {
    PhaseSpec p;
    p.kind_ = Kind::perturbed;
    p.d_ = d;
    p.eps_ = eps;
    return p;
}

PhaseSpec PhaseSpec::rescaled_from(std::shared_ptr<const PhaseSpec> parent,
                                   const Vec& xi0, double rho) {
    if (rho < 4.0)
        throw std::invalid_argument("parabolic_rescale: rho >= 4 required");
    if (vnorm(xi0) + 1.0 / rho > 1.0 + 1e-12)
        throw std::invalid_argument("parabolic_rescale: xi0 + rho^{-1} B leaves Xi");
    PhaseSpec p;
    p.kind_ = Kind::rescaled;
    p.d_ = parent->dim();
    p.k_ = parent->signature();
    p.parent_ = std::move(parent);
    p.xi0_ = xi0;
    p.rho_ = rho;
    return p;
}

std::string PhaseSpec::name() const {
    switch (kind_) {
        case Kind::parabolic:
            return "parabolic";
        case Kind::hyperbolic:
            return "hyperbolic";
        case Kind::perturbed:
            return "perturbed";
        case Kind::rescaled:
            return "rescaled(" + parent_->name() + ")";
    }
    return "?";
}

Mat PhaseSpec::H(double t, const Vec& x) const {
    switch (kind_) {
        case Kind::parabolic:
            return mat_scale(mat_identity(d_), t);
        case Kind::hyperbolic:
            return mat_scale(mat_identity(d_, k_), t);
        case Kind::perturbed:
            return mat_scale(mat_identity(d_), t + 2.0 * eps_ * t * t * x[0]);
        case Kind::rescaled: {
            // phi~(t,x;xi) = <x,xi> + int_0^1 (1-r) <Hp(Phi(t, x/rho)) xi, xi> dr
            // with the parent Hessian frequency-independent, so the
            // (1-r)-weighted average collapses to 1/2 Hp and
            // H~(t,x) = Hp(t, Phi(t, x/rho; xi0)).
            Vec y{x[0] / rho_, x[1] / rho_};
            Vec pos = parent_->solve_position(t, y, xi0_);
            return parent_->H(t, pos);
        }
    }
    return mat_zero();
}

Mat PhaseSpec::Ht(double t, const Vec& x) const {
    switch (kind_) {
        case Kind::parabolic:
            return mat_identity(d_);
        case Kind::hyperbolic:
            return mat_identity(d_, k_);
        case Kind::perturbed: {
            Mat m = mat_identity(d_);
            return mat_scale(m, 1.0 + 4.0 * eps_ * t * x[0]);
        }
        case Kind::rescaled: {
            Mat hp = H(t + kFdStep, x);
            Mat hm = H(t - kFdStep, x);
            return mat_scale(mat_sub(hp, hm), 0.5 / kFdStep);
        }
    }
    return mat_zero();
}

Mat PhaseSpec::Hx(int l, double t, const Vec& x) const {
    switch (kind_) {
        case Kind::parabolic:
        case Kind::hyperbolic:
            return mat_zero();
        case Kind::perturbed:
            if (l == 0) return mat_scale(mat_identity(d_), 2.0 * eps_ * t * t);
            return mat_zero();
        case Kind::rescaled: {
            Vec xp = x, xm = x;
            xp[l] += kFdStep;
            xm[l] -= kFdStep;
            return mat_scale(mat_sub(H(t, xp), H(t, xm)), 0.5 / kFdStep);
        }
    }
    return mat_zero();
}

Mat PhaseSpec::Hzz(int a, int b, double t, const Vec& x) const {
    if (kind_ == Kind::parabolic || kind_ == Kind::hyperbolic) return mat_zero();
    if (kind_ == Kind::perturbed) {
        // H = (t + 2 eps t^2 x1) I: d2/dt2 = 4 eps x1, d2/dt dx1 = 4 eps t.
        if (a == 0 && b == 0) return mat_scale(mat_identity(d_), 4.0 * eps_ * x[0]);
        if ((a == 0 && b == 1) || (a == 1 && b == 0))
            return mat_scale(mat_identity(d_), 4.0 * eps_ * t);
        return mat_zero();
    }
    auto shift = [&](int idx, double h, double& tt, Vec& xx) {
        if (idx == 0)
            tt += h;
        else
            xx[idx - 1] += h;
    };
    if (a == b) {
        double t0 = t;
        Vec x0 = x;
        double tp = t, tm = t;
        Vec xp = x, xm = x;
        shift(a, kFdStep, tp, xp);
        shift(a, -kFdStep, tm, xm);
        Mat c = H(t0, x0);
        Mat p = H(tp, xp), m = H(tm, xm);
        Mat r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r[i][j] = (p[i][j] - 2.0 * c[i][j] + m[i][j]) / (kFdStep * kFdStep);
        return r;
    }
    double tpp = t, tpm = t, tmp = t, tmm = t;
    Vec xpp = x, xpm = x, xmp = x, xmm = x;
    shift(a, kFdStep, tpp, xpp);
    shift(b, kFdStep, tpp, xpp);
    shift(a, kFdStep, tpm, xpm);
    shift(b, -kFdStep, tpm, xpm);
    shift(a, -kFdStep, tmp, xmp);
    shift(b, kFdStep, tmp, xmp);
    shift(a, -kFdStep, tmm, xmm);
    shift(b, -kFdStep, tmm, xmm);
    Mat pp = H(tpp, xpp), pm = H(tpm, xpm), mp = H(tmp, xmp), mm = H(tmm, xmm);
    Mat r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r[i][j] = (pp[i][j] - pm[i][j] - mp[i][j] + mm[i][j]) /
                      (4.0 * kFdStep * kFdStep);
    return r;
}

double PhaseSpec::phi(double t, const Vec& x, const Vec& xi) const {
    double lin = x[0] * xi[0] + x[1] * xi[1];
    return lin + 0.5 * quad_form(H(t, x), xi);
}

Vec PhaseSpec::grad_xi(double t, const Vec& x, const Vec& xi) const {
    return vadd(x, matvec(H(t, x), xi));
}

Vec PhaseSpec::grad_x(double t, const Vec& x, const Vec& xi) const {
    Vec g = xi;
    for (int l = 0; l < d_; ++l) g[l] += 0.5 * quad_form(Hx(l, t, x), xi);
    return g;
}

double PhaseSpec::dphi_dt(double t, const Vec& x, const Vec& xi) const {
    return 0.5 * quad_form(Ht(t, x), xi);
}

double PhaseSpec::a1(double t, const Vec& x) const {
    double r = std::sqrt(t * t + x[0] * x[0] + x[1] * x[1]);
    return ramp_bump(r, -1.0, -a1_flat_, a1_flat_, a1_supp_);
}

double PhaseSpec::a2(const Vec& xi) const {
    double r = vnorm(xi);
    return ramp_bump(r, -1.0, -a2_flat_, a2_flat_, a2_supp_);
}

double PhaseSpec::beta(double t, const Vec& xi) const {
    // lambda phi(z/lambda; xi) = <x, eta> + beta with, for the built-ins,
    // beta(t, xi) = t <I^k xi, xi>/2 (the perturbation sits in eta).
    double q;
    if (kind_ == Kind::hyperbolic)
        q = xi[0] * xi[0] - xi[1] * xi[1];
    else
        q = xi[0] * xi[0] + xi[1] * xi[1];
    return 0.5 * t * q;
}

double PhaseSpec::eta_of_xi(double t, double xi, double lambda) const {
    if (kind_ == Kind::perturbed) {
        double c = eps_ * t * t / (lambda * lambda);
        return xi + c * xi * xi;
    }
    return xi;
}

double PhaseSpec::xi_of_eta(double t, double eta, double lambda) const {
    if (kind_ == Kind::perturbed) {
        double c = eps_ * t * t / (lambda * lambda);
        if (c == 0.0) return eta;
        // root of xi + c xi^2 = eta continuous in c at 0
        return 2.0 * eta / (1.0 + std::sqrt(1.0 + 4.0 * c * eta));
    }
    return eta;
}

double PhaseSpec::deta_dxi(double t, double xi, double lambda) const {
    if (kind_ == Kind::perturbed) {
        double c = eps_ * t * t / (lambda * lambda);
        return 1.0 + 2.0 * c * xi;
    }
    return 1.0;
}

Vec PhaseSpec::solve_position(double t, const Vec& y, const Vec& xi0) const {
    // Residual r(X) = X + H(t,X) xi0 - y; start at the quadratic-phase
    // closed form X = y - t I^k xi0.
    Mat ik = mat_identity(d_, k_);
    Vec x = vsub(y, matvec(mat_scale(ik, t), xi0));
    auto residual = [&](const Vec& p) {
        return vsub(vadd(p, matvec(H(t, p), xi0)), y);
    };
    Vec r = residual(x);
    for (int it = 0; it < 50; ++it) {
        if (vnorm(r) < 1e-12) return x;
        // finite-difference Jacobian (d x d)
        Mat jac = mat_identity(2);
        for (int l = 0; l < d_; ++l) {
            Vec xp = x, xm = x;
            xp[l] += kFdStep;
            xm[l] -= kFdStep;
            Vec rp = residual(xp), rm = residual(xm);
            for (int i = 0; i < d_; ++i)
                jac[i][l] = (rp[i] - rm[i]) / (2.0 * kFdStep);
        }
        // solve jac * dx = r
        Vec dx{0.0, 0.0};
        if (d_ == 1) {
            dx[0] = r[0] / jac[0][0];
        } else {
            double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            dx[0] = (r[0] * jac[1][1] - r[1] * jac[0][1]) / det;
            dx[1] = (jac[0][0] * r[1] - jac[1][0] * r[0]) / det;
        }
        double step = 1.0;
        Vec xn = vsub(x, dx);
        Vec rn = residual(xn);
        while (vnorm(rn) > vnorm(r) && step > 1e-8) {
            step *= 0.5;
            xn = vsub(x, {step * dx[0], step * dx[1]});
            rn = residual(xn);
        }
        x = xn;
        r = rn;
    }
    if (vnorm(r) > 1e-9)
        throw std::runtime_error("solve_position: Newton failed, residual " +
                                 std::to_string(vnorm(r)));
    return x;
}

Vec PhaseSpec::solve_frequency(double t, const Vec& x, const Vec& target) const {
    Vec xi = target;  // exact for the parabolic/hyperbolic phases
    auto residual = [&](const Vec& p) { return vsub(grad_x(t, x, p), target); };
    Vec r = residual(xi);
    for (int it = 0; it < 50; ++it) {
        if (vnorm(r) < 1e-12) return xi;
        Mat jac = mat_identity(2);
        for (int l = 0; l < d_; ++l) {
            Vec xp = xi, xm = xi;
            xp[l] += kFdStep;
            xm[l] -= kFdStep;
            Vec rp = residual(xp), rm = residual(xm);
            for (int i = 0; i < d_; ++i)
                jac[i][l] = (rp[i] - rm[i]) / (2.0 * kFdStep);
        }
        Vec dxi{0.0, 0.0};
        if (d_ == 1) {
            dxi[0] = r[0] / jac[0][0];
        } else {
            double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
            dxi[0] = (r[0] * jac[1][1] - r[1] * jac[0][1]) / det;
            dxi[1] = (jac[0][0] * r[1] - jac[1][0] * r[0]) / det;
        }
        double step = 1.0;
        Vec xn = vsub(xi, dxi);
        Vec rn = residual(xn);
        while (vnorm(rn) > vnorm(r) && step > 1e-8) {
            step *= 0.5;
            xn = vsub(xi, {step * dxi[0], step * dxi[1]});
            rn = residual(xn);
        }
        xi = xn;
        r = rn;
    }
    if (vnorm(r) > 1e-9)
        throw std::runtime_error("solve_frequency: Newton failed, residual " +
                                 std::to_string(vnorm(r)));
    return xi;
}

}  // namespace displab
