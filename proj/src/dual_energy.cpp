#include "nodal/dual_energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

// sign(x)|x|^e
inline double signed_pow(double x, double e) {
    if (x == 0.0) return 0.0;
    return x > 0.0 ? std::pow(x, e) : -std::pow(-x, e);
}

inline double weight_pow(double radius, double exponent) {
    return exponent == 0.0 ? 1.0 : std::pow(radius, exponent);
}

ScalarField to_dual(const ScalarField& u, double p, double a) {
    ScalarField w(u.grid_ptr());
    const Grid& g = u.grid();
    for (std::size_t n = 0; n < u.size(); ++n) w[n] = weight_pow(g.radius_at(n), a) * signed_pow(u[n], p);
    return w;
}

ScalarField to_primal(const ScalarField& w, double p, double a) {
    ScalarField u(w.grid_ptr());
    const Grid& g = w.grid();
    for (std::size_t n = 0; n < w.size(); ++n) u[n] = weight_pow(g.radius_at(n), -a / p) * signed_pow(w[n], 1.0 / p);
    return u;
}

// Forward differences of f at every node; angular component is zero on
// non-polar grids.
struct GradientField {
    std::vector<double> dr, dt;
};

GradientField forward_differences(const ScalarField& f) {
    const Grid& g = f.grid();
    const int nr = g.n_r(), nt = g.n_theta();
    GradientField d{std::vector<double>(f.size(), 0.0), std::vector<double>(f.size(), 0.0)};
    const double h = g.dr();
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nt; ++j) {
            const std::size_t n = g.index(i, j);
            const double next = i + 1 < nr ? f[g.index(i + 1, j)] : 0.0;
            d.dr[n] = (next - f[n]) / h;
            if (g.is_polar()) d.dt[n] = (f[g.index(i, (j + 1) % nt)] - f[n]) / (g.r(i) * g.dtheta());
        }
    }
    return d;
}

// Euclidean derivative of sum_n w_n |D f|_n^r with respect to the node values of f.
std::vector<double> gradient_power_derivative_raw(const ScalarField& f, double r) {
    const Grid& g = f.grid();
    const int nr = g.n_r(), nt = g.n_theta();
    const auto d = forward_differences(f);
    const auto w = g.weights();
    std::vector<double> out(f.size(), 0.0);
    const double h = g.dr();
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nt; ++j) {
            const std::size_t n = g.index(i, j);
            const double mag = std::hypot(d.dr[n], d.dt[n]);
            if (mag == 0.0) continue;
            const double c = w[n] * r * std::pow(mag, r - 2.0);
            const double cr = c * d.dr[n] / h;
            out[n] -= cr;
            if (i + 1 < nr) out[g.index(i + 1, j)] += cr;
            if (g.is_polar()) {
                const double ct = c * d.dt[n] / (g.r(i) * g.dtheta());
                out[n] -= ct;
                out[g.index(i, (j + 1) % nt)] += ct;
            }
        }
    }
    return out;
}

}  // namespace

DualPair dual_from_primal(const PrimalPair& uv, const Params& params) {
    if (!uv.u.same_grid(uv.v)) throw std::invalid_argument("u and v live on different grids");
    return {to_dual(uv.u, params.p, params.alpha), to_dual(uv.v, params.q, params.beta)};
}

PrimalPair primal_from_dual(const DualPair& w, const Params& params) {
    if (!w.w1.same_grid(w.w2)) throw std::invalid_argument("w1 and w2 live on different grids");
    return {to_primal(w.w1, params.p, params.alpha), to_primal(w.w2, params.q, params.beta)};
}

double Coeffs::scale() const {
    return std::max({std::abs(A_plus), std::abs(A_minus), std::abs(B_plus), std::abs(B_minus), std::abs(C1),
                     std::abs(C2)});
}

double theta_value(const Coeffs& c, const Exponents& e, double t, double s) {
    return c.A_plus * std::pow(t, e.gamma) + c.A_minus * std::pow(s, e.gamma) - c.B_plus * t * t -
           c.B_minus * s * s + c.C1 * std::pow(t, e.lambda) * std::pow(s, e.mu) +
           c.C2 * std::pow(t, e.mu) * std::pow(s, e.lambda);
}

ThetaEval theta_eval(const Coeffs& c, const Exponents& e, double t, double s) {
    if (!(t > 0.0) || !(s > 0.0)) throw std::domain_error("theta derivatives need t > 0 and s > 0");
    const double g = e.gamma, l = e.lambda, m = e.mu;
    const double tg = std::pow(t, g), sg = std::pow(s, g);
    const double tl = std::pow(t, l), tm = std::pow(t, m), sl = std::pow(s, l), sm = std::pow(s, m);

    ThetaEval r;
    r.value = c.A_plus * tg + c.A_minus * sg - c.B_plus * t * t - c.B_minus * s * s + c.C1 * tl * sm + c.C2 * tm * sl;
    r.grad[0] = (g * c.A_plus * tg - 2.0 * c.B_plus * t * t + l * c.C1 * tl * sm + m * c.C2 * tm * sl) / t;
    r.grad[1] = (g * c.A_minus * sg - 2.0 * c.B_minus * s * s + m * c.C1 * tl * sm + l * c.C2 * tm * sl) / s;
    r.hess[0][0] = (g * (g - 1.0) * c.A_plus * tg - 2.0 * c.B_plus * t * t + l * (l - 1.0) * c.C1 * tl * sm +
                    m * (m - 1.0) * c.C2 * tm * sl) /
                   (t * t);
    r.hess[1][1] = (g * (g - 1.0) * c.A_minus * sg - 2.0 * c.B_minus * s * s + m * (m - 1.0) * c.C1 * tl * sm +
                    l * (l - 1.0) * c.C2 * tm * sl) /
                   (s * s);
    r.hess[0][1] = r.hess[1][0] = l * m * (c.C1 * tl * sm + c.C2 * tm * sl) / (t * s);
    return r;
}

N0Check in_N0(const Coeffs& c, const Exponents& e) {
    N0Check r;
    r.margin_plus = 2.0 * c.B_plus - (e.lambda * c.C1 + e.mu * c.C2);
    r.margin_minus = 2.0 * c.B_minus - (e.mu * c.C1 + e.lambda * c.C2);
    r.inside = r.margin_plus > 0.0 && r.margin_minus > 0.0;
    return r;
}

double gradient_power(const ScalarField& f, double r) {
    const auto d = forward_differences(f);
    const auto w = f.grid().weights();
    double sum = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) {
        const double mag = std::hypot(d.dr[n], d.dt[n]);
        if (mag > 0.0) sum += w[n] * std::pow(mag, r);
    }
    return sum;
}

ScalarField split_gradient_power_derivative(const ScalarField& f, double r) {
    auto [fp, fm] = split_signs(f);
    const auto dp = gradient_power_derivative_raw(fp, r);
    const auto dm = gradient_power_derivative_raw(fm, r);
    const auto w = f.grid().weights();
    ScalarField out(f.grid_ptr());
    for (std::size_t n = 0; n < f.size(); ++n) {
        // f+ moves with f where f > 0, f- moves against f where f < 0.
        double d = 0.0;
        if (f[n] > 0.0) d = dp[n];
        else if (f[n] < 0.0) d = -dm[n];
        out[n] = d / w[n];
    }
    return out;
}

DualSystem::DualSystem(std::shared_ptr<const GreenSolver> green, Params params)
    : green_(std::move(green)),
      params_(params),
      exps_(exponents(params, green_->grid().dimension())),
      weight_alpha_(henon_weight(green_->grid_ptr(), params.alpha)),
      weight_beta_(henon_weight(green_->grid_ptr(), params.beta)) {}

PrimalPair DualSystem::primal(const DualPair& w) const { return primal_from_dual(w, params_); }
DualPair DualSystem::dual(const PrimalPair& uv) const { return dual_from_primal(uv, params_); }

double DualSystem::power_integral_u(const ScalarField& u) const {
    const auto w = u.grid().weights();
    double sum = 0.0;
    for (std::size_t n = 0; n < u.size(); ++n) sum += w[n] * weight_alpha_[n] * std::pow(std::abs(u[n]), params_.p + 1.0);
    return sum;
}

double DualSystem::power_integral_v(const ScalarField& v) const {
    const auto w = v.grid().weights();
    double sum = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n) sum += w[n] * weight_beta_[n] * std::pow(std::abs(v[n]), params_.q + 1.0);
    return sum;
}

double DualSystem::energy_E(const PrimalPair& uv) const {
    const double p = params_.p, q = params_.q;
    return inner(uv.u, green_->apply_laplacian(uv.v)) - power_integral_u(uv.u) / (p + 1.0) -
           power_integral_v(uv.v) / (q + 1.0);
}

double DualSystem::energy_I(const DualPair& w) const {
    const double p = params_.p, q = params_.q;
    const auto uv = primal(w);
    const double t = inner(w.w1, green_->apply_K(w.w2)) + inner(w.w2, green_->apply_K(w.w1));
    return p / (p + 1.0) * power_integral_u(uv.u) + q / (q + 1.0) * power_integral_v(uv.v) - 0.5 * t;
}

DualPair DualSystem::grad_I(const DualPair& w) const {
    auto uv = primal(w);
    uv.u -= green_->apply_K(w.w2);
    uv.v -= green_->apply_K(w.w1);
    return {std::move(uv.u), std::move(uv.v)};
}

Coeffs DualSystem::coefficients(const DualPair& w) const {
    const double p = params_.p, q = params_.q;
    auto [w1p, w1m] = split_signs(w.w1);
    auto [w2p, w2m] = split_signs(w.w2);
    const auto Kw2p = green_->apply_K(w2p);
    const auto Kw2m = green_->apply_K(w2m);
    Coeffs c;
    c.A_plus = p / (p + 1.0) * power_integral_u(to_primal(w1p, p, params_.alpha)) +
               q / (q + 1.0) * power_integral_v(to_primal(w2p, q, params_.beta));
    c.A_minus = p / (p + 1.0) * power_integral_u(to_primal(w1m, p, params_.alpha)) +
                q / (q + 1.0) * power_integral_v(to_primal(w2m, q, params_.beta));
    c.B_plus = inner(w1p, Kw2p);
    c.B_minus = inner(w1m, Kw2m);
    c.C1 = inner(w1p, Kw2m);
    c.C2 = inner(w1m, Kw2p);
    return c;
}

N0Check DualSystem::in_N0(const DualPair& w) const { return nodal::in_N0(coefficients(w), exps_); }

std::pair<double, double> DualSystem::nehari_residuals(const DualPair& w) const {
    const auto g = grad_I(w);
    auto [w1p, w1m] = split_signs(w.w1);
    auto [w2p, w2m] = split_signs(w.w2);
    const double l = exps_.lambda, m = exps_.mu;
    return {l * inner(g.w1, w1p) + m * inner(g.w2, w2p), -(l * inner(g.w1, w1m) + m * inner(g.w2, w2m))};
}

double DualSystem::eps_term(const DualPair& w) const {
    const double p = params_.p, q = params_.q;
    const double r1 = (p + 1.0) / p, r2 = (q + 1.0) / q;
    auto [w1p, w1m] = split_signs(w.w1);
    auto [w2p, w2m] = split_signs(w.w2);
    return p / (p + 1.0) * (gradient_power(w1p, r1) + gradient_power(w1m, r1)) +
           q / (q + 1.0) * (gradient_power(w2p, r2) + gradient_power(w2m, r2));
}

double DualSystem::energy_I_eps(const DualPair& w, double eps) const {
    if (eps < 0.0) throw std::invalid_argument("eps must be >= 0");
    const double base = energy_I(w);
    return eps == 0.0 ? base : base + eps * eps_term(w);
}

DualPair DualSystem::grad_I_eps(const DualPair& w, double eps) const {
    auto g = grad_I(w);
    if (eps > 0.0) {
        const double p = params_.p, q = params_.q;
        g.w1 += (eps * p / (p + 1.0)) * split_gradient_power_derivative(w.w1, (p + 1.0) / p);
        g.w2 += (eps * q / (q + 1.0)) * split_gradient_power_derivative(w.w2, (q + 1.0) / q);
    }
    return g;
}

}  // namespace nodal
