#include "nodal/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "fiber.hpp"
#include "nodal/errors.hpp"

namespace nodal {

namespace {

// Size of the individual terms of theta at (t,s); the attainable accuracy of
// the gradient is a small multiple of machine epsilon times this.
double term_magnitude(const Coeffs& c, const Exponents& e, double t, double s) {
    return c.A_plus * std::pow(t, e.gamma) + c.A_minus * std::pow(s, e.gamma) + c.B_plus * t * t +
           c.B_minus * s * s + c.C1 * std::pow(t, e.lambda) * std::pow(s, e.mu) +
           c.C2 * std::pow(t, e.mu) * std::pow(s, e.lambda);
}

bool negdef(const ThetaEval& ev) {
    return ev.hess[0][0] < 0.0 && ev.hess[0][0] * ev.hess[1][1] - ev.hess[0][1] * ev.hess[1][0] > 0.0;
}

FiberMaximum newton(const Coeffs& c, const Exponents& e, double x, double y) {
    FiberMaximum out;
    const int max_iterations = 200;
    int it = 0;
    for (; it < max_iterations; ++it) {
        const double t = std::exp(x), s = std::exp(y);
        const auto ev = theta_eval(c, e, t, s);
        const double gx = t * ev.grad[0], gy = s * ev.grad[1];
        const double mag = term_magnitude(c, e, t, s);
        if (std::max(std::abs(gx), std::abs(gy)) <= 1e-14 * mag) break;

        const double hxx = t * t * ev.hess[0][0] + gx;
        const double hyy = s * s * ev.hess[1][1] + gy;
        const double hxy = t * s * ev.hess[0][1];
        const double det = hxx * hyy - hxy * hxy;
        double dx, dy;
        if (hxx < 0.0 && det > 0.0) {
            dx = -(hyy * gx - hxy * gy) / det;
            dy = -(-hxy * gx + hxx * gy) / det;
        } else {
            const double gn = std::hypot(gx, gy);
            dx = gx / gn;
            dy = gy / gn;
        }
        const double len = std::max(std::abs(dx), std::abs(dy));
        if (len > 2.0) {
            dx *= 2.0 / len;
            dy *= 2.0 / len;
        }

        double a = 1.0;
        bool accepted = false;
        for (; a > 1e-12; a *= 0.5) {
            const double trial = theta_value(c, e, std::exp(x + a * dx), std::exp(y + a * dy));
            if (trial >= ev.value - 1e-15 * mag) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        x += a * dx;
        y += a * dy;
        if (std::max(std::abs(a * dx), std::abs(a * dy)) < 1e-15) break;
    }
    out.t = std::exp(x);
    out.s = std::exp(y);
    const auto ev = theta_eval(c, e, out.t, out.s);
    out.value = ev.value;
    out.iterations = it;
    out.hessian_negdef = negdef(ev);
    out.grad_norm = std::max(std::abs(ev.grad[0]), std::abs(ev.grad[1]));
    return out;
}

bool acceptable(const FiberMaximum& m, const Coeffs& c) {
    return m.hessian_negdef && std::isfinite(m.value) && m.grad_norm <= 1e-10 * c.scale();
}

std::string theta_table(const Coeffs& c, const Exponents& e) {
    std::string out = "theta on (t,s) in {1e-2,1e-1,1,1e1,1e2}^2:";
    char buf[48];
    for (double t : {1e-2, 1e-1, 1.0, 1e1, 1e2}) {
        out += "\n ";
        for (double s : {1e-2, 1e-1, 1.0, 1e1, 1e2}) {
            std::snprintf(buf, sizeof buf, " %12.5g", theta_value(c, e, t, s));
            out += buf;
        }
    }
    return out;
}

bool has_positive(const ScalarField& f) {
    return std::any_of(f.values().begin(), f.values().end(), [](double x) { return x > 0.0; });
}

}  // namespace

FiberMaximum maximize_fiber(const Coeffs& c, const Exponents& e, double t_start, double s_start) {
    if (!(t_start > 0.0) || !(s_start > 0.0)) throw std::invalid_argument("fiber start must be positive");
    auto best = newton(c, e, std::log(t_start), std::log(s_start));
    if (acceptable(best, c)) return best;

    const int n = 121;
    const double lo = std::log(1e-3), hi = std::log(1e3);
    double bx = 0.0, by = 0.0, bv = -INFINITY;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = lo + (hi - lo) * i / (n - 1), y = lo + (hi - lo) * j / (n - 1);
            const double v = theta_value(c, e, std::exp(x), std::exp(y));
            if (v > bv) {
                bv = v;
                bx = x;
                by = y;
            }
        }
    }
    auto retry = newton(c, e, bx, by);
    retry.used_fallback = true;
    retry.iterations += best.iterations;
    if (acceptable(retry, c)) return retry;

    char head[160];
    std::snprintf(head, sizeof head,
                  "Nehari projection did not converge (last t=%.6g s=%.6g, gradient %.3g, Hessian %s)\n", retry.t,
                  retry.s, retry.grad_norm, retry.hessian_negdef ? "negative definite" : "indefinite");
    throw ConvergenceError(head + theta_table(c, e));
}

namespace detail {

ProjectedFiber project_fiber(const DualSystem& sys, const DualPair& w, double eps) {
    if (eps < 0.0) throw std::invalid_argument("eps must be >= 0");
    ProjectedFiber out{make_fiber(sys, w, eps), {}, {}, {}, {}};
    const Fiber& f = out.fiber;
    if (!has_positive(f.w1p) || !has_positive(f.w1m) || !has_positive(f.w2p) || !has_positive(f.w2m))
        throw PreconditionError("Nehari projection needs nontrivial positive and negative parts of w1 and w2");
    out.n0 = in_N0(f.coeffs, sys.exps());
    if (!out.n0.inside) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "pair is outside N0: margins %.6g (plus), %.6g (minus)", out.n0.margin_plus,
                      out.n0.margin_minus);
        throw PreconditionError(buf);
    }
    out.max = maximize_fiber(f.coeffs, sys.exps());
    out.projected = fiber_point(f, sys.exps(), out.max.t, out.max.s);
    out.K_projected = fiber_K(f, sys.exps(), out.max.t, out.max.s);
    return out;
}

}  // namespace detail

ProjectionResult project_nehari_eps(const DualSystem& sys, const DualPair& w, double eps) {
    auto pf = detail::project_fiber(sys, w, eps);
    ProjectionResult r;
    r.t0 = pf.max.t;
    r.s0 = pf.max.s;
    r.projected = std::move(pf.projected);
    r.theta_value = pf.max.value;
    r.newton_iterations = pf.max.iterations;
    r.hessian_negdef = pf.max.hessian_negdef;
    r.coeffs = pf.fiber.coeffs;
    r.n0 = pf.n0;
    return r;
}

ProjectionResult project_nehari(const DualSystem& sys, const DualPair& w) { return project_nehari_eps(sys, w, 0.0); }

double ground_scaling(double A, double B, const Exponents& e) {
    if (!(B > 0.0)) throw PreconditionError("ground projection needs integrate(w1 K w2) > 0");
    if (!(A > 0.0)) throw PreconditionError("ground projection needs a nontrivial pair");
    return std::pow(e.gamma * A / (2.0 * B), 1.0 / (2.0 - e.gamma));
}

GroundProjection project_ground(const DualSystem& sys, const DualPair& w) {
    const auto& prm = sys.params();
    const auto uv = sys.primal(w);
    const double A = prm.p / (prm.p + 1.0) * sys.power_integral_u(uv.u) +
                     prm.q / (prm.q + 1.0) * sys.power_integral_v(uv.v);
    const double B = inner(w.w1, sys.green().apply_K(w.w2));
    GroundProjection out;
    out.t_star = ground_scaling(A, B, sys.exps());
    const double t = out.t_star;
    out.projected = {std::pow(t, sys.exps().lambda) * w.w1, std::pow(t, sys.exps().mu) * w.w2};
    out.level = A * std::pow(t, sys.exps().gamma) - B * t * t;
    return out;
}

}  // namespace nodal
