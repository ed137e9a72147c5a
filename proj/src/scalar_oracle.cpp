#include "nodal/scalar_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "nodal/errors.hpp"

namespace nodal {

namespace {

struct Problem {
    const GreenSolver& green;
    double p;
    ScalarField weight;

    double power(const ScalarField& u) const {
        const auto w = u.grid().weights();
        double s = 0.0;
        for (std::size_t n = 0; n < u.size(); ++n) s += w[n] * weight[n] * std::pow(std::abs(u[n]), p + 1.0);
        return s;
    }
    double level(const ScalarField& u, const ScalarField& Au) const { return 0.5 * inner(u, Au) - power(u) / (p + 1.0); }
    ScalarField nonlinearity(const ScalarField& u) const {
        ScalarField f(u.grid_ptr());
        for (std::size_t n = 0; n < u.size(); ++n) f[n] = weight[n] * std::pow(std::abs(u[n]), p - 1.0) * u[n];
        return f;
    }
};

struct Point {
    ScalarField u;
    ScalarField grad;  // H^1_0 gradient u - K f(u)
    double level = 0.0;
    double gnorm = 0.0;
};

Point finish(const Problem& pr, ScalarField u) {
    Point pt;
    const auto Au = pr.green.apply_laplacian(u);
    pt.level = pr.level(u, Au);
    pt.grad = u - pr.green.apply_K(pr.nonlinearity(u));
    const double s = u.max_abs();
    pt.gnorm = pt.grad.max_abs() / (s > 0.0 ? s : 1.0);
    pt.u = std::move(u);
    return pt;
}

// Solves a+ t - m s = b+ t^p, a- s - m t = b- s^p for t, s > 0 by damped Newton.
std::optional<std::pair<double, double>> nodal_scaling(double ap, double am, double m, double bp, double bm, double p) {
    double t = std::pow(ap / bp, 1.0 / (p - 1.0)), s = std::pow(am / bm, 1.0 / (p - 1.0));
    auto residual = [&](double tt, double ss) {
        return std::array<double, 2>{ap * tt - m * ss - bp * std::pow(tt, p), am * ss - m * tt - bm * std::pow(ss, p)};
    };
    for (int it = 0; it < 100; ++it) {
        const auto F = residual(t, s);
        const double fn = std::hypot(F[0] / (ap * t), F[1] / (am * s));
        if (fn < 1e-15) return std::pair{t, s};
        const double j11 = ap - p * bp * std::pow(t, p - 1.0), j22 = am - p * bm * std::pow(s, p - 1.0), j12 = -m;
        const double det = j11 * j22 - j12 * j12;
        if (det == 0.0) return std::nullopt;
        const double dt = -(j22 * F[0] - j12 * F[1]) / det;
        const double ds = -(-j12 * F[0] + j11 * F[1]) / det;
        double a = 1.0;
        while (a > 1e-10) {
            const double nt = t + a * dt, ns = s + a * ds;
            if (nt > 0.0 && ns > 0.0) {
                const auto G = residual(nt, ns);
                if (std::hypot(G[0] / (ap * nt), G[1] / (am * ns)) < fn || std::max(std::abs(a * dt / t), std::abs(a * ds / s)) < 1e-15) {
                    t = nt;
                    s = ns;
                    break;
                }
            }
            a *= 0.5;
        }
        if (a <= 1e-10) return fn < 1e-12 ? std::optional{std::pair{t, s}} : std::nullopt;
    }
    return std::pair{t, s};
}

std::optional<Point> project_nodal(const Problem& pr, const ScalarField& u) {
    auto [up, um] = split_signs(u);
    const auto Aup = pr.green.apply_laplacian(up);
    const auto Aum = pr.green.apply_laplacian(um);
    const double ap = inner(up, Aup), am = inner(um, Aum), m = inner(up, Aum);
    const double bp = pr.power(up), bm = pr.power(um);
    if (!(bp > 0.0) || !(bm > 0.0)) return std::nullopt;
    const auto ts = nodal_scaling(ap, am, m, bp, bm, pr.p);
    if (!ts) return std::nullopt;
    return finish(pr, ts->first * up - ts->second * um);
}

std::optional<Point> project_ground(const Problem& pr, const ScalarField& u) {
    const double a = inner(u, pr.green.apply_laplacian(u)), b = pr.power(u);
    if (!(b > 0.0)) return std::nullopt;
    return finish(pr, std::pow(a / b, 1.0 / (pr.p - 1.0)) * u);
}

template <class Project>
ScalarOracleResult descend(const Problem& pr, const ScalarField& seed, const ScalarOracleOptions& o, Project project) {
    if (!(pr.p > 1.0)) throw ConfigError("the scalar oracle needs p > 1");
    auto start = project(seed);
    if (!start) throw ConvergenceError("scalar oracle seed has no admissible projection");
    Point cur = std::move(*start);
    double tau = o.step, cap = o.max_step;
    int it = 0;
    bool converged = false;
    for (; it < o.max_iterations; ++it) {
        if (cur.gnorm <= o.gradient_tolerance) {
            converged = true;
            break;
        }
        bool accepted = false;
        while (tau >= o.step_floor) {
            auto trial = project(cur.u - tau * cur.grad);
            if (trial) {
                const double noise = o.level_noise * std::abs(cur.level);
                if (trial->level < cur.level - noise) accepted = true;
                else if (trial->level <= cur.level + noise) {
                    if (trial->gnorm <= cur.gnorm) accepted = true;
                    else cap = 0.7 * tau;
                }
            }
            if (accepted) {
                cur = std::move(*trial);
                tau = std::min(1.25 * tau, cap);
                break;
            }
            tau *= 0.5;
        }
        if (!accepted) break;
    }
    std::size_t imax = 0;
    for (std::size_t n = 1; n < cur.u.size(); ++n)
        if (std::abs(cur.u[n]) > std::abs(cur.u[imax])) imax = n;
    if (cur.u[imax] < 0.0) cur.u *= -1.0;
    return {std::move(cur.u), cur.level, cur.gnorm, it, converged};
}

}  // namespace

ScalarOracleResult scalar_nodal_oracle(const GreenSolver& green, double p, double alpha, const ScalarField& seed,
                                       const ScalarOracleOptions& opts) {
    Problem pr{green, p, henon_weight(green.grid_ptr(), alpha)};
    return descend(pr, seed, opts, [&](const ScalarField& u) { return project_nodal(pr, u); });
}

ScalarOracleResult scalar_ground_oracle(const GreenSolver& green, double p, double alpha, const ScalarField& seed,
                                        const ScalarOracleOptions& opts) {
    Problem pr{green, p, henon_weight(green.grid_ptr(), alpha)};
    return descend(pr, seed, opts, [&](const ScalarField& u) { return project_ground(pr, u); });
}

ScalarField scalar_nodal_seed(const GreenSolver& green) {
    const Grid& g = green.grid();
    if (!g.is_polar()) return eigenpair(green, 2).function;
    const bool disk = g.domain().kind == DomainKind::disk;
    const double a = g.domain().inner_radius, R = g.domain().outer_radius;
    return ScalarField::from_function(green.grid_ptr(), [&](double r, double th) {
        const double rho = (r - a) / (R - a);
        return (disk ? rho * (1.0 - rho) : std::sin(std::numbers::pi * rho)) * std::cos(th);
    });
}

}  // namespace nodal
