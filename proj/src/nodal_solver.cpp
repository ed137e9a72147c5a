#include "nodal/nodal_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/SparseCholesky>

#include "fiber.hpp"
#include "nodal/errors.hpp"
#include "nodal/field_io.hpp"

namespace nodal {

std::string to_string(Termination t) {
    switch (t) {
    case Termination::gradient_tolerance: return "gradient_tolerance";
    case Termination::level_stationary: return "level_stationary";
    case Termination::max_iterations: return "max_iterations";
    case Termination::sign_collapse: return "sign_collapse";
    }
    return "unknown";
}

namespace {

enum class Mode { nodal, ground };

struct State {
    DualPair w;
    PrimalPair uv;
    DualPair grad;
    double level = 0.0;
    double gnorm = 0.0;
    double t = 1.0, s = 1.0;
};

double relative_gradient(const DualPair& g, const PrimalPair& uv) {
    const double scale = std::max(uv.u.max_abs(), uv.v.max_abs());
    return std::max(g.w1.max_abs(), g.w2.max_abs()) / (scale > 0.0 ? scale : 1.0);
}

State evaluate_nodal(const DualSystem& sys, const DualPair& w, double eps) {
    auto pf = detail::project_fiber(sys, w, eps);
    State st;
    st.uv = sys.primal(pf.projected);
    st.grad = {st.uv.u - pf.K_projected.w2, st.uv.v - pf.K_projected.w1};
    if (eps > 0.0) {
        const double p = sys.params().p, q = sys.params().q;
        st.grad.w1 += (eps * p / (p + 1.0)) * split_gradient_power_derivative(pf.projected.w1, (p + 1.0) / p);
        st.grad.w2 += (eps * q / (q + 1.0)) * split_gradient_power_derivative(pf.projected.w2, (q + 1.0) / q);
    }
    st.w = std::move(pf.projected);
    st.level = pf.max.value;
    st.t = pf.max.t;
    st.s = pf.max.s;
    st.gnorm = relative_gradient(st.grad, st.uv);
    return st;
}

State evaluate_ground(const DualSystem& sys, const DualPair& w) {
    const auto& prm = sys.params();
    const auto& e = sys.exps();
    const auto uv = sys.primal(w);
    const double A = prm.p / (prm.p + 1.0) * sys.power_integral_u(uv.u) +
                     prm.q / (prm.q + 1.0) * sys.power_integral_v(uv.v);
    const auto Kw1 = sys.green().apply_K(w.w1);
    const auto Kw2 = sys.green().apply_K(w.w2);
    const double B = inner(w.w1, Kw2);
    const double t = ground_scaling(A, B, e);
    const double tl = std::pow(t, e.lambda), tm = std::pow(t, e.mu);
    State st;
    st.w = {tl * w.w1, tm * w.w2};
    st.uv = sys.primal(st.w);
    st.grad = {st.uv.u - tm * Kw2, st.uv.v - tl * Kw1};
    st.level = A * std::pow(t, e.gamma) - B * t * t;
    st.t = st.s = t;
    st.gnorm = relative_gradient(st.grad, st.uv);
    return st;
}

std::array<double, 4> sign_shares(const DualSystem& sys, const PrimalPair& uv) {
    auto [up, um] = split_signs(uv.u);
    auto [vp, vm] = split_signs(uv.v);
    const double a = sys.power_integral_u(up), b = sys.power_integral_u(um);
    const double c = sys.power_integral_v(vp), d = sys.power_integral_v(vm);
    const double su = a + b > 0.0 ? a + b : 1.0, sv = c + d > 0.0 ? c + d : 1.0;
    return {a / su, b / su, c / sv, d / sv};
}

// Sparse forward-difference operators matching the discrete gradient used by
// the eps terms.
struct DifferenceOps {
    Eigen::SparseMatrix<double> dr, dt;
    bool polar = false;
};

DifferenceOps difference_ops(const Grid& g) {
    const int nr = g.n_r(), nt = g.n_theta();
    const auto n = static_cast<Eigen::Index>(g.size());
    std::vector<Eigen::Triplet<double>> tr, tt;
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nt; ++j) {
            const auto k = static_cast<Eigen::Index>(g.index(i, j));
            tr.emplace_back(k, k, -1.0 / g.dr());
            if (i + 1 < nr) tr.emplace_back(k, static_cast<Eigen::Index>(g.index(i + 1, j)), 1.0 / g.dr());
            if (g.is_polar()) {
                const double c = 1.0 / (g.r(i) * g.dtheta());
                tt.emplace_back(k, k, -c);
                tt.emplace_back(k, static_cast<Eigen::Index>(g.index(i, (j + 1) % nt)), c);
            }
        }
    }
    DifferenceOps ops;
    ops.dr.resize(n, n);
    ops.dr.setFromTriplets(tr.begin(), tr.end());
    ops.polar = g.is_polar();
    if (ops.polar) {
        ops.dt.resize(n, n);
        ops.dt.setFromTriplets(tt.begin(), tt.end());
    }
    return ops;
}

// Preconditioned direction for one component of the eps problem. The metric is
// the derivative of the dual map (primal step) plus a lagged-diffusivity model
// of the gradient term: (W P^{-1} + D^T C D) dw = -W g.
ScalarField eps_direction(const DifferenceOps& ops, const ScalarField& w, const ScalarField& u,
                          const ScalarField& weight, const ScalarField& g, double p, double coeff) {
    const Grid& grid = w.grid();
    const auto n = static_cast<Eigen::Index>(w.size());
    const auto om = grid.weights();
    const double r = (p + 1.0) / p;

    Eigen::Map<const Eigen::VectorXd> wv(w.data(), n);
    Eigen::VectorXd gr = ops.dr * wv;
    Eigen::VectorXd mag = gr.cwiseAbs();
    if (ops.polar) {
        Eigen::VectorXd gt = ops.dt * wv;
        mag = (gr.array().square() + gt.array().square()).sqrt().matrix();
    }
    const double floor_mag = std::max(1e-8 * mag.maxCoeff(), 1e-300);
    Eigen::VectorXd c(n);
    for (Eigen::Index i = 0; i < n; ++i) c[i] = coeff * r * std::pow(std::max(mag[i], floor_mag), r - 2.0) * om[i];

    const double umax = u.max_abs();
    Eigen::VectorXd sq(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = std::max(std::abs(u[i]), 1e-8 * umax);
        sq[i] = std::sqrt(p * weight[i] * std::pow(a, p - 1.0));
    }

    Eigen::SparseMatrix<double> L = Eigen::SparseMatrix<double>(ops.dr.transpose()) * c.asDiagonal() * ops.dr;
    if (ops.polar) L += Eigen::SparseMatrix<double>(ops.dt.transpose()) * c.asDiagonal() * ops.dt;
    Eigen::SparseMatrix<double> M = sq.asDiagonal() * L * sq.asDiagonal();
    for (Eigen::Index i = 0; i < n; ++i) M.coeffRef(i, i) += om[i];

    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) rhs[i] = sq[i] * om[i] * g[i];
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(M);
    if (solver.info() != Eigen::Success) throw ConvergenceError("eps preconditioner factorisation failed");
    Eigen::VectorXd y = solver.solve(rhs);

    ScalarField d(w.grid_ptr());
    for (Eigen::Index i = 0; i < n; ++i) d[i] = -sq[i] * y[i];
    return d;
}

void orient(NodalSolution& sol) {
    const auto& u = sol.primal.u;
    std::size_t imax = 0;
    for (std::size_t i = 1; i < u.size(); ++i)
        if (std::abs(u[i]) > std::abs(u[imax])) imax = i;
    if (u[imax] < 0.0) {
        sol.primal.u *= -1.0;
        sol.primal.v *= -1.0;
        sol.dual.w1 *= -1.0;
        sol.dual.w2 *= -1.0;
        std::swap(sol.t_last, sol.s_last);
        std::swap(sol.sign_shares[0], sol.sign_shares[1]);
        std::swap(sol.sign_shares[2], sol.sign_shares[3]);
        sol.nehari_residuals = {sol.nehari_residuals.second, sol.nehari_residuals.first};
    }
}

NodalSolution descend(const DualSystem& sys, const SolveOptions& o, Mode mode, double eps) {
    if (!(o.step > 0.0) || !(o.gradient_tolerance > 0.0) || !(o.step_floor > 0.0) || !(o.max_step >= o.step) ||
        o.max_iterations < 1 || o.sign_mass_floor < 0.0)
        throw ConfigError("invalid solver options: step, tolerances and iteration limit must be positive");
    if (sys.exps().gamma > 1.95)
        throw ConfigError("gamma = " + std::to_string(sys.exps().gamma) +
                          " exceeds 1.95: pq is too close to 1 for a stable projection (" +
                          describe(sys.params()) + ")");
    if (eps < 0.0) throw ConfigError("eps must be >= 0");

    auto eval = [&](const DualPair& w) { return mode == Mode::nodal ? evaluate_nodal(sys, w, eps) : evaluate_ground(sys, w); };

    NodalSolution sol;
    sol.params = sys.params();
    sol.exps = sys.exps();
    sol.eps = eps;

    std::optional<State> start;
    std::string last_error;
    const int attempts = o.seed.kind == SeedSpec::Kind::file ? 1 : 4;
    for (int a = 0; a < attempts && !start; ++a) {
        try {
            start = eval(make_seed(sys, mode == Mode::ground, o.seed, a));
            sol.reseeds = a;
        } catch (const PreconditionError& e) {
            last_error = e.what();
        }
    }
    if (!start) throw ConvergenceError("no admissible seed: " + last_error);
    State cur = std::move(*start);

    std::optional<DifferenceOps> ops;
    if (eps > 0.0) ops = difference_ops(sys.green().grid());

    // With eps > 0 the gradient tolerance is usually out of reach (the gradient
    // terms are not twice differentiable), so a level that stops moving over a
    // window of iterations ends the run.
    const int window = 50;
    std::vector<double> levels;

    double tau = o.step, cap = o.max_step;
    int it = 0;
    sol.termination = Termination::max_iterations;
    for (; it < o.max_iterations; ++it) {
        if (o.record_trace) sol.trace.push_back({it, cur.level, cur.gnorm, tau});
        if (cur.gnorm <= o.gradient_tolerance) {
            sol.termination = Termination::gradient_tolerance;
            break;
        }
        levels.push_back(cur.level);
        if (eps > 0.0 && it >= window &&
            levels[it - window] - cur.level <= 10.0 * o.level_noise * std::abs(cur.level)) {
            sol.termination = Termination::level_stationary;
            break;
        }
        if (mode == Mode::nodal) {
            const auto sh = sign_shares(sys, cur.uv);
            if (*std::min_element(sh.begin(), sh.end()) < o.sign_mass_floor) {
                sol.termination = Termination::sign_collapse;
                break;
            }
        }

        std::optional<DualPair> dir;
        if (eps > 0.0) {
            const double p = sys.params().p, q = sys.params().q;
            dir = DualPair{eps_direction(*ops, cur.w.w1, cur.uv.u, sys.weight_alpha(), cur.grad.w1, p, eps * p / (p + 1.0)),
                           eps_direction(*ops, cur.w.w2, cur.uv.v, sys.weight_beta(), cur.grad.w2, q, eps * q / (q + 1.0))};
        }

        bool accepted = false;
        while (tau >= o.step_floor) {
            DualPair trial_w;
            if (dir) {
                trial_w = {cur.w.w1 + tau * dir->w1, cur.w.w2 + tau * dir->w2};
            } else {
                trial_w = sys.dual({cur.uv.u - tau * cur.grad.w1, cur.uv.v - tau * cur.grad.w2});
            }
            std::optional<State> trial;
            try {
                trial = eval(trial_w);
            } catch (const PreconditionError&) {
            } catch (const ConvergenceError&) {
            }
            if (trial) {
                const double noise = o.level_noise * std::abs(cur.level);
                if (trial->level < cur.level - noise) {
                    accepted = true;
                } else if (trial->level <= cur.level + noise) {
                    // Inside rounding noise the level cannot rank the trial; the
                    // gradient can, and a growing gradient marks a step that is
                    // too long for the stiffest mode.
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
        if (!accepted) {
            sol.termination = Termination::level_stationary;
            break;
        }
    }

    sol.iterations = it;
    sol.level = cur.level;
    sol.gradient_norm = cur.gnorm;
    sol.t_last = cur.t;
    sol.s_last = cur.s;
    sol.primal = std::move(cur.uv);
    sol.dual = std::move(cur.w);
    sol.sign_shares = sign_shares(sys, sol.primal);
    {
        auto [w1p, w1m] = split_signs(sol.dual.w1);
        auto [w2p, w2m] = split_signs(sol.dual.w2);
        const double l = sys.exps().lambda, m = sys.exps().mu;
        sol.nehari_residuals = {l * inner(cur.grad.w1, w1p) + m * inner(cur.grad.w2, w2p),
                                -(l * inner(cur.grad.w1, w1m) + m * inner(cur.grad.w2, w2m))};
    }
    sol.pde_residual = pde_residual(sys, sol.primal);
    sol.converged = sol.termination == Termination::gradient_tolerance ||
                    (eps > 0.0 && sol.termination == Termination::level_stationary);
    orient(sol);
    return sol;
}

double normalised_radius(const Grid& g, int i) {
    const double a = g.domain().inner_radius, R = g.domain().outer_radius;
    return (g.r(i) - a) / (R - a);
}

}  // namespace

double pde_residual(const DualSystem& sys, const PrimalPair& uv) {
    const auto w = sys.dual(uv);
    auto ru = sys.green().apply_laplacian(uv.u) - w.w2;
    auto rv = sys.green().apply_laplacian(uv.v) - w.w1;
    const double su = w.w2.max_abs(), sv = w.w1.max_abs();
    return std::max(ru.max_abs() / (su > 0.0 ? su : 1.0), rv.max_abs() / (sv > 0.0 ? sv : 1.0));
}

DualPair make_seed(const DualSystem& sys, bool ground, const SeedSpec& seed, int attempt) {
    const auto& gp = sys.grid_ptr();
    const Grid& g = *gp;
    if (seed.kind == SeedSpec::Kind::file) {
        auto u = read_field(seed.u_path, gp).field;
        auto v = read_field(seed.v_path, gp).field;
        return sys.dual({std::move(u), std::move(v)});
    }

    // Polar nodal seeds are built in primal variables; eigenfunction seeds are
    // used directly as dual variables, where (phi, phi) lies in N0.
    ScalarField u(gp);
    const bool primal_seed = g.is_polar() && !ground;
    if (primal_seed) {
        const int m = seed.mode > 0 ? seed.mode : 1;
        const bool disk = g.domain().kind == DomainKind::disk;
        for (int i = 0; i < g.n_r(); ++i) {
            const double rho = normalised_radius(g, i);
            const double prof = disk ? rho * (1.0 - rho) : std::sin(std::numbers::pi * rho);
            for (int j = 0; j < g.n_theta(); ++j) {
                const double th = g.theta(j) - seed.rotation;
                u[g.index(i, j)] = prof * (std::cos(m * th) + 0.3 * attempt * std::cos((m + 1) * th));
            }
        }
    } else {
        const int k = seed.mode > 0 ? seed.mode : (ground ? 1 : 2);
        auto pairs = eigenpairs(sys.green(), k + (attempt > 0 ? 1 : 0));
        u = pairs[k - 1].function;
        if (attempt > 0) u += (0.3 * attempt) * pairs[k].function;
    }
    ScalarField v(gp);
    for (std::size_t n = 0; n < u.size(); ++n) {
        const double rho = normalised_radius(g, g.radial_index(n));
        v[n] = u[n] * (1.0 + seed.asymmetry * std::sin(std::numbers::pi * rho));
    }
    if (primal_seed) return sys.dual({std::move(u), std::move(v)});
    return {std::move(u), std::move(v)};
}

NodalSolution minimize_nodal(const DualSystem& sys, const SolveOptions& opts) {
    return descend(sys, opts, Mode::nodal, 0.0);
}

NodalSolution minimize_nodal_eps(const DualSystem& sys, double eps, const SolveOptions& opts) {
    return descend(sys, opts, Mode::nodal, eps);
}

NodalSolution minimize_nodal(const Params& params, const GridPtr& grid, const SolveOptions& opts) {
    DualSystem sys(std::make_shared<GreenSolver>(grid), params);
    return minimize_nodal(sys, opts);
}

NodalSolution minimize_ground(const DualSystem& sys, const SolveOptions& opts) {
    return descend(sys, opts, Mode::ground, 0.0);
}

NodalSolution minimize_ground(const Params& params, const GridPtr& grid, const SolveOptions& opts) {
    DualSystem sys(std::make_shared<GreenSolver>(grid), params);
    return minimize_ground(sys, opts);
}

NodalSolution minimize_nodal_radial(const Params& params, const GridPtr& grid, const SolveOptions& opts) {
    if (grid->is_polar())
        throw PreconditionError("radial solve needs a radial grid (build_radial_grid) or an interval");
    return minimize_nodal(params, grid, opts);
}

std::vector<EpsRow> eps_sweep(const Params& params, const GridPtr& grid, const std::vector<double>& eps_list,
                              const SolveOptions& opts) {
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0)) throw ConfigError("eps values must be positive");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw ConfigError("eps values must be strictly decreasing");
    }
    DualSystem sys(std::make_shared<GreenSolver>(grid), params);
    std::vector<EpsRow> rows;
    double reference = 0.0;
    std::vector<double> all{0.0};
    all.insert(all.end(), eps_list.begin(), eps_list.end());
    for (double eps : all) {
        EpsRow row;
        row.eps = eps;
        try {
            const auto sol = descend(sys, opts, Mode::nodal, eps);
            row.level = sol.level;
            row.iterations = sol.iterations;
            row.converged = sol.converged;
            row.termination = to_string(sol.termination);
        } catch (const std::exception& e) {
            row.error = e.what();
            row.level = std::nan("");
        }
        if (eps == 0.0) reference = row.level;
        row.gap = std::abs(row.level - reference);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace nodal
