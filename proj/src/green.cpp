#include "nodal/green.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace nodal {

struct GreenSolver::Direct {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

struct GreenSolver::Iterative {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg;
};

ScalarField LaplacianMatrix::apply(const ScalarField& u) const {
    if (u.grid_ptr() != grid) throw std::invalid_argument("field lives on a different grid");
    ScalarField out(grid);
    Eigen::Map<const Eigen::VectorXd> x(u.data(), u.size());
    Eigen::Map<Eigen::VectorXd> y(out.data(), out.size());
    y = stiffness * x;
    const auto w = grid->weights();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= w[i];
    return out;
}

LaplacianMatrix assemble_laplacian(const GridPtr& grid) {
    const Grid& g = *grid;
    const int nr = g.n_r(), nt = g.n_theta();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(g.size() * 5);

    auto couple = [&](std::size_t a, std::size_t b, double c) {
        trip.emplace_back(a, a, c);
        trip.emplace_back(b, b, c);
        trip.emplace_back(a, b, -c);
        trip.emplace_back(b, a, -c);
    };

    if (g.dimension() == 1) {
        const double h = g.dr();
        for (int i = 0; i + 1 < nr; ++i) couple(i, i + 1, 1.0 / h);
        // Ghost value -u beyond each end: the half-cell distance doubles the face coefficient.
        trip.emplace_back(0, 0, 2.0 / h);
        trip.emplace_back(nr - 1, nr - 1, 2.0 / h);
    } else {
        const double dr = g.dr(), dth = g.dtheta();
        const double a = g.domain().inner_radius, R = g.domain().outer_radius;
        for (int i = 0; i < nr; ++i) {
            for (int j = 0; j < nt; ++j) {
                const std::size_t n = g.index(i, j);
                if (i + 1 < nr) couple(n, g.index(i + 1, j), (a + (i + 1) * dr) * dth / dr);
                if (g.is_polar()) couple(n, g.index(i, (j + 1) % nt), dr / (g.r(i) * dth));
            }
        }
        for (int j = 0; j < nt; ++j) {
            trip.emplace_back(g.index(nr - 1, j), g.index(nr - 1, j), 2.0 * R * dth / dr);
            // At the disk centre the innermost face has zero length, so no flux term.
            if (g.domain().kind == DomainKind::annulus)
                trip.emplace_back(g.index(0, j), g.index(0, j), 2.0 * a * dth / dr);
        }
    }

    LaplacianMatrix L{grid, Eigen::SparseMatrix<double>(g.size(), g.size())};
    L.stiffness.setFromTriplets(trip.begin(), trip.end());
    L.stiffness.makeCompressed();
    return L;
}

GreenSolver::GreenSolver(GridPtr grid, GreenOptions options) : laplacian_(assemble_laplacian(grid)) {
    if (grid->size() <= options.direct_limit) {
        direct_ = std::make_unique<Direct>();
        direct_->llt.compute(laplacian_.stiffness);
        if (direct_->llt.info() != Eigen::Success)
            throw std::runtime_error("Cholesky factorisation of the Laplacian failed");
    } else {
        iterative_ = std::make_unique<Iterative>();
        iterative_->cg.setTolerance(options.cg_tolerance);
        iterative_->cg.setMaxIterations(static_cast<Eigen::Index>(10 * grid->size()));
        iterative_->cg.compute(laplacian_.stiffness);
        if (iterative_->cg.info() != Eigen::Success)
            throw std::runtime_error("preconditioner setup for the Laplacian failed");
    }
}

GreenSolver::~GreenSolver() = default;

Eigen::VectorXd GreenSolver::solve_stiffness(const Eigen::VectorXd& b) const {
    if (direct_) return direct_->llt.solve(b);
    std::lock_guard lock(iterative_mutex_);
    Eigen::VectorXd x = iterative_->cg.solve(b);
    if (iterative_->cg.info() != Eigen::Success) {
        const double res = (laplacian_.stiffness * x - b).norm() / std::max(b.norm(), 1e-300);
        throw std::runtime_error("conjugate gradient breakdown, relative residual " + std::to_string(res));
    }
    return x;
}

void GreenSolver::apply_K(const double* f, double* out) const {
    const auto w = grid().weights();
    const auto n = static_cast<Eigen::Index>(w.size());
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) b[i] = w[i] * f[i];
    Eigen::Map<Eigen::VectorXd>(out, n) = solve_stiffness(b);
}

ScalarField GreenSolver::apply_K(const ScalarField& f) const {
    if (f.grid_ptr() != grid_ptr()) throw std::invalid_argument("field lives on a different grid");
    ScalarField out(grid_ptr());
    apply_K(f.data(), out.data());
    return out;
}

std::vector<EigenPair> eigenpairs(const GreenSolver& solver, int count, double tolerance) {
    if (count < 1) throw std::invalid_argument("eigenpair index must be >= 1");
    const Grid& g = solver.grid();
    const auto n = static_cast<Eigen::Index>(g.size());
    const int m = std::min<Eigen::Index>(count + 6, n);
    if (count > n) throw std::invalid_argument("eigenpair index exceeds the number of unknowns");

    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = g.weights()[i];
    const auto& S = solver.laplacian().stiffness;

    std::mt19937_64 rng(20240917);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::MatrixXd X(n, m);
    for (Eigen::Index c = 0; c < m; ++c)
        for (Eigen::Index i = 0; i < n; ++i) X(i, c) = uni(rng);

    Eigen::VectorXd values;
    Eigen::VectorXd residuals = Eigen::VectorXd::Constant(m, 1.0);
    int it = 0;
    const int max_iterations = 2000;
    for (; it < max_iterations; ++it) {
        Eigen::MatrixXd Y(n, m);
        for (Eigen::Index c = 0; c < m; ++c) Y.col(c) = solver.solve_stiffness(w.asDiagonal() * X.col(c));
        // Rayleigh-Ritz in the quadrature inner product.
        Eigen::MatrixXd G = Y.transpose() * w.asDiagonal() * Y;
        Eigen::MatrixXd H = Y.transpose() * (S * Y);
        G = 0.5 * (G + G.transpose());
        H = 0.5 * (H + H.transpose());
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(H, G);
        if (ritz.info() != Eigen::Success) throw std::runtime_error("Rayleigh-Ritz step failed");
        X = Y * ritz.eigenvectors();
        values = ritz.eigenvalues();

        bool done = true;
        for (int c = 0; c < count; ++c) {
            Eigen::VectorXd x = X.col(c);
            Eigen::VectorXd r = (S * x).cwiseQuotient(w) - values[c] * x;
            const double rn = std::sqrt(r.cwiseProduct(r).dot(w));
            const double xn = std::sqrt(x.cwiseProduct(x).dot(w));
            residuals[c] = rn / (values[c] * xn);
            if (residuals[c] > tolerance) done = false;
        }
        if (done) break;
    }
    if (it == max_iterations)
        throw std::runtime_error("eigenpair iteration did not converge, residual " + std::to_string(residuals.maxCoeff()));

    std::vector<EigenPair> out;
    for (int c = 0; c < count; ++c) {
        ScalarField phi(solver.grid_ptr());
        Eigen::Map<Eigen::VectorXd> pm(phi.data(), n);
        pm = X.col(c);
        pm /= std::sqrt(pm.cwiseProduct(pm).dot(w));
        Eigen::Index imax = 0;
        pm.cwiseAbs().maxCoeff(&imax);
        if (pm[imax] < 0) pm = -pm;
        out.push_back({values[c], std::move(phi), residuals[c], it + 1});
    }
    return out;
}

EigenPair eigenpair(const GreenSolver& solver, int k) {
    auto all = eigenpairs(solver, k);
    return std::move(all.back());
}

}  // namespace nodal
