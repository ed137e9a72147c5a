#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Sparse>

#include "nodal/grid.hpp"

namespace nodal {

// Finite-volume Dirichlet Laplacian. `stiffness` is the symmetric matrix S with
// -Delta_h = W^{-1} S, W the diagonal of quadrature weights, so -Delta_h is
// self-adjoint in the quadrature inner product.
struct LaplacianMatrix {
    GridPtr grid;
    Eigen::SparseMatrix<double> stiffness;

    // -Delta_h u
    ScalarField apply(const ScalarField& u) const;
};

LaplacianMatrix assemble_laplacian(const GridPtr& grid);

struct GreenOptions {
    // Above this many unknowns the solver switches from sparse Cholesky to
    // preconditioned conjugate gradients.
    std::size_t direct_limit = 100000;
    double cg_tolerance = 1e-12;
};

// K = (-Delta_h)^{-1} with zero Dirichlet data. Immutable after construction.
class GreenSolver {
public:
    explicit GreenSolver(GridPtr grid, GreenOptions options = {});
    ~GreenSolver();
    GreenSolver(const GreenSolver&) = delete;
    GreenSolver& operator=(const GreenSolver&) = delete;

    const GridPtr& grid_ptr() const { return laplacian_.grid; }
    const Grid& grid() const { return *laplacian_.grid; }
    const LaplacianMatrix& laplacian() const { return laplacian_; }
    bool uses_direct_solver() const { return direct_ != nullptr; }

    ScalarField apply_K(const ScalarField& f) const;
    // Raw form: out = K f for arrays of grid().size() values.
    void apply_K(const double* f, double* out) const;
    ScalarField apply_laplacian(const ScalarField& u) const { return laplacian_.apply(u); }
    // Solves S x = b with the stiffness matrix directly.
    Eigen::VectorXd solve_stiffness(const Eigen::VectorXd& b) const;

private:
    struct Direct;
    struct Iterative;
    LaplacianMatrix laplacian_;
    std::unique_ptr<Direct> direct_;
    std::unique_ptr<Iterative> iterative_;
    mutable std::mutex iterative_mutex_;
};

struct EigenPair {
    double value = 0.0;
    ScalarField function;  // normalised to integrate(phi^2) = 1, positive at its max-|phi| node
    double residual = 0.0;  // |-Delta_h phi - value phi| / (value |phi|) in the quadrature norm
    int iterations = 0;
};

// The first `count` Dirichlet eigenpairs of -Delta_h by block inverse iteration.
std::vector<EigenPair> eigenpairs(const GreenSolver& solver, int count, double tolerance = 1e-10);
// k-th eigenpair, k >= 1.
EigenPair eigenpair(const GreenSolver& solver, int k);

}  // namespace nodal
