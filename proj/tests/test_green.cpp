#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "nodal/green.hpp"
#include "nodal/symmetry.hpp"

using namespace nodal;
using std::numbers::pi;

namespace {

// First zero of the Bessel function J0.
constexpr double j01 = 2.404825557695773;

ScalarField random_field(const GridPtr& g, std::mt19937_64& rng) {
    std::normal_distribution<double> N;
    ScalarField f(g);
    for (auto& v : f.values()) v = N(rng);
    return f;
}

}  // namespace

TEST_CASE("1D stiffness has the three point stencil in the interior") {
    const int n = 16;
    auto g = build_grid(Domain::interval(), n, 1);
    auto L = assemble_laplacian(g);
    const double h = 1.0 / n;
    for (int i = 1; i < n - 1; ++i) {
        CHECK(L.stiffness.coeff(i, i) / g->weights()[i] == doctest::Approx(2 / (h * h)));
        CHECK(L.stiffness.coeff(i, i - 1) / g->weights()[i] == doctest::Approx(-1 / (h * h)));
        CHECK(L.stiffness.coeff(i, i + 1) / g->weights()[i] == doctest::Approx(-1 / (h * h)));
    }
}

TEST_CASE("stiffness is symmetric with short rows") {
    auto g = build_grid(Domain::disk(), 12, 16);
    auto L = assemble_laplacian(g);
    Eigen::SparseMatrix<double> diff = L.stiffness - Eigen::SparseMatrix<double>(L.stiffness.transpose());
    CHECK(diff.norm() <= 1e-14 * L.stiffness.norm());
    for (int k = 0; k < L.stiffness.outerSize(); ++k) {
        int nnz = 0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(L.stiffness, k); it; ++it) nnz += it.value() != 0.0;
        CHECK(nnz <= 5);
    }
}

TEST_CASE("K solves -u'' = f") {
    // n odd puts a node at x = 1/2, where u = x(1-x)/2 equals 1/8.
    auto g = build_grid(Domain::interval(), 255, 1);
    GreenSolver K(g);
    auto u = K.apply_K(ScalarField(g, 1.0));
    CHECK(g->r(127) == doctest::Approx(0.5));
    CHECK(std::abs(u[127] - 0.125) < 1e-5);

    auto g2 = build_grid(Domain::interval(), 256, 1);
    GreenSolver K2(g2);
    auto s = ScalarField::from_function(g2, [](double x, double) { return std::sin(pi * x); });
    auto Ks = K2.apply_K(s);
    CHECK((Ks - (1 / (pi * pi)) * s).max_abs() < 1e-4);
}

TEST_CASE("K is positive, linear and self-adjoint") {
    std::mt19937_64 rng(3);
    for (auto g : {build_grid(Domain::interval(), 64, 1), build_grid(Domain::disk(), 16, 32),
                   build_grid(Domain::annulus(0.4, 1.0), 12, 24)}) {
        GreenSolver K(g);
        ScalarField f(g);
        for (auto& v : f.values()) v = std::uniform_real_distribution<double>(0, 1)(rng);
        f[0] = 0.0;
        auto Kf = K.apply_K(f);
        for (double v : Kf.values()) CHECK(v > 0.0);

        auto a = random_field(g, rng), b = random_field(g, rng);
        auto lin = K.apply_K(2.5 * a - 0.5 * b) - (2.5 * K.apply_K(a) - 0.5 * K.apply_K(b));
        CHECK(lin.max_abs() <= 1e-12 * K.apply_K(a).max_abs());
        const double ab = inner(a, K.apply_K(b)), ba = inner(b, K.apply_K(a));
        const double scale = std::sqrt(inner(a, K.apply_K(a)) * inner(b, K.apply_K(b)));
        CHECK(std::abs(ab - ba) <= 1e-12 * scale);

        auto back = K.apply_laplacian(K.apply_K(a)) - a;
        CHECK(back.max_abs() <= 1e-9 * a.max_abs());
    }
}

TEST_CASE("interval spectrum") {
    auto g = build_grid(Domain::interval(), 256, 1);
    GreenSolver K(g);
    auto pairs = eigenpairs(K, 2);
    CHECK(std::abs(pairs[0].value - pi * pi) / (pi * pi) < 1e-3);
    CHECK(std::abs(pairs[1].value - 4 * pi * pi) / (4 * pi * pi) < 1e-3);
    CHECK(pairs[1].residual < 1e-8);

    // phi_2 against sqrt(2) sin(2 pi x), up to the sign convention.
    auto exact = ScalarField::from_function(g, [](double x, double) { return std::sqrt(2.0) * std::sin(2 * pi * x); });
    const auto& phi = pairs[1].function;
    const double d = std::min((phi - exact).max_abs(), (phi + exact).max_abs());
    CHECK(d < 1e-3);
    CHECK(inner(phi, phi) == doctest::Approx(1.0).epsilon(1e-12));

    auto Kphi = K.apply_K(phi);
    CHECK((Kphi - (1 / pairs[1].value) * phi).max_abs() < 1e-8);
}

TEST_CASE("disk principal eigenpair") {
    auto g = build_grid(Domain::disk(), 64, 128);
    GreenSolver K(g);
    auto e = eigenpair(K, 1);
    CHECK(std::abs(e.value - j01 * j01) / (j01 * j01) < 1e-2);
    for (double v : e.function.values()) CHECK(v > 0.0);
    CHECK(radial_deviation(e.function) < 1e-8);
}

TEST_CASE("second order convergence of the first eigenvalue") {
    double err[2];
    int k = 0;
    for (int n : {32, 64}) {
        auto g = build_grid(Domain::interval(), n, 1);
        GreenSolver K(g);
        err[k++] = std::abs(eigenpair(K, 1).value - pi * pi);
    }
    const double ratio = err[0] / err[1];
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("iterative fallback agrees with the factorisation") {
    auto g = build_grid(Domain::disk(), 24, 48);
    GreenSolver direct(g);
    GreenSolver iterative(g, GreenOptions{0, 1e-12});
    CHECK(direct.uses_direct_solver());
    CHECK_FALSE(iterative.uses_direct_solver());
    std::mt19937_64 rng(5);
    auto f = random_field(g, rng);
    auto a = direct.apply_K(f), b = iterative.apply_K(f);
    CHECK((a - b).max_abs() <= 1e-9 * a.max_abs());
}

TEST_CASE("concurrent apply_K calls give the serial result") {
    auto g = build_grid(Domain::disk(), 24, 48);
    GreenSolver K(g);
    std::mt19937_64 rng(9);
    std::vector<ScalarField> in, serial, threaded(4);
    for (int k = 0; k < 4; ++k) {
        in.push_back(random_field(g, rng));
        serial.push_back(K.apply_K(in.back()));
    }
    std::vector<std::thread> pool;
    for (int k = 0; k < 4; ++k) pool.emplace_back([&, k] { threaded[k] = K.apply_K(in[k]); });
    for (auto& t : pool) t.join();
    for (int k = 0; k < 4; ++k) CHECK((serial[k] - threaded[k]).max_abs() == 0.0);
}
