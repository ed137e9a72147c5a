#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nodal {

enum class DomainKind { interval, disk, annulus };

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& name);

struct Domain {
    DomainKind kind = DomainKind::interval;
    double inner_radius = 0.0;
    double outer_radius = 1.0;

    int dimension() const { return kind == DomainKind::interval ? 1 : 2; }

    static Domain interval(double length = 1.0) { return {DomainKind::interval, 0.0, length}; }
    static Domain disk(double radius = 1.0) { return {DomainKind::disk, 0.0, radius}; }
    static Domain annulus(double inner, double outer) { return {DomainKind::annulus, inner, outer}; }
};

// Throws std::invalid_argument when the radii do not describe a valid domain.
void validate(const Domain& domain);

// Cell-centred tensor grid. For the interval the nodes are x_i = (i + 1/2) h and
// n_theta == 1. For the disk and annulus the nodes are (r_i, theta_j) with
// r_i = a + (i + 1/2) dr and theta_j = (j + 1/2) dtheta. A radial grid is a 2D
// domain discretised with a single angular cell, used for the radially reduced
// problem; its node values are the values of theta-independent functions.
class Grid {
public:
    const Domain& domain() const { return domain_; }
    int dimension() const { return domain_.dimension(); }
    int n_r() const { return n_r_; }
    int n_theta() const { return n_theta_; }
    std::size_t size() const { return weights_.size(); }
    bool is_radial() const { return radial_; }
    // True when the grid carries an angular variable (2D, not radially reduced).
    bool is_polar() const { return dimension() == 2 && !radial_; }

    double dr() const { return dr_; }
    double dtheta() const { return dtheta_; }

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_theta_ + j; }
    int radial_index(std::size_t node) const { return static_cast<int>(node / n_theta_); }
    int angular_index(std::size_t node) const { return static_cast<int>(node % n_theta_); }

    double r(int i) const { return radii_[i]; }
    double theta(int j) const { return (j + 0.5) * dtheta_; }
    // Distance |x| of a node from the origin (for the interval this is the coordinate x).
    double radius_at(std::size_t node) const { return radii_[radial_index(node)]; }

    std::span<const double> weights() const { return weights_; }
    std::span<const double> radii() const { return radii_; }
    // 1 for nodes whose cell touches the boundary of the domain, 0 otherwise.
    std::span<const unsigned char> boundary_mask() const { return boundary_; }

    double measure() const;

private:
    friend std::shared_ptr<const Grid> build_grid(const Domain&, int, int);
    friend std::shared_ptr<const Grid> build_radial_grid(const Domain&, int);
    Grid() = default;

    Domain domain_;
    int n_r_ = 0;
    int n_theta_ = 1;
    bool radial_ = false;
    double dr_ = 0.0;
    double dtheta_ = 0.0;
    std::vector<double> radii_;
    std::vector<double> weights_;
    std::vector<unsigned char> boundary_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(const Domain& domain, int n_r, int n_theta);
// Radially reduced grid: a single angular cell spanning the full circle.
GridPtr build_radial_grid(const Domain& domain, int n_r);

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridPtr grid, double fill = 0.0);
    ScalarField(GridPtr grid, std::vector<double> values);

    const GridPtr& grid_ptr() const { return grid_; }
    const Grid& grid() const { return *grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double scale);

    double max_abs() const;
    bool same_grid(const ScalarField& other) const { return grid_ == other.grid_; }

    template <class F>
    static ScalarField from_function(GridPtr grid, F&& f);

private:
    void require_same_grid(const ScalarField& other) const;

    GridPtr grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
ScalarField operator*(ScalarField a, double s);
// Nodewise product.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

double integrate(const ScalarField& f);
// Quadrature inner product sum_i f_i g_i w_i.
double inner(const ScalarField& f, const ScalarField& g);
ScalarField henon_weight(const GridPtr& grid, double exponent);
std::pair<ScalarField, ScalarField> split_signs(const ScalarField& f);

// f(r, theta) on a polar grid, f(x) on the interval (theta is passed as 0).
template <class F>
ScalarField ScalarField::from_function(GridPtr grid, F&& f) {
    ScalarField out(grid);
    const Grid& g = *grid;
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j)
            out[g.index(i, j)] = f(g.r(i), g.is_polar() ? g.theta(j) : 0.0);
    return out;
}

}  // namespace nodal
