#include "nodal/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nodal {

std::string to_string(DomainKind kind) {
    switch (kind) {
    case DomainKind::interval: return "interval";
    case DomainKind::disk: return "disk";
    case DomainKind::annulus: return "annulus";
    }
    return "unknown";
}

DomainKind domain_kind_from_string(const std::string& name) {
    if (name == "interval") return DomainKind::interval;
    if (name == "disk") return DomainKind::disk;
    if (name == "annulus") return DomainKind::annulus;
    throw std::invalid_argument("unknown domain kind '" + name + "' (expected interval, disk or annulus)");
}

void validate(const Domain& domain) {
    if (!(domain.outer_radius > 0.0) || !std::isfinite(domain.outer_radius))
        throw std::invalid_argument("outer radius must be positive and finite");
    switch (domain.kind) {
    case DomainKind::interval:
    case DomainKind::disk:
        if (domain.inner_radius != 0.0)
            throw std::invalid_argument(to_string(domain.kind) + " requires inner radius 0");
        break;
    case DomainKind::annulus:
        if (!(domain.inner_radius > 0.0))
            throw std::invalid_argument("annulus requires a positive inner radius");
        if (domain.inner_radius >= domain.outer_radius)
            throw std::invalid_argument("annulus requires inner radius < outer radius");
        break;
    }
}

double Grid::measure() const {
    double sum = 0.0;
    for (double w : weights_) sum += w;
    return sum;
}

GridPtr build_grid(const Domain& domain, int n_r, int n_theta) {
    validate(domain);
    if (n_r < 4) throw std::invalid_argument("n_r must be at least 4, got " + std::to_string(n_r));
    const bool two_d = domain.dimension() == 2;
    if (two_d && n_theta < 8)
        throw std::invalid_argument("n_theta must be at least 8 for 2D domains, got " + std::to_string(n_theta));

    std::shared_ptr<Grid> g(new Grid());
    g->domain_ = domain;
    g->n_r_ = n_r;
    g->n_theta_ = two_d ? n_theta : 1;
    g->dr_ = (domain.outer_radius - domain.inner_radius) / n_r;
    g->dtheta_ = two_d ? 2.0 * std::numbers::pi / n_theta : 0.0;
    g->radii_.resize(n_r);
    for (int i = 0; i < n_r; ++i) g->radii_[i] = domain.inner_radius + (i + 0.5) * g->dr_;

    g->weights_.resize(static_cast<std::size_t>(n_r) * g->n_theta_);
    g->boundary_.assign(g->weights_.size(), 0);
    for (int i = 0; i < n_r; ++i) {
        const double w = two_d ? g->radii_[i] * g->dr_ * g->dtheta_ : g->dr_;
        const bool at_outer = i == n_r - 1;
        const bool at_inner = i == 0 && domain.kind != DomainKind::disk;
        for (int j = 0; j < g->n_theta_; ++j) {
            g->weights_[g->index(i, j)] = w;
            g->boundary_[g->index(i, j)] = (at_outer || at_inner) ? 1 : 0;
        }
    }
    return g;
}

GridPtr build_radial_grid(const Domain& domain, int n_r) {
    if (domain.dimension() != 2)
        throw std::invalid_argument("radial grids are defined for disk and annulus domains");
    validate(domain);
    if (n_r < 4) throw std::invalid_argument("n_r must be at least 4, got " + std::to_string(n_r));

    std::shared_ptr<Grid> g(new Grid());
    g->domain_ = domain;
    g->n_r_ = n_r;
    g->n_theta_ = 1;
    g->radial_ = true;
    g->dr_ = (domain.outer_radius - domain.inner_radius) / n_r;
    g->dtheta_ = 2.0 * std::numbers::pi;
    g->radii_.resize(n_r);
    g->weights_.resize(n_r);
    g->boundary_.assign(n_r, 0);
    for (int i = 0; i < n_r; ++i) {
        g->radii_[i] = domain.inner_radius + (i + 0.5) * g->dr_;
        g->weights_[i] = g->radii_[i] * g->dr_ * g->dtheta_;
    }
    g->boundary_[n_r - 1] = 1;
    if (domain.kind == DomainKind::annulus) g->boundary_[0] = 1;
    return g;
}

ScalarField::ScalarField(GridPtr grid, double fill) : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("ScalarField requires a grid");
    values_.assign(grid_->size(), fill);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("ScalarField requires a grid");
    if (values_.size() != grid_->size())
        throw std::invalid_argument("field length " + std::to_string(values_.size()) +
                                    " does not match grid size " + std::to_string(grid_->size()));
}

void ScalarField::require_same_grid(const ScalarField& other) const {
    if (grid_ != other.grid_) throw std::invalid_argument("fields live on different grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same_grid(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same_grid(other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double scale) {
    for (double& v : values_) v *= scale;
    return *this;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    if (!a.same_grid(b)) throw std::invalid_argument("fields live on different grids");
    ScalarField out(a.grid_ptr());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

double integrate(const ScalarField& f) {
    const auto w = f.grid().weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * w[i];
    return sum;
}

double inner(const ScalarField& f, const ScalarField& g) {
    if (!f.same_grid(g)) throw std::invalid_argument("fields live on different grids");
    const auto w = f.grid().weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * g[i] * w[i];
    return sum;
}

ScalarField henon_weight(const GridPtr& grid, double exponent) {
    ScalarField out(grid);
    for (std::size_t n = 0; n < grid->size(); ++n)
        out[n] = exponent == 0.0 ? 1.0 : std::pow(grid->radius_at(n), exponent);
    return out;
}

std::pair<ScalarField, ScalarField> split_signs(const ScalarField& f) {
    ScalarField plus(f.grid_ptr()), minus(f.grid_ptr());
    for (std::size_t i = 0; i < f.size(); ++i) {
        plus[i] = f[i] > 0.0 ? f[i] : 0.0;
        minus[i] = f[i] < 0.0 ? -f[i] : 0.0;
    }
    return {std::move(plus), std::move(minus)};
}

}  // namespace nodal
