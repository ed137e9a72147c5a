#include "nodal/params.hpp"

#include <cmath>
#include <cstdio>

#include "nodal/errors.hpp"

namespace nodal {

namespace {
std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}
}  // namespace

std::string describe(const Params& params) {
    return "p=" + num(params.p) + " q=" + num(params.q) + " alpha=" + num(params.alpha) + " beta=" + num(params.beta);
}

void check_hypothesis(const Params& params, int dimension) {
    const double p = params.p, q = params.q;
    if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q))
        throw ConfigError("exponents must satisfy p > 0 and q > 0 (got " + describe(params) + ")");
    if (!(params.alpha >= 0.0) || !(params.beta >= 0.0))
        throw ConfigError("weight exponents must satisfy alpha >= 0 and beta >= 0 (got " + describe(params) + ")");
    if (!(p * q > 1.0))
        throw ConfigError("superlinearity pq > 1 fails: pq = " + num(p * q) + " (" + describe(params) + ")");
    const double lhs = 1.0 / (p + 1.0) + 1.0 / (q + 1.0);
    const double rhs = (dimension - 2.0) / dimension;
    if (!(lhs > rhs))
        throw ConfigError("subcriticality 1/(p+1) + 1/(q+1) > (N-2)/N fails: " + num(lhs) + " <= " + num(rhs) +
                          " for N=" + std::to_string(dimension) + " (" + describe(params) + ")");
}

Exponents exponents(const Params& params, int dimension) {
    check_hypothesis(params, dimension);
    const double p = params.p, q = params.q;
    const double d = p + q + 2.0 * p * q;
    Exponents e;
    e.lambda = 2.0 * p * (q + 1.0) / d;
    e.mu = 2.0 * q * (p + 1.0) / d;
    e.gamma = 2.0 * (p + 1.0) * (q + 1.0) / d;
    return e;
}

}  // namespace nodal
