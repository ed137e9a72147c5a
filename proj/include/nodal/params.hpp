#pragma once

#include <string>

namespace nodal {

struct Params {
    double p = 3.0;
    double q = 3.0;
    double alpha = 0.0;
    double beta = 0.0;
};

struct Exponents {
    double lambda = 1.0;
    double mu = 1.0;
    double gamma = 4.0 / 3.0;
};

// Throws ConfigError naming the failed inequality if (p, q) is not superlinear
// and subcritical in dimension N, or if a weight exponent is negative.
void check_hypothesis(const Params& params, int dimension);

// lambda = 2p(q+1)/(p+q+2pq), mu = 2q(p+1)/(p+q+2pq), gamma = lambda(p+1)/p.
Exponents exponents(const Params& params, int dimension = 2);

std::string describe(const Params& params);

}  // namespace nodal
