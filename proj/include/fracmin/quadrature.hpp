#pragma once

#include <vector>

namespace fracmin {

struct GaussRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights; // sum to 2
};

// Gauss-Legendre rule of the given order; cached per order, thread-safe.
const GaussRule& gauss_legendre(int order);

// Integrates f over [a, b] with a single rule application.
template <typename F>
double gauss_integrate(const F& f, double a, double b, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

} // namespace fracmin
