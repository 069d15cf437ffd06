#pragma once

// Independent oracles for the test suites. These deliberately avoid the
// library's quadrature and summation paths.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "fracmin/grid.hpp"

namespace oracle {

// 1D cell-pair weight in h = 1 units from the closed-form double
// antiderivative of |y - x|^(-(1+s)): second difference of t^(1-s).
inline double pair_weight_1d(int64_t offset, double s) {
    double k = std::abs(double(offset));
    if (k == 0.0) return 0.0;
    auto G = [&](double t) { return std::pow(t, 1.0 - s); };
    return (2.0 * G(k) - G(k - 1.0) - G(k + 1.0)) / (s * (1.0 - s));
}

// 2D cell-pair weight by polar integration of the overlap-weighted reduced
// integrand with the radial singularity removed by substitution
// r = v^(1/(1-s)). Plain composite Simpson on a fine fixed grid.
inline double pair_weight_2d(std::array<int64_t, 2> delta, double s, int n_theta = 2048,
                             int n_rad = 600) {
    const double dx = double(delta[0]), dy = double(delta[1]);
    auto tri = [](double t) { return std::max(0.0, 1.0 - std::abs(t)); };
    auto integrand_polar = [&](double theta, double v) {
        // r = v^(1/(1-s)); dr = (1/(1-s)) v^(s/(1-s)) dv; integrand r^(-1-s) T r dtheta dr
        double r = std::pow(v, 1.0 / (1.0 - s));
        double zx = r * std::cos(theta), zy = r * std::sin(theta);
        double T = tri(zx - dx) * tri(zy - dy);
        if (T == 0.0) return 0.0;
        // r^(-s) T dr = T dv/(1-s)
        return T / (1.0 - s);
    };
    double rmax = std::sqrt((std::abs(dx) + 1.0) * (std::abs(dx) + 1.0) +
                            (std::abs(dy) + 1.0) * (std::abs(dy) + 1.0));
    double vmax = std::pow(rmax, 1.0 - s);
    double acc = 0.0;
    for (int it = 0; it < n_theta; ++it) {
        double theta = (it + 0.5) * 2.0 * M_PI / n_theta;
        // Simpson over v
        double row = 0.0;
        for (int iv = 0; iv < n_rad; ++iv) {
            double v0 = vmax * iv / n_rad, v1 = vmax * (iv + 1) / n_rad;
            double vm = 0.5 * (v0 + v1);
            row += (v1 - v0) / 6.0 *
                   (integrand_polar(theta, v0) + 4.0 * integrand_polar(theta, vm) +
                    integrand_polar(theta, v1));
        }
        acc += row * 2.0 * M_PI / n_theta;
    }
    return acc;
}

// Exhaustive minimum over all labelings of <= 20 free cells.
// energy(labels bitmask) -> value; returns (best mask, best value).
template <typename EnergyFn>
std::pair<uint64_t, double> enumerate_min(int n_free, const EnergyFn& energy) {
    uint64_t best_mask = 0;
    double best = energy(uint64_t(0));
    for (uint64_t mask = 1; mask < (uint64_t(1) << n_free); ++mask) {
        double e = energy(mask);
        if (e < best) {
            best = e;
            best_mask = mask;
        }
    }
    return {best_mask, best};
}

} // namespace oracle
