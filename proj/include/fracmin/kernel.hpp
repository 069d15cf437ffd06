#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracmin/grid.hpp"

namespace fracmin {

struct FractionalOrder {
    double s;     // kernel exponent n + s, 0 < s < 1
    double sigma; // s / 2
    double a;     // 1 - s (extension weight exponent)

    explicit FractionalOrder(double s_) : s(s_), sigma(s_ / 2.0), a(1.0 - s_) {
        if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("fractional order s must lie in (0,1)");
    }
};

// Pairwise interaction weights w(delta) = integral over cell x cell of
// |x - y|^(-(n+s)), tabulated by lattice offset. Offsets with max-norm at
// most `near_field_radius` come from adaptive quadrature, the rest from the
// midpoint rule h^(2n) |delta h|^(-(n+s)). w(0) = 0 by convention.
class KernelTable {
public:
    KernelTable() = default;

    const GridGeometry& geometry() const { return geom_; }
    const FractionalOrder& order() const { return order_; }
    int near_field_radius() const { return near_field_radius_; }
    double tail_exponent_coeff() const { return tail_exponent_coeff_; }

    double weight(const Index3& delta) const {
        return w_[offset_index(delta)];
    }
    // Offset between two linear cell indices.
    double weight_between(int64_t cell_a, int64_t cell_b) const {
        Index3 ia = geom_.unravel(cell_a);
        Index3 ib = geom_.unravel(cell_b);
        return weight({ia[0] - ib[0], ia[1] - ib[1], ia[2] - ib[2]});
    }

    size_t offset_index(const Index3& delta) const {
        size_t idx = 0;
        for (int d = 2; d >= 0; --d) idx = idx * span_[d] + static_cast<size_t>(delta[d] + half_[d]);
        return idx;
    }

    int64_t half_range(int d) const { return half_[d]; }
    const std::vector<double>& raw() const { return w_; }

    friend KernelTable build_table(const GridGeometry& g, const FractionalOrder& order);
    friend std::optional<KernelTable> kernel_cache_try_load(const GridGeometry& g,
                                                            const FractionalOrder& order,
                                                            const std::string& dir);

private:
    GridGeometry geom_;
    FractionalOrder order_{0.5};
    int near_field_radius_ = 4;
    double tail_exponent_coeff_ = 0.0;
    Index3 half_{0, 0, 0};   // per-axis offset half range (extent-1)
    Index3 span_{1, 1, 1};   // 2*half+1
    std::vector<double> w_;
};

KernelTable build_table(const GridGeometry& g, const FractionalOrder& order);

// Cell-pair weight in h = 1 units by adaptive quadrature of the reduced
// n-dimensional integral (overlap-weighted kernel), converged to rel_tol.
// Physical weights scale as h^(n-s). Throws on non-convergence.
double pair_weight_quadrature(int dim, const Index3& delta, double s, double rel_tol = 1e-8);

// Midpoint-rule weight in h = 1 units: |delta|^(-(n+s)).
double pair_weight_midpoint(int dim, const Index3& delta, double s);

// Binary weight cache, keyed by a content hash of the header
// (dim, extents, h, s, version). Returns the cache file path written.
std::string kernel_cache_save(const KernelTable& table, const std::string& dir);
std::optional<KernelTable> kernel_cache_try_load(const GridGeometry& g,
                                                 const FractionalOrder& order,
                                                 const std::string& dir);

} // namespace fracmin
