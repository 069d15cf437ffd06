#include "fracmin/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fracmin/analytic_set.hpp"
#include "fracmin/quadrature.hpp"

namespace fracmin {

namespace {

struct Box {
    std::array<double, 3> lo{0, 0, 0};
    std::array<double, 3> hi{0, 0, 0};
};

// Reduced integrand of the cell-pair integral in h = 1 units: substituting
// z = y - x collapses the 2n-dimensional integral to
//   w(delta) = int_{delta + (-1,1)^n} |z|^(-(n+s)) prod_d (1 - |z_d - delta_d|)+ dz.
struct ReducedIntegrand {
    int dim;
    double s;
    std::array<double, 3> delta{0, 0, 0};

    double operator()(const std::array<double, 3>& z) const {
        double tri = 1.0;
        double r2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            double t = 1.0 - std::abs(z[d] - delta[d]);
            if (t <= 0.0) return 0.0;
            tri *= t;
            r2 += z[d] * z[d];
        }
        return tri * std::pow(r2, -0.5 * (dim + s));
    }
};

double tensor_gauss(const ReducedIntegrand& f, const Box& b, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const int n = f.dim;
    std::array<double, 3> mid{0, 0, 0}, half{0, 0, 0};
    double vol_factor = 1.0;
    for (int d = 0; d < n; ++d) {
        mid[d] = 0.5 * (b.lo[d] + b.hi[d]);
        half[d] = 0.5 * (b.hi[d] - b.lo[d]);
        vol_factor *= half[d];
    }
    const size_t m = rule.nodes.size();
    double acc = 0.0;
    std::array<double, 3> z{0, 0, 0};
    if (n == 1) {
        for (size_t i = 0; i < m; ++i) {
            z[0] = mid[0] + half[0] * rule.nodes[i];
            acc += rule.weights[i] * f(z);
        }
    } else if (n == 2) {
        for (size_t i = 0; i < m; ++i) {
            z[0] = mid[0] + half[0] * rule.nodes[i];
            double row = 0.0;
            for (size_t j = 0; j < m; ++j) {
                z[1] = mid[1] + half[1] * rule.nodes[j];
                row += rule.weights[j] * f(z);
            }
            acc += rule.weights[i] * row;
        }
    } else {
        for (size_t i = 0; i < m; ++i) {
            z[0] = mid[0] + half[0] * rule.nodes[i];
            double plane = 0.0;
            for (size_t j = 0; j < m; ++j) {
                z[1] = mid[1] + half[1] * rule.nodes[j];
                double row = 0.0;
                for (size_t k = 0; k < m; ++k) {
                    z[2] = mid[2] + half[2] * rule.nodes[k];
                    row += rule.weights[k] * f(z);
                }
                plane += rule.weights[j] * row;
            }
            acc += rule.weights[i] * plane;
        }
    }
    return acc * vol_factor;
}

bool touches_origin(const Box& b, int dim) {
    for (int d = 0; d < dim; ++d)
        if (b.lo[d] > 0.0 || b.hi[d] < 0.0) return false;
    return true;
}

// Number of axes along which the overlap weight vanishes at z = 0; the
// integrand near the origin is bounded by |z|^(m - n - s).
int vanishing_axes(const ReducedIntegrand& f) {
    int m = 0;
    for (int d = 0; d < f.dim; ++d)
        if (std::abs(f.delta[d]) >= 1.0 - 1e-12) ++m;
    return m;
}

// Upper bound on the integral of f over a box touching the origin.
double singular_box_bound(const ReducedIntegrand& f, const Box& b, int m) {
    double r2 = 0.0;
    for (int d = 0; d < f.dim; ++d) {
        double corner = std::max(std::abs(b.lo[d]), std::abs(b.hi[d]));
        r2 += corner * corner;
    }
    double R = std::sqrt(r2);
    if (R <= 0.0) return 0.0;
    double expo = m - f.s;
    return unit_sphere_area(f.dim) * std::pow(R, expo) / expo;
}

void split_box(const Box& b, int dim, std::vector<Box>& out) {
    out.clear();
    int parts = 1 << dim;
    for (int mask = 0; mask < parts; ++mask) {
        Box c = b;
        for (int d = 0; d < dim; ++d) {
            double mid = 0.5 * (b.lo[d] + b.hi[d]);
            if (mask & (1 << d))
                c.lo[d] = mid;
            else
                c.hi[d] = mid;
        }
        out.push_back(c);
    }
}

class AdaptiveCellPairIntegral {
public:
    AdaptiveCellPairIntegral(const ReducedIntegrand& f, double rel_tol)
        : f_(f), rel_tol_(rel_tol), m_(vanishing_axes(f)) {}

    double run() {
        Box domain;
        for (int d = 0; d < f_.dim; ++d) {
            domain.lo[d] = f_.delta[d] - 1.0;
            domain.hi[d] = f_.delta[d] + 1.0;
        }
        // First pass at coarse depth fixes the scale for the tolerances.
        scale_ = std::abs(smooth_or_descend(domain, 0, /*scale=*/1.0));
        if (scale_ == 0.0) return 0.0;
        return smooth_or_descend(domain, 0, scale_);
    }

private:
    double smooth_or_descend(const Box& b, int depth, double scale) {
        if (touches_origin(b, f_.dim)) return descend_singular(b, depth, scale);
        return integrate_smooth(b, depth, scale);
    }

    double integrate_smooth(const Box& b, int depth, double scale) {
        double coarse = tensor_gauss(f_, b, 6);
        double fine = tensor_gauss(f_, b, 10);
        double err = std::abs(fine - coarse);
        if (err <= 0.05 * rel_tol_ * scale + 1e-300) return fine;
        if (depth > 48) throw std::runtime_error("cell-pair quadrature did not converge");
        std::vector<Box> children;
        split_box(b, f_.dim, children);
        double acc = 0.0;
        for (const Box& c : children) acc += smooth_or_descend(c, depth + 1, scale);
        return acc;
    }

    // Dyadic grading into the origin: integrate the non-touching children,
    // recurse on the touching one until its analytic bound is negligible.
    double descend_singular(const Box& start, int depth, double scale) {
        Box b = start;
        double acc = 0.0;
        const int max_levels = 4000;
        for (int level = 0; level < max_levels; ++level) {
            double bound = singular_box_bound(f_, b, m_);
            if (bound <= 0.02 * rel_tol_ * scale) return acc;
            std::vector<Box> children;
            split_box(b, f_.dim, children);
            int keep = -1;
            for (size_t i = 0; i < children.size(); ++i) {
                if (touches_origin(children[i], f_.dim)) {
                    keep = static_cast<int>(i);
                    continue;
                }
                acc += integrate_smooth(children[i], depth + 1, scale);
            }
            if (keep < 0) return acc;
            b = children[static_cast<size_t>(keep)];
        }
        throw std::runtime_error("cell-pair quadrature: singular grading did not converge");
    }

    ReducedIntegrand f_;
    double rel_tol_;
    int m_;
    double scale_ = 0.0;
};

} // namespace

double pair_weight_quadrature(int dim, const Index3& delta, double s, double rel_tol) {
    bool zero = true;
    for (int d = 0; d < dim; ++d)
        if (delta[d] != 0) zero = false;
    if (zero) return 0.0;
    ReducedIntegrand f;
    f.dim = dim;
    f.s = s;
    for (int d = 0; d < dim; ++d) f.delta[d] = static_cast<double>(delta[d]);
    AdaptiveCellPairIntegral integral(f, rel_tol);
    return integral.run();
}

double pair_weight_midpoint(int dim, const Index3& delta, double s) {
    double r2 = 0.0;
    for (int d = 0; d < dim; ++d) r2 += double(delta[d]) * double(delta[d]);
    return std::pow(r2, -0.5 * (dim + s));
}

KernelTable build_table(const GridGeometry& g, const FractionalOrder& order) {
    KernelTable t;
    t.geom_ = g;
    t.order_ = order;
    t.near_field_radius_ = 4;
    t.tail_exponent_coeff_ = unit_sphere_area(g.dim) / order.s;
    size_t total = 1;
    for (int d = 0; d < 3; ++d) {
        t.half_[d] = (d < g.dim) ? g.extent[d] - 1 : 0;
        t.span_[d] = 2 * t.half_[d] + 1;
        total *= static_cast<size_t>(t.span_[d]);
    }
    t.w_.assign(total, 0.0);

    const double scale = std::pow(g.h, g.dim - order.s);
    const int nf = t.near_field_radius_;

    // Near field once per canonical offset (sorted absolute components).
    std::map<Index3, double> canonical;
    Index3 probe{0, 0, 0};
    std::array<int64_t, 3> cap{};
    for (int d = 0; d < 3; ++d) cap[d] = std::min<int64_t>(t.half_[d], nf);
    for (probe[2] = 0; probe[2] <= cap[2]; ++probe[2])
        for (probe[1] = 0; probe[1] <= cap[1]; ++probe[1])
            for (probe[0] = 0; probe[0] <= cap[0]; ++probe[0]) {
                Index3 key = probe;
                std::sort(key.begin(), key.end(), std::greater<int64_t>());
                canonical.emplace(key, 0.0);
            }
    std::vector<std::pair<Index3, double>> jobs(canonical.begin(), canonical.end());
#pragma omp parallel for schedule(dynamic)
    for (int64_t j = 0; j < static_cast<int64_t>(jobs.size()); ++j)
        jobs[static_cast<size_t>(j)].second =
            pair_weight_quadrature(g.dim, jobs[static_cast<size_t>(j)].first, order.s);
    for (auto& job : jobs) canonical[job.first] = job.second;

    const int64_t H0 = t.half_[0], H1 = t.half_[1], H2 = t.half_[2];
#pragma omp parallel for collapse(2) schedule(static)
    for (int64_t k = -H2; k <= H2; ++k)
        for (int64_t j = -H1; j <= H1; ++j)
            for (int64_t i = -H0; i <= H0; ++i) {
                Index3 delta{i, j, k};
                if (i == 0 && j == 0 && k == 0) continue;
                double w;
                if (std::abs(i) <= nf && std::abs(j) <= nf && std::abs(k) <= nf) {
                    Index3 key{std::abs(i), std::abs(j), std::abs(k)};
                    std::sort(key.begin(), key.end(), std::greater<int64_t>());
                    w = canonical.at(key);
                } else {
                    w = pair_weight_midpoint(g.dim, delta, order.s);
                }
                t.w_[t.offset_index(delta)] = w * scale;
            }
    return t;
}

// --- cache ---

namespace {

constexpr uint32_t kCacheVersion = 1;

struct CacheHeader {
    char magic[4] = {'F', 'R', 'K', 'T'};
    uint32_t version = kCacheVersion;
    uint32_t dim = 0;
    uint32_t near_radius = 0;
    int64_t extent[3] = {0, 0, 0};
    double origin[3] = {0, 0, 0};
    double h = 0.0;
    double s = 0.0;
};

static_assert(sizeof(CacheHeader) == 80, "cache header must be packed");

CacheHeader make_header(const GridGeometry& g, const FractionalOrder& order, int near_radius) {
    CacheHeader h;
    h.dim = static_cast<uint32_t>(g.dim);
    h.near_radius = static_cast<uint32_t>(near_radius);
    for (int d = 0; d < 3; ++d) {
        h.extent[d] = g.extent[d];
        h.origin[d] = g.origin[d];
    }
    h.h = g.h;
    h.s = order.s;
    return h;
}

uint64_t fnv1a(const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    uint64_t hash = 1469598103934665603ull;
    for (size_t i = 0; i < len; ++i) {
        hash ^= p[i];
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string cache_path(const std::string& dir, const CacheHeader& h) {
    char name[64];
    std::snprintf(name, sizeof(name), "kernel-%016llx.bin",
                  static_cast<unsigned long long>(fnv1a(&h, sizeof(h))));
    return (std::filesystem::path(dir) / name).string();
}

} // namespace

std::string kernel_cache_save(const KernelTable& table, const std::string& dir) {
    std::filesystem::create_directories(dir);
    CacheHeader h = make_header(table.geometry(), table.order(), table.near_field_radius());
    std::string path = cache_path(dir, h);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write kernel cache: " + path);
    f.write(reinterpret_cast<const char*>(&h), sizeof(h));
    uint64_t count = table.raw().size();
    f.write(reinterpret_cast<const char*>(&count), sizeof(count));
    f.write(reinterpret_cast<const char*>(table.raw().data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!f) throw std::runtime_error("failed writing kernel cache: " + path);
    return path;
}

std::optional<KernelTable> kernel_cache_try_load(const GridGeometry& g,
                                                 const FractionalOrder& order,
                                                 const std::string& dir) {
    CacheHeader want = make_header(g, order, 4);
    std::string path = cache_path(dir, want);
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    CacheHeader have;
    f.read(reinterpret_cast<char*>(&have), sizeof(have));
    if (!f || std::memcmp(&have, &want, sizeof(want)) != 0) return std::nullopt;
    uint64_t count = 0;
    f.read(reinterpret_cast<char*>(&count), sizeof(count));
    KernelTable t;
    t.geom_ = g;
    t.order_ = order;
    t.near_field_radius_ = 4;
    t.tail_exponent_coeff_ = unit_sphere_area(g.dim) / order.s;
    size_t total = 1;
    for (int d = 0; d < 3; ++d) {
        t.half_[d] = (d < g.dim) ? g.extent[d] - 1 : 0;
        t.span_[d] = 2 * t.half_[d] + 1;
        total *= static_cast<size_t>(t.span_[d]);
    }
    if (count != total) return std::nullopt;
    t.w_.resize(total);
    f.read(reinterpret_cast<char*>(t.w_.data()), static_cast<std::streamsize>(total * sizeof(double)));
    if (!f) return std::nullopt;
    return t;
}

} // namespace fracmin
