#include "fracmin/analytic_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracmin/quadrature.hpp"

namespace fracmin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void push_span(std::vector<RaySpan>& out, double t0, double t1, double tmin, double tmax) {
    t0 = std::max(t0, tmin);
    t1 = std::min(t1, tmax);
    if (t1 > t0) out.push_back({t0, t1});
}

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a < 0.0) a += 2.0 * M_PI;
    return a;
}

class EmptySet final : public AnalyticSet {
public:
    bool contains(const Vec&) const override { return false; }
    void ray_spans(const Vec&, const Vec&, double, double, std::vector<RaySpan>&) const override {}
    std::string describe() const override { return "none"; }
};

class FullSet final : public AnalyticSet {
public:
    bool contains(const Vec&) const override { return true; }
    void ray_spans(const Vec&, const Vec&, double tmin, double tmax,
                   std::vector<RaySpan>& out) const override {
        push_span(out, tmin, tmax, tmin, tmax);
    }
    std::string describe() const override { return "all"; }
};

class HalfSpaceSet final : public AnalyticSet {
public:
    HalfSpaceSet(const Vec& normal, double offset) : n_(normal), c_(offset) {
        double len = norm(n_);
        if (!(len > 0.0)) throw std::invalid_argument("half-space normal must be nonzero");
        for (double& v : n_) v /= len;
        c_ /= len;
    }
    bool contains(const Vec& x) const override { return dot(x, n_) <= c_; }
    void ray_spans(const Vec& x, const Vec& dir, double tmin, double tmax,
                   std::vector<RaySpan>& out) const override {
        double dn = dot(dir, n_);
        double xn = dot(x, n_);
        if (std::abs(dn) < 1e-15) {
            if (xn <= c_) push_span(out, tmin, tmax, tmin, tmax);
            return;
        }
        double t = (c_ - xn) / dn;
        if (dn < 0.0)
            push_span(out, t, kInf, tmin, tmax);
        else
            push_span(out, -kInf, t, tmin, tmax);
    }
    void kink_angles(const Vec&, std::vector<double>& angles) const override {
        double a = std::atan2(n_[1], n_[0]);
        angles.push_back(a + M_PI / 2.0);
        angles.push_back(a - M_PI / 2.0);
    }
    std::string describe() const override { return "halfspace"; }

private:
    Vec n_;
    double c_;
};

class BallSet final : public AnalyticSet {
public:
    BallSet(const Vec& center, double radius, bool inside)
        : q_(center), r_(radius), inside_(inside) {
        if (!(r_ > 0.0)) throw std::invalid_argument("ball radius must be positive");
    }
    bool contains(const Vec& x) const override {
        Vec m{x[0] - q_[0], x[1] - q_[1], x[2] - q_[2]};
        return (dot(m, m) <= r_ * r_) == inside_;
    }
    void ray_spans(const Vec& x, const Vec& dir, double tmin, double tmax,
                   std::vector<RaySpan>& out) const override {
        Vec m{q_[0] - x[0], q_[1] - x[1], q_[2] - x[2]};
        double b = dot(m, dir);
        double disc = b * b - (dot(m, m) - r_ * r_);
        double lo = kInf, hi = -kInf;
        if (disc > 0.0) {
            double sq = std::sqrt(disc);
            lo = b - sq;
            hi = b + sq;
        }
        if (inside_) {
            if (hi > lo) push_span(out, lo, hi, tmin, tmax);
        } else {
            if (hi > lo) {
                push_span(out, -kInf, lo, tmin, tmax);
                push_span(out, hi, kInf, tmin, tmax);
            } else {
                push_span(out, -kInf, kInf, tmin, tmax);
            }
        }
    }
    void kink_angles(const Vec& x, std::vector<double>& angles) const override {
        Vec m{q_[0] - x[0], q_[1] - x[1], q_[2] - x[2]};
        double d = norm(m);
        if (d > r_) {
            double base = std::atan2(m[1], m[0]);
            double half = std::asin(std::min(1.0, r_ / d));
            angles.push_back(base + half);
            angles.push_back(base - half);
        }
    }
    std::string describe() const override { return inside_ ? "ball" : "ball-complement"; }

private:
    Vec q_;
    double r_;
    bool inside_;
};

// 1D set with sorted breakpoints and alternating membership.
class IntervalSet final : public AnalyticSet {
public:
    IntervalSet(std::vector<double> breaks, bool starts_inside)
        : breaks_(std::move(breaks)), starts_(starts_inside) {
        if (!std::is_sorted(breaks_.begin(), breaks_.end()))
            throw std::invalid_argument("interval breakpoints must be sorted");
    }
    bool member(double x) const {
        size_t k = static_cast<size_t>(
            std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin());
        return ((k % 2 == 0) == starts_);
    }
    bool contains(const Vec& x) const override { return member(x[0]); }
    void ray_spans(const Vec& x, const Vec& dir, double tmin, double tmax,
                   std::vector<RaySpan>& out) const override {
        double d0 = dir[0];
        if (std::abs(d0) < 1e-15) {
            if (member(x[0])) push_span(out, tmin, tmax, tmin, tmax);
            return;
        }
        // Map breakpoints to ray parameters, keep order along the ray.
        std::vector<double> ts;
        for (double b : breaks_) ts.push_back((b - x[0]) / d0);
        if (d0 < 0.0) std::reverse(ts.begin(), ts.end());
        double prev = tmin;
        // Membership immediately after tmin along the ray.
        bool in = member(x[0] + d0 * (tmin + 1e-12 * std::max(1.0, std::abs(tmin))));
        for (double t : ts) {
            if (t <= tmin) {
                continue;
            }
            if (t >= tmax) break;
            if (in) push_span(out, prev, t, tmin, tmax);
            in = !in;
            prev = t;
        }
        if (in) push_span(out, prev, tmax, tmin, tmax);
    }
    const std::vector<double>& breakpoints() const { return breaks_; }
    bool starts_inside() const { return starts_; }
    std::string describe() const override { return "intervals"; }

private:
    std::vector<double> breaks_;
    bool starts_;
};

// 2D union of sectors with apex at the origin.
class SectorUnionSet final : public AnalyticSet {
public:
    explicit SectorUnionSet(std::vector<std::pair<double, double>> arcs) : arcs_(std::move(arcs)) {
        for (auto& a : arcs_) {
            if (!(a.second > a.first)) throw std::invalid_argument("sector arc must have positive width");
            if (a.second - a.first > 2.0 * M_PI + 1e-12)
                throw std::invalid_argument("sector arc exceeds a full turn");
        }
    }
    bool contains(const Vec& x) const override {
        double ang = wrap_angle(std::atan2(x[1], x[0]));
        for (const auto& a : arcs_) {
            double lo = wrap_angle(a.first);
            double width = a.second - a.first;
            double rel = wrap_angle(ang - lo);
            if (rel < width) return true;
        }
        return false;
    }
    void ray_spans(const Vec& x, const Vec& dir, double tmin, double tmax,
                   std::vector<RaySpan>& out) const override {
        // Crossing parameters with each boundary ray {r e_a : r >= 0}.
        std::vector<double> ts;
        auto add_crossings = [&](double alpha) {
            Vec e{std::cos(alpha), std::sin(alpha), 0.0};
            double denom = e[0] * dir[1] - e[1] * dir[0];
            if (std::abs(denom) < 1e-15) return;
            double t = (e[1] * x[0] - e[0] * x[1]) / denom;
            if (t <= tmin || t >= tmax) return;
            Vec p{x[0] + t * dir[0], x[1] + t * dir[1], 0.0};
            if (p[0] * e[0] + p[1] * e[1] >= 0.0) ts.push_back(t);
        };
        for (const auto& a : arcs_) {
            add_crossings(a.first);
            add_crossings(a.second);
        }
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        double prev = tmin;
        auto at = [&](double t) {
            return Vec{x[0] + t * dir[0], x[1] + t * dir[1], 0.0};
        };
        for (double t : ts) {
            double mid = 0.5 * (prev + t);
            if (contains(at(mid))) push_span(out, prev, t, tmin, tmax);
            prev = t;
        }
        double probe = std::isfinite(tmax) ? 0.5 * (prev + tmax) : prev + std::max(1.0, 2.0 * std::abs(prev));
        if (contains(at(probe))) push_span(out, prev, tmax, tmin, tmax);
    }
    void kink_angles(const Vec& x, std::vector<double>& angles) const override {
        for (const auto& a : arcs_) {
            angles.push_back(a.first);
            angles.push_back(a.first + M_PI);
            angles.push_back(a.second);
            angles.push_back(a.second + M_PI);
        }
        angles.push_back(std::atan2(-x[1], -x[0])); // direction through the apex
    }
    std::string describe() const override { return "sectors"; }

private:
    std::vector<std::pair<double, double>> arcs_;
};

// 2D cylinder base x R over a 1D interval set along axis 0.
class CylinderSet final : public AnalyticSet {
public:
    CylinderSet(std::vector<double> breaks, bool starts_inside)
        : base_(std::move(breaks), starts_inside) {}
    bool contains(const Vec& x) const override { return base_.member(x[0]); }
    void ray_spans(const Vec& x, const Vec& dir, double tmin, double tmax,
                   std::vector<RaySpan>& out) const override {
        base_.ray_spans(x, dir, tmin, tmax, out);
    }
    void kink_angles(const Vec&, std::vector<double>& angles) const override {
        angles.push_back(M_PI / 2.0);
        angles.push_back(-M_PI / 2.0);
    }
    std::string describe() const override { return "cylinder"; }

private:
    IntervalSet base_;
};

class ComplementSet final : public AnalyticSet {
public:
    explicit ComplementSet(AnalyticSetPtr inner) : inner_(std::move(inner)) {}
    bool contains(const Vec& x) const override { return !inner_->contains(x); }
    void ray_spans(const Vec& x, const Vec& dir, double tmin, double tmax,
                   std::vector<RaySpan>& out) const override {
        std::vector<RaySpan> in;
        inner_->ray_spans(x, dir, tmin, tmax, in);
        double prev = tmin;
        for (const RaySpan& s : in) {
            if (s.t0 > prev) out.push_back({prev, s.t0});
            prev = s.t1;
        }
        if (prev < tmax) out.push_back({prev, tmax});
    }
    void kink_angles(const Vec& x, std::vector<double>& angles) const override {
        inner_->kink_angles(x, angles);
    }
    std::string describe() const override { return "complement(" + inner_->describe() + ")"; }

private:
    AnalyticSetPtr inner_;
};

} // namespace

AnalyticSetPtr make_empty_set() { return std::make_shared<EmptySet>(); }
AnalyticSetPtr make_full_set() { return std::make_shared<FullSet>(); }
AnalyticSetPtr make_half_space(const Vec& normal, double offset) {
    return std::make_shared<HalfSpaceSet>(normal, offset);
}
AnalyticSetPtr make_ball(const Vec& center, double radius, bool inside) {
    return std::make_shared<BallSet>(center, radius, inside);
}
AnalyticSetPtr make_interval_set(std::vector<double> breaks, bool starts_inside) {
    return std::make_shared<IntervalSet>(std::move(breaks), starts_inside);
}
AnalyticSetPtr make_sector_union(std::vector<std::pair<double, double>> arcs) {
    return std::make_shared<SectorUnionSet>(std::move(arcs));
}
AnalyticSetPtr make_cylinder(std::vector<double> breaks, bool starts_inside) {
    return std::make_shared<CylinderSet>(std::move(breaks), starts_inside);
}
AnalyticSetPtr complement_of(const AnalyticSetPtr& s) {
    return std::make_shared<ComplementSet>(s);
}

double unit_sphere_area(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * M_PI;
        case 3: return 4.0 * M_PI;
        default: throw std::invalid_argument("dimension must be 1, 2 or 3");
    }
}

double tail_integral(int dim, double s, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("tail radius must be positive");
    return unit_sphere_area(dim) * std::pow(R, -s) / s;
}

double PowerLawProfile::span_integral(double t0, double t1) const {
    double a = std::pow(t0, -s_);
    double b = std::isfinite(t1) ? std::pow(t1, -s_) : 0.0;
    return (a - b) / s_;
}

namespace {

// Integral of cos^(s-1)(phi) * extra(phi) over (phi0, phi1) with the
// integrable endpoint singularity at pi/2 removed by psi = xi^(1/s).
template <typename Extra>
double cospow_integral(double s, double phi0, double phi1, const Extra& extra) {
    auto f = [&](double phi) { return std::pow(std::cos(phi), s - 1.0) * extra(phi); };
    const double safe = M_PI / 2.0 - 0.2;
    double acc = 0.0;
    double lo = phi0, hi = std::min(phi1, safe);
    if (hi > lo) acc += gauss_integrate(f, lo, hi, 24);
    if (phi1 > safe) {
        // psi = pi/2 - phi in (pi/2 - phi1, pi/2 - max(phi0, safe)), psi = xi^(1/s)
        double pa = M_PI / 2.0 - phi1;
        double pb = M_PI / 2.0 - std::max(phi0, safe);
        auto g = [&](double xi) {
            double psi = std::pow(xi, 1.0 / s);
            double phi = M_PI / 2.0 - psi;
            return std::pow(std::cos(phi), s - 1.0) * extra(phi) * std::pow(xi, 1.0 / s - 1.0) / s;
        };
        acc += gauss_integrate(g, std::pow(pa, s), std::pow(pb, s), 24);
    }
    return acc;
}

} // namespace

double PoissonProfile::span_integral(double t0, double t1) const {
    if (dim_ == 2) {
        double a = std::pow(t0 * t0 + z_ * z_, -0.5 * s_);
        double b = std::isfinite(t1) ? std::pow(t1 * t1 + z_ * z_, -0.5 * s_) : 0.0;
        return std::pow(z_, s_) * (a - b) / s_;
    }
    double phi0 = std::atan(t0 / z_);
    double phi1 = std::isfinite(t1) ? std::atan(t1 / z_) : M_PI / 2.0;
    if (dim_ == 1) return cospow_integral(s_, phi0, phi1, [](double) { return 1.0; });
    if (dim_ == 3)
        return z_ * cospow_integral(s_, phi0, phi1, [](double phi) {
            double sn = std::sin(phi);
            return sn * sn;
        });
    throw std::invalid_argument("Poisson profile dimension must be 1, 2 or 3");
}

namespace {

// Exit parameter of the ray x + t*dir from the box (x inside the box).
double box_exit(const GridGeometry& g, const Vec& x, const Vec& dir) {
    Vec lo = g.box_lo(), hi = g.box_hi();
    double t = kInf;
    for (int d = 0; d < g.dim; ++d) {
        if (dir[d] > 1e-15)
            t = std::min(t, (hi[d] - x[d]) / dir[d]);
        else if (dir[d] < -1e-15)
            t = std::min(t, (lo[d] - x[d]) / dir[d]);
    }
    return std::max(t, 0.0);
}

} // namespace

void TailAccumulator::run(const std::vector<const AnalyticSet*>& sets,
                          const std::vector<const RadialProfile*>& profiles, double range_cap,
                          std::vector<double>& out) const {
    if (sets.size() != profiles.size())
        throw std::invalid_argument("tail accumulator needs one profile per set");
    const GridGeometry& g = *geom;
    out.assign(sets.size(), 0.0);
    std::vector<RaySpan> spans;

    auto accumulate_dir = [&](const Vec& dir, double solid_weight) {
        double tb = box_exit(g, x, dir);
        double cap = std::min(range_cap, kInf);
        if (!(cap > tb)) return;
        const AnalyticSet* prev_set = nullptr;
        for (size_t k = 0; k < sets.size(); ++k) {
            double contrib = 0.0;
            if (sets[k] == nullptr) {
                contrib = profiles[k]->span_integral(tb, cap);
            } else {
                if (sets[k] != prev_set) {
                    spans.clear();
                    sets[k]->ray_spans(x, dir, tb, cap, spans);
                    prev_set = sets[k];
                }
                for (const RaySpan& sp : spans) contrib += profiles[k]->span_integral(sp.t0, sp.t1);
            }
            out[k] += solid_weight * contrib;
        }
    };

    if (g.dim == 1) {
        accumulate_dir({1.0, 0.0, 0.0}, 1.0);
        accumulate_dir({-1.0, 0.0, 0.0}, 1.0);
        return;
    }

    if (g.dim == 2) {
        // Arc partition at box-corner directions and set kinks.
        std::vector<double> kinks;
        Vec lo = g.box_lo(), hi = g.box_hi();
        const double cx[4] = {lo[0], hi[0], hi[0], lo[0]};
        const double cy[4] = {lo[1], lo[1], hi[1], hi[1]};
        for (int c = 0; c < 4; ++c) kinks.push_back(std::atan2(cy[c] - x[1], cx[c] - x[0]));
        for (const AnalyticSet* s : sets)
            if (s) s->kink_angles(x, kinks);
        for (double& a : kinks) a = wrap_angle(a);
        std::sort(kinks.begin(), kinks.end());
        kinks.erase(std::unique(kinks.begin(), kinks.end(),
                                [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                    kinks.end());
        if (kinks.empty()) kinks.push_back(0.0);

        const GaussRule& rule = gauss_legendre(gauss_order);
        const double seg_target = 2.0 * M_PI / angular_segments;
        const size_t narcs = kinks.size();
        for (size_t a = 0; a < narcs; ++a) {
            double a0 = kinks[a];
            double a1 = (a + 1 < narcs) ? kinks[a + 1] : kinks[0] + 2.0 * M_PI;
            double len = a1 - a0;
            if (len < 1e-14) continue;
            int nseg = std::max(1, static_cast<int>(std::ceil(len / seg_target)));
            double seg = len / nseg;
            for (int j = 0; j < nseg; ++j) {
                double m = a0 + (j + 0.5) * seg;
                for (size_t q = 0; q < rule.nodes.size(); ++q) {
                    double th = m + 0.5 * seg * rule.nodes[q];
                    double w = 0.5 * seg * rule.weights[q];
                    accumulate_dir({std::cos(th), std::sin(th), 0.0}, w);
                }
            }
        }
        return;
    }

    // dim == 3: product rule, Gauss in cos(polar) x uniform azimuth. Good for
    // the smooth sets supported in 3D (half-space, ball, all, none).
    const GaussRule& polar = gauss_legendre(24);
    const int naz = 8 * angular_segments;
    const double daz = 2.0 * M_PI / naz;
    for (size_t p = 0; p < polar.nodes.size(); ++p) {
        double cu = polar.nodes[p];
        double su = std::sqrt(std::max(0.0, 1.0 - cu * cu));
        for (int j = 0; j < naz; ++j) {
            double th = (j + 0.5) * daz;
            Vec dir{su * std::cos(th), su * std::sin(th), cu};
            accumulate_dir(dir, polar.weights[p] * daz);
        }
    }
}

double exterior_tail(const GridGeometry& g, const Vec& x, const AnalyticSet* set,
                     const RadialProfile& profile, double range_cap) {
    TailAccumulator acc;
    acc.geom = &g;
    acc.x = x;
    std::vector<double> out;
    acc.run({set}, {&profile}, range_cap, out);
    return out[0];
}

} // namespace fracmin
