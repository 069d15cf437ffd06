#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fracmin/grid.hpp"

namespace fracmin {

// Half-open parameter interval [t0, t1) along a ray.
struct RaySpan {
    double t0 = 0.0;
    double t1 = 0.0;
};

// Continuum set prescribed analytically, used for the part of E (or CE) that
// lives beyond the computational box. Tail integrals reduce to 1D radial
// integrals along rays, so the interface is contains() plus the list of
// in-set parameter spans of a ray restricted to [tmin, tmax).
class AnalyticSet {
public:
    virtual ~AnalyticSet() = default;

    virtual bool contains(const Vec& x) const = 0;

    // In-set spans of {x + t*dir : tmin <= t < tmax}, dir unit length.
    virtual void ray_spans(const Vec& x, const Vec& dir, double tmin, double tmax,
                           std::vector<RaySpan>& out) const = 0;

    // Directions (2D: angles) where the ray-span structure is non-smooth as a
    // function of the direction; used to split angular quadrature arcs.
    virtual void kink_angles(const Vec& x, std::vector<double>& angles) const {
        (void)x;
        (void)angles;
    }

    virtual std::string describe() const = 0;
};

using AnalyticSetPtr = std::shared_ptr<const AnalyticSet>;

AnalyticSetPtr make_empty_set();
AnalyticSetPtr make_full_set();
// { x : dot(x, normal) <= offset }, normal unit length.
AnalyticSetPtr make_half_space(const Vec& normal, double offset);
AnalyticSetPtr make_ball(const Vec& center, double radius, bool inside = true);
// 1D set given by sorted breakpoints; membership parity starts with
// `starts_inside` on (-inf, breaks[0]).
AnalyticSetPtr make_interval_set(std::vector<double> breaks, bool starts_inside);
// 2D union of angular sectors with apex at the origin, arcs in radians.
AnalyticSetPtr make_sector_union(std::vector<std::pair<double, double>> arcs);
// 2D cylinder base x ℝ over a 1D interval set in axis 0.
AnalyticSetPtr make_cylinder(std::vector<double> breaks, bool starts_inside);

AnalyticSetPtr complement_of(const AnalyticSetPtr& s);

// --- radial tail integrals ---

// Exact value of the all-space tail: integral over {|y - x| > R} of
// |y - x|^(-(n+s)), i.e. omega_{n-1} * R^(-s) / s.
double tail_integral(int dim, double s, double R);
double unit_sphere_area(int dim);

// Radial profile of the integrand: maps a span [t0, t1) at direction-distance
// t from the base point to the 1D radial integral of r^{n-1} * k(r).
class RadialProfile {
public:
    virtual ~RadialProfile() = default;
    virtual double span_integral(double t0, double t1) const = 0;
};

// k(r) = r^(-(n+s)); span integral (t0^-s - t1^-s)/s for every dim.
class PowerLawProfile final : public RadialProfile {
public:
    explicit PowerLawProfile(double s) : s_(s) {}
    double span_integral(double t0, double t1) const override;

private:
    double s_;
};

// k(r) = z^s (r^2 + z^2)^(-(n+s)/2) at fixed height z (extension kernel).
// Closed form for dim 2, adaptive quadrature for dim 1 and 3.
class PoissonProfile final : public RadialProfile {
public:
    PoissonProfile(int dim, double s, double z) : dim_(dim), s_(s), z_(z) {}
    double span_integral(double t0, double t1) const override;

private:
    int dim_;
    double s_;
    double z_;
};

// Integral over {y beyond the box, y in S, |y - x| <= range_cap} of the
// radial kernel described by `profile`, from base point x inside the box.
// range_cap = +inf integrates the whole exterior. The same angular nodes are
// used for every set, so contributions of S and its complement add exactly
// to the full-exterior value.
struct TailAccumulator {
    const GridGeometry* geom = nullptr;
    Vec x{0, 0, 0};
    int angular_segments = 32; // per arc between kink angles (2D)
    int gauss_order = 8;

    // Evaluates several profiles in one angular sweep (sets share geometry).
    // Each entry of `sets` may be null meaning "full exterior".
    void run(const std::vector<const AnalyticSet*>& sets,
             const std::vector<const RadialProfile*>& profiles, double range_cap,
             std::vector<double>& out) const;
};

double exterior_tail(const GridGeometry& g, const Vec& x, const AnalyticSet* set,
                     const RadialProfile& profile, double range_cap);

} // namespace fracmin
