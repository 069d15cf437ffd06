#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace fracmin {

using Vec = std::array<double, 3>;
using Index3 = std::array<int64_t, 3>;

inline double dot(const Vec& a, const Vec& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

// Uniform lattice of half-open cells origin + h*[i, i+1). Unused axes have
// extent 1. Cells are addressed by a linear index, axis 0 fastest.
struct GridGeometry {
    int dim = 1;
    Vec origin{0.0, 0.0, 0.0};
    Index3 extent{1, 1, 1};
    double h = 1.0;

    GridGeometry() = default;
    GridGeometry(int dim_, Vec origin_, Index3 extent_, double h_);

    int64_t cell_count() const { return extent[0] * extent[1] * extent[2]; }

    int64_t linear(const Index3& idx) const {
        return idx[0] + extent[0] * (idx[1] + extent[1] * idx[2]);
    }
    Index3 unravel(int64_t cell) const {
        Index3 idx{0, 0, 0};
        idx[0] = cell % extent[0];
        cell /= extent[0];
        idx[1] = cell % extent[1];
        idx[2] = cell / extent[1];
        return idx;
    }
    Vec center(const Index3& idx) const {
        Vec c{0.0, 0.0, 0.0};
        for (int d = 0; d < dim; ++d) c[d] = origin[d] + h * (double(idx[d]) + 0.5);
        return c;
    }
    Vec center(int64_t cell) const { return center(unravel(cell)); }

    // Cell containing a point, or -1 when outside the box.
    int64_t locate(const Vec& x) const;

    bool same_layout(const GridGeometry& o) const;

    // Box corners in physical coordinates.
    Vec box_lo() const { return origin; }
    Vec box_hi() const {
        Vec hi = origin;
        for (int d = 0; d < dim; ++d) hi[d] += h * double(extent[d]);
        return hi;
    }
};

// Dense per-cell bitmap tied to a geometry.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(const GridGeometry& g, bool value = false)
        : geom_(g), bits_(static_cast<size_t>(g.cell_count()), value ? 1 : 0) {}

    const GridGeometry& geometry() const { return geom_; }
    int64_t size() const { return static_cast<int64_t>(bits_.size()); }
    bool contains(int64_t cell) const { return bits_[static_cast<size_t>(cell)] != 0; }
    void set(int64_t cell, bool v) { bits_[static_cast<size_t>(cell)] = v ? 1 : 0; }
    int64_t count() const;

    std::vector<int64_t> members() const;

    const std::vector<uint8_t>& raw() const { return bits_; }

    bool operator==(const CellSet& o) const {
        return geom_.same_layout(o.geom_) && bits_ == o.bits_;
    }

private:
    GridGeometry geom_;
    std::vector<uint8_t> bits_;
};

CellSet set_complement(const CellSet& s);
CellSet set_union(const CellSet& a, const CellSet& b);
CellSet set_intersection(const CellSet& a, const CellSet& b);
CellSet set_difference(const CellSet& a, const CellSet& b);

enum class Label : uint8_t { Out = 0, In = 1, Free = 2 };

class AnalyticSet; // exterior description beyond the box (analytic_set.hpp)

// Ternary phase field: labels on the box, a free region (the unknown part),
// and an analytic description of the set beyond the box. Cells outside the
// free region always carry fixed IN/OUT data.
class PhaseField {
public:
    PhaseField() = default;
    PhaseField(const GridGeometry& g, Label fill = Label::Out);

    const GridGeometry& geometry() const { return geom_; }
    Label label(int64_t cell) const { return labels_[static_cast<size_t>(cell)]; }
    void set_label(int64_t cell, Label l);
    bool is_free(int64_t cell) const { return free_[static_cast<size_t>(cell)] != 0; }
    void set_free(int64_t cell, bool f) { free_[static_cast<size_t>(cell)] = f ? 1 : 0; }

    int64_t free_count() const;
    int64_t unresolved_count() const; // cells still labeled Free
    bool resolved() const { return unresolved_count() == 0; }

    CellSet free_region() const;
    CellSet inside() const;  // cells labeled In (requires resolved field)
    CellSet outside() const; // cells labeled Out

    // Exterior continuum set beyond the box; defaults to "nothing" (all OUT).
    void set_exterior(std::shared_ptr<const AnalyticSet> e) { exterior_ = std::move(e); }
    const AnalyticSet& exterior() const;
    std::shared_ptr<const AnalyticSet> exterior_ptr() const;

    std::vector<int64_t> free_cells() const;

private:
    GridGeometry geom_;
    std::vector<Label> labels_;
    std::vector<uint8_t> free_;
    std::shared_ptr<const AnalyticSet> exterior_;
};

// --- grid operations ---

// Cells whose centers lie within distance r of `center` (inclusive).
CellSet cells_in_ball(const GridGeometry& g, const Vec& center, double r);

// Lebesgue measure: member count * h^dim.
double measure(const CellSet& s);

// IN cells with a face-adjacent OUT cell, plus OUT cells with a face-adjacent
// IN cell. Throws if the field still has FREE cells.
CellSet boundary_cells(const PhaseField& field);

// --- raster mask I/O ---
// 2D masks as binary PGM (P5, maxval 255, 0 = OUT, 255 = IN); 1D and 3D as
// newline-separated 0/1 text in linear cell order.
void write_mask(const std::string& path, const PhaseField& field);
CellSet read_mask(const std::string& path, const GridGeometry& g);

} // namespace fracmin
