#include "fracmin/grid.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "fracmin/analytic_set.hpp"

namespace fracmin {

GridGeometry::GridGeometry(int dim_, Vec origin_, Index3 extent_, double h_)
    : dim(dim_), origin(origin_), extent(extent_), h(h_) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
    if (!(h > 0.0)) throw std::invalid_argument("cell size h must be positive");
    for (int d = 0; d < 3; ++d) {
        if (d >= dim) extent[d] = 1;
        if (extent[d] < 1) throw std::invalid_argument("grid extent must be >= 1 per axis");
    }
    long double cells = 1.0L;
    for (int d = 0; d < dim; ++d) cells *= static_cast<long double>(extent[d]);
    if (cells > static_cast<long double>(std::numeric_limits<int64_t>::max() / 4))
        throw std::invalid_argument("grid cell count exceeds index range");
}

int64_t GridGeometry::locate(const Vec& x) const {
    Index3 idx{0, 0, 0};
    for (int d = 0; d < dim; ++d) {
        double rel = (x[d] - origin[d]) / h;
        auto i = static_cast<int64_t>(std::floor(rel));
        if (i < 0 || i >= extent[d]) return -1;
        idx[d] = i;
    }
    return linear(idx);
}

bool GridGeometry::same_layout(const GridGeometry& o) const {
    return dim == o.dim && extent == o.extent && h == o.h && origin == o.origin;
}

int64_t CellSet::count() const {
    int64_t n = 0;
    for (uint8_t b : bits_) n += b;
    return n;
}

std::vector<int64_t> CellSet::members() const {
    std::vector<int64_t> out;
    out.reserve(static_cast<size_t>(count()));
    for (int64_t i = 0; i < size(); ++i)
        if (bits_[static_cast<size_t>(i)]) out.push_back(i);
    return out;
}

namespace {
void require_same_layout(const CellSet& a, const CellSet& b) {
    if (!a.geometry().same_layout(b.geometry()))
        throw std::invalid_argument("cell sets live on different grids");
}
} // namespace

CellSet set_complement(const CellSet& s) {
    CellSet out(s.geometry());
    for (int64_t i = 0; i < s.size(); ++i) out.set(i, !s.contains(i));
    return out;
}

CellSet set_union(const CellSet& a, const CellSet& b) {
    require_same_layout(a, b);
    CellSet out(a.geometry());
    for (int64_t i = 0; i < a.size(); ++i) out.set(i, a.contains(i) || b.contains(i));
    return out;
}

CellSet set_intersection(const CellSet& a, const CellSet& b) {
    require_same_layout(a, b);
    CellSet out(a.geometry());
    for (int64_t i = 0; i < a.size(); ++i) out.set(i, a.contains(i) && b.contains(i));
    return out;
}

CellSet set_difference(const CellSet& a, const CellSet& b) {
    require_same_layout(a, b);
    CellSet out(a.geometry());
    for (int64_t i = 0; i < a.size(); ++i) out.set(i, a.contains(i) && !b.contains(i));
    return out;
}

PhaseField::PhaseField(const GridGeometry& g, Label fill)
    : geom_(g),
      labels_(static_cast<size_t>(g.cell_count()), fill),
      free_(static_cast<size_t>(g.cell_count()), 0) {
    if (fill == Label::Free)
        throw std::invalid_argument("fill label must be fixed data; mark free cells explicitly");
}

void PhaseField::set_label(int64_t cell, Label l) {
    if (l == Label::Free && !is_free(cell))
        throw std::logic_error("cell outside the free region cannot be labeled FREE");
    labels_[static_cast<size_t>(cell)] = l;
}

int64_t PhaseField::free_count() const {
    int64_t n = 0;
    for (uint8_t f : free_) n += f;
    return n;
}

int64_t PhaseField::unresolved_count() const {
    int64_t n = 0;
    for (Label l : labels_) n += (l == Label::Free) ? 1 : 0;
    return n;
}

CellSet PhaseField::free_region() const {
    CellSet out(geom_);
    for (int64_t i = 0; i < geom_.cell_count(); ++i) out.set(i, is_free(i));
    return out;
}

CellSet PhaseField::inside() const {
    CellSet out(geom_);
    for (int64_t i = 0; i < geom_.cell_count(); ++i) out.set(i, label(i) == Label::In);
    return out;
}

CellSet PhaseField::outside() const {
    CellSet out(geom_);
    for (int64_t i = 0; i < geom_.cell_count(); ++i) out.set(i, label(i) == Label::Out);
    return out;
}

const AnalyticSet& PhaseField::exterior() const { return *exterior_ptr(); }

std::shared_ptr<const AnalyticSet> PhaseField::exterior_ptr() const {
    static const AnalyticSetPtr empty = make_empty_set();
    return exterior_ ? exterior_ : empty;
}

std::vector<int64_t> PhaseField::free_cells() const {
    std::vector<int64_t> out;
    for (int64_t i = 0; i < geom_.cell_count(); ++i)
        if (is_free(i)) out.push_back(i);
    return out;
}

CellSet cells_in_ball(const GridGeometry& g, const Vec& center, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
    CellSet out(g);
    // Restrict the scan to the index box around the ball.
    Index3 lo{0, 0, 0}, hi{0, 0, 0};
    for (int d = 0; d < 3; ++d) {
        if (d >= g.dim) {
            lo[d] = 0;
            hi[d] = 0;
            continue;
        }
        lo[d] = std::max<int64_t>(
            0, static_cast<int64_t>(std::floor((center[d] - r - g.origin[d]) / g.h)) - 1);
        hi[d] = std::min<int64_t>(
            g.extent[d] - 1,
            static_cast<int64_t>(std::ceil((center[d] + r - g.origin[d]) / g.h)) + 1);
    }
    const double r2 = r * r;
    for (int64_t k = lo[2]; k <= hi[2]; ++k)
        for (int64_t j = lo[1]; j <= hi[1]; ++j)
            for (int64_t i = lo[0]; i <= hi[0]; ++i) {
                Index3 idx{i, j, k};
                Vec c = g.center(idx);
                double d2 = 0.0;
                for (int d = 0; d < g.dim; ++d) d2 += (c[d] - center[d]) * (c[d] - center[d]);
                if (d2 <= r2) out.set(g.linear(idx), true);
            }
    return out;
}

double measure(const CellSet& s) {
    return static_cast<double>(s.count()) * std::pow(s.geometry().h, s.geometry().dim);
}

CellSet boundary_cells(const PhaseField& field) {
    if (!field.resolved())
        throw std::runtime_error("boundary_cells requires a fully resolved field");
    const GridGeometry& g = field.geometry();
    CellSet out(g);
    for (int64_t cell = 0; cell < g.cell_count(); ++cell) {
        Index3 idx = g.unravel(cell);
        Label me = field.label(cell);
        bool hit = false;
        for (int d = 0; d < g.dim && !hit; ++d) {
            for (int step = -1; step <= 1 && !hit; step += 2) {
                Index3 nb = idx;
                nb[d] += step;
                if (nb[d] < 0 || nb[d] >= g.extent[d]) continue;
                if (field.label(g.linear(nb)) != me) hit = true;
            }
        }
        out.set(cell, hit);
    }
    return out;
}

void write_mask(const std::string& path, const PhaseField& field) {
    if (!field.resolved()) throw std::runtime_error("cannot write mask of an unresolved field");
    const GridGeometry& g = field.geometry();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open mask file for writing: " + path);
    if (g.dim == 2) {
        f << "P5\n" << g.extent[0] << " " << g.extent[1] << "\n255\n";
        // PGM rows top to bottom; emit the last grid row first.
        for (int64_t j = g.extent[1] - 1; j >= 0; --j)
            for (int64_t i = 0; i < g.extent[0]; ++i) {
                char px = field.label(g.linear({i, j, 0})) == Label::In ? char(255) : char(0);
                f.write(&px, 1);
            }
    } else {
        for (int64_t c = 0; c < g.cell_count(); ++c)
            f << (field.label(c) == Label::In ? '1' : '0') << '\n';
    }
    if (!f) throw std::runtime_error("failed writing mask file: " + path);
}

CellSet read_mask(const std::string& path, const GridGeometry& g) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open mask file: " + path);
    CellSet out(g);
    if (g.dim == 2) {
        std::string magic;
        f >> magic;
        if (magic != "P5") throw std::runtime_error("mask file is not binary PGM (P5): " + path);
        int64_t w = 0, ht = 0;
        int maxval = 0;
        f >> w >> ht >> maxval;
        if (w != g.extent[0] || ht != g.extent[1])
            throw std::runtime_error("mask dimensions do not match the grid");
        f.get(); // single whitespace after header
        std::vector<char> row(static_cast<size_t>(w));
        for (int64_t j = ht - 1; j >= 0; --j) {
            f.read(row.data(), w);
            if (!f) throw std::runtime_error("truncated PGM mask: " + path);
            for (int64_t i = 0; i < w; ++i)
                out.set(g.linear({i, j, 0}), static_cast<unsigned char>(row[size_t(i)]) > 127);
        }
    } else {
        for (int64_t c = 0; c < g.cell_count(); ++c) {
            int v = -1;
            f >> v;
            if (v != 0 && v != 1) throw std::runtime_error("mask text must be 0/1 lines: " + path);
            out.set(c, v == 1);
        }
    }
    return out;
}

} // namespace fracmin
