#include "fracmin/energy.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "fracmin/fft.hpp"
#include "fracmin/summation.hpp"

namespace fracmin {

const char* const kTermInsideVsComplement = "L(E∩Ω, CE)";
const char* const kTermOutsideVsFree = "L(E∖Ω, CE∩Ω)";

std::string EnergyReport::to_json() const {
    std::ostringstream os;
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    os << "{\n  \"L_terms\": {";
    bool first = true;
    for (const auto& [name, value] : L_terms) {
        os << (first ? "\n" : ",\n") << "    \"" << name << "\": " << num(value);
        first = false;
    }
    os << "\n  },\n";
    os << "  \"J_value\": " << num(J_value) << ",\n";
    os << "  \"tail_term\": " << num(tail_term) << ",\n";
    os << "  \"tail_error_bound\": " << num(tail_error_bound) << "\n}";
    return os.str();
}

namespace {

void require_geometry(const CellSet& A, const KernelTable& K) {
    if (!A.geometry().same_layout(K.geometry()))
        throw std::invalid_argument("cell set and kernel table live on different grids");
}

std::vector<Index3> member_indices(const CellSet& s) {
    std::vector<Index3> out;
    const GridGeometry& g = s.geometry();
    for (int64_t c = 0; c < g.cell_count(); ++c)
        if (s.contains(c)) out.push_back(g.unravel(c));
    return out;
}

} // namespace

double interaction(const CellSet& A, const CellSet& B, const KernelTable& K) {
    require_geometry(A, K);
    require_geometry(B, K);
    std::vector<Index3> as = member_indices(A);
    std::vector<Index3> bs = member_indices(B);
    if (as.empty() || bs.empty()) return 0.0;
    std::vector<double> partial(as.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < static_cast<int64_t>(as.size()); ++i) {
        const Index3& a = as[static_cast<size_t>(i)];
        CompensatedSum acc;
        for (const Index3& b : bs)
            acc.add(K.weight({a[0] - b[0], a[1] - b[1], a[2] - b[2]}));
        partial[static_cast<size_t>(i)] = acc.value();
    }
    return pairwise_sum(partial);
}

namespace serial {
double interaction(const CellSet& A, const CellSet& B, const KernelTable& K) {
    require_geometry(A, K);
    require_geometry(B, K);
    std::vector<Index3> as = member_indices(A);
    std::vector<Index3> bs = member_indices(B);
    CompensatedSum acc;
    for (const Index3& a : as)
        for (const Index3& b : bs)
            acc.add(K.weight({a[0] - b[0], a[1] - b[1], a[2] - b[2]}));
    return acc.value();
}
} // namespace serial

TailSum exterior_interaction(const CellSet& A, const AnalyticSet& S, const KernelTable& K,
                             double range_cap) {
    require_geometry(A, K);
    const GridGeometry& g = A.geometry();
    const double s = K.order().s;
    std::vector<int64_t> cells = A.members();
    if (cells.empty()) return {};
    PowerLawProfile profile(s);
    std::vector<double> value(cells.size(), 0.0), bound(cells.size(), 0.0);
    Vec lo = g.box_lo(), hi = g.box_hi();
#pragma omp parallel for schedule(dynamic, 16)
    for (int64_t i = 0; i < static_cast<int64_t>(cells.size()); ++i) {
        Vec x = g.center(cells[static_cast<size_t>(i)]);
        double t = exterior_tail(g, x, &S, profile, range_cap);
        double dist = std::numeric_limits<double>::infinity();
        for (int d = 0; d < g.dim; ++d)
            dist = std::min({dist, x[d] - lo[d], hi[d] - x[d]});
        double p = g.dim + s;
        double factor = std::min(1.0, 0.5 * p * (p + 2.0) * (g.h / dist) * (g.h / dist));
        value[static_cast<size_t>(i)] = t;
        bound[static_cast<size_t>(i)] = factor * t + 1e-6 * t;
    }
    TailSum out;
    out.value = pairwise_sum(value);
    out.error_bound = pairwise_sum(bound);
    return out;
}

EnergyReport local_energy(const PhaseField& field, const KernelTable& K) {
    if (!field.resolved()) throw std::runtime_error("local_energy requires a resolved field");
    if (!field.geometry().same_layout(K.geometry()))
        throw std::invalid_argument("field and kernel table live on different grids");

    CellSet omega = field.free_region();
    CellSet inside = field.inside();
    CellSet outside = field.outside();
    CellSet in_omega = set_intersection(inside, omega);
    CellSet in_beyond = set_difference(inside, omega);
    CellSet out_omega = set_intersection(outside, omega);

    AnalyticSetPtr e_cont = field.exterior_ptr();
    AnalyticSetPtr ce_cont = complement_of(e_cont);

    EnergyReport rep;
    double term1 = interaction(in_omega, outside, K);
    double term2 = interaction(in_beyond, out_omega, K);
    rep.L_terms[kTermInsideVsComplement] = term1;
    rep.L_terms[kTermOutsideVsFree] = term2;

    TailSum tail1 = exterior_interaction(in_omega, *ce_cont, K);
    TailSum tail2 = exterior_interaction(out_omega, *e_cont, K);
    rep.tail_term = tail1.value + tail2.value;
    rep.tail_error_bound = tail1.error_bound + tail2.error_bound;
    rep.J_value = term1 + term2 + rep.tail_term;
    return rep;
}

double fft_cut_energy(const PhaseField& field, const KernelTable& K) {
    if (!field.resolved()) throw std::runtime_error("fft_cut_energy requires a resolved field");
    const GridGeometry& g = field.geometry();
    if (!g.same_layout(K.geometry()))
        throw std::invalid_argument("field and kernel table live on different grids");

    PaddedConvolution conv(g);
    conv.set_kernel(K.raw(), {K.half_range(0), K.half_range(1), K.half_range(2)});

    const size_t n = static_cast<size_t>(g.cell_count());
    std::vector<double> chi(n, 0.0), ones(n, 1.0);
    for (size_t c = 0; c < n; ++c)
        chi[c] = (field.label(static_cast<int64_t>(c)) == Label::In) ? 1.0 : 0.0;
    std::vector<double> w_chi, w_ones;
    conv.convolve(chi, w_chi);
    conv.convolve(ones, w_ones);

    std::vector<double> partial;
    partial.reserve(n);
    for (size_t c = 0; c < n; ++c)
        if (chi[c] != 0.0) partial.push_back(w_ones[c] - w_chi[c]);
    return pairwise_sum(partial);
}

namespace serial {
double cut_energy(const PhaseField& field, const KernelTable& K) {
    if (!field.resolved()) throw std::runtime_error("cut_energy requires a resolved field");
    CellSet in = field.inside();
    CellSet out = field.outside();
    return serial::interaction(in, out, K);
}
} // namespace serial

double scalar_energy(const PhaseField& field, const KernelTable& K, double r) {
    if (!field.resolved()) throw std::runtime_error("scalar_energy requires a resolved field");
    const GridGeometry& g = field.geometry();
    Vec lo = g.box_lo(), hi = g.box_hi();
    for (int d = 0; d < g.dim; ++d)
        if (lo[d] > -r || hi[d] < r)
            throw std::invalid_argument("ball of radius r exceeds the box");

    CellSet ball = cells_in_ball(g, {0.0, 0.0, 0.0}, r);
    std::vector<int64_t> ball_cells = ball.members();
    if (ball_cells.empty()) return 0.0;

    AnalyticSetPtr e_cont = field.exterior_ptr();
    AnalyticSetPtr ce_cont = complement_of(e_cont);
    PowerLawProfile profile(K.order().s);

    std::vector<double> partial(ball_cells.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 8)
    for (int64_t i = 0; i < static_cast<int64_t>(ball_cells.size()); ++i) {
        int64_t x = ball_cells[static_cast<size_t>(i)];
        Index3 xi = g.unravel(x);
        bool x_in = field.label(x) == Label::In;
        CompensatedSum acc;
        for (int64_t y = 0; y < g.cell_count(); ++y) {
            if ((field.label(y) == Label::In) == x_in) continue;
            Index3 yi = g.unravel(y);
            double w = K.weight({xi[0] - yi[0], xi[1] - yi[1], xi[2] - yi[2]});
            acc.add(ball.contains(y) ? w : 2.0 * w);
        }
        const AnalyticSet& opposite = x_in ? *ce_cont : *e_cont;
        double tail = exterior_tail(g, g.center(x), &opposite, profile,
                                    std::numeric_limits<double>::infinity());
        acc.add(2.0 * tail);
        partial[static_cast<size_t>(i)] = acc.value();
    }
    return pairwise_sum(partial);
}

} // namespace fracmin
