#pragma once

#include <limits>
#include <map>
#include <string>

#include "fracmin/analytic_set.hpp"
#include "fracmin/grid.hpp"
#include "fracmin/kernel.hpp"

namespace fracmin {

// Localized interaction energy of a resolved field, split into the two lattice
// terms of the localized functional plus the analytic exterior tail.
struct EnergyReport {
    std::map<std::string, double> L_terms;
    double J_value = 0.0;
    double tail_term = 0.0;
    double tail_error_bound = 0.0;

    std::string to_json() const;
};

// Names of the two lattice terms in EnergyReport::L_terms.
extern const char* const kTermInsideVsComplement;  // "L(E∩Ω, CE)"
extern const char* const kTermOutsideVsFree;       // "L(E∖Ω, CE∩Ω)"

// Sum of w(a - b) over a in A, b in B (same geometry as K). Parallel over
// source cells with a deterministic reduction; thread count never changes
// the result.
double interaction(const CellSet& A, const CellSet& B, const KernelTable& K);

namespace serial {
// Plain double-loop reference used by tests and the benchmark.
double interaction(const CellSet& A, const CellSet& B, const KernelTable& K);
} // namespace serial

// Per-cell tails against a continuum set beyond the box:
//   sum over a in A of  integral over {y beyond box, y in S, |y-a| <= cap}
// of |y - a|^(-(n+s)). error_bound covers the midpoint-in-cell approximation
// and the angular quadrature.
struct TailSum {
    double value = 0.0;
    double error_bound = 0.0;
};
TailSum exterior_interaction(const CellSet& A, const AnalyticSet& S, const KernelTable& K,
                             double range_cap = std::numeric_limits<double>::infinity());

// J_Omega of a resolved field; Omega is the field's free region and the
// exterior beyond the box is the field's analytic exterior set.
EnergyReport local_energy(const PhaseField& field, const KernelTable& K);

// Box-restricted cut energy L(E ∩ box, CE ∩ box) by zero-padded FFT.
double fft_cut_energy(const PhaseField& field, const KernelTable& K);
namespace serial {
// Brute-force counterpart of fft_cut_energy.
double cut_energy(const PhaseField& field, const KernelTable& K);
} // namespace serial

// Scalar form of the localized seminorm on the ball of radius r about the
// origin; equals exactly twice local_energy with Omega = B_r.
double scalar_energy(const PhaseField& field, const KernelTable& K, double r);

} // namespace fracmin
