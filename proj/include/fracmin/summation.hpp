#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracmin {

// Pairwise (tree) reduction. The result depends only on the contents of the
// buffer, never on thread count, so parallel code can fill per-item partials
// and reduce them here to stay bit-stable.
double pairwise_sum(std::span<const double> values);

// Kahan-compensated accumulator for long fixed-order inner loops.
class CompensatedSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

} // namespace fracmin
