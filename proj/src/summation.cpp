#include "fracmin/summation.hpp"

namespace fracmin {

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        CompensatedSum acc;
        for (double v : values) acc.add(v);
        return acc.value();
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

} // namespace fracmin
