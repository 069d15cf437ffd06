#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "fracmin/grid.hpp"

namespace fracmin {

// Zero-padded linear convolution on the lattice via FFTW. The padded size is
// the next power of two >= 2*extent per axis, so circular wraparound never
// reaches the box. Plans use FFTW_ESTIMATE and single-threaded execution;
// results are bit-identical run to run.
class PaddedConvolution {
public:
    explicit PaddedConvolution(const GridGeometry& g);
    ~PaddedConvolution();

    PaddedConvolution(const PaddedConvolution&) = delete;
    PaddedConvolution& operator=(const PaddedConvolution&) = delete;

    const Index3& padded_extent() const { return pad_; }
    int64_t padded_count() const { return pad_[0] * pad_[1] * pad_[2]; }

    // Kernel samples indexed by offset; wraps negative offsets. offsets with
    // |delta_d| >= extent_d must be zero and are not representable.
    void set_kernel(const std::vector<double>& offset_samples, const Index3& half_range);
    // Kernel given as a callable delta -> value.
    template <typename F>
    void set_kernel_fn(F&& f) {
        std::vector<double> buf(static_cast<size_t>(padded_count()), 0.0);
        const GridGeometry& g = geom();
        for (int64_t k = -(g.extent[2] - 1); k <= g.extent[2] - 1; ++k)
            for (int64_t j = -(g.extent[1] - 1); j <= g.extent[1] - 1; ++j)
                for (int64_t i = -(g.extent[0] - 1); i <= g.extent[0] - 1; ++i)
                    buf[wrap_index({i, j, k})] = f(Index3{i, j, k});
        set_padded_kernel(buf);
    }

    // Convolution of a box field (linear cell order) with the kernel;
    // output has box layout.
    void convolve(const std::vector<double>& box_field, std::vector<double>& out);

    const GridGeometry& geom() const { return geom_; }
    size_t wrap_index(const Index3& delta) const;

private:
    void set_padded_kernel(const std::vector<double>& padded);

    GridGeometry geom_;
    Index3 pad_{1, 1, 1};
    void* plan_fwd_ = nullptr;
    void* plan_bwd_ = nullptr;
    double* real_buf_ = nullptr;
    std::complex<double>* spec_buf_ = nullptr;
    std::vector<std::complex<double>> kernel_spec_;
    int64_t spec_count_ = 0;
};

} // namespace fracmin
