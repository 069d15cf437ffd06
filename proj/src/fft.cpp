#include "fracmin/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace fracmin {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int64_t next_pow2(int64_t n) {
    int64_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

PaddedConvolution::PaddedConvolution(const GridGeometry& g) : geom_(g) {
    for (int d = 0; d < 3; ++d)
        pad_[d] = (d < g.dim) ? next_pow2(2 * g.extent[d]) : 1;
    const int64_t total = padded_count();
    // r2c transform: last *transform* axis halved. FFTW uses row-major with
    // the last dimension contiguous; our axis 0 is contiguous, so present the
    // dims reversed.
    int rank = g.dim;
    int dims[3] = {1, 1, 1};
    for (int d = 0; d < rank; ++d) dims[d] = static_cast<int>(pad_[rank - 1 - d]);
    spec_count_ = 1;
    for (int d = 0; d < rank - 1; ++d) spec_count_ *= dims[d];
    spec_count_ *= dims[rank - 1] / 2 + 1;

    real_buf_ = fftw_alloc_real(static_cast<size_t>(total));
    spec_buf_ = reinterpret_cast<std::complex<double>*>(
        fftw_alloc_complex(static_cast<size_t>(spec_count_)));
    if (!real_buf_ || !spec_buf_) throw std::bad_alloc();

    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_r2c(rank, dims, real_buf_,
                                  reinterpret_cast<fftw_complex*>(spec_buf_), FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_c2r(rank, dims, reinterpret_cast<fftw_complex*>(spec_buf_),
                                  real_buf_, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("fftw plan creation failed");
}

PaddedConvolution::~PaddedConvolution() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
    fftw_free(real_buf_);
    fftw_free(spec_buf_);
}

size_t PaddedConvolution::wrap_index(const Index3& delta) const {
    size_t idx = 0;
    for (int d = 2; d >= 0; --d) {
        int64_t w = delta[d] >= 0 ? delta[d] : delta[d] + pad_[d];
        idx = idx * static_cast<size_t>(pad_[d]) + static_cast<size_t>(w);
    }
    return idx;
}

void PaddedConvolution::set_kernel(const std::vector<double>& offset_samples,
                                   const Index3& half_range) {
    std::vector<double> buf(static_cast<size_t>(padded_count()), 0.0);
    Index3 span{2 * half_range[0] + 1, 2 * half_range[1] + 1, 2 * half_range[2] + 1};
    for (int64_t k = -half_range[2]; k <= half_range[2]; ++k)
        for (int64_t j = -half_range[1]; j <= half_range[1]; ++j)
            for (int64_t i = -half_range[0]; i <= half_range[0]; ++i) {
                size_t src = 0;
                Index3 delta{i, j, k};
                for (int d = 2; d >= 0; --d)
                    src = src * static_cast<size_t>(span[d]) +
                          static_cast<size_t>(delta[d] + half_range[d]);
                if (std::abs(i) >= geom_.extent[0] || std::abs(j) >= geom_.extent[1] ||
                    std::abs(k) >= geom_.extent[2])
                    continue;
                buf[wrap_index(delta)] = offset_samples[src];
            }
    set_padded_kernel(buf);
}

void PaddedConvolution::set_padded_kernel(const std::vector<double>& padded) {
    const int64_t total = padded_count();
    for (int64_t i = 0; i < total; ++i) real_buf_[i] = padded[static_cast<size_t>(i)];
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    kernel_spec_.assign(spec_buf_, spec_buf_ + spec_count_);
}

void PaddedConvolution::convolve(const std::vector<double>& box_field, std::vector<double>& out) {
    if (kernel_spec_.empty()) throw std::logic_error("convolution kernel not set");
    if (box_field.size() != static_cast<size_t>(geom_.cell_count()))
        throw std::invalid_argument("field size does not match the grid");
    const int64_t total = padded_count();
    for (int64_t i = 0; i < total; ++i) real_buf_[i] = 0.0;
    for (int64_t c = 0; c < geom_.cell_count(); ++c) {
        Index3 idx = geom_.unravel(c);
        real_buf_[wrap_index(idx)] = box_field[static_cast<size_t>(c)];
    }
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    const double inv = 1.0 / static_cast<double>(total);
    for (int64_t i = 0; i < spec_count_; ++i) spec_buf_[i] *= kernel_spec_[static_cast<size_t>(i)] * inv;
    fftw_execute(static_cast<fftw_plan>(plan_bwd_));
    out.resize(static_cast<size_t>(geom_.cell_count()));
    for (int64_t c = 0; c < geom_.cell_count(); ++c) {
        Index3 idx = geom_.unravel(c);
        out[static_cast<size_t>(c)] = real_buf_[wrap_index(idx)];
    }
}

} // namespace fracmin
