#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <fftw3.h>

namespace monomorse::fft {

/// fftw_malloc'd complex buffer so every buffer matches the alignment of the cached plans.
class Buffer {
public:
    explicit Buffer(std::size_t count)
        : size_(count), data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count))) {
        for (std::size_t i = 0; i < count; ++i) data_[i][0] = data_[i][1] = 0.0;
    }
    Buffer(const Buffer&) = delete;
    Buffer& operator=(const Buffer&) = delete;
    Buffer(Buffer&& o) noexcept : size_(o.size_), data_(o.data_) { o.data_ = nullptr; o.size_ = 0; }
    ~Buffer() { if (data_) fftw_free(data_); }

    fftw_complex* data() { return data_; }
    const fftw_complex* data() const { return data_; }
    std::size_t size() const { return size_; }
    std::complex<double> at(std::size_t i) const { return {data_[i][0], data_[i][1]}; }
    void set(std::size_t i, std::complex<double> z) { data_[i][0] = z.real(); data_[i][1] = z.imag(); }

private:
    std::size_t size_;
    fftw_complex* data_;
};

namespace detail {

struct PlanCache {
    std::mutex mutex;
    std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans;
    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }
};

inline PlanCache& cache() {
    static PlanCache c;
    return c;
}

// FFTW planning is not thread safe; execution of an existing plan on new arrays is.
inline fftw_plan plan_for(std::size_t n1, std::size_t n2, int sign) {
    auto& c = cache();
    std::lock_guard lock(c.mutex);
    const auto key = std::make_tuple(n1, n2, sign);
    auto it = c.plans.find(key);
    if (it != c.plans.end()) return it->second;
    Buffer in(n1 * n2);
    Buffer out(n1 * n2);
    // rows are x2, columns x1: FFTW's last dimension is contiguous
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(n2), static_cast<int>(n1), in.data(), out.data(), sign,
                                      FFTW_ESTIMATE);
    c.plans.emplace(key, plan);
    return plan;
}

}  // namespace detail

/// Unnormalised forward DFT, e^{-2 pi i k x / n}.
inline void forward(std::size_t n1, std::size_t n2, Buffer& in, Buffer& out) {
    fftw_execute_dft(detail::plan_for(n1, n2, FFTW_FORWARD), in.data(), out.data());
}

/// Inverse DFT including the 1/(n1 n2) factor.
inline void inverse(std::size_t n1, std::size_t n2, Buffer& in, Buffer& out) {
    fftw_execute_dft(detail::plan_for(n1, n2, FFTW_BACKWARD), in.data(), out.data());
    const double scale = 1.0 / static_cast<double>(n1 * n2);
    for (std::size_t i = 0; i < n1 * n2; ++i) {
        out.data()[i][0] *= scale;
        out.data()[i][1] *= scale;
    }
}

}  // namespace monomorse::fft
