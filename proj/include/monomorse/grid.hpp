#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "monomorse/errors.hpp"

namespace monomorse {

/// Sampled real image. Row-major: x1 = s1 * d1 runs along a row, x2 = s2 * d2 selects the row.
struct ImageGrid {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double d1 = 1.0;
    double d2 = 1.0;
    std::vector<double> data;

    ImageGrid() = default;
    ImageGrid(std::size_t n1_, std::size_t n2_, double d1_ = 1.0, double d2_ = 1.0)
        : n1(n1_), n2(n2_), d1(d1_), d2(d2_), data(n1_ * n2_, 0.0) {}

    double& operator()(std::size_t s1, std::size_t s2) { return data[s2 * n1 + s1]; }
    double operator()(std::size_t s1, std::size_t s2) const { return data[s2 * n1 + s1]; }
    std::size_t size() const { return data.size(); }

    /// Throws unless the invariants (n >= 8, positive spacing, finite samples) hold.
    void validate() const {
        if (n1 < 8 || n2 < 8) throw Error(ErrorKind::Domain, "transform", "image must be at least 8x8");
        if (!(d1 > 0.0) || !(d2 > 0.0)) throw Error(ErrorKind::Domain, "transform", "sample spacing must be positive");
        if (data.size() != n1 * n2) throw Error(ErrorKind::Domain, "transform", "data size does not match n1*n2");
        for (double v : data) {
            if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteInput, "transform", "image has non-finite samples");
        }
    }
};

/// Real plane with the same indexing as ImageGrid.
struct Plane {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::vector<double> v;

    Plane() = default;
    Plane(std::size_t n1_, std::size_t n2_) : n1(n1_), n2(n2_), v(n1_ * n2_, 0.0) {}

    double& operator()(std::size_t s1, std::size_t s2) { return v[s2 * n1 + s1]; }
    double operator()(std::size_t s1, std::size_t s2) const { return v[s2 * n1 + s1]; }
};

/// Signed DFT frequency of bin k, centred on [-1/(2d), 1/(2d)).
inline double bin_frequency(std::size_t k, std::size_t n, double d) {
    const long kk = k < (n + 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
    return static_cast<double>(kk) / (static_cast<double>(n) * d);
}

}  // namespace monomorse
