#pragma once

// Isotropic Morse wavelets on the plane, their Riesz companions, and the
// concentration eigenvalues of the radial localisation operator.
//
// Frequencies are radial and measured in cycles per sample unit; the
// wavelets are functions of u = 2 pi f.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "monomorse/errors.hpp"
#include "monomorse/mathcore.hpp"
#include "monomorse/quadrature.hpp"

namespace monomorse {

struct SupportBand {
    double f1 = 0.0;
    double f2 = 0.0;
};

struct EigenvalueResult {
    int n = 0;
    double r = 0.0;
    double C = 1.0;
    double lambda = 0.0;
    double concentration = 0.0;  ///< lambda^2
};

/// Parameters (l, m, N) of an isotropic Morse family and the constants derived from them.
class MorseFamily {
public:
    MorseFamily(double l, double m, int count, double epsilon_rel = 1e-6);

    double l() const { return l_; }
    double m() const { return m_; }
    int count() const { return count_; }
    double beta() const { return l_ + 0.5; }
    double gamma() const { return m_; }
    double r() const { return (2.0 * l_ + 2.0) / m_; }
    double c_prime() const { return r() - 1.0; }
    double epsilon_rel() const { return epsilon_rel_; }

    /// A_n, fixed numerically so that the plane L2 norm of Psi_n is one.
    double norm_constant(int n) const { return norm_[check(n)]; }

    /// Closed form of the same constant: sqrt(2 pi^2 m 2^r n! / Gamma(n + r)).
    double analytic_norm_constant(int n) const {
        check(n);
        return std::sqrt(2.0 * kPi * kPi * m_ *
                         std::exp(r() * std::log(2.0) + std::lgamma(n + 1.0) - std::lgamma(n + r())));
    }

    /// sqrt(pi gamma 2^r n! / Gamma(n + r)) in the (l, m) parameterisation. It differs from
    /// analytic_norm_constant by sqrt(2 pi), the factor between angular and cyclic frequency measures.
    double printed_norm_constant(int n) const {
        check(n);
        return std::sqrt(kPi * m_ * std::exp(r() * std::log(2.0) + std::lgamma(n + 1.0) - std::lgamma(n + r())));
    }

    double f_max(int n) const { return fmax_[check(n)]; }
    SupportBand band(int n) const { return band_[check(n)]; }

    /// Psi_n^(e)(f) without the normalising constant.
    double unnormalised(int n, double f) const {
        if (f <= 0.0) return 0.0;
        const double u = kTwoPi * f;
        const double um = std::pow(u, m_);
        return std::pow(u, l_) * std::exp(-um) * laguerre(n, c_prime(), 2.0 * um) / std::sqrt(kPi);
    }

    double psi(int n, double f) const { return norm_[check(n)] * unnormalised(n, f); }

    /// Upper radial frequency beyond which every member is negligible in double precision.
    double search_limit(int n) const {
        const double s = 120.0 + 10.0 * n;
        return std::pow(0.5 * s, 1.0 / m_) / kTwoPi;
    }

    std::size_t check(int n) const {
        if (n < 0 || n >= count_) throw Error(ErrorKind::Index, "wavelets", "wavelet index out of range");
        return static_cast<std::size_t>(n);
    }

private:
    double l_;
    double m_;
    int count_;
    double epsilon_rel_;
    std::vector<double> norm_;
    std::vector<double> fmax_;
    std::vector<SupportBand> band_;

    double locate_fmax(int n) const;

public:
    /// Band at an arbitrary threshold (the cached bands use epsilon_rel()).
    SupportBand locate_band(int n, double epsilon_rel) const;
};

// ---------------------------------------------------------------------------

inline double MorseFamily::locate_fmax(int n) const {
    const double top = search_limit(n);
    constexpr int grid = 2048;
    int best = 1;
    double best_value = -1.0;
    for (int i = 1; i <= grid; ++i) {
        const double v = std::abs(unnormalised(n, top * i / grid));
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    // d/du log|Psi| = l/u - m u^(m-1) + 2 m u^(m-1) L'(s)/L(s), L' = -L_{n-1}^{c+1}
    auto slope = [&](double f) {
        const double u = kTwoPi * f;
        const double um1 = std::pow(u, m_ - 1.0);
        const double s = 2.0 * u * um1;
        double g = l_ / u - m_ * um1;
        if (n > 0) g -= 2.0 * m_ * um1 * laguerre(n - 1, c_prime() + 1.0, s) / laguerre(n, c_prime(), s);
        return g;
    };
    double lo = top * (best - 1) / grid;
    double hi = top * std::min(best + 1, grid) / grid;
    if (lo <= 0.0) lo = top * 1e-6 / grid;
    if (slope(lo) <= 0.0 || slope(hi) >= 0.0) return top * best / grid;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline SupportBand MorseFamily::locate_band(int n, double epsilon_rel) const {
    const double fm = fmax_.size() > static_cast<std::size_t>(n) ? fmax_[n] : locate_fmax(n);
    const double threshold = epsilon_rel * std::abs(unnormalised(n, fm));
    double top = search_limit(n);
    while (std::abs(unnormalised(n, top)) >= threshold) top *= 1.5;
    constexpr int grid = 8192;
    int first = -1;
    int last = -1;
    for (int i = 1; i < grid; ++i) {
        if (std::abs(unnormalised(n, top * i / grid)) >= threshold) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0) return {fm, fm};
    auto crossing = [&](double below, double above) {
        for (int it = 0; it < 200 && std::abs(above - below) > 1e-15; ++it) {
            const double mid = 0.5 * (below + above);
            (std::abs(unnormalised(n, mid)) >= threshold ? above : below) = mid;
        }
        return 0.5 * (below + above);
    };
    SupportBand band;
    band.f1 = crossing(top * (first - 1) / grid, top * first / grid);
    band.f2 = crossing(top * (last + 1) / grid, top * last / grid);
    band.f1 = std::min(band.f1, fm);
    band.f2 = std::max(band.f2, fm);
    return band;
}

inline MorseFamily::MorseFamily(double l, double m, int count, double epsilon_rel)
    : l_(l), m_(m), count_(count), epsilon_rel_(epsilon_rel) {
    if (!(l >= 1.0) || !(m >= 1.0)) throw Error(ErrorKind::Domain, "wavelets", "require l >= 1 and m >= 1");
    if (count < 1) throw Error(ErrorKind::Domain, "wavelets", "require at least one wavelet");
    if (!(epsilon_rel > 0.0 && epsilon_rel < 1.0)) {
        throw Error(ErrorKind::Domain, "wavelets", "epsilon_rel must lie in (0, 1)");
    }
    if (!(c_prime() > -1.0) || !(r() > 1.0)) throw Error(ErrorKind::Domain, "wavelets", "require r > 1");
    for (int n = 0; n < count_; ++n) {
        const double top = search_limit(n);
        auto integrand = [&](double f) {
            const double v = unnormalised(n, f);
            return kTwoPi * v * v * f;
        };
        norm_.push_back(1.0 / std::sqrt(quad::composite(integrand, 0.0, top, 64, 32)));
    }
    for (int n = 0; n < count_; ++n) fmax_.push_back(locate_fmax(n));
    for (int n = 0; n < count_; ++n) band_.push_back(locate_band(n, epsilon_rel_));
}

// ---------------------------------------------------------------------------
// Free-function surface
// ---------------------------------------------------------------------------

/// Fourier transform of the isotropic wavelet at radial frequency f.
inline double psi_e_hat(double f, const MorseFamily& family, int n) { return family.psi(n, f); }

/// Riesz companions in the Fourier domain: Psi^(s) = j * imag_s with imag_s = -(f_s / f) Psi^(e).
struct RieszPair {
    double imag1 = 0.0;
    double imag2 = 0.0;
};

inline RieszPair psi_riesz_hat(double f1, double f2, const MorseFamily& family, int n) {
    const double f = std::hypot(f1, f2);
    if (f == 0.0) {
        family.check(n);
        return {};
    }
    const double e = family.psi(n, f);
    return {-(f1 / f) * e, -(f2 / f) * e};
}

inline double f_max(const MorseFamily& family, int n) { return family.f_max(n); }

inline SupportBand support_band(const MorseFamily& family, int n, double epsilon_rel) {
    family.check(n);
    if (!(epsilon_rel > 0.0 && epsilon_rel <= 1.0)) {
        throw Error(ErrorKind::Domain, "wavelets", "epsilon_rel must lie in (0, 1]");
    }
    if (epsilon_rel == family.epsilon_rel()) return family.band(n);
    return family.locate_band(n, epsilon_rel);
}

/// Concentration eigenvalue of the radial localisation operator. The gamma-function
/// prefactor cancels the complete beta integral, leaving I_x0(n + 1, r - 1).
inline EigenvalueResult eigenvalue(int n, double r, double C) {
    if (n < 0) throw Error(ErrorKind::Domain, "wavelets", "eigenvalue index must be >= 0");
    if (!(r > 1.0)) throw Error(ErrorKind::Domain, "wavelets", "eigenvalue requires r > 1");
    if (!(C >= 1.0)) throw Error(ErrorKind::Domain, "wavelets", "eigenvalue requires C >= 1");
    const double x0 = std::isinf(C) ? 1.0 : (C - 1.0) / (C + 1.0);
    EigenvalueResult out;
    out.n = n;
    out.r = r;
    out.C = C;
    out.lambda = reg_inc_beta(n + 1.0, r - 1.0, x0);
    out.concentration = out.lambda * out.lambda;
    return out;
}

namespace detail {

// 2 pi * integral_0^top Psi_n(f) J_order(2 pi f x) f df, split at the Bessel oscillations.
inline double hankel(const MorseFamily& family, int n, double x, int order) {
    const double top = support_band(family, n, 1e-8).f2;
    const int panels = std::max(4, static_cast<int>(std::ceil(2.0 * top * x)) + 1);
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = top * p / panels;
        const double b = top * (p + 1) / panels;
        sum += quad::adaptive(
                   [&](double f) {
                       const double z = kTwoPi * f * x;
                       const double j = order == 0 ? bessel_j0(z) : bessel_j1(z);
                       return family.psi(n, f) * j * f;
                   },
                   a, b, 1e-12, 15)
                   .value;
    }
    return kTwoPi * sum;
}

}  // namespace detail

/// Spatial radial profile of the isotropic wavelet (order-0 Hankel inversion).
inline double psi_spatial(double x, const MorseFamily& family, int n) {
    family.check(n);
    return detail::hankel(family, n, std::abs(x), 0);
}

/// Radial profile R of the Riesz companions: psi^(s)(x) = (x_s / |x|) R(|x|),
/// from the order-1 Hankel transform. R(0) = 0.
inline double psi_riesz_spatial(double x, const MorseFamily& family, int n) {
    family.check(n);
    if (x == 0.0) return 0.0;
    return detail::hankel(family, n, std::abs(x), 1);
}

}  // namespace monomorse
