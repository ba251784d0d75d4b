#pragma once

// Scalar special functions and the small slice of quaternion algebra used by
// the monogenic transform. Everything here is a pure function on value types.

#include <cmath>
#include <limits>
#include <numbers>

#include "monomorse/errors.hpp"

namespace monomorse {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Quaternions
// ---------------------------------------------------------------------------

/// q = w + x i + y j + z k
struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quaternion operator+(const Quaternion& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
    constexpr Quaternion operator-(const Quaternion& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
    constexpr Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
    constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
    constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
};

/// Hamilton product: i^2 = j^2 = k^2 = ijk = -1, ij = k, jk = i, ki = j.
constexpr Quaternion quat_mul(const Quaternion& a, const Quaternion& b) {
    return {
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    };
}

constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) { return quat_mul(a, b); }

/// Polar form of a quaternion with vanishing k part:
/// q = amplitude * exp(2 pi e_eta phase), e_eta = i cos(eta) + j sin(eta).
struct QuaternionPolar {
    double amplitude = 0.0;
    double eta = 0.0;    ///< radians in (-pi/2, pi/2]
    double phase = 0.0;  ///< cycles in (-1/2, 1/2]
    bool eta_degenerate = false;  ///< true when the i/j part vanishes; eta is then reported as 0
};

/// Fold an angle into (-pi/2, pi/2] (orientation is defined modulo pi).
inline double fold_half_pi(double angle) {
    double a = std::remainder(angle, kPi);  // [-pi/2, pi/2]
    if (a <= -kPi / 2) a += kPi;
    return a;
}

/// Fold a phase in cycles into (-1/2, 1/2].
inline double fold_cycles(double cycles) {
    double c = std::remainder(cycles, 1.0);  // [-1/2, 1/2]
    if (c <= -0.5) c += 1.0;
    return c;
}

/// amplitude * exp(2 pi e_eta phase)
inline Quaternion quat_exp(double amplitude, double eta, double phase) {
    const double c = std::cos(kTwoPi * phase);
    const double s = std::sin(kTwoPi * phase);
    return {amplitude * c, amplitude * s * std::cos(eta), amplitude * s * std::sin(eta), 0.0};
}

/// Inverse of quat_exp on its domain. The sign of the phase follows the
/// i-component of q (the j-component when eta sits on pi/2).
inline QuaternionPolar quat_polar(const Quaternion& q, double k_tolerance = 1e-12) {
    const double amplitude = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y);
    if (std::abs(q.z) > k_tolerance * std::max(1.0, amplitude)) {
        throw Error(ErrorKind::NonMonogenicQuaternion, "mathcore", "k component is not zero");
    }
    if (amplitude == 0.0) {
        throw Error(ErrorKind::ZeroQuaternion, "mathcore", "cannot take the polar form of zero");
    }
    QuaternionPolar out;
    out.amplitude = amplitude;
    const double rho = std::hypot(q.x, q.y);
    if (rho == 0.0) {
        out.eta = 0.0;
        out.eta_degenerate = true;
        out.phase = fold_cycles(std::atan2(0.0, q.w) / kTwoPi);
        return out;
    }
    out.eta = fold_half_pi(std::atan2(q.y, q.x));
    const double along = q.x * std::cos(out.eta) + q.y * std::sin(out.eta);
    const double signed_rho = along < 0.0 ? -rho : rho;
    out.phase = fold_cycles(std::atan2(signed_rho, q.w) / kTwoPi);
    return out;
}

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// Generalized Laguerre polynomial L_n^c(s) by upward three-term recurrence.
inline double laguerre(int n, double c, double s) {
    if (n < 0) throw Error(ErrorKind::Domain, "mathcore", "laguerre degree must be >= 0");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 1.0 + c - s;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + c - s) * cur - (k + c) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace detail {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
inline double beta_continued_fraction(double p, double q, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = p + q;
    const double qap = p + 1.0;
    const double qam = p - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 2000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (q - m) * x / ((qam + m2) * (p + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(p + m) * (qab + m) * x / ((p + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(p, q).
inline double reg_inc_beta(double p, double q, double x) {
    if (!(p > 0.0) || !(q > 0.0) || !(x >= 0.0 && x <= 1.0)) {
        throw Error(ErrorKind::Domain, "mathcore", "reg_inc_beta requires p>0, q>0, x in [0,1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(p + q) - std::lgamma(p) - std::lgamma(q) + p * std::log(x) +
                             q * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (p + 1.0) / (p + q + 2.0)) {
        return front * detail::beta_continued_fraction(p, q, x) / p;
    }
    return 1.0 - front * detail::beta_continued_fraction(q, p, 1.0 - x) / q;
}

namespace detail {

// J_nu(z) = (1/2pi) * integral over a full period of cos(nu t - z sin t).
// The integrand is periodic and entire, so the trapezoidal rule converges
// geometrically once the node count exceeds z by a margin.
inline double bessel_trapezoid(int nu, double z) {
    const int nodes = 64 + 2 * static_cast<int>(std::ceil(z));
    double sum = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const double t = kTwoPi * k / nodes;
        sum += std::cos(nu * t - z * std::sin(t));
    }
    return sum / nodes;
}

// Hankel asymptotic expansion, accurate to machine precision for z >= 30.
inline double bessel_asymptotic(int nu, double z) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    const double inv8z = 1.0 / (8.0 * z);
    for (int k = 1; k <= 30; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) * inv8z / k;
        if (k % 2 == 1) {
            q += (k % 4 == 1 ? 1.0 : -1.0) * term;
        } else {
            p += (k % 4 == 2 ? -1.0 : 1.0) * term;
        }
        if (std::abs(term) < 1e-17) break;
    }
    const double chi = z - (0.5 * nu + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * z)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace detail

/// Bessel function of the first kind, order 0.
inline double bessel_j0(double z) {
    z = std::abs(z);
    if (z < 30.0) return detail::bessel_trapezoid(0, z);
    return detail::bessel_asymptotic(0, z);
}

/// Bessel function of the first kind, order 1.
inline double bessel_j1(double z) {
    const double sign = z < 0.0 ? -1.0 : 1.0;
    z = std::abs(z);
    if (z < 30.0) return sign * detail::bessel_trapezoid(1, z);
    return sign * detail::bessel_asymptotic(1, z);
}

}  // namespace monomorse
