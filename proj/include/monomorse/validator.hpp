#pragma once

// Numerical checks of the radial localisation operator: kernel, operator
// application by quadrature, eigenrelation residuals and the calibration
// constant of the resolution of identity.
//
// Spectra here are functions of angular radial frequency omega.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "monomorse/errors.hpp"
#include "monomorse/mathcore.hpp"
#include "monomorse/parallel.hpp"
#include "monomorse/quadrature.hpp"
#include "monomorse/wavelets.hpp"

namespace monomorse {

/// Region a^2 + b^2 + 1 <= 2 a C, b > 0.
struct RegionParams {
    double C = 1.0;

    double half_width() const { return std::sqrt(std::max(0.0, C * C - 1.0)); }
    double a_lo() const { return C - half_width(); }
    double a_hi() const { return C + half_width(); }
    bool empty() const { return !(C > 1.0); }
    /// Upper edge of b at scale a (zero outside the a range).
    double b_max(double a) const { return std::sqrt(std::max(0.0, 2.0 * a * C - a * a - 1.0)); }
};

/// Radial Morse profile V(omega) = K omega^beta exp(-omega^gamma).
struct MorseProfile {
    double beta;
    double gamma;

    MorseProfile(double beta_, double gamma_) : beta(beta_), gamma(gamma_) {
        if (!(beta > 0.5) || !(gamma >= 1.0)) {
            throw Error(ErrorKind::Domain, "validator", "require beta > 1/2 and gamma >= 1");
        }
    }

    double r() const { return (2.0 * beta + 1.0) / gamma; }
    double K() const {
        return std::exp((0.5 * r() + 0.5) * std::log(2.0) + 0.5 * std::log(kPi * gamma) - 0.5 * std::lgamma(r()));
    }
    double operator()(double omega) const {
        if (omega <= 0.0) return 0.0;
        return K() * std::exp(beta * std::log(omega) - std::pow(omega, gamma));
    }
    /// C_o = (r - 1) / (8 pi^2)
    double c_o() const { return (r() - 1.0) / (8.0 * kPi * kPi); }
};

inline double kappa2_kernel(double omega1, double omega2, double a, double b, double beta, double gamma) {
    const MorseProfile V(beta, gamma);
    if (!(omega1 > 0.0) || !(omega2 > 0.0) || !(a > 0.0)) {
        throw Error(ErrorKind::Domain, "validator", "kernel arguments must be positive");
    }
    const double s = std::pow(a, 1.0 / gamma);
    return 2.0 * s * V(s * omega1) * std::sqrt(omega2 / omega1) * V(s * omega2) *
           std::cos((std::pow(omega1, gamma) - std::pow(omega2, gamma)) * b);
}

/// Radial spectrum sampled on a uniform omega grid.
struct RadialSpectrum {
    double omega0 = 0.0;
    double step = 1.0;
    std::vector<double> values;

    double omega(std::size_t i) const { return omega0 + step * static_cast<double>(i); }
};

struct OperatorOptions {
    int t_order = 16;          ///< Gauss-Legendre order per panel of the scale integral
    double omega_max = 0.0;    ///< upper omega_2 limit; 0 selects it from the profile and G
    int omega_panels = 48;     ///< 16-point Gauss-Legendre panels for the omega_2 integral
    double max_rel_error = 1e-4;
    unsigned threads = 0;
};

namespace detail {

// omega beyond which V(a omega^(1/gamma)) falls below `rel` of its peak, for scale a.
inline double profile_top(const MorseProfile& V, double a, double rel) {
    const double xpeak = std::pow(V.beta / V.gamma, 1.0 / V.gamma);
    const double logpeak = V.beta * std::log(xpeak) - std::pow(xpeak, V.gamma);
    double x = xpeak;
    while (V.beta * std::log(x) - std::pow(x, V.gamma) - logpeak > std::log(rel)) x *= 1.05;
    return x / std::pow(a, 1.0 / V.gamma);
}

// omega beyond which |G| stays below `rel` of its maximum on [0, limit].
inline double spectrum_top(const std::function<double(double)>& G, double limit, double rel) {
    constexpr int grid = 4096;
    std::vector<double> v(grid + 1);
    double peak = 0.0;
    for (int i = 1; i <= grid; ++i) {
        v[i] = std::abs(G(limit * i / grid));
        peak = std::max(peak, v[i]);
    }
    if (peak == 0.0) return 0.0;
    int last = 1;
    for (int i = 1; i <= grid; ++i) {
        if (v[i] >= rel * peak) last = i;
    }
    return limit * std::min(grid, last + 1) / grid;
}

// Scale/translation part of the operator with the b integral done in closed form:
// int_D 2 a^(1/g) V(a^(1/g) w1) V(a^(1/g) w2) cos(d b) da/a^2 db, d = w1^g - w2^g.
// The map a = C - h cos t, t in [0, pi], makes b_max = h sin t.
inline double region_kernel(const MorseProfile& V, const RegionParams& region, double w1, double w2, int order) {
    const double h = region.half_width();
    const double u1 = std::pow(w1, V.gamma);
    const double u2 = std::pow(w2, V.gamma);
    const double d = u1 - u2;
    const double r = V.r();
    const double K2 = V.K() * V.K();
    // V(s w1) V(s w2) 2 s / a^2 = 2 K^2 (w1 w2)^beta a^(r-2) exp(-a (u1 + u2))
    const double front = 2.0 * K2 * std::exp(V.beta * (std::log(w1) + std::log(w2)));
    const double sum = u1 + u2;
    // contributions beyond a_cut are below e^-50 of the peak of a^(r-2) e^(-a sum)
    const double a_cut = (std::max(r - 2.0, 0.0) + 50.0 + 5.0 * std::max(r, 1.0)) / sum;
    double t_hi = kPi;
    if (region.a_lo() + 2.0 * h > a_cut) {
        const double c = std::clamp((region.C - a_cut) / h, -1.0, 1.0);
        t_hi = std::acos(c);
    }
    if (t_hi <= 0.0) return 0.0;
    // total variation of the phase d h sin t over [0, t_hi]
    const double phase_span = std::abs(d) * h * (t_hi > kPi / 2 ? 2.0 - std::sin(t_hi) : std::sin(t_hi));
    const int panels = std::clamp(2 + static_cast<int>(std::ceil(phase_span / kPi)), 2, 20000);
    auto f = [&](double t) {
        const double a = region.C - h * std::cos(t);
        if (a <= 0.0) return 0.0;
        const double bm = h * std::sin(t);
        const double db = d == 0.0 ? bm : std::sin(d * bm) / d;
        return h * std::sin(t) * std::exp((r - 2.0) * std::log(a) - a * sum) * db;
    };
    return front * quad::composite(f, 0.0, t_hi, panels, order);
}

}  // namespace detail

/// (P_D G)(omega1) for a callable G at each requested omega1.
inline std::vector<double> operator_apply(const std::function<double(double)>& G, const std::vector<double>& omega1,
                                          const RegionParams& region, double beta, double gamma,
                                          const OperatorOptions& options = {}) {
    const MorseProfile V(beta, gamma);
    if (!(V.r() > 1.0)) throw Error(ErrorKind::Domain, "validator", "require r > 1");
    if (!(region.C >= 1.0)) throw Error(ErrorKind::Domain, "validator", "require C >= 1");
    std::vector<double> out(omega1.size(), 0.0);
    if (region.empty()) return out;
    double top = options.omega_max;
    if (top <= 0.0) {
        top = detail::profile_top(V, region.a_lo(), 1e-10);
        top = std::min(top, detail::spectrum_top(G, top, 1e-12));
    }
    if (top <= 0.0) return out;
    double g_scale = 0.0;
    for (int i = 1; i <= 512; ++i) g_scale = std::max(g_scale, std::abs(G(top * i / 512)));
    if (g_scale == 0.0) return out;
    const double c_o = V.c_o();
    parallel_for(
        omega1.size(),
        [&](std::size_t i) {
            const double w1 = omega1[i];
            if (!(w1 > 0.0)) return;
            auto integrand = [&](double w2) {
                if (w2 <= 0.0) return 0.0;
                const double g = G(w2);
                if (g == 0.0) return 0.0;
                return std::sqrt(w2 / w1) * g * detail::region_kernel(V, region, w1, w2, options.t_order);
            };
            // two composite resolutions; their difference is the error estimate
            const double coarse = quad::composite(integrand, 0.0, top, options.omega_panels / 2, 16);
            const double value = quad::composite(integrand, 0.0, top, options.omega_panels, 16);
            const double error = std::abs(value - coarse);
            // error judged against the operator's natural size, C_o-scaled kernel times |G|
            if (error > options.max_rel_error * std::max(std::abs(value), 1e-8 * g_scale / c_o)) {
                throw Error(ErrorKind::QuadratureFailure, "validator", "omega_2 integral did not converge");
            }
            out[i] = c_o * value;
        },
        options.threads);
    return out;
}

/// Same operator for uniformly sampled G (cubic B-spline between samples, zero outside).
inline RadialSpectrum operator_apply(const RadialSpectrum& G, const RegionParams& region, double beta, double gamma,
                                     const OperatorOptions& options = {}) {
    if (G.values.size() < 4) throw Error(ErrorKind::Domain, "validator", "need at least four spectrum samples");
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline(G.values.begin(), G.values.end(), G.omega0,
                                                                      G.step);
    const double hi = G.omega(G.values.size() - 1);
    std::function<double(double)> g = [&](double w) { return w < G.omega0 || w > hi ? 0.0 : spline(w); };
    std::vector<double> w1(G.values.size());
    for (std::size_t i = 0; i < w1.size(); ++i) w1[i] = G.omega(i);
    OperatorOptions o = options;
    if (o.omega_max <= 0.0) o.omega_max = hi;
    RadialSpectrum out = G;
    out.values = operator_apply(g, w1, region, beta, gamma, o);
    return out;
}

/// Radial eigenfunction G_n(omega) = omega^(beta - 1/2) exp(-omega^gamma) L_n^(r-1)(2 omega^gamma).
inline double radial_eigenfunction(int n, double beta, double gamma, double omega) {
    if (omega <= 0.0) return 0.0;
    const double r = (2.0 * beta + 1.0) / gamma;
    const double u = std::pow(omega, gamma);
    return std::exp((beta - 0.5) * std::log(omega) - u) * laguerre(n, r - 1.0, 2.0 * u);
}

struct IdentityCheck {
    double ratio = 0.0;         ///< numeric / analytic at the full cut-off B
    double ratio_half_b = 0.0;  ///< same at B / 2, shows the convergence in B
    double cutoff_b = 0.0;
    bool degenerate = false;    ///< r - 1 too small for the constant to be meaningful
};

/// Unbounded-region operator with C_o = 1 applied to a test spectrum, divided by
/// 8 pi^2 / (r - 1) G(omega1). The b range is cut at B; the a integral is numeric.
inline IdentityCheck identity_constant_check(double beta, double gamma,
                                             const std::function<double(double)>& G = {}, double omega1 = 0.0,
                                             double cutoff_b = 200.0) {
    const MorseProfile V(beta, gamma);
    const double r = V.r();
    if (!(r > 1.0)) throw Error(ErrorKind::Domain, "validator", "require r > 1");
    IdentityCheck out;
    out.cutoff_b = cutoff_b;
    if (r - 1.0 < 1e-6) {
        out.degenerate = true;
        return out;
    }
    std::function<double(double)> g = G;
    if (!g) g = [=](double w) { return radial_eigenfunction(0, beta, gamma, w); };
    // the test point defaults to the peak of V
    const double w1 = omega1 > 0.0 ? omega1 : std::pow(beta / gamma, 1.0 / gamma);
    const double u1 = std::pow(w1, gamma);
    const double K2 = V.K() * V.K();

    // int_0^inf 2 s V(s w1) V(s w2) da / a^2 with s = a^(1/gamma), by Gauss-Legendre in log a
    auto scale_integral = [&](double w2) {
        const double sum = u1 + std::pow(w2, gamma);
        const double lo = std::log(1e-7 / sum);
        const double hi = std::log((80.0 + 4.0 * r) / sum);
        const double front = 2.0 * K2 * std::exp(beta * (std::log(w1) + std::log(w2)));
        return front * quad::composite(
                           [&](double t) {
                               const double a = std::exp(t);
                               return std::exp((r - 1.0) * t - a * sum);
                           },
                           lo, hi, 8, 24);
    };
    // substitute u = omega^gamma so the Dirichlet kernel sin((u1 - u) B) / (u1 - u) is uniform
    const double u_top = std::max(4.0 * u1, std::pow(detail::spectrum_top(g, 50.0, 1e-14), gamma));
    auto at_cutoff = [&](double B) {
        auto f = [&](double u) {
            if (u <= 0.0) return 0.0;
            const double w2 = std::pow(u, 1.0 / gamma);
            const double dw = w2 / (gamma * u);
            const double d = u1 - u;
            const double dirichlet = std::abs(d) < 1e-14 ? B : std::sin(d * B) / d;
            return std::sqrt(w2 / w1) * g(w2) * scale_integral(w2) * dirichlet * dw;
        };
        const int panels = static_cast<int>(std::ceil(u_top / (kPi / (2.0 * B))));
        return quad::composite(f, 0.0, u_top, panels, 16);
    };
    const double analytic = 8.0 * kPi * kPi / (r - 1.0) * g(w1);
    if (analytic == 0.0) throw Error(ErrorKind::Domain, "validator", "test spectrum vanishes at the test point");
    out.ratio = at_cutoff(cutoff_b) / analytic;
    out.ratio_half_b = at_cutoff(0.5 * cutoff_b) / analytic;
    return out;
}

struct OperatorCheckReport {
    int n = 0;
    double C = 1.0;
    double lambda_formula = 0.0;
    double lambda_numeric = 0.0;  ///< Rayleigh quotient <P G, G> / <G, G> in omega d omega
    double residual = 0.0;        ///< ||P G - lambda G|| / ||G|| in omega d omega
    double c0_check = 0.0;        ///< identity_constant_check ratio (0 when not requested)
};

/// Residual of P_D G_n = lambda_n G_n with G_n the radial eigenfunction of the family.
inline OperatorCheckReport eigenrelation_residual(int n, const RegionParams& region, const MorseFamily& family,
                                                  bool with_identity_check = false, int points = 128,
                                                  const OperatorOptions& options = {}) {
    family.check(n);
    const double beta = family.beta();
    const double gamma = family.gamma();
    OperatorCheckReport rep;
    rep.n = n;
    rep.C = region.C;
    rep.lambda_formula = eigenvalue(n, (2.0 * beta + 1.0) / gamma, region.C).lambda;

    std::function<double(double)> G = [=](double w) { return radial_eigenfunction(n, beta, gamma, w); };
    const double top = detail::spectrum_top(G, 50.0, 1e-12);
    const quad::Rule& rule = quad::gauss_legendre(points);
    std::vector<double> w(points);
    std::vector<double> weight(points);
    for (int i = 0; i < points; ++i) {
        w[i] = 0.5 * top * (rule.nodes[i] + 1.0);
        weight[i] = 0.5 * top * rule.weights[i] * w[i];
    }
    OperatorOptions o = options;
    if (o.omega_max <= 0.0) o.omega_max = top;
    const std::vector<double> pg = operator_apply(G, w, region, beta, gamma, o);
    double gg = 0.0;
    double pgg = 0.0;
    double rr = 0.0;
    for (int i = 0; i < points; ++i) {
        const double g = G(w[i]);
        gg += weight[i] * g * g;
        pgg += weight[i] * pg[i] * g;
        const double diff = pg[i] - rep.lambda_formula * g;
        rr += weight[i] * diff * diff;
    }
    rep.lambda_numeric = pgg / gg;
    rep.residual = std::sqrt(rr / gg);
    if (with_identity_check) rep.c0_check = identity_constant_check(beta, gamma).ratio;
    return rep;
}

}  // namespace monomorse
