#pragma once

// Multi-wavelet averages and the orientation, phase and amplitude estimators
// built on them; ridge detection along scale and predicted variances.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <tuple>
#include <vector>

#include "monomorse/errors.hpp"
#include "monomorse/mathcore.hpp"
#include "monomorse/transform.hpp"
#include "monomorse/wavelets.hpp"

namespace monomorse {

/// Averages over n of coefficients, scalograms and the covariations used by the estimators.
struct AveragedPoint {
    double we = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
    double se = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double splus = 0.0;
    double c12 = 0.0;
    double ce1 = 0.0;
    double ce2 = 0.0;
};

struct AveragedPlanes {
    Plane we, w1, w2;
    Plane se, s1, s2, splus;
    Plane c12, ce1, ce2;
};

struct AveragedCoefficients {
    int N = 0;
    std::vector<double> scales;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double d1 = 1.0;
    double d2 = 1.0;
    std::vector<AveragedPlanes> per_scale;

    AveragedPoint at(const Site& site) const {
        const AveragedPlanes& p = per_scale.at(site.scale);
        const std::size_t s1 = site.s1;
        const std::size_t s2 = site.s2;
        return {p.we(s1, s2), p.w1(s1, s2), p.w2(s1, s2),  p.se(s1, s2),  p.s1(s1, s2),
                p.s2(s1, s2), p.splus(s1, s2), p.c12(s1, s2), p.ce1(s1, s2), p.ce2(s1, s2)};
    }
};

/// Average from a list of per-wavelet triples at one point.
inline AveragedPoint average(const std::vector<CoefficientTriple>& triples) {
    if (triples.empty()) throw Error(ErrorKind::Domain, "estimators", "need at least one wavelet");
    AveragedPoint p;
    for (const auto& t : triples) {
        p.we += t.e;
        p.w1 += t.r1;
        p.w2 += t.r2;
        p.se += t.e * t.e;
        p.s1 += t.r1 * t.r1;
        p.s2 += t.r2 * t.r2;
        p.c12 += t.r1 * t.r2;
        p.ce1 += t.e * t.r1;
        p.ce2 += t.e * t.r2;
    }
    const double inv = 1.0 / static_cast<double>(triples.size());
    for (double* v : {&p.we, &p.w1, &p.w2, &p.se, &p.s1, &p.s2, &p.c12, &p.ce1, &p.ce2}) *v *= inv;
    p.splus = p.se + p.s1 + p.s2;
    return p;
}

/// Averages over the first `count` wavelets (all of them when count <= 0).
inline AveragedCoefficients average(const CoefficientSet& coeffs, int count = 0) {
    const int N = count <= 0 ? coeffs.count() : count;
    if (N > coeffs.count()) throw Error(ErrorKind::Index, "estimators", "more wavelets requested than computed");
    AveragedCoefficients out;
    out.N = N;
    out.scales = coeffs.scales;
    out.n1 = coeffs.n1;
    out.n2 = coeffs.n2;
    out.d1 = coeffs.d1;
    out.d2 = coeffs.d2;
    const double inv = 1.0 / N;
    for (std::size_t k = 0; k < coeffs.scales.size(); ++k) {
        const Plane zero(coeffs.n1, coeffs.n2);
        AveragedPlanes p{zero, zero, zero, zero, zero, zero, zero, zero, zero, zero};
        for (int n = 0; n < N; ++n) {
            const PlaneTriple& t = coeffs.at(n, k);
            for (std::size_t i = 0; i < zero.v.size(); ++i) {
                const double e = t.e.v[i];
                const double r1 = t.r1.v[i];
                const double r2 = t.r2.v[i];
                p.we.v[i] += inv * e;
                p.w1.v[i] += inv * r1;
                p.w2.v[i] += inv * r2;
                p.se.v[i] += inv * e * e;
                p.s1.v[i] += inv * r1 * r1;
                p.s2.v[i] += inv * r2 * r2;
                p.c12.v[i] += inv * r1 * r2;
                p.ce1.v[i] += inv * e * r1;
                p.ce2.v[i] += inv * e * r2;
            }
        }
        for (std::size_t i = 0; i < zero.v.size(); ++i) p.splus.v[i] = p.se.v[i] + p.s1.v[i] + p.s2.v[i];
        out.per_scale.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Orientation
// ---------------------------------------------------------------------------

/// Rotation maximising the averaged second Riesz energy. Equal Riesz energies give 3pi/4
/// (pi/4 when the covariation is negative).
inline double theta_max_est(const AveragedPoint& p, double tolerance = 1e-14) {
    const double total = p.s1 + p.s2;
    if (!(total > 0.0) || total <= tolerance * p.splus) {
        throw Error(ErrorKind::DegenerateOrientation, "estimators", "Riesz energy vanishes");
    }
    if (std::abs(p.s1 - p.s2) <= 1e-9 * std::max(p.s1, p.s2)) return p.c12 >= 0.0 ? 3.0 * kPi / 4.0 : kPi / 4.0;
    return fold_half_pi(0.5 * std::atan2(-2.0 * p.c12, p.s2 - p.s1));
}

inline double theta_max_est(const AveragedCoefficients& avg, const CoefficientSet& coeffs, const Xi& at) {
    return theta_max_est(avg.at(coeffs.locate(at)));
}

/// nu = atan(wbar^(2) / wbar^(1)) in (-pi/2, pi/2], measured relative to the rotation theta of `at`.
inline double orientation_est(const AveragedPoint& p, double theta = 0.0, double tolerance = 1e-14) {
    const double total = p.s1 + p.s2;
    if (!(total > 0.0) || total <= tolerance * p.splus) {
        throw Error(ErrorKind::DegenerateOrientation, "estimators", "Riesz energy vanishes");
    }
    const CoefficientTriple r = rotate_coeffs(CoefficientTriple{p.we, p.w1, p.w2}, theta);
    if (r.r1 == 0.0 && r.r2 == 0.0) return 0.0;
    return fold_half_pi(std::atan2(r.r2, r.r1));
}

inline double orientation_est(const AveragedCoefficients& avg, const CoefficientSet& coeffs, const Xi& at) {
    return orientation_est(avg.at(coeffs.locate(at)), at.theta);
}

// ---------------------------------------------------------------------------
// Phase and amplitude
// ---------------------------------------------------------------------------

/// Phase of the single-wavelet quaternion w^(e) - i w^(1) - j w^(2), in cycles.
inline double phase_est(const CoefficientTriple& t, double tolerance = 0.0) {
    const double splus = t.e * t.e + t.r1 * t.r1 + t.r2 * t.r2;
    if (!(splus > tolerance)) throw Error(ErrorKind::ZeroEnergy, "estimators", "no energy at this point");
    return quat_polar({t.e, -t.r1, -t.r2, 0.0}).phase;
}

inline double phase_est(const CoefficientSet& coeffs, const Xi& at) {
    const Site site = coeffs.locate(at);
    return phase_est(rotate_coeffs(coeffs.at(0, site.scale).at(site.s1, site.s2), at.theta));
}

/// Averaged wavelet power gain mean_n Psi_n(f)^2 over the first N wavelets.
inline double mean_gain(const MorseFamily& family, int N, double f) {
    double g = 0.0;
    for (int n = 0; n < N; ++n) g += family.psi(n, f) * family.psi(n, f);
    return g / N;
}

/// Amplitude from the averaged scalogram: a_hat^2 = Sbar^(+) / (a^2 mean_n Psi_n^2(a local_freq)).
/// Throws OffRidge when the gain falls below `min_relative_gain` of the family's peak gain.
inline double amplitude_est(const AveragedPoint& p, double a, double local_freq, const MorseFamily& family, int N,
                            double min_relative_gain = 0.1) {
    double peak = 0.0;
    for (int n = 0; n < N; ++n) peak = std::max(peak, std::pow(family.psi(n, family.f_max(n)), 2));
    const double gain = mean_gain(family, N, a * local_freq);
    if (!(gain >= min_relative_gain * peak)) {
        throw Error(ErrorKind::OffRidge, "estimators", "wavelet gain too small at this scale and frequency");
    }
    return std::sqrt(p.splus / (a * a * gain));
}

inline double amplitude_est(const AveragedCoefficients& avg, const CoefficientSet& coeffs, const Xi& at,
                            double local_freq) {
    return amplitude_est(avg.at(coeffs.locate(at)), at.a, local_freq, coeffs.family, avg.N);
}

// ---------------------------------------------------------------------------
// Ridges
// ---------------------------------------------------------------------------

struct RidgeSample {
    double b1 = 0.0;
    double b2 = 0.0;
    double a = 0.0;
    double nu = 0.0;
    double phase = 0.0;
    double amplitude = 0.0;
    double s_plus = 0.0;  ///< refined peak of S^(+)_0 / a^2
    std::size_t s1 = 0;
    std::size_t s2 = 0;
    std::size_t scale = 0;  ///< nearest ladder slot
    bool orientation_valid = true;
};

struct RidgeOptions {
    double min_relative_energy = 1e-3;  ///< ignore maxima below this fraction of the global maximum
    int wavelets = 0;                   ///< wavelets averaged for nu; 0 uses all
    double min_riesz_fraction = 1e-2;   ///< nu is flagged invalid when (S1 + S2) / S+ falls below this
};

/// Local maxima along scale of S^(+)_0 / a^2, refined by a parabola in (log a, log E).
inline std::vector<RidgeSample> ridge_extract(const CoefficientSet& coeffs, const RidgeOptions& options = {}) {
    const std::size_t K = coeffs.scales.size();
    if (K < 3) throw Error(ErrorKind::Domain, "estimators", "ridge extraction needs at least three scales");
    const MorseFamily& family = coeffs.family;
    const AveragedCoefficients avg = average(coeffs, options.wavelets);
    const std::size_t npix = coeffs.n1 * coeffs.n2;

    std::vector<Plane> energy;
    double global = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const PlaneTriple& t = coeffs.at(0, k);
        Plane e(coeffs.n1, coeffs.n2);
        const double a2 = coeffs.scales[k] * coeffs.scales[k];
        for (std::size_t i = 0; i < npix; ++i) {
            e.v[i] = (t.e.v[i] * t.e.v[i] + t.r1.v[i] * t.r1.v[i] + t.r2.v[i] * t.r2.v[i]) / a2;
            global = std::max(global, e.v[i]);
        }
        energy.push_back(std::move(e));
    }
    std::vector<RidgeSample> out;
    if (!(global > 0.0)) return out;
    const double floor = options.min_relative_energy * global;
    const double peak_gain = std::pow(family.psi(0, family.f_max(0)), 2);

    for (std::size_t i = 0; i < npix; ++i) {
        for (std::size_t k = 1; k + 1 < K; ++k) {
            const double e0 = energy[k - 1].v[i];
            const double e1 = energy[k].v[i];
            const double e2 = energy[k + 1].v[i];
            if (!(e1 > e0 && e1 >= e2 && e1 > floor)) continue;
            const double x0 = std::log(coeffs.scales[k - 1]);
            const double x1 = std::log(coeffs.scales[k]);
            const double x2 = std::log(coeffs.scales[k + 1]);
            const double y0 = std::log(e0);
            const double y1 = std::log(e1);
            const double y2 = std::log(e2);
            double xv = x1;
            double yv = y1;
            if (e0 > 0.0 && e2 > 0.0) {
                // Lagrange parabola through three points; vertex clamped to the bracket
                const double d01 = (y1 - y0) / (x1 - x0);
                const double d12 = (y2 - y1) / (x2 - x1);
                const double c2 = (d12 - d01) / (x2 - x0);
                if (c2 < 0.0) {
                    xv = std::clamp(0.5 * (x0 + x1) - d01 / (2.0 * c2), x0, x2);
                    yv = y0 + d01 * (xv - x0) + c2 * (xv - x0) * (xv - x1);
                }
            }
            RidgeSample r;
            r.s1 = i % coeffs.n1;
            r.s2 = i / coeffs.n1;
            r.b1 = static_cast<double>(r.s1) * coeffs.d1;
            r.b2 = static_cast<double>(r.s2) * coeffs.d2;
            r.a = std::exp(xv);
            r.s_plus = std::exp(yv);
            r.scale = k;
            if (std::abs(std::log(coeffs.scales[k + 1]) - xv) < std::abs(x1 - xv)) r.scale = k + 1;
            if (std::abs(x0 - xv) < std::abs(x1 - xv)) r.scale = k - 1;
            const Site site{r.scale, r.s1, r.s2};
            try {
                const AveragedPoint p = avg.at(site);
                r.nu = orientation_est(p);
                r.orientation_valid = p.s1 + p.s2 >= options.min_riesz_fraction * p.splus;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::DegenerateOrientation) throw;
                r.orientation_valid = false;
            }
            r.phase = phase_est(coeffs.at(0, r.scale).at(r.s1, r.s2));
            r.amplitude = std::sqrt(r.s_plus / peak_gain);
            out.push_back(r);
        }
    }
    return out;
}

/// Groups ridge samples into sheets: 4-neighbours in b whose scales differ by at most
/// `max_log_scale_step` in log a and whose energies lie within `max_db` decibels.
inline std::vector<std::vector<std::size_t>> link_ridges(const std::vector<RidgeSample>& samples,
                                                         double max_log_scale_step = 0.1, double max_db = 3.0) {
    std::vector<std::size_t> parent(samples.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return std::tie(samples[l].s2, samples[l].s1) < std::tie(samples[r].s2, samples[r].s1);
    });
    auto compatible = [&](const RidgeSample& p, const RidgeSample& q) {
        if (std::abs(std::log(p.a / q.a)) > max_log_scale_step) return false;
        return std::abs(10.0 * std::log10(p.s_plus / q.s_plus)) <= max_db;
    };
    // samples sorted by (s2, s1): neighbours sit in a short window ahead
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const RidgeSample& p = samples[order[oi]];
        for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
            const RidgeSample& q = samples[order[oj]];
            if (q.s2 > p.s2 + 1) break;
            const bool right = q.s2 == p.s2 && q.s1 == p.s1 + 1;
            const bool below = q.s2 == p.s2 + 1 && q.s1 == p.s1;
            if ((right || below) && compatible(p, q)) parent[find(order[oi])] = find(order[oj]);
        }
    }
    std::vector<std::vector<std::size_t>> sheets;
    std::vector<long> slot(samples.size(), -1);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::size_t root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<long>(sheets.size());
            sheets.emplace_back();
        }
        sheets[static_cast<std::size_t>(slot[root])].push_back(i);
    }
    std::sort(sheets.begin(), sheets.end(), [](const auto& l, const auto& r) { return l.size() > r.size(); });
    return sheets;
}

// ---------------------------------------------------------------------------
// Predicted variances (white noise, unit sample spacing)
// ---------------------------------------------------------------------------

struct VariancePrediction {
    double var_theta_max = 0.0;
    double var_nu = 0.0;          ///< delta method with the averaged Riesz coefficients
    double var_nu_nominal = 0.0;  ///< sigma^2 / (2N)
    double var_phi = 0.0;         ///< cycles^2
    double sigma_eps = 0.0;
    int N = 0;
};

/// `avg` is the N-wavelet average at the point, `single` the n = 0 triple there.
inline VariancePrediction predict_variances(double sigma_eps, int N, const AveragedPoint& avg,
                                            const CoefficientTriple& single) {
    if (N < 1) throw Error(ErrorKind::Domain, "estimators", "N must be positive");
    const double s2 = sigma_eps * sigma_eps;
    VariancePrediction v;
    v.sigma_eps = sigma_eps;
    v.N = N;
    const double spread = (avg.s1 - avg.s2) * (avg.s1 - avg.s2) + 4.0 * avg.c12 * avg.c12;
    v.var_theta_max = spread > 0.0 ? (s2 / N) * 0.5 * (avg.s1 + avg.s2) / spread
                                   : std::numeric_limits<double>::infinity();
    const double riesz = avg.w1 * avg.w1 + avg.w2 * avg.w2;
    v.var_nu = riesz > 0.0 ? s2 / (2.0 * N * riesz) : std::numeric_limits<double>::infinity();
    v.var_nu_nominal = s2 / (2.0 * N);
    const double splus = single.e * single.e + single.r1 * single.r1 + single.r2 * single.r2;
    if (splus > 0.0) {
        const double phi = phase_est(single);
        const double c = std::cos(kTwoPi * phi);
        v.var_phi = s2 * (1.0 - 0.5 * c * c) / (kTwoPi * kTwoPi * splus);
    } else {
        v.var_phi = std::numeric_limits<double>::infinity();
    }
    return v;
}

}  // namespace monomorse
