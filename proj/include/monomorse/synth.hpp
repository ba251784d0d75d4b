#pragma once

// Test images, white noise, and Monte-Carlo checks of the coefficient
// covariance under white Gaussian noise.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "monomorse/errors.hpp"
#include "monomorse/fft.hpp"
#include "monomorse/grid.hpp"
#include "monomorse/mathcore.hpp"
#include "monomorse/parallel.hpp"
#include "monomorse/transform.hpp"
#include "monomorse/wavelets.hpp"

namespace monomorse {

struct NoiseModel {
    double sigma_eps = 0.0;
    std::uint64_t seed = 0;
};

/// mt19937_64 with an explicit 53-bit uniform and Box-Muller normals, so streams are
/// reproducible across standard libraries. Stream k of seed s is seeded by seed_seq{s, k}.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        spare_ = radius * std::sin(kTwoPi * u2);
        has_spare_ = true;
        return radius * std::cos(kTwoPi * u2);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline void add_white_noise(ImageGrid& image, const NoiseModel& noise, std::uint64_t stream = 0) {
    if (!(noise.sigma_eps >= 0.0)) throw Error(ErrorKind::Domain, "synth", "noise level must be non-negative");
    if (noise.sigma_eps == 0.0) return;
    Rng rng(noise.seed, stream);
    for (double& v : image.data) v += noise.sigma_eps * rng.normal();
}

inline ImageGrid white_noise(std::size_t n1, std::size_t n2, const NoiseModel& noise, std::uint64_t stream = 0,
                             double d1 = 1.0, double d2 = 1.0) {
    ImageGrid image(n1, n2, d1, d2);
    add_white_noise(image, noise, stream);
    return image;
}

/// Component a(x) cos(2 pi phi(x)) with orientation field eta(x).
struct AmFmComponent {
    std::function<double(double, double)> amplitude;
    std::function<double(double, double)> phase;  ///< cycles
    std::function<double(double, double)> eta;    ///< radians

    double operator()(double x1, double x2) const { return amplitude(x1, x2) * std::cos(kTwoPi * phase(x1, x2)); }
};

inline ImageGrid sample(std::size_t n1, std::size_t n2, double d1, double d2,
                        const std::function<double(double, double)>& g) {
    ImageGrid image(n1, n2, d1, d2);
    for (std::size_t s2 = 0; s2 < n2; ++s2) {
        for (std::size_t s1 = 0; s1 < n1; ++s1) image(s1, s2) = g(s1 * d1, s2 * d2);
    }
    return image;
}

/// Two point and two line singularities in white noise of standard deviation sigma1.
/// Distances below half a sample are clipped to half a sample.
inline ImageGrid gen_signal1(std::size_t n, double sigma1 = 0.2, std::uint64_t seed = 0, double d = 1.0) {
    if (n < 8) throw Error(ErrorKind::Domain, "synth", "grid must be at least 8x8");
    const double N = static_cast<double>(n);
    const double clip = 0.5 * d;
    auto point = [&](double weight, double c, double x1, double x2) {
        return weight / std::max(std::hypot(x1 - c, x2 - c), clip);
    };
    auto line = [&](double angle, double offset, double x1, double x2) {
        return 1.0 / std::max(std::abs(x1 * std::cos(angle) - x2 * std::sin(angle) - offset + 0.5), clip);
    };
    ImageGrid image = sample(n, n, d, d, [&](double x1, double x2) {
        return point(10.0, N / 4.0 + 0.5, x1, x2) + point(15.0, 45.0 * N / 64.0 + 0.5, x1, x2) +
               line(kPi / 3.0, 15.0 * N / 128.0, x1, x2) + line(kPi / 9.0, 45.0 * N / 64.0, x1, x2);
    });
    add_white_noise(image, {sigma1, seed});
    return image;
}

/// The two AM/FM/OM components of the second test signal. The first chirp uses its own
/// coordinate t1 along the spatially varying eta1.
inline std::array<AmFmComponent, 2> signal2_components(std::size_t n) {
    const double N = static_cast<double>(n);
    AmFmComponent c1;
    c1.eta = [N](double x1, double x2) { return -kPi / 4.0 + (x1 + x2 - 155.0) / (10.0 * N); };
    c1.amplitude = [N](double x1, double) { return x1 < N / 2.0 ? 1.2 : 0.0; };
    c1.phase = [N, eta = c1.eta](double x1, double x2) {
        const double e = eta(x1, x2);
        const double t = x1 * std::cos(e) + x2 * std::sin(e);
        return 0.087 * (t * t / (2.0 * N) + t);
    };
    AmFmComponent c2;
    c2.eta = [](double, double) { return kPi / 5.0; };
    c2.amplitude = [](double, double) { return 0.8; };
    c2.phase = [N](double x1, double x2) {
        const double t = x1 * std::cos(kPi / 5.0) + x2 * std::sin(kPi / 5.0);
        // 0.05 pi (...) radians
        return 0.025 * (t * t / (10.0 * N) + t);
    };
    return {c1, c2};
}

/// Sum of the two components plus white noise of standard deviation sigma.
inline ImageGrid gen_signal2(std::size_t n = 128, double sigma = 0.1, std::uint64_t seed = 0,
                             bool first = true, bool second = true) {
    if (n < 8) throw Error(ErrorKind::Domain, "synth", "grid must be at least 8x8");
    const auto comps = signal2_components(n);
    ImageGrid image = sample(n, n, 1.0, 1.0, [&](double x1, double x2) {
        return (first ? comps[0](x1, x2) : 0.0) + (second ? comps[1](x1, x2) : 0.0);
    });
    add_white_noise(image, {sigma, seed});
    return image;
}

/// amplitude cos(2 pi f0 x.n + theta_s), n = (cos eta, sin eta).
inline ImageGrid gen_plane_wave(std::size_t n1, std::size_t n2, double amplitude, double f0, double eta,
                                double theta_s, double d1 = 1.0, double d2 = 1.0) {
    if (f0 * std::max(d1, d2) >= 0.5) throw Error(ErrorKind::Alias, "synth", "f0 is at or above Nyquist");
    const double c = std::cos(eta);
    const double s = std::sin(eta);
    return sample(n1, n2, d1, d2, [&](double x1, double x2) {
        return amplitude * std::cos(kTwoPi * f0 * (x1 * c + x2 * s) + theta_s);
    });
}

// ---------------------------------------------------------------------------
// Covariance of coefficients under white noise
// ---------------------------------------------------------------------------

struct CovarianceReport {
    int N = 0;                                  ///< wavelets
    std::size_t replicates = 0;
    double sigma_eps = 0.0;
    double a = 0.0;
    double cell_area = 1.0;  ///< d1 d2; the limiting covariance is sigma^2 d1 d2 diag(1, 1/2, 1/2)
    std::size_t s1 = 0;
    std::size_t s2 = 0;
    std::vector<std::vector<double>> covariance;   ///< 3N x 3N, ordering (n, e/1/2)
    std::vector<std::vector<double>> correlation;  ///< 3N x 3N
    std::vector<std::array<double, 3>> diagonal_ratio;  ///< per n, Var / (sigma^2 d1 d2 (1, 1/2, 1/2))
    double max_within_n_correlation = 0.0;  ///< largest |rho| between components of one wavelet
    double max_cross_n_correlation = 0.0;   ///< largest |rho| between different wavelets
    double max_diagonal_error = 0.0;        ///< largest |ratio - 1|
};

namespace detail {

inline void finish_report(CovarianceReport& rep, const std::vector<std::vector<double>>& cov) {
    const std::size_t dim = cov.size();
    rep.covariance = cov;
    rep.correlation.assign(dim, std::vector<double>(dim, 0.0));
    const double s2 = rep.sigma_eps * rep.sigma_eps * rep.cell_area;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double denom = std::sqrt(cov[i][i] * cov[j][j]);
            rep.correlation[i][j] = denom > 0.0 ? cov[i][j] / denom : 0.0;
            if (i == j) continue;
            const double rho = std::abs(rep.correlation[i][j]);
            if (i / 3 == j / 3) {
                rep.max_within_n_correlation = std::max(rep.max_within_n_correlation, rho);
            } else {
                rep.max_cross_n_correlation = std::max(rep.max_cross_n_correlation, rho);
            }
        }
    }
    rep.diagonal_ratio.assign(static_cast<std::size_t>(rep.N), {});
    const std::array<double, 3> target{1.0, 0.5, 0.5};
    for (int n = 0; n < rep.N; ++n) {
        for (int c = 0; c < 3; ++c) {
            const std::size_t i = static_cast<std::size_t>(3 * n + c);
            rep.diagonal_ratio[n][c] = cov[i][i] / (s2 * target[c]);
            rep.max_diagonal_error = std::max(rep.max_diagonal_error, std::abs(rep.diagonal_ratio[n][c] - 1.0));
        }
    }
}

}  // namespace detail

struct McOptions {
    unsigned threads = 0;
    double scale = 0.0;  ///< analysis scale; 0 picks the geometric mean of the ladder
};

/// Empirical covariance of (w^(e), w^(1), w^(2)) for every n at the grid centre, one full
/// forward transform per replicate.
inline CovarianceReport mc_covariance(std::size_t n1, std::size_t n2, double d1, double d2, const MorseFamily& family,
                                      const ScaleLadder& ladder, const NoiseModel& noise, std::size_t replicates,
                                      const McOptions& options = {}) {
    if (ladder.scales.empty()) throw Error(ErrorKind::EmptyLadder, "synth", "ladder has no scales");
    if (replicates < 2) throw Error(ErrorKind::Domain, "synth", "need at least two replicates");
    const double nyquist = std::min(0.5 / d1, 0.5 / d2);
    for (double a : ladder.scales) {
        for (int n = 0; n < family.count(); ++n) {
            if (!(family.f_max(n) / a < nyquist)) {
                throw Error(ErrorKind::NyquistViolation, "synth", "peak frequency above Nyquist on this ladder");
            }
        }
    }
    double a = options.scale;
    if (a <= 0.0) a = std::sqrt(ladder.scales.front() * ladder.scales.back());
    const ScaleLadder single = explicit_ladder({a});
    const int N = family.count();
    const std::size_t dim = static_cast<std::size_t>(3 * N);
    const std::size_t c1 = n1 / 2;
    const std::size_t c2 = n2 / 2;

    std::vector<std::vector<double>> samples(replicates, std::vector<double>(dim));
    parallel_for(
        replicates,
        [&](std::size_t r) {
            ImageGrid image = white_noise(n1, n2, noise, r, d1, d2);
            const CoefficientSet cs = forward(image, family, single, {1, false});
            for (int n = 0; n < N; ++n) {
                const CoefficientTriple t = cs.at(n, 0).at(c1, c2);
                samples[r][3 * n] = t.e;
                samples[r][3 * n + 1] = t.r1;
                samples[r][3 * n + 2] = t.r2;
            }
        },
        options.threads);

    std::vector<double> mean(dim, 0.0);
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < dim; ++i) mean[i] += s[i];
    }
    for (double& m : mean) m /= static_cast<double>(replicates);
    std::vector<std::vector<double>> cov(dim, std::vector<double>(dim, 0.0));
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) cov[i][j] += (s[i] - mean[i]) * (s[j] - mean[j]);
        }
    }
    for (auto& row : cov) {
        for (double& v : row) v /= static_cast<double>(replicates - 1);
    }

    CovarianceReport rep;
    rep.N = N;
    rep.replicates = replicates;
    rep.sigma_eps = noise.sigma_eps;
    rep.a = a;
    rep.cell_area = d1 * d2;
    rep.s1 = c1;
    rep.s2 = c2;
    detail::finish_report(rep, cov);
    return rep;
}

/// Exact covariance of the discrete coefficients under white noise: the Riemann sums over the
/// DFT grid that tend to sigma^2 diag(1, 1/2, 1/2) delta_{n1 n2} as the grid is refined.
inline CovarianceReport discrete_covariance(std::size_t n1, std::size_t n2, double d1, double d2,
                                            const MorseFamily& family, double a, double sigma_eps) {
    const int N = family.count();
    const std::size_t dim = static_cast<std::size_t>(3 * N);
    std::vector<std::vector<double>> cov(dim, std::vector<double>(dim, 0.0));
    // Cov[w_i, w_j] = sigma^2 / (n1 n2) sum_k m_i(k) conj(m_j(k)), with real even / imaginary odd multipliers
    const bool nyq1 = n1 % 2 == 0;
    const bool nyq2 = n2 % 2 == 0;
    std::vector<double> m(dim);
    for (std::size_t k2 = 0; k2 < n2; ++k2) {
        for (std::size_t k1 = 0; k1 < n1; ++k1) {
            const double f1 = bin_frequency(k1, n1, d1);
            const double f2 = bin_frequency(k2, n2, d2);
            const double f = std::hypot(f1, f2);
            for (int n = 0; n < N; ++n) {
                const double gain = a * family.psi(n, a * f);
                m[3 * n] = gain;
                m[3 * n + 1] = f == 0.0 || (nyq1 && k1 == n1 / 2) ? 0.0 : gain * f1 / f;
                m[3 * n + 2] = f == 0.0 || (nyq2 && k2 == n2 / 2) ? 0.0 : gain * f2 / f;
            }
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t j = 0; j < dim; ++j) {
                    // even and odd multipliers are in quadrature: their products average out
                    const bool even_i = i % 3 == 0;
                    const bool even_j = j % 3 == 0;
                    if (even_i != even_j) continue;
                    cov[i][j] += m[i] * m[j];
                }
            }
        }
    }
    const double scale = sigma_eps * sigma_eps / static_cast<double>(n1 * n2);
    for (auto& row : cov) {
        for (double& v : row) v *= scale;
    }
    CovarianceReport rep;
    rep.N = N;
    rep.sigma_eps = sigma_eps;
    rep.a = a;
    rep.cell_area = d1 * d2;
    rep.s1 = n1 / 2;
    rep.s2 = n2 / 2;
    detail::finish_report(rep, cov);
    return rep;
}

}  // namespace monomorse
