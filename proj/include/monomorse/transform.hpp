#pragma once

// FFT analysis of a real image with the isotropic wavelets and their Riesz
// companions, plus the rotation/assembly algebra on the resulting triples.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "monomorse/errors.hpp"
#include "monomorse/fft.hpp"
#include "monomorse/grid.hpp"
#include "monomorse/mathcore.hpp"
#include "monomorse/parallel.hpp"
#include "monomorse/wavelets.hpp"

namespace monomorse {

/// Point of the wavelet parameter space: scale, rotation, translation.
struct Xi {
    double a = 1.0;
    double theta = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
};

struct ScaleLadder {
    double a_min = 0.0;
    double a_max = 0.0;
    int M = 0;
    std::vector<double> scales;

    std::size_t count() const { return scales.size(); }
};

/// Ladder whose bounds come from the support band of wavelet n.
inline ScaleLadder scale_ladder(const ImageGrid& grid, const MorseFamily& family, int n, int M, int count) {
    if (M < 2) throw Error(ErrorKind::Domain, "transform", "M must be at least 2");
    if (count < 1) throw Error(ErrorKind::Domain, "transform", "ladder needs at least one scale");
    const SupportBand band = family.band(n);
    ScaleLadder ladder;
    ladder.M = M;
    ladder.a_min = 2.0 * band.f2 * grid.d1 * grid.d2 / std::hypot(grid.d1, grid.d2);
    ladder.a_max = std::min(static_cast<double>(grid.n1) * grid.d1, static_cast<double>(grid.n2) * grid.d2) *
                   (band.f2 - band.f1) / M;
    if (ladder.a_min > ladder.a_max) {
        throw Error(ErrorKind::EmptyLadder, "transform", "a_min exceeds a_max for this grid, band and M");
    }
    if (count == 1) {
        ladder.scales.push_back(std::sqrt(ladder.a_min * ladder.a_max));
        return ladder;
    }
    const double lo = std::log(ladder.a_min);
    const double hi = std::log(ladder.a_max);
    for (int i = 0; i < count; ++i) ladder.scales.push_back(std::exp(lo + (hi - lo) * i / (count - 1)));
    ladder.scales.front() = ladder.a_min;
    ladder.scales.back() = ladder.a_max;
    return ladder;
}

/// Ladder with `voices` scales per octave between the bounds.
inline ScaleLadder scale_ladder_voices(const ImageGrid& grid, const MorseFamily& family, int n, int M,
                                       int voices) {
    if (voices < 1) throw Error(ErrorKind::Domain, "transform", "voices must be positive");
    const ScaleLadder bounds = scale_ladder(grid, family, n, M, 1);
    const int count = 1 + static_cast<int>(std::floor(voices * std::log2(bounds.a_max / bounds.a_min)));
    if (count == 1) {
        ScaleLadder single = bounds;
        single.scales = {bounds.a_min};
        return single;
    }
    ScaleLadder ladder = bounds;
    ladder.scales.clear();
    for (int i = 0; i < count; ++i) ladder.scales.push_back(bounds.a_min * std::exp2(static_cast<double>(i) / voices));
    return ladder;
}

/// Ladder from an explicit list of scales; bounds are the list extremes.
inline ScaleLadder explicit_ladder(std::vector<double> scales) {
    if (scales.empty()) throw Error(ErrorKind::EmptyLadder, "transform", "no scales given");
    for (double a : scales) {
        if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::Domain, "transform", "scales must be positive");
    }
    std::sort(scales.begin(), scales.end());
    ScaleLadder ladder;
    ladder.a_min = scales.front();
    ladder.a_max = scales.back();
    ladder.scales = std::move(scales);
    return ladder;
}

/// Coefficients (w^(e), w^(1), w^(2)) at a single point.
struct CoefficientTriple {
    double e = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
};

struct PlaneTriple {
    Plane e;
    Plane r1;
    Plane r2;

    CoefficientTriple at(std::size_t s1, std::size_t s2) const { return {e(s1, s2), r1(s1, s2), r2(s1, s2)}; }
};

/// Grid position and scale slot addressed by a Xi.
struct Site {
    std::size_t scale = 0;
    std::size_t s1 = 0;
    std::size_t s2 = 0;
};

struct CoefficientSet {
    MorseFamily family;
    std::vector<double> scales;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double d1 = 1.0;
    double d2 = 1.0;
    std::vector<PlaneTriple> planes;  ///< index n * scales.size() + scale
    double max_imag_residual = 0.0;   ///< largest |Im| / max|Re| left by the inverse DFTs

    int count() const { return family.count(); }
    const PlaneTriple& at(int n, std::size_t scale) const {
        family.check(n);
        if (scale >= scales.size()) throw Error(ErrorKind::Index, "transform", "scale index out of range");
        return planes[static_cast<std::size_t>(n) * scales.size() + scale];
    }

    /// Scale slot matching xi.a (relative tolerance 1e-6) and the nearest grid sample to b.
    Site locate(const Xi& xi) const {
        Site site;
        bool found = false;
        for (std::size_t i = 0; i < scales.size(); ++i) {
            if (std::abs(scales[i] - xi.a) <= 1e-6 * scales[i]) {
                site.scale = i;
                found = true;
                break;
            }
        }
        if (!found) throw Error(ErrorKind::Domain, "transform", "scale is not on the ladder");
        const double i1 = std::round(xi.b1 / d1);
        const double i2 = std::round(xi.b2 / d2);
        if (i1 < 0 || i2 < 0 || i1 >= static_cast<double>(n1) || i2 >= static_cast<double>(n2)) {
            throw Error(ErrorKind::Index, "transform", "translation outside the grid");
        }
        site.s1 = static_cast<std::size_t>(i1);
        site.s2 = static_cast<std::size_t>(i2);
        return site;
    }

    Xi xi(const Site& site, double theta = 0.0) const {
        return {scales.at(site.scale), theta, static_cast<double>(site.s1) * d1, static_cast<double>(site.s2) * d2};
    }
};

struct ForwardOptions {
    unsigned threads = 0;  ///< 0: MONOMORSE_THREADS or hardware concurrency
    bool zero_pad = false; ///< analyse a 2x zero-padded copy and crop back
};

namespace detail {

inline ImageGrid padded(const ImageGrid& image) {
    ImageGrid out(2 * image.n1, 2 * image.n2, image.d1, image.d2);
    for (std::size_t s2 = 0; s2 < image.n2; ++s2) {
        for (std::size_t s1 = 0; s1 < image.n1; ++s1) out(s1, s2) = image(s1, s2);
    }
    return out;
}

}  // namespace detail

/// Coefficients for every wavelet and scale at theta = 0.
inline CoefficientSet forward(const ImageGrid& image, const MorseFamily& family, const ScaleLadder& ladder,
                              const ForwardOptions& options = {}) {
    image.validate();
    if (ladder.scales.empty()) throw Error(ErrorKind::EmptyLadder, "transform", "ladder has no scales");

    const ImageGrid work = options.zero_pad ? detail::padded(image) : image;
    const std::size_t N1 = work.n1;
    const std::size_t N2 = work.n2;
    const std::size_t total = N1 * N2;

    fft::Buffer spectrum(total);
    {
        fft::Buffer in(total);
        for (std::size_t i = 0; i < total; ++i) in.set(i, work.data[i]);
        fft::forward(N1, N2, in, spectrum);
    }

    std::vector<double> f1(N1);
    std::vector<double> f2(N2);
    for (std::size_t k = 0; k < N1; ++k) f1[k] = bin_frequency(k, N1, work.d1);
    for (std::size_t k = 0; k < N2; ++k) f2[k] = bin_frequency(k, N2, work.d2);
    // the Riesz multiplier is odd, so it cannot be kept on a self-mirrored Nyquist bin
    const bool nyq1 = N1 % 2 == 0;
    const bool nyq2 = N2 % 2 == 0;

    CoefficientSet out{family, ladder.scales, image.n1, image.n2, image.d1, image.d2, {}, 0.0};
    const std::size_t nscale = ladder.scales.size();
    const std::size_t jobs = static_cast<std::size_t>(family.count()) * nscale;
    out.planes.resize(jobs);
    std::vector<double> residual(jobs, 0.0);

    parallel_for(
        jobs,
        [&](std::size_t job) {
            const int n = static_cast<int>(job / nscale);
            const double a = ladder.scales[job % nscale];
            fft::Buffer me(total);
            fft::Buffer m1(total);
            fft::Buffer m2(total);
            for (std::size_t k2 = 0; k2 < N2; ++k2) {
                for (std::size_t k1 = 0; k1 < N1; ++k1) {
                    const std::size_t i = k2 * N1 + k1;
                    const double f = std::hypot(f1[k1], f2[k2]);
                    const std::complex<double> g = spectrum.at(i);
                    if (f == 0.0) {
                        me.set(i, a * family.psi(n, 0.0) * g);
                        continue;
                    }
                    const double gain = a * family.psi(n, a * f);
                    me.set(i, gain * g);
                    const std::complex<double> odd = std::complex<double>(0.0, gain / f) * g;
                    if (!(nyq1 && k1 == N1 / 2)) m1.set(i, f1[k1] * odd);
                    if (!(nyq2 && k2 == N2 / 2)) m2.set(i, f2[k2] * odd);
                }
            }
            PlaneTriple triple{Plane(image.n1, image.n2), Plane(image.n1, image.n2), Plane(image.n1, image.n2)};
            fft::Buffer tmp(total);
            double peak = 0.0;
            double imag = 0.0;
            auto extract = [&](fft::Buffer& m, Plane& plane) {
                fft::inverse(N1, N2, m, tmp);
                for (std::size_t s2 = 0; s2 < image.n2; ++s2) {
                    for (std::size_t s1 = 0; s1 < image.n1; ++s1) {
                        const std::complex<double> z = tmp.at(s2 * N1 + s1);
                        plane(s1, s2) = z.real();
                        peak = std::max(peak, std::abs(z.real()));
                        imag = std::max(imag, std::abs(z.imag()));
                    }
                }
            };
            extract(me, triple.e);
            extract(m1, triple.r1);
            extract(m2, triple.r2);
            residual[job] = peak > 0.0 ? imag / peak : imag;
            out.planes[job] = std::move(triple);
        },
        options.threads);

    out.max_imag_residual = *std::max_element(residual.begin(), residual.end());
    return out;
}

/// Riesz pair expressed at orientation theta; w^(e) is unchanged.
inline CoefficientTriple rotate_coeffs(const CoefficientTriple& t, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {t.e, c * t.r1 + s * t.r2, -s * t.r1 + c * t.r2};
}

inline PlaneTriple rotate_coeffs(const PlaneTriple& t, double theta) {
    PlaneTriple out = t;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (std::size_t i = 0; i < t.r1.v.size(); ++i) {
        out.r1.v[i] = c * t.r1.v[i] + s * t.r2.v[i];
        out.r2.v[i] = -s * t.r1.v[i] + c * t.r2.v[i];
    }
    return out;
}

/// Local amplitude, orientation nu and phase at one point.
struct MonogenicDescriptor {
    double amplitude = 0.0;
    double nu = 0.0;      ///< radians in (-pi/2, pi/2]
    double phase = 0.0;   ///< cycles in (-1/2, 1/2]
    bool valid = false;              ///< false where the coefficient quaternion is zero
    bool orientation_valid = false;  ///< false where the Riesz pair vanishes
};

/// Polar form of w^(e) - i w^(1) - j w^(2) (triple already rotated to the wanted theta).
inline MonogenicDescriptor monogenic_assemble(const CoefficientTriple& t) {
    MonogenicDescriptor d;
    try {
        const QuaternionPolar p = quat_polar({t.e, -t.r1, -t.r2, 0.0});
        d.amplitude = p.amplitude;
        d.nu = p.eta;
        d.phase = p.phase;
        d.valid = true;
        d.orientation_valid = !p.eta_degenerate;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ZeroQuaternion) throw;
    }
    return d;
}

struct DescriptorPlane {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::vector<MonogenicDescriptor> v;

    const MonogenicDescriptor& operator()(std::size_t s1, std::size_t s2) const { return v[s2 * n1 + s1]; }
};

inline DescriptorPlane monogenic_assemble(const PlaneTriple& t, double theta) {
    DescriptorPlane out{t.e.n1, t.e.n2, std::vector<MonogenicDescriptor>(t.e.v.size())};
    for (std::size_t i = 0; i < t.e.v.size(); ++i) {
        out.v[i] = monogenic_assemble(rotate_coeffs(CoefficientTriple{t.e.v[i], t.r1.v[i], t.r2.v[i]}, theta));
    }
    return out;
}

/// Psi^(+) = Psi^(e) + i Psi^(1) + j Psi^(2) at frequency (f1, f2) for the wavelet rotated by theta,
/// with Psi^(s) = -j (rotated f_s / f) Psi^(e).
inline Quaternion monogenic_spectrum(double f1, double f2, const MorseFamily& family, int n, double theta) {
    const double f = std::hypot(f1, f2);
    const double e = family.psi(n, f);
    if (f == 0.0) return {e, 0.0, 0.0, 0.0};
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double u1 = (c * f1 + s * f2) / f;
    const double u2 = (-s * f1 + c * f2) / f;
    const Quaternion minus_j{0.0, 0.0, -1.0, 0.0};
    const Quaternion riesz1 = minus_j * (u1 * e);
    const Quaternion riesz2 = minus_j * (u2 * e);
    return Quaternion{e, 0.0, 0.0, 0.0} + quat_mul({0.0, 1.0, 0.0, 0.0}, riesz1) +
           quat_mul({0.0, 0.0, 1.0, 0.0}, riesz2);
}

struct Scalogram {
    Plane se;
    Plane s1;
    Plane s2;
    Plane splus;
};

inline Scalogram scalogram(const PlaneTriple& t) {
    Scalogram out{t.e, t.r1, t.r2, t.e};
    for (std::size_t i = 0; i < t.e.v.size(); ++i) {
        out.se.v[i] = t.e.v[i] * t.e.v[i];
        out.s1.v[i] = t.r1.v[i] * t.r1.v[i];
        out.s2.v[i] = t.r2.v[i] * t.r2.v[i];
        out.splus.v[i] = out.se.v[i] + out.s1.v[i] + out.s2.v[i];
    }
    return out;
}

}  // namespace monomorse
