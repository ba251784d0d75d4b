// Noisy plane wave: transform, extract the ridge and print the estimates at a few points.

#include <cmath>
#include <cstdio>

#include "monomorse/monomorse.hpp"

using namespace monomorse;

int main() {
    const std::size_t n = 128;
    const double amplitude = 1.2;
    const double f0 = 0.1;
    const double eta = kPi / 5;
    const double sigma = 0.1;

    ImageGrid image = gen_plane_wave(n, n, amplitude, f0, eta, 0.0);
    add_white_noise(image, {sigma, 1});

    const MorseFamily family(8, 3, 3);
    const CoefficientSet coeffs = forward(image, family, scale_ladder_voices(image, family, 0, 8, 16));
    const std::vector<RidgeSample> ridge = ridge_extract(coeffs);

    std::printf("true: a=%.3f nu=%.4f rad amplitude=%.3f\n", family.f_max(0) / f0, eta, amplitude);
    std::printf("%6s %6s %8s %9s %8s %9s\n", "b1", "b2", "a", "nu", "phase", "amplitude");
    int shown = 0;
    for (const RidgeSample& r : ridge) {
        if (r.s1 % 16 || r.s2 % 16 || r.s1 < n / 4 || r.s2 < n / 4 || r.s1 >= 3 * n / 4 || r.s2 >= 3 * n / 4) continue;
        if (std::abs(std::log(r.a * f0 / family.f_max(0))) > 0.5) continue;
        std::printf("%6.0f %6.0f %8.3f %9.4f %8.4f %9.4f\n", r.b1, r.b2, r.a, r.nu, r.phase, r.amplitude);
        ++shown;
    }
    const auto sheets = link_ridges(ridge);
    std::printf("%zu ridge samples, %zu sheets, %d shown\n", ridge.size(), sheets.size(), shown);
}
