#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "monomorse/errors.hpp"
#include "monomorse/mathcore.hpp"

namespace monomorse::quad {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

namespace detail {

inline Rule build_gauss_legendre(int n) {
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace detail

/// Cached n-point Gauss-Legendre rule on [-1, 1].
inline const Rule& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, Rule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::build_gauss_legendre(n)).first;
    return it->second;
}

/// Fixed-order Gauss-Legendre on [a, b].
template <class F>
double fixed(F&& f, double a, double b, int n = 64) {
    const Rule& rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

/// Fixed-order Gauss-Legendre over `panels` equal sub-intervals of [a, b].
template <class F>
double composite(F&& f, double a, double b, int panels, int order = 16) {
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) sum += fixed(f, a + p * h, a + (p + 1) * h, order);
    return sum;
}

struct Result {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod (31 point) with the error estimate exposed.
template <class F>
Result adaptive(F&& f, double a, double b, double tolerance = 1e-12, unsigned max_depth = 15) {
    Result r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tolerance,
                                                                            &r.error);
    return r;
}

}  // namespace monomorse::quad
