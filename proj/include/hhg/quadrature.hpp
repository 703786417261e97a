#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hhg/constants.hpp"
#include "hhg/error.hpp"

namespace hhg {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton on P_n, symmetric fill).
inline QuadratureRule gauss_legendre(std::size_t n) {
    if (n == 0) throw ConfigError("Gauss-Legendre rule needs at least one node");
    QuadratureRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(units::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
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
        for (std::size_t k = 2; k <= n; ++k) {
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

/// Composite Gauss-Legendre on [a, b] with `panels` equal panels of `order` nodes.
inline QuadratureRule composite_gauss_legendre(double a, double b, std::size_t panels, std::size_t order) {
    if (!(b > a)) throw ConfigError("composite rule needs a < b");
    if (panels == 0) throw ConfigError("composite rule needs at least one panel");
    const QuadratureRule base = gauss_legendre(order);
    QuadratureRule rule;
    rule.nodes.reserve(panels * order);
    rule.weights.reserve(panels * order);
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double mid = lo + 0.5 * h;
        for (std::size_t k = 0; k < order; ++k) {
            rule.nodes.push_back(mid + 0.5 * h * base.nodes[k]);
            rule.weights.push_back(0.5 * h * base.weights[k]);
        }
    }
    return rule;
}

}  // namespace hhg
