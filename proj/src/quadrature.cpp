#include "rmrelax/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>

#include "rmrelax/error.hpp"

namespace rmrelax::quad {

namespace {

Rule build_legendre(int n) {
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
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
        // Recompute the derivative at the converged root.
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
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const Rule& gauss_legendre(int n) {
    if (n < 1) fail(ErrorKind::invalid_argument, "Gauss-Legendre order must be >= 1");
    static std::mutex mutex;
    static std::map<int, Rule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_legendre(n)).first;
    return it->second;
}

LineGrid composite(std::span<const double> breaks, int order) {
    const Rule& rule = gauss_legendre(order);
    LineGrid grid;
    if (breaks.size() < 2) return grid;
    grid.x.reserve((breaks.size() - 1) * order);
    grid.w.reserve((breaks.size() - 1) * order);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double c = 0.5 * (breaks[p] + breaks[p + 1]);
        const double h = 0.5 * (breaks[p + 1] - breaks[p]);
        for (int k = 0; k < order; ++k) {
            grid.x.push_back(c + h * rule.nodes[k]);
            grid.w.push_back(h * rule.weights[k]);
        }
    }
    return grid;
}

}  // namespace rmrelax::quad
