#include "oscitrace/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace oscitrace {

namespace {

GaussLegendreRule build_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_rule: order must be >= 1");
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<size_t>(n));
    rule.weights.resize(static_cast<size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
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
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<size_t>(i)] = -x;
        rule.weights[static_cast<size_t>(i)] = w;
        rule.nodes[static_cast<size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<size_t>(n - 1 - i)] = w;
    }
    return rule;
}

} // namespace

const GaussLegendreRule& gauss_legendre_rule(int order) {
    static std::mutex mtx;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

double pairwise_sum(const std::vector<double>& xs) {
    // recursive halving keeps roundoff at O(eps log n) with a fixed order
    std::function<double(size_t, size_t)> rec = [&](size_t lo, size_t hi) -> double {
        if (hi - lo <= 4) {
            double s = 0.0;
            for (size_t i = lo; i < hi; ++i) s += xs[i];
            return s;
        }
        const size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    return xs.empty() ? 0.0 : rec(0, xs.size());
}

double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int order) {
    const auto& rule = gauss_legendre_rule(order);
    const double h = (b - a) / panels;
    std::vector<double> panel_sums(static_cast<size_t>(panels), 0.0);
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        double s = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        panel_sums[static_cast<size_t>(p)] = 0.5 * h * s;
    }
    return pairwise_sum(panel_sums);
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, int initial_panels, int max_panels,
                                    int order) {
    QuadratureResult res;
    res.panels = initial_panels;
    res.value = integrate_composite(f, a, b, res.panels, order);
    res.error_estimate = std::abs(res.value);
    res.converged = false;
    while (res.panels * 2 <= max_panels) {
        const double next = integrate_composite(f, a, b, res.panels * 2, order);
        res.error_estimate = std::abs(next - res.value);
        res.panels *= 2;
        res.value = next;
        const double scale = std::max(std::abs(next), 1e-30);
        if (res.error_estimate <= rel_tol * scale + 1e-300) {
            res.converged = true;
            break;
        }
    }
    return res;
}

} // namespace oscitrace
