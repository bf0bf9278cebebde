#pragma once

#include <functional>
#include <vector>

namespace oscitrace {

struct GaussLegendreRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights;
};

// nodes/weights by Newton iteration on P_n; cached per order
const GaussLegendreRule& gauss_legendre_rule(int order);

// fixed composite rule over [a, b] with `panels` equal panels,
// pairwise-summed in fixed panel order
double integrate_composite(const std::function<double(double)>& f, double a, double b,
                           int panels, int order = 20);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0; // |last panel-doubling change|
    int panels = 0;
    bool converged = true;
};

// panel count doubles until two successive estimates agree to rel_tol
// (or abs floor) or the panel cap is reached
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-10, int initial_panels = 4,
                                    int max_panels = 4096, int order = 20);

double pairwise_sum(const std::vector<double>& xs);

} // namespace oscitrace
