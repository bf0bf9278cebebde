#include "oscitrace/coeffs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oscitrace/diffpoly.hpp"
#include "oscitrace/quadrature.hpp"

namespace oscitrace {

std::vector<double> BCoeffs::b_values() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.b);
    return out;
}

double integrand_delta(int j, const Potential& q, double x) {
    if (j < 1) throw std::invalid_argument("integrand_delta: j must be >= 1");
    const auto sup = q.support();
    if (!sup || x <= sup->lo || x >= sup->hi) return 0.0;
    const int order = 2 * j; // a_j needs derivatives up to 2j-2
    const auto a_j = compile(heat_invariant(j));
    const Jet vq = v_jet(q, x, order);
    const Jet v0 = v_jet(Potential{}, x, order);
    return a_j.eval(vq.values) - a_j.eval(v0.values);
}

double gamma_prefactor(int j) {
    if (j < 1) throw std::invalid_argument("gamma_prefactor: j must be >= 1");
    // Gamma(3/2 - j) = sqrt(pi) * r_j with rational r_j: r_1 = 1,
    // r_j = r_{j-1} / (3/2 - j)
    double r = 1.0;
    for (int i = 2; i <= j; ++i) r /= 1.5 - i;
    return 1.0 / (std::numbers::pi * r);
}

BCoeffResult b_coeff(int j, const Potential& q, double rel_tol, int max_panels) {
    BCoeffResult res;
    const auto sup = q.support();
    if (!sup) return res; // q = 0: every b_j vanishes

    const int order = 2 * j;
    const auto a_j = compile(heat_invariant(j));
    const auto delta = [&](double x) {
        const Jet vq = v_jet(q, x, order);
        const Jet v0 = v_jet(Potential{}, x, order);
        return a_j.eval(vq.values) - a_j.eval(v0.values);
    };
    const auto quad = integrate_adaptive(delta, sup->lo, sup->hi, rel_tol, 4, max_panels);
    const double pref = gamma_prefactor(j);
    res.integral = quad.value;
    res.value = pref * quad.value;
    res.error = std::abs(pref) * quad.error_estimate;
    res.panels = quad.panels;
    res.converged = quad.converged;
    return res;
}

BCoeffs compute_bcoeffs(const Potential& q, int max_j, double rel_tol) {
    BCoeffs out;
    out.max_j = max_j;
    for (int j = 1; j <= max_j; ++j) {
        const auto r = b_coeff(j, q, rel_tol);
        out.rows.push_back({j, r.integral, r.value, r.error, r.panels, r.converged});
    }
    return out;
}

} // namespace oscitrace
