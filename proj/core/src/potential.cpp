#include "oscitrace/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace oscitrace {

namespace {

// bump exponent below this underflows double precision; the jet is exactly 0
constexpr double kUnderflowExponent = 690.0;

// truncated Taylor series: c[k] is the coefficient of h^k
using Series = std::vector<double>;

Series series_const(double c, int order) {
    Series s(static_cast<size_t>(order) + 1, 0.0);
    s[0] = c;
    return s;
}

Series series_mul(const Series& a, const Series& b) {
    Series out(a.size(), 0.0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (size_t j = 0; j + i < a.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

// 1/a, requires a[0] != 0
Series series_recip(const Series& a) {
    Series out(a.size(), 0.0);
    out[0] = 1.0 / a[0];
    for (size_t n = 1; n < a.size(); ++n) {
        double acc = 0.0;
        for (size_t k = 1; k <= n; ++k) acc += a[k] * out[n - k];
        out[n] = -acc / a[0];
    }
    return out;
}

// exp(a) via the ODE recurrence E' = a' E
Series series_exp(const Series& a) {
    Series out(a.size(), 0.0);
    out[0] = std::exp(a[0]);
    for (size_t n = 1; n < a.size(); ++n) {
        double acc = 0.0;
        for (size_t k = 1; k <= n; ++k) acc += static_cast<double>(k) * a[k] * out[n - k];
        out[n] = acc / static_cast<double>(n);
    }
    return out;
}

// P evaluated on the identity series [x, 1, 0, ...] by Horner
Series series_poly(const std::vector<double>& coeffs, double x, int order) {
    Series id = series_const(x, order);
    if (order >= 1) id[1] = 1.0;
    Series acc = series_const(coeffs.empty() ? 0.0 : coeffs.back(), order);
    for (size_t i = coeffs.size(); i-- > 1;) {
        acc = series_mul(acc, id);
        acc[0] += coeffs[i - 1];
    }
    return acc;
}

void accumulate_term_jet(const Potential::Term& t, double x, int order, Series& total) {
    const double u0 = (x - t.center) / t.radius;
    const double w0 = 1.0 - u0 * u0;
    if (w0 <= 0.0 || 1.0 / w0 > kUnderflowExponent) return;

    // u = u0 + h/r;  w = 1 - u^2;  B = exp(-1/w)
    Series u = series_const(u0, order);
    if (order >= 1) u[1] = 1.0 / t.radius;
    Series w = series_mul(u, u);
    for (auto& c : w) c = -c;
    w[0] += 1.0;
    Series arg = series_recip(w);
    for (auto& c : arg) c = -c;
    Series bump = series_exp(arg);
    Series term = series_mul(series_poly(t.poly, x, order), bump);
    for (size_t i = 0; i < total.size(); ++i) total[i] += term[i];
}

} // namespace

Potential::Potential(std::vector<Term> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_)
        if (!(t.radius > 0.0)) throw std::invalid_argument("Potential: radius must be positive");
}

std::optional<Interval> Potential::support() const {
    if (terms_.empty()) return std::nullopt;
    Interval iv{terms_[0].center - terms_[0].radius, terms_[0].center + terms_[0].radius};
    for (const auto& t : terms_) {
        iv.lo = std::min(iv.lo, t.center - t.radius);
        iv.hi = std::max(iv.hi, t.center + t.radius);
    }
    return iv;
}

double Potential::operator()(double x) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
        const double u = (x - t.center) / t.radius;
        const double w = 1.0 - u * u;
        if (w <= 0.0 || 1.0 / w > kUnderflowExponent) continue;
        double p = 0.0;
        for (size_t i = t.poly.size(); i-- > 0;) p = p * x + t.poly[i];
        sum += p * std::exp(-1.0 / w);
    }
    return sum;
}

double Potential::max_abs() const {
    const auto sup = support();
    if (!sup) return 0.0;
    const int samples = 4096;
    double m = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double x = sup->lo + (sup->hi - sup->lo) * i / samples;
        m = std::max(m, std::abs((*this)(x)));
    }
    return m;
}

Jet eval_jet(const Potential& q, double x, int order) {
    if (order < 0) throw std::invalid_argument("eval_jet: negative order");
    if (order > kMaxJetOrder) throw std::invalid_argument("eval_jet: order above configured max");
    Series total = series_const(0.0, order);
    for (const auto& t : q.terms()) accumulate_term_jet(t, x, order, total);

    Jet jet;
    jet.point = x;
    jet.values.resize(static_cast<size_t>(order) + 1);
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= k;
        jet.values[static_cast<size_t>(k)] = total[static_cast<size_t>(k)] * fact;
    }
    return jet;
}

Jet v_jet(const Potential& q, double x, int order) {
    Jet jet = eval_jet(q, x, order);
    jet.values[0] += x * x;
    if (order >= 1) jet.values[1] += 2.0 * x;
    if (order >= 2) jet.values[2] += 2.0;
    return jet;
}

std::string potential_to_json(const Potential& q) {
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& t : q.terms()) {
        terms.push_back({{"poly", t.poly}, {"center", t.center}, {"radius", t.radius}});
    }
    return nlohmann::ordered_json{{"terms", terms}}.dump();
}

Potential potential_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<Potential::Term> terms;
    for (const auto& t : j.at("terms")) {
        Potential::Term term;
        term.poly = t.at("poly").get<std::vector<double>>();
        term.center = t.at("center").get<double>();
        term.radius = t.at("radius").get<double>();
        terms.push_back(std::move(term));
    }
    return Potential{std::move(terms)};
}

Potential reference_potential() {
    return Potential{{Potential::Term{{0.25}, 0.0, 1.0}}};
}

} // namespace oscitrace
