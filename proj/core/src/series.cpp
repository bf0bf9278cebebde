#include "oscitrace/series.hpp"

#include <cmath>
#include <stdexcept>

namespace oscitrace {

HalfPowerSeries& HalfPowerSeries::operator+=(const HalfPowerSeries& rhs) {
    if (rhs.trunc() != trunc()) throw std::invalid_argument("series truncation mismatch");
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

HalfPowerSeries operator*(const HalfPowerSeries& a, const HalfPowerSeries& b) {
    if (a.trunc() != b.trunc()) throw std::invalid_argument("series truncation mismatch");
    HalfPowerSeries out(a.trunc());
    for (int i = 0; i <= a.trunc(); ++i) {
        if (a.coeffs_[static_cast<size_t>(i)] == 0.0) continue;
        for (int j = 0; i + j <= a.trunc(); ++j)
            out.coeffs_[static_cast<size_t>(i + j)] +=
                a.coeffs_[static_cast<size_t>(i)] * b.coeffs_[static_cast<size_t>(j)];
    }
    return out;
}

HalfPowerSeries HalfPowerSeries::scaled(double c) const {
    HalfPowerSeries out = *this;
    for (auto& x : out.coeffs_) x *= c;
    return out;
}

HalfPowerSeries HalfPowerSeries::pow(double alpha) const {
    if (coeffs_.empty() || coeffs_[0] != 1.0)
        throw std::invalid_argument("pow: series must have constant term 1");
    HalfPowerSeries w = *this;
    w.coeffs_[0] = 0.0;
    HalfPowerSeries out(trunc());
    out.coeffs_[0] = 1.0;
    HalfPowerSeries wpow(trunc());
    wpow.coeffs_[0] = 1.0;
    double binom = 1.0;
    for (int m = 1; m <= trunc(); ++m) {
        wpow = wpow * w;
        binom *= (alpha - (m - 1)) / m;
        out += wpow.scaled(binom);
    }
    return out;
}

namespace {

// E(mu0) with lambda = lambda0 * E, i.e. E = 1 + sum_j c_j mu0^{j+2}
HalfPowerSeries envelope_from_c(const HalfPowerSeries& c, int trunc) {
    HalfPowerSeries e(trunc);
    e[0] = 1.0;
    for (int j = 1; j + 2 <= trunc; ++j) e[j + 2] += c.at(j);
    return e;
}

HalfPowerSeries c_from_envelope(const HalfPowerSeries& e, int trunc) {
    HalfPowerSeries c(trunc);
    for (int j = 1; j + 2 <= e.trunc(); ++j)
        if (j <= trunc) c[j] = e.at(j + 2);
    return c;
}

// 1 - sum_j b_j mu0^{2j+1} E^{-(j-1/2)}, the substitution step of the
// fixed-point reversion (work truncation = trunc + 2 in the E variable)
HalfPowerSeries substitute(const std::vector<double>& b, const HalfPowerSeries& e) {
    HalfPowerSeries next(e.trunc());
    next[0] = 1.0;
    for (size_t j = 1; j <= b.size(); ++j) {
        if (b[j - 1] == 0.0) continue;
        const int shift = 2 * static_cast<int>(j) + 1;
        if (shift > e.trunc()) break;
        const HalfPowerSeries epow = e.pow(-(static_cast<double>(j) - 0.5));
        for (int k = 0; k + shift <= e.trunc(); ++k)
            next[k + shift] -= b[j - 1] * epow.at(k);
    }
    return next;
}

} // namespace

HalfPowerSeries invert_expansion(const std::vector<double>& b, int trunc) {
    if (trunc < 0) throw std::invalid_argument("invert_expansion: negative truncation");
    if (trunc > 2 * static_cast<int>(b.size()) + 1)
        throw std::invalid_argument("invert_expansion: truncation beyond available b_j");
    const int work = trunc + 2;
    HalfPowerSeries e(work);
    e[0] = 1.0;
    bool stable = false;
    for (int it = 0; it <= work + 1; ++it) {
        HalfPowerSeries next = substitute(b, e);
        double delta = 0.0;
        for (int k = 0; k <= work; ++k) delta = std::max(delta, std::abs(next.at(k) - e.at(k)));
        e = next;
        if (delta == 0.0) {
            stable = true;
            break;
        }
    }
    if (!stable) throw std::logic_error("invert_expansion: fixed point did not stabilize");

    const HalfPowerSeries c = c_from_envelope(e, trunc);
    double scale = 1.0;
    for (double x : b) scale = std::max(scale, std::abs(x));
    const double residual = compose_check(b, c, trunc);
    if (residual > 1e-9 * std::pow(scale + 1.0, static_cast<double>(trunc)))
        throw std::logic_error("invert_expansion: composition check failed");
    return c;
}

HalfPowerSeries invert_expansion(const BCoeffs& b, int trunc) {
    return invert_expansion(b.b_values(), trunc);
}

double compose_check(const std::vector<double>& b, const HalfPowerSeries& c, int trunc) {
    const int work = trunc + 2;
    const HalfPowerSeries e = envelope_from_c(c, work);
    // mu0^2 * (lambda + sum b_j lambda^{-(j-1/2)}) = E + sum b_j mu0^{2j+1} E^{-(j-1/2)}
    HalfPowerSeries g = e;
    for (size_t j = 1; j <= b.size(); ++j) {
        if (b[j - 1] == 0.0) continue;
        const int shift = 2 * static_cast<int>(j) + 1;
        if (shift > work) break;
        const HalfPowerSeries epow = e.pow(-(static_cast<double>(j) - 0.5));
        for (int k = 0; k + shift <= work; ++k)
            g[k + shift] += b[j - 1] * epow.at(k);
    }
    double residual = std::abs(g.at(0) - 1.0);
    for (int k = 1; k <= trunc; ++k) residual = std::max(residual, std::abs(g.at(k)));
    return residual;
}

double compose_check(const BCoeffs& b, const HalfPowerSeries& c, int trunc) {
    return compose_check(b.b_values(), c, trunc);
}

std::array<double, 3> wholepower_check(const HalfPowerSeries& c) {
    if (c.trunc() < 6) throw std::invalid_argument("wholepower_check: need c through key 6");
    const double c1 = c.at(1), c2 = c.at(2), c3 = c.at(3), c4 = c.at(4), c6 = c.at(6);
    return {c2, c1 * c1 + 2.0 * c4, c6 + c2 * c2 + 2.0 * c1 * c3};
}

DTable d_table(double s, const HalfPowerSeries& c, int trunc) {
    const HalfPowerSeries e = envelope_from_c(c, trunc);
    HalfPowerSeries d = e.pow(-s);
    DTable out;
    out.s = s;
    out.values.resize(static_cast<size_t>(trunc) + 1, 0.0);
    for (int j = 0; j <= trunc; ++j) out.values[static_cast<size_t>(j)] = d.at(j);
    // structurally exact: E - 1 starts at mu^3
    out.values[0] = 1.0;
    if (trunc >= 1) out.values[1] = 0.0;
    if (trunc >= 2) out.values[2] = 0.0;
    return out;
}

} // namespace oscitrace
