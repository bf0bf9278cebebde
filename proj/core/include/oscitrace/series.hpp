#pragma once

#include <array>
#include <vector>

#include "oscitrace/coeffs.hpp"

namespace oscitrace {

// truncated formal series in mu = lambda^(-1/2): coeffs[k] multiplies mu^k
class HalfPowerSeries {
public:
    HalfPowerSeries() = default;
    explicit HalfPowerSeries(int trunc) : coeffs_(static_cast<size_t>(trunc) + 1, 0.0) {}

    int trunc() const { return static_cast<int>(coeffs_.size()) - 1; }
    double at(int k) const { return k <= trunc() ? coeffs_[static_cast<size_t>(k)] : 0.0; }
    double& operator[](int k) { return coeffs_[static_cast<size_t>(k)]; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    HalfPowerSeries& operator+=(const HalfPowerSeries& rhs);
    friend HalfPowerSeries operator+(HalfPowerSeries a, const HalfPowerSeries& b) { return a += b; }
    friend HalfPowerSeries operator*(const HalfPowerSeries& a, const HalfPowerSeries& b);
    HalfPowerSeries scaled(double c) const;

    // (series)^alpha for a series with constant term 1, generalized binomial
    HalfPowerSeries pow(double alpha) const;

private:
    std::vector<double> coeffs_{0.0};
};

// fixed-point reversion of lambda0 ~ lambda + sum b_j lambda^{-(j-1/2)} into
// lambda ~ lambda0 + sum_j c_j (lambda0)^{-j/2}; result holds c_j at key j.
// The composition check is enforced before returning.
HalfPowerSeries invert_expansion(const std::vector<double>& b, int trunc);
HalfPowerSeries invert_expansion(const BCoeffs& b, int trunc);

// substitutes the c-expansion back into the b-expansion; returns the largest
// residual coefficient over keys 1..trunc (0 for an exact inverse pair)
double compose_check(const std::vector<double>& b, const HalfPowerSeries& c, int trunc);
double compose_check(const BCoeffs& b, const HalfPowerSeries& c, int trunc);

// residuals of the whole-power identities (c2, c1^2+2c4, c6+c2^2+2c1c3)
std::array<double, 3> wholepower_check(const HalfPowerSeries& c);

// d_j(s) of lambda^{-s} ~ sum_j d_j(s) (lambda0)^{-s-j/2}
struct DTable {
    double s = 0.0;
    std::vector<double> values; // values[j] = d_j(s)
    double at(int j) const { return values.at(static_cast<size_t>(j)); }
};

DTable d_table(double s, const HalfPowerSeries& c, int trunc);

} // namespace oscitrace
