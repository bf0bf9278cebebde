#include "oscitrace/zeta.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oscitrace {

namespace detail {

namespace {
constexpr int kEtaTerms = 48;
constexpr double kPi = std::numbers::pi;
} // namespace

// P. Borwein's algorithm: eta(s) via Chebyshev-weighted alternating series,
// then zeta = eta / (1 - 2^{1-s}).  Truncation error ~ (3+sqrt(8))^{-n}.
ZetaValue zeta_via_eta(double s) {
    const int n = kEtaTerms;
    // d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    std::vector<double> d(static_cast<size_t>(n) + 1, 0.0);
    double t = 1.0 / n; // i = 0 term
    double acc = t;
    d[0] = n * acc;
    for (int i = 1; i <= n; ++i) {
        t *= 4.0 * (n + i - 1) * (n - i + 1) / ((2.0 * i - 1.0) * 2.0 * i);
        acc += t;
        d[static_cast<size_t>(i)] = n * acc;
    }
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double term = (d[static_cast<size_t>(n)] - d[static_cast<size_t>(k)]) *
                            std::pow(static_cast<double>(k + 1), -s);
        sum += (k % 2 == 0) ? term : -term;
    }
    const double eta = sum / d[static_cast<size_t>(n)];
    const double conv = 1.0 - std::pow(2.0, 1.0 - s);
    ZetaValue out;
    out.s = s;
    out.value = eta / conv;
    const double trunc = 3.0 / std::pow(3.0 + std::sqrt(8.0), n);
    out.abs_err = (trunc + 64.0 * 2.2e-16 * std::abs(eta)) / std::abs(conv);
    return out;
}

// zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)
ZetaValue zeta_via_reflection(double s) {
    const ZetaValue mirror = zeta_via_eta(1.0 - s);
    const double factor =
        std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(kPi * s / 2.0) * gamma_real(1.0 - s);
    ZetaValue out;
    out.s = s;
    out.value = factor * mirror.value;
    out.abs_err = std::abs(factor) * mirror.abs_err +
                  8.0 * 2.2e-16 * std::abs(out.value) +
                  // sin(pi s/2) near a zero: absolute phase noise ~ eps*|s|
                  std::abs(std::pow(2.0, s) * std::pow(kPi, s - 1.0) * gamma_real(1.0 - s)) *
                      (2.2e-16 * (std::abs(s) + 2.0)) * std::abs(mirror.value);
    return out;
}

} // namespace detail

ZetaValue riemann_zeta(double s) {
    if (s == 1.0) throw std::domain_error("riemann_zeta: pole at s = 1");
    if (s == 0.0) {
        // limit of the reflection formula: sin(pi s/2) zeta(1-s) -> -pi/2 * 1
        return ZetaValue{0.0, -0.5, 4e-16, false};
    }
    ZetaValue out = s > 0.0 ? detail::zeta_via_eta(s) : detail::zeta_via_reflection(s);
    if (std::abs(s - 1.0) < 1e-8) out.near_pole = true;
    return out;
}

double gamma_real(double s) {
    if (s <= 0.0 && s == std::floor(s))
        throw std::domain_error("gamma_real: pole at non-positive integer");
    // Lanczos, g = 7, 9 coefficients
    static constexpr double g = 7.0;
    static constexpr double coef[9] = {
        0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};
    if (s < 0.5) {
        // reflection
        return std::numbers::pi / (std::sin(std::numbers::pi * s) * gamma_real(1.0 - s));
    }
    const double x = s - 1.0;
    double a = coef[0];
    for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
    const double t = x + g + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

ZetaValue Z0(double s) {
    ZetaValue z = riemann_zeta(s);
    const double factor = 1.0 - std::pow(2.0, -s);
    ZetaValue out;
    out.s = s;
    out.value = factor * z.value;
    out.abs_err = std::abs(factor) * z.abs_err + 4.0 * 2.2e-16 * std::abs(out.value);
    out.near_pole = z.near_pole;
    return out;
}

namespace {

double odd_partial_sum(double s, int N) {
    // ascending n yields descending magnitudes for s > 0; sum smallest-first
    double sum = 0.0;
    for (int n = N; n >= 1; --n) sum += std::pow(2.0 * n - 1.0, -s);
    return sum;
}

} // namespace

double odd_tail(double s, int N) {
    if (s == 1.0) throw std::domain_error("odd_tail: pole at s = 1");
    if (N < 0) throw std::invalid_argument("odd_tail: negative N");
    if (s <= 1.0) return Z0(s).value - odd_partial_sum(s, N);

    // direct terms up to a safe Euler-Maclaurin start, then EM from M
    const int M = std::max(N + 1, 51);
    double direct = 0.0;
    for (int n = M - 1; n > N; --n) direct += std::pow(2.0 * n - 1.0, -s);

    const double y = 2.0 * M - 1.0;
    double em = std::pow(y, 1.0 - s) / (2.0 * (s - 1.0)); // integral from M
    em += 0.5 * std::pow(y, -s);                          // f(M)/2
    em += 2.0 * s * std::pow(y, -s - 1.0) / 12.0;         // -f'(M)/12
    em -= 8.0 * s * (s + 1.0) * (s + 2.0) * std::pow(y, -s - 3.0) / 720.0;
    em += 32.0 * s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * std::pow(y, -s - 5.0) /
          30240.0;
    return direct + em;
}

} // namespace oscitrace
