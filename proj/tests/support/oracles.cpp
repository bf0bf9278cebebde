#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace oracles {

using oscitrace::DiffPoly;
using oscitrace::Rational;

std::vector<double> jacobi_eigenvalues(const oscitrace::SymMatrix& m) {
    const int n = m.dim();
    std::vector<std::vector<double>> a(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(j)] = m.at(i, j);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += a[static_cast<size_t>(p)][static_cast<size_t>(q)] *
                       a[static_cast<size_t>(p)][static_cast<size_t>(q)];
        if (off < 1e-28) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[static_cast<size_t>(p)][static_cast<size_t>(q)];
                if (std::abs(apq) < 1e-300) continue;
                const double theta =
                    0.5 * (a[static_cast<size_t>(q)][static_cast<size_t>(q)] -
                           a[static_cast<size_t>(p)][static_cast<size_t>(p)]) /
                    apq;
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a[static_cast<size_t>(i)][static_cast<size_t>(p)];
                    const double aiq = a[static_cast<size_t>(i)][static_cast<size_t>(q)];
                    a[static_cast<size_t>(i)][static_cast<size_t>(p)] = c * aip - s * aiq;
                    a[static_cast<size_t>(i)][static_cast<size_t>(q)] = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a[static_cast<size_t>(p)][static_cast<size_t>(i)];
                    const double aqi = a[static_cast<size_t>(q)][static_cast<size_t>(i)];
                    a[static_cast<size_t>(p)][static_cast<size_t>(i)] = c * api - s * aqi;
                    a[static_cast<size_t>(q)][static_cast<size_t>(i)] = s * api + c * aqi;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = a[static_cast<size_t>(i)][static_cast<size_t>(i)];
    std::sort(ev.begin(), ev.end());
    return ev;
}

DiffPoly gd_heat_invariant(int j) {
    using oscitrace::d_dy;
    using oscitrace::mono_mul;
    const DiffPoly v = DiffPoly::mono(Rational(1), 0, {0});

    static std::vector<DiffPoly> rho = {DiffPoly::constant(Rational(1, 2))};
    for (int m = static_cast<int>(rho.size()); m <= j; ++m) {
        DiffPoly acc;
        for (int i = 0; i <= m - 1; ++i) {
            const int k = m - 1 - i;
            const DiffPoly& ri = rho[static_cast<size_t>(i)];
            const DiffPoly& rk = rho[static_cast<size_t>(k)];
            acc += mono_mul(ri, d_dy(d_dy(rk))).scaled(Rational(-2));
            acc += mono_mul(d_dy(ri), d_dy(rk));
            acc += mono_mul(v, mono_mul(ri, rk)).scaled(Rational(4));
        }
        for (int i = 1; i <= m - 1; ++i)
            acc += mono_mul(rho[static_cast<size_t>(i)], rho[static_cast<size_t>(m - i)])
                       .scaled(Rational(4));
        rho.push_back(acc.scaled(Rational(-1, 4)));
    }
    // a_j = rho_j * 2 * 4^j j! / (2j)!
    const Rational norm =
        Rational(2 * oscitrace::pow_big(4, static_cast<unsigned>(j)) *
                     oscitrace::factorial_big(static_cast<unsigned>(j)),
                 oscitrace::factorial_big(static_cast<unsigned>(2 * j)));
    return rho[static_cast<size_t>(j)].scaled(norm);
}

namespace {

// truncated Taylor series with exact rational coefficients
using RSeries = std::vector<Rational>;

RSeries rs_mul(const RSeries& a, const RSeries& b) {
    RSeries out(a.size(), Rational(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t k = 0; i + k < a.size(); ++k) out[i + k] += a[i] * b[k];
    }
    return out;
}

RSeries rs_div(const RSeries& a, const RSeries& b) {
    RSeries out(a.size(), Rational(0));
    for (size_t n = 0; n < a.size(); ++n) {
        Rational acc = a[n];
        for (size_t k = 1; k <= n; ++k) acc -= b[k] * out[n - k];
        out[n] = acc / b[0];
    }
    return out;
}

// (1 + w)^alpha with w[0] = 0
RSeries rs_pow(const RSeries& a, const Rational& alpha) {
    RSeries w = a;
    w[0] = 0;
    RSeries out(a.size(), Rational(0));
    out[0] = 1;
    RSeries wp = out;
    Rational binom(1);
    for (size_t m = 1; m < a.size(); ++m) {
        wp = rs_mul(wp, w);
        binom *= (alpha - Rational(static_cast<int>(m) - 1)) / Rational(static_cast<int>(m));
        for (size_t i = 0; i < a.size(); ++i) out[i] += binom * wp[i];
    }
    return out;
}

// exp(a) with a[0] = 0
RSeries rs_exp(const RSeries& a) {
    RSeries out(a.size(), Rational(0));
    out[0] = 1;
    for (size_t n = 1; n < a.size(); ++n) {
        Rational acc(0);
        for (size_t k = 1; k <= n; ++k)
            acc += Rational(static_cast<int>(k)) * a[k] * out[n - k];
        out[n] = acc / Rational(static_cast<int>(n));
    }
    return out;
}

} // namespace

Rational mehler_heat_coefficient(int j, const Rational& omega, const Rational& x0) {
    const size_t len = static_cast<size_t>(j) + 1;
    // sinh(2wt)/(2wt) = sum_m (2w)^{2m} t^{2m} / (2m+1)!
    RSeries sinh_ratio(len, Rational(0));
    Rational w2(1);
    for (size_t m = 0; 2 * m < len; ++m) {
        sinh_ratio[2 * m] =
            Rational(oscitrace::pow_big(2, static_cast<unsigned>(2 * m)),
                     oscitrace::factorial_big(static_cast<unsigned>(2 * m + 1))) *
            w2;
        w2 *= omega * omega;
    }
    // sinh(wt), cosh(wt) coefficient-wise: w^p / p! on odd/even p
    RSeries sinh_w(len, Rational(0)), cosh_w(len, Rational(0));
    Rational wp(1);
    oscitrace::BigInt fact(1);
    for (size_t p = 0; p < len; ++p) {
        if (p > 0) fact *= static_cast<int>(p);
        (p % 2 == 0 ? cosh_w : sinh_w)[p] = wp / Rational(fact);
        wp *= omega;
    }

    const RSeries amp = rs_pow(sinh_ratio, Rational(-1, 2));
    RSeries tanh_w = rs_div(sinh_w, cosh_w);
    for (auto& c : tanh_w) c *= -omega * x0 * x0;
    const RSeries damp = rs_exp(tanh_w);
    return rs_mul(amp, damp)[static_cast<size_t>(j)];
}

Rational eval_exact(const DiffPoly& p, const std::vector<Rational>& jet) {
    Rational sum(0);
    for (const auto& m : p.monos()) {
        if (m.z_power != 0) throw std::invalid_argument("eval_exact: z present");
        Rational term = m.coeff;
        for (int k : m.factors) term *= jet.at(static_cast<size_t>(k));
        sum += term;
    }
    return sum;
}

namespace {

std::vector<std::pair<int, std::string>> split_terms(const std::string& text) {
    std::vector<std::pair<int, std::string>> terms;
    int sign = 1;
    std::string cur;
    size_t i = 0;
    if (text.rfind("-", 0) == 0) {
        sign = -1;
        i = 1;
    }
    while (i < text.size()) {
        if (text.compare(i, 3, " + ") == 0) {
            terms.push_back({sign, cur});
            cur.clear();
            sign = 1;
            i += 3;
        } else if (text.compare(i, 3, " - ") == 0) {
            terms.push_back({sign, cur});
            cur.clear();
            sign = -1;
            i += 3;
        } else {
            cur.push_back(text[i]);
            ++i;
        }
    }
    terms.push_back({sign, cur});
    return terms;
}

} // namespace

DiffPoly parse_diffpoly(const std::string& text) {
    if (text == "0") return DiffPoly::zero();
    DiffPoly out;
    for (const auto& [sign, body] : split_terms(text)) {
        Rational coeff(sign);
        int z_power = 0;
        std::vector<int> factors;
        std::istringstream is(body);
        std::string tok;
        bool coeff_seen = false;
        while (is >> tok) {
            if (!coeff_seen && (std::isdigit(tok[0]) != 0)) {
                coeff_seen = true;
                const auto slash = tok.find('/');
                if (slash == std::string::npos)
                    coeff *= Rational(oscitrace::BigInt(tok));
                else
                    coeff *= Rational(oscitrace::BigInt(tok.substr(0, slash)),
                                      oscitrace::BigInt(tok.substr(slash + 1)));
                continue;
            }
            // factor token: z[^m], v['...][^m], v^(k)[^m]
            size_t pos = 1;
            int base_order = -1; // -1 marks z
            if (tok[0] == 'v') {
                base_order = 0;
                if (pos < tok.size() && tok.compare(pos, 2, "^(") == 0) {
                    const auto close = tok.find(')', pos);
                    base_order = std::stoi(tok.substr(pos + 2, close - pos - 2));
                    pos = close + 1;
                } else {
                    while (pos < tok.size() && tok[pos] == '\'') {
                        ++base_order;
                        ++pos;
                    }
                }
            } else if (tok[0] != 'z') {
                throw std::invalid_argument("parse_diffpoly: bad token " + tok);
            }
            int power = 1;
            if (pos < tok.size() && tok[pos] == '^')
                power = std::stoi(tok.substr(pos + 1));
            if (base_order < 0)
                z_power += power;
            else
                for (int r = 0; r < power; ++r) factors.push_back(base_order);
        }
        out += DiffPoly::mono(coeff, z_power, std::move(factors));
    }
    return out;
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    // odd index count: panels must be even
    return sum * h / 3.0;
}

} // namespace oracles
