#include "oscitrace/diffpoly.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace oscitrace {

int DiffMono::weight() const {
    int w = -z_power;
    for (int k : factors) w += k + 2;
    return w;
}

namespace {

// canonical order: degree desc, z_power asc, factors lex asc
bool mono_less(const DiffMono& a, const DiffMono& b) {
    if (a.degree() != b.degree()) return a.degree() > b.degree();
    if (a.z_power != b.z_power) return a.z_power < b.z_power;
    return a.factors < b.factors;
}

} // namespace

DiffPoly::DiffPoly(std::vector<DiffMono> monos) : monos_(std::move(monos)) { normalize(); }

DiffPoly DiffPoly::constant(const Rational& c) { return mono(c, 0, {}); }

DiffPoly DiffPoly::mono(const Rational& c, int z_power, std::vector<int> factors) {
    DiffPoly p;
    if (c != 0) {
        std::sort(factors.begin(), factors.end());
        p.monos_.push_back(DiffMono{c, z_power, std::move(factors)});
    }
    return p;
}

void DiffPoly::normalize() {
    std::map<std::pair<int, std::vector<int>>, Rational> merged;
    for (auto& m : monos_) {
        std::sort(m.factors.begin(), m.factors.end());
        merged[{m.z_power, m.factors}] += m.coeff;
    }
    monos_.clear();
    for (auto& [key, c] : merged) {
        if (c != 0) monos_.push_back(DiffMono{std::move(c), key.first, key.second});
    }
    std::sort(monos_.begin(), monos_.end(), mono_less);
}

bool DiffPoly::has_z() const {
    return std::any_of(monos_.begin(), monos_.end(),
                       [](const DiffMono& m) { return m.z_power != 0; });
}

int DiffPoly::max_derivative_order() const {
    int order = -1;
    for (const auto& m : monos_)
        for (int k : m.factors) order = std::max(order, k);
    return order;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& rhs) {
    monos_.insert(monos_.end(), rhs.monos_.begin(), rhs.monos_.end());
    normalize();
    return *this;
}

DiffPoly operator-(const DiffPoly& lhs, const DiffPoly& rhs) {
    return lhs + rhs.scaled(Rational(-1));
}

DiffPoly DiffPoly::scaled(const Rational& c) const {
    if (c == 0) return DiffPoly{};
    DiffPoly out = *this;
    for (auto& m : out.monos_) m.coeff *= c;
    return out;
}

bool operator==(const DiffPoly& a, const DiffPoly& b) {
    if (a.monos_.size() != b.monos_.size()) return false;
    for (size_t i = 0; i < a.monos_.size(); ++i) {
        const auto& x = a.monos_[i];
        const auto& y = b.monos_[i];
        if (x.z_power != y.z_power || x.factors != y.factors || x.coeff != y.coeff)
            return false;
    }
    return true;
}

DiffPoly mono_mul(const DiffPoly& p, const DiffPoly& q) {
    std::vector<DiffMono> out;
    out.reserve(p.monos().size() * q.monos().size());
    for (const auto& a : p.monos()) {
        for (const auto& b : q.monos()) {
            DiffMono m;
            m.coeff = a.coeff * b.coeff;
            m.z_power = a.z_power + b.z_power;
            m.factors = a.factors;
            m.factors.insert(m.factors.end(), b.factors.begin(), b.factors.end());
            out.push_back(std::move(m));
        }
    }
    return DiffPoly{std::move(out)};
}

DiffPoly d_dy(const DiffPoly& p) {
    std::vector<DiffMono> out;
    for (const auto& m : p.monos()) {
        if (m.z_power > 0) {
            DiffMono d = m;
            d.coeff *= m.z_power;
            d.z_power -= 1;
            out.push_back(std::move(d));
        }
        for (size_t i = 0; i < m.factors.size(); ++i) {
            DiffMono d = m;
            d.factors[i] += 1;
            out.push_back(std::move(d));
        }
    }
    return DiffPoly{std::move(out)};
}

DiffPoly apply_A(const DiffPoly& p) {
    return mono_mul(DiffPoly::mono(Rational(1), 0, {0}), p) - d_dy(d_dy(p));
}

Rational gamma_half_ratio(int j, int k) {
    if (j < 0 || k < 0) throw std::invalid_argument("gamma_half_ratio: negative argument");
    // Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!), with n = j and n = k+1
    const Rational num(factorial_big(2 * j), pow_big(4, j) * factorial_big(j));
    const Rational den(factorial_big(2 * (k + 1)), pow_big(4, k + 1) * factorial_big(k + 1));
    return num / den;
}

namespace {

DiffPoly heat_invariant_uncached(int j) {
    if (j == 0) return DiffPoly::constant(Rational(1));
    DiffPoly total;
    for (int k = 0; k < j; ++k) {
        DiffPoly term = DiffPoly::mono(Rational(1), 2 * k, {});
        for (int step = 0; step < k + j; ++step) term = apply_A(term);
        // restriction to y = x: keep z-free monomials only
        std::vector<DiffMono> diag;
        for (const auto& m : term.monos())
            if (m.z_power == 0) diag.push_back(m);
        DiffPoly restricted{std::move(diag)};

        Rational coeff = gamma_half_ratio(j, k);
        coeff /= Rational(pow_big(4, k) * factorial_big(k) * factorial_big(k + j) *
                          factorial_big(j - k - 1));
        if (j % 2 != 0) coeff = -coeff;
        total += restricted.scaled(coeff);
    }
    return total;
}

} // namespace

DiffPoly heat_invariant(int j, int max_order) {
    if (j < 0) throw std::invalid_argument("heat_invariant: j must be nonnegative");
    if (j > max_order) throw std::invalid_argument("heat_invariant: order above configured cap");

    static std::mutex mtx;
    static std::map<int, DiffPoly> cache;
    std::lock_guard lock(mtx);
    auto it = cache.find(j);
    if (it == cache.end()) it = cache.emplace(j, heat_invariant_uncached(j)).first;
    return it->second;
}

double eval_diffpoly(const DiffPoly& p, std::span<const double> jet) {
    if (p.has_z()) throw std::invalid_argument("eval_diffpoly: polynomial still contains z");
    if (p.max_derivative_order() + 1 > static_cast<int>(jet.size()))
        throw std::invalid_argument("insufficient jet order");
    double sum = 0.0;
    for (const auto& m : p.monos()) {
        double term = to_double(m.coeff);
        for (int k : m.factors) term *= jet[static_cast<size_t>(k)];
        sum += term;
    }
    return sum;
}

CompiledDiffPoly compile(const DiffPoly& p) {
    if (p.has_z()) throw std::invalid_argument("compile: polynomial still contains z");
    CompiledDiffPoly out;
    out.max_order = p.max_derivative_order();
    for (const auto& m : p.monos())
        out.terms.push_back({to_double(m.coeff), m.factors});
    return out;
}

double CompiledDiffPoly::eval(std::span<const double> jet) const {
    if (max_order + 1 > static_cast<int>(jet.size()))
        throw std::invalid_argument("insufficient jet order");
    double sum = 0.0;
    for (const auto& t : terms) {
        double term = t.coeff;
        for (int k : t.factors) term *= jet[static_cast<size_t>(k)];
        sum += term;
    }
    return sum;
}

namespace {

std::string v_name(int k, RenderFormat fmt) {
    if (k <= 3) return "v" + std::string(static_cast<size_t>(k), '\'');
    if (fmt == RenderFormat::latex) return "v^{(" + std::to_string(k) + ")}";
    return "v^(" + std::to_string(k) + ")";
}

std::string coeff_str(const Rational& c, RenderFormat fmt) {
    const Rational a = c < 0 ? Rational(-c) : c;
    std::ostringstream os;
    if (fmt == RenderFormat::latex && denominator(a) != 1)
        os << "\\frac{" << numerator(a) << "}{" << denominator(a) << "}";
    else if (denominator(a) != 1)
        os << numerator(a) << "/" << denominator(a);
    else
        os << numerator(a);
    return os.str();
}

void append_power(std::ostringstream& os, const std::string& base, int power, RenderFormat fmt) {
    os << base;
    if (power > 1) {
        if (fmt == RenderFormat::latex)
            os << "^{" << power << "}";
        else
            os << "^" << power;
    }
}

} // namespace

std::string render(const DiffPoly& p, RenderFormat format) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& m : p.monos()) {
        const bool neg = m.coeff < 0;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;

        const Rational mag = neg ? Rational(-m.coeff) : m.coeff;
        const bool bare = m.z_power == 0 && m.factors.empty();
        std::ostringstream body;
        if (m.z_power > 0) append_power(body, "z", m.z_power, format);
        for (size_t i = 0; i < m.factors.size();) {
            size_t run = i;
            while (run < m.factors.size() && m.factors[run] == m.factors[i]) ++run;
            if (body.tellp() > 0) body << " ";
            append_power(body, v_name(m.factors[i], format), static_cast<int>(run - i), format);
            i = run;
        }
        if (mag != 1 || bare) {
            os << coeff_str(m.coeff, format);
            if (!bare) os << " ";
        }
        os << body.str();
    }
    return os.str();
}

} // namespace oscitrace
