#pragma once

#include <span>
#include <string>
#include <vector>

#include "oscitrace/rational.hpp"

namespace oscitrace {

// One term  coeff * z^m * v^(k1) v^(k2) ...  of a differential polynomial in
// an abstract function v and the displacement z = y - x.  `factors` holds the
// derivative orders k_i in sorted order.
struct DiffMono {
    Rational coeff;
    int z_power = 0;
    std::vector<int> factors;

    int degree() const { return z_power + static_cast<int>(factors.size()); }
    // scaling weight: z counts -1, v^(k) counts k+2
    int weight() const;
};

// Differential polynomial in canonical order: degree descending, then
// z_power ascending, then factor multiset lexicographic.  Monomials with
// equal (z_power, factors) are merged; zero coefficients are dropped.
class DiffPoly {
public:
    DiffPoly() = default;
    explicit DiffPoly(std::vector<DiffMono> monos);

    static DiffPoly zero() { return DiffPoly{}; }
    static DiffPoly constant(const Rational& c);
    // single monomial c * z^m * prod v^(k)
    static DiffPoly mono(const Rational& c, int z_power, std::vector<int> factors);

    const std::vector<DiffMono>& monos() const { return monos_; }
    bool is_zero() const { return monos_.empty(); }
    bool has_z() const;
    int max_derivative_order() const;

    DiffPoly& operator+=(const DiffPoly& rhs);
    friend DiffPoly operator+(DiffPoly lhs, const DiffPoly& rhs) { return lhs += rhs; }
    friend DiffPoly operator-(const DiffPoly& lhs, const DiffPoly& rhs);
    DiffPoly scaled(const Rational& c) const;

    friend bool operator==(const DiffPoly& a, const DiffPoly& b);

private:
    std::vector<DiffMono> monos_;
    void normalize();
};

DiffPoly mono_mul(const DiffPoly& p, const DiffPoly& q);
inline DiffPoly operator*(const DiffPoly& p, const DiffPoly& q) { return mono_mul(p, q); }

// d/dy with z = y - x (dz/dy = 1): z^m -> m z^(m-1), v^(k) -> v^(k+1)
DiffPoly d_dy(const DiffPoly& p);

// one application of A = -d^2/dy^2 + v
DiffPoly apply_A(const DiffPoly& p);

// exact Gamma(j + 1/2) / Gamma(k + 3/2); the sqrt(pi) factors cancel
Rational gamma_half_ratio(int j, int k);

inline constexpr int kDefaultMaxHeatOrder = 8;

// local heat invariant a_j[v]; results are memoized behind a synchronized
// cache.  Throws std::invalid_argument for j < 0 or j > max_order.
DiffPoly heat_invariant(int j, int max_order = kDefaultMaxHeatOrder);

// substitute jet[k] for v^(k); requires p free of z and jet long enough
double eval_diffpoly(const DiffPoly& p, std::span<const double> jet);

// flattened double-coefficient form for repeated evaluation
struct CompiledDiffPoly {
    struct Term {
        double coeff;
        std::vector<int> factors;
    };
    std::vector<Term> terms;
    int max_order = -1;

    double eval(std::span<const double> jet) const;
};
CompiledDiffPoly compile(const DiffPoly& p);

enum class RenderFormat { plain, latex };
std::string render(const DiffPoly& p, RenderFormat format = RenderFormat::plain);

} // namespace oscitrace
