#pragma once

#include <optional>
#include <string>
#include <vector>

namespace oscitrace {

// derivative data (q(x), q'(x), ..., q^(order)(x)) at one point
struct Jet {
    double point = 0.0;
    std::vector<double> values;
    int order() const { return static_cast<int>(values.size()) - 1; }
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

inline constexpr int kMaxJetOrder = 16;

// Compactly supported smooth perturbation built from terms
// P(x) * B((x-center)/radius), B(u) = exp(-1/(1-u^2)) on (-1,1), else 0.
// q and all of its derivatives vanish identically outside the term supports.
class Potential {
public:
    struct Term {
        std::vector<double> poly; // P coefficients, constant term first
        double center = 0.0;
        double radius = 1.0;
    };

    Potential() = default; // q = 0
    explicit Potential(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // smallest closed interval containing all term supports; nullopt if q = 0
    std::optional<Interval> support() const;

    double operator()(double x) const;

    // numerical sup of |q| over the support (dense sampling)
    double max_abs() const;

    friend bool operator==(const Potential&, const Potential&) = default;

private:
    std::vector<Term> terms_;
};

// jets of q via truncated-Taylor arithmetic on P(x)*exp(-1/(1-u^2));
// exact zeros outside the support (and once the bump exponent underflows)
Jet eval_jet(const Potential& q, double x, int order);

// jet of v = x^2 + q
Jet v_jet(const Potential& q, double x, int order);

// JSON schema: {"terms":[{"poly":[a0,a1,...],"center":c,"radius":r}]}
std::string potential_to_json(const Potential& q);
Potential potential_from_json(const std::string& text);

// q_ref(x) = 0.25 * exp(-1/(1-x^2)) on (-1,1): the reference perturbation
Potential reference_potential();

} // namespace oscitrace
