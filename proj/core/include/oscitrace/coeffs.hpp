#pragma once

#include <string>
#include <vector>

#include "oscitrace/potential.hpp"

namespace oscitrace {

// b_j of the inverse expansion, together with the raw integrals
// I_j = int (a_j[x^2+q] - a_j[x^2]) dx they come from
struct BCoeffs {
    struct Row {
        int j = 0;
        double integral = 0.0; // I_j before the Gamma prefactor
        double b = 0.0;
        double quad_error = 0.0;
        int panels = 0;
        bool converged = true;
    };
    std::vector<Row> rows; // rows[j-1] holds order j
    int max_j = 0;
    std::string potential_id;
    int nodes_per_panel = 20;

    double b(int j) const { return rows.at(static_cast<size_t>(j - 1)).b; }
    double integral(int j) const { return rows.at(static_cast<size_t>(j - 1)).integral; }
    std::vector<double> b_values() const; // [b_1, ..., b_maxj]
};

// a_j[x^2+q](x) - a_j[x^2](x); identically 0 outside supp q
double integrand_delta(int j, const Potential& q, double x);

// exact 1/(sqrt(pi) Gamma(3/2 - j)) via the half-integer Gamma recurrence
double gamma_prefactor(int j);

struct BCoeffResult {
    double value = 0.0;
    double integral = 0.0;
    double error = 0.0;
    int panels = 0;
    bool converged = true;
};

// Eq-style b_j = prefactor * int integrand_delta over supp q, composite
// Gauss-Legendre with panel doubling to rel 1e-10 (error recorded at cap)
BCoeffResult b_coeff(int j, const Potential& q, double rel_tol = 1e-10, int max_panels = 4096);

BCoeffs compute_bcoeffs(const Potential& q, int max_j, double rel_tol = 1e-10);

} // namespace oscitrace
