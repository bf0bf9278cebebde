#pragma once

#include <span>
#include <string>
#include <vector>

#include "oscitrace/potential.hpp"

namespace oscitrace {

// dense symmetric matrix, lower triangle packed row-wise:
// a(i,j) = data[i(i+1)/2 + j] for j <= i
class SymMatrix {
public:
    explicit SymMatrix(int n) : n_(n), data_(static_cast<size_t>(n) * (n + 1) / 2, 0.0) {}

    int dim() const { return n_; }
    double& at(int i, int j) { return data_[index(i, j)]; }
    double at(int i, int j) const { return data_[index(i, j)]; }
    std::vector<double>& packed() { return data_; }
    const std::vector<double>& packed() const { return data_; }

private:
    int n_;
    std::vector<double> data_;
    size_t index(int i, int j) const {
        if (j > i) std::swap(i, j);
        return static_cast<size_t>(i) * (i + 1) / 2 + j;
    }
};

enum class SpectrumMethod { galerkin, shooting };

struct Spectrum {
    std::vector<double> eigenvalues; // strictly increasing, lambda_1 first
    int basis_size = 0;
    int reliable_count = 0;
    SpectrumMethod method = SpectrumMethod::galerkin;
    std::string potential_id;
    // per-eigenvalue N-vs-2N convergence gaps |lambda_n(N) - lambda_n(2N)|
    std::vector<double> gaps;

    double lambda(int n) const { return eigenvalues.at(static_cast<size_t>(n - 1)); }
    static double lambda0(int n) { return 2.0 * n - 1.0; }
};

// L^2-normalized Hermite function psi_n (n from 0), stable three-term
// recurrence seeded by psi_0 = pi^{-1/4} e^{-x^2/2}
double hermite_fn(int n, double x);

// psi_0..psi_{count-1} at x in one recurrence pass
void hermite_fn_row(int count, double x, std::span<double> out);

// M[m][n] = (2n-1) delta_mn + int q psi_{m-1} psi_{n-1}, the perturbation
// integral over supp q at >= 8 nodes per oscillation wavelength of psi_{N-1}
SymMatrix galerkin_matrix(const Potential& q, int N);

// full eigenvalue set by Householder tridiagonalization (packed storage)
// followed by implicit-shift QL; ascending, deterministic
std::vector<double> eigen_sym(const SymMatrix& m);

// Galerkin eigenvalues with an N-vs-2N reliability check
Spectrum compute_spectrum(const Potential& q, int N, int count, double tol);

struct ShootingResult {
    double lambda = 0.0;
    int nodes = 0;               // interior nodes of the eigenfunction
    double wronskian_scale = 0.0; // sin(total Pruefer phase) at the match point
};

// independent eigenvalue oracle: integrates the Pruefer phase form of the
// log-derivative from +-L toward 0 and drives the Wronskian
// w = psi_-' psi_+ - psi_- psi_+' to zero inside the standard bracket;
// the accumulated phase certifies the index n
ShootingResult shooting_eigenvalue_full(const Potential& q, int n);
double shooting_eigenvalue(const Potential& q, int n);

namespace detail {
// total Pruefer phase Phi(lambda) at the matching point; eigenvalues solve
// Phi = n pi, and Phi is strictly increasing in lambda
double total_phase(const Potential& q, double lambda);
// exposed for the bracket-failure test path
double solve_in_bracket(const Potential& q, int n, double lo, double hi);
} // namespace detail

} // namespace oscitrace
