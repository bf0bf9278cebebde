#pragma once

// Independent test oracles.  Nothing here may call the implementation path
// it is used to check.

#include <functional>
#include <vector>

#include "oscitrace/diffpoly.hpp"
#include "oscitrace/rational.hpp"
#include "oscitrace/spectra.hpp"

namespace oracles {

// cyclic Jacobi rotations on a dense copy; eigenvalues ascending
std::vector<double> jacobi_eigenvalues(const oscitrace::SymMatrix& m);

// heat invariant a_j[v] from the Gelfand-Dikii equation for the diagonal
// resolvent, -2 R R'' + (R')^2 + 4 (v - lambda) R^2 = 1, solved order by
// order in s = sqrt(-lambda); independent of the operator-power route
oscitrace::DiffPoly gd_heat_invariant(int j);

// exact rational a_j[w^2 x^2](x0) from the Mehler diagonal
// (sinh(2wt)/(2wt))^{-1/2} exp(-w x0^2 tanh(wt)), Taylor coefficient of t^j
oscitrace::Rational mehler_heat_coefficient(int j, const oscitrace::Rational& omega,
                                            const oscitrace::Rational& x0);

// exact rational evaluation of a z-free DiffPoly on a rational jet
oscitrace::Rational eval_exact(const oscitrace::DiffPoly& p,
                               const std::vector<oscitrace::Rational>& jet);

// parser for the plain render format, used for round-trip tests
oscitrace::DiffPoly parse_diffpoly(const std::string& text);

// composite Simpson at 2^k panels: an independent quadrature family
double simpson(const std::function<double(double)>& f, double a, double b, int panels);

} // namespace oracles
