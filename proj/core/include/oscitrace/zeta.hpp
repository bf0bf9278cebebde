#pragma once

namespace oscitrace {

struct ZetaValue {
    double s = 0.0;
    double value = 0.0;
    double abs_err = 0.0;   // series truncation + conditioning bound
    bool near_pole = false; // |s - 1| < 1e-8: conditioning warning
};

// real-argument Riemann zeta: accelerated alternating series for s > 0,
// reflection formula for s < 0.  Throws std::domain_error at s = 1.
ZetaValue riemann_zeta(double s);

// Lanczos approximation with reflection for s < 0.5; poles at 0, -1, -2, ...
double gamma_real(double s);

// Z0(s) = (1 - 2^{-s}) zeta(s), the model spectral zeta of lambda0_n = 2n-1
ZetaValue Z0(double s);

// sum_{n > N} (2n-1)^{-s}: Euler-Maclaurin for s > 1; for s <= 1 the
// continuation convention Z0(s) - partial sum
double odd_tail(double s, int N);

namespace detail {
// the two zeta code paths, exposed for the functional-equation consistency
// tests; zeta_via_eta requires s > 0, zeta_via_reflection requires s < 1
ZetaValue zeta_via_eta(double s);
ZetaValue zeta_via_reflection(double s);
} // namespace detail

} // namespace oscitrace
