#pragma once

#include <stdexcept>
#include <vector>

#include "oscitrace/coeffs.hpp"
#include "oscitrace/series.hpp"
#include "oscitrace/spectra.hpp"

namespace oscitrace {

struct ResidualPoint {
    int n = 0;
    double lambda0 = 0.0;
    double residual = 0.0;
};

// residual(n) = lambda_n - lambda0_n - sum_{j<=J} c_j (lambda0_n)^{-j/2},
// over the reliable part of the spectrum
std::vector<ResidualPoint> asymptotic_residual(const Spectrum& spec, const HalfPowerSeries& c,
                                               int J);

struct FitResult {
    double exponent_estimate = 0.0;    // free-exponent log-log slope
    double coefficient_estimate = 0.0; // amplitude at the expected exponent
    int window_lo = 0;
    int window_hi = 0;
    double r_squared = 0.0;
};

// least-squares fit residual(n) ~ C (lambda0_n)^{-expected_exponent}; the
// exponent is also fit freely in a second (log-log) pass.  Throws on a
// degenerate window (< 20 points or all-zero residuals).
FitResult fit_next_coefficient(const std::vector<ResidualPoint>& residuals,
                               double expected_exponent);

// averages consecutive (n, n+1) residuals, cancelling the (-1)^n WKB
// oscillation of the spectral shifts that sits on top of the smooth
// half-power decay
std::vector<ResidualPoint> parity_smoothed(const std::vector<ResidualPoint>& residuals);

// thrown when t is below the smallest value for which the truncated-spectrum
// tail estimate is trustworthy
struct HeatTraceMinT : std::runtime_error {
    explicit HeatTraceMinT(double t_min_)
        : std::runtime_error("heat_trace_delta: t below reliability threshold"), t_min(t_min_) {}
    double t_min;
};

// Tr(e^{-tH} - e^{-tH0}) from the computed spectrum, with the n > N tail
// completed from lambda_n ~ lambda0_n + c_1 (lambda0_n)^{-1/2}
double heat_trace_delta(const Spectrum& spec, const HalfPowerSeries& c, double t);

// (4 pi t)^{-1/2} sum_{j=1..J} t^j I_j from the heat-invariant integrals
double heat_expansion_rhs(const BCoeffs& bc, double t, int J);
double heat_expansion_rhs(const Potential& q, double t, int J);

struct TraceTerms {
    double partial_sum = 0.0;      // Kahan sum of the subtracted powers, n <= N
    double tail_completion = 0.0;  // asymptotic completion for n > N
    double zeta_correction = 0.0;  // sum_j d_j(-k) Z0(-k + j/2)
    std::vector<double> d;         // d_j(-k), j = 0..2k+6
    double bound_series = 0.0;     // omitted smooth tail orders
    double bound_oscillation = 0.0; // alternating WKB component beyond N
    double bound_spectral = 0.0;   // eigenvalue convergence-gap allowance
    double bound_roundoff = 0.0;
};

struct TraceReport {
    int k = 0;
    double residual = 0.0;
    double tail_error_bound = 0.0;
    int N_used = 0;
    TraceTerms terms;
    bool flagged = false; // bound above the requested tolerance
};

// regularized trace identity for k in {1,2,3}: the spec sum minus its
// asymptotic subtraction, completed by odd tails and Z0 corrections.
// n_use = 0 means the full reliable spectrum.
TraceReport trace_identity(int k, const Spectrum& spec, const HalfPowerSeries& c,
                           double requested_tol = 1e-3, int n_use = 0);

} // namespace oscitrace
