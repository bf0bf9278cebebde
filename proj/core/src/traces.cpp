#include "oscitrace/traces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oscitrace/zeta.hpp"

namespace oscitrace {

namespace {

struct Kahan {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

} // namespace

std::vector<ResidualPoint> asymptotic_residual(const Spectrum& spec, const HalfPowerSeries& c,
                                               int J) {
    if (J > c.trunc()) throw std::invalid_argument("asymptotic_residual: J beyond c truncation");
    std::vector<ResidualPoint> out;
    out.reserve(static_cast<size_t>(spec.reliable_count));
    for (int n = 1; n <= spec.reliable_count; ++n) {
        const double lam0 = Spectrum::lambda0(n);
        double model = lam0;
        for (int j = 1; j <= J; ++j) model += c.at(j) * std::pow(lam0, -0.5 * j);
        out.push_back({n, lam0, spec.lambda(n) - model});
    }
    return out;
}

std::vector<ResidualPoint> parity_smoothed(const std::vector<ResidualPoint>& residuals) {
    std::vector<ResidualPoint> out;
    for (size_t i = 0; i + 1 < residuals.size(); i += 2) {
        ResidualPoint p;
        p.n = residuals[i].n;
        p.lambda0 = 0.5 * (residuals[i].lambda0 + residuals[i + 1].lambda0);
        p.residual = 0.5 * (residuals[i].residual + residuals[i + 1].residual);
        out.push_back(p);
    }
    return out;
}

FitResult fit_next_coefficient(const std::vector<ResidualPoint>& residuals,
                               double expected_exponent) {
    if (residuals.size() < 20) throw std::invalid_argument("fit_next_coefficient: degenerate window");
    double max_abs = 0.0;
    for (const auto& p : residuals) max_abs = std::max(max_abs, std::abs(p.residual));
    if (max_abs == 0.0) throw std::invalid_argument("fit_next_coefficient: all residuals zero");

    FitResult fit;
    fit.window_lo = residuals.front().n;
    fit.window_hi = residuals.back().n;

    // fixed-exponent amplitude
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : residuals) {
        const double x = std::pow(p.lambda0, -expected_exponent);
        sxy += p.residual * x;
        sxx += x * x;
    }
    fit.coefficient_estimate = sxy / sxx;

    // free exponent: maximize the projection (sum r x_e)^2 / sum x_e^2 over
    // the decay rate e, fitting in linear space (robust against the
    // oscillating component, which is near-orthogonal to any smooth power)
    const auto projection = [&](double e) {
        double rx = 0.0, xx = 0.0;
        for (const auto& p : residuals) {
            const double x = std::pow(p.lambda0, -e);
            rx += p.residual * x;
            xx += x * x;
        }
        return rx * rx / xx;
    };
    double best_e = 0.25, best_p = -1.0;
    for (double e = 0.25; e <= 4.0; e += 0.05) {
        const double pe = projection(e);
        if (pe > best_p) {
            best_p = pe;
            best_e = e;
        }
    }
    double lo_e = best_e - 0.05, hi_e = best_e + 0.05;
    for (int it = 0; it < 60; ++it) {
        const double m1 = lo_e + (hi_e - lo_e) / 3.0;
        const double m2 = hi_e - (hi_e - lo_e) / 3.0;
        if (projection(m1) < projection(m2))
            lo_e = m1;
        else
            hi_e = m2;
    }
    fit.exponent_estimate = -0.5 * (lo_e + hi_e); // reported as the log-log slope

    double rr = 0.0;
    for (const auto& p : residuals) rr += p.residual * p.residual;
    fit.r_squared = rr > 0.0 ? projection(-fit.exponent_estimate) / rr : 1.0;
    return fit;
}

namespace {

// smallest admissible t: perturbation-scale tail estimate must be below 1e-10
double heat_trace_guard(double t, double ptb_scale, double lam0_next) {
    return ptb_scale * t * std::pow(lam0_next, -1.5) * std::exp(-t * lam0_next) /
           (1.0 - std::exp(-2.0 * t));
}

} // namespace

double heat_trace_delta(const Spectrum& spec, const HalfPowerSeries& c, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("heat_trace_delta: t must be positive");
    const int N = spec.reliable_count;
    if (N < 1) throw std::invalid_argument("heat_trace_delta: empty spectrum");

    double ptb = 0.0;
    for (int n = 1; n <= N; ++n)
        ptb = std::max(ptb, std::abs(spec.lambda(n) - Spectrum::lambda0(n)));
    const double lam0_next = Spectrum::lambda0(N + 1);
    if (ptb > 0.0 && heat_trace_guard(t, ptb, lam0_next) >= 1e-10) {
        double lo = t, hi = 1.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (heat_trace_guard(mid, ptb, lam0_next) >= 1e-10 ? lo : hi) = mid;
        }
        throw HeatTraceMinT(hi);
    }

    Kahan partial;
    for (int n = 1; n <= N; ++n)
        partial.add(std::exp(-t * spec.lambda(n)) - std::exp(-t * Spectrum::lambda0(n)));

    // n > N: lambda_n ~ lambda0_n + c1 (lambda0_n)^{-1/2}
    const double c1 = c.at(1);
    Kahan tail;
    const int n_max = N + static_cast<int>(std::ceil(30.0 / t));
    for (int n = N + 1; n <= n_max; ++n) {
        const double lam0 = Spectrum::lambda0(n);
        const double w = std::exp(-t * lam0);
        if (w < 1e-22) break;
        tail.add(w * std::expm1(-t * c1 / std::sqrt(lam0)));
    }
    return partial.sum + tail.sum;
}

double heat_expansion_rhs(const BCoeffs& bc, double t, int J) {
    if (J > bc.max_j) throw std::invalid_argument("heat_expansion_rhs: J beyond available invariants");
    double sum = 0.0;
    double tpow = 1.0;
    for (int j = 1; j <= J; ++j) {
        tpow *= t;
        sum += tpow * bc.integral(j);
    }
    return sum / std::sqrt(4.0 * std::numbers::pi * t);
}

double heat_expansion_rhs(const Potential& q, double t, int J) {
    return heat_expansion_rhs(compute_bcoeffs(q, J), t, J);
}

TraceReport trace_identity(int k, const Spectrum& spec, const HalfPowerSeries& c,
                           double requested_tol, int n_use) {
    if (k < 1 || k > 3) throw std::invalid_argument("trace_identity: k must be in {1,2,3}");
    if (c.trunc() < 2 * k + 4)
        throw std::invalid_argument("trace_identity: c needed through key 2k+4");

    TraceReport rep;
    rep.k = k;
    rep.N_used = n_use > 0 ? std::min(n_use, spec.reliable_count) : spec.reliable_count;
    const int N = rep.N_used;

    const DTable d = d_table(static_cast<double>(-k), c, 2 * k + 6);
    rep.terms.d = d.values;

    // sum_{n<=N} { lambda_n^k - sum_{j=0}^{2k+1} d_j(-k) (lambda0_n)^{k-j/2} }
    Kahan partial;
    double magnitude = 0.0;
    std::vector<double> summands(static_cast<size_t>(N));
    for (int n = 1; n <= N; ++n) {
        const double lam = spec.lambda(n);
        const double lam0 = Spectrum::lambda0(n);
        double term = std::pow(lam, k);
        magnitude += std::abs(term);
        for (int j = 0; j <= 2 * k + 1; ++j) {
            if (d.at(j) == 0.0) continue;
            const double piece = d.at(j) * std::pow(lam0, k - 0.5 * j);
            term -= piece;
            magnitude += std::abs(piece);
        }
        summands[static_cast<size_t>(n - 1)] = term;
        partial.add(term);
    }
    rep.terms.partial_sum = partial.sum;

    // completion for n > N; the j = 2k+2 coefficient vanishes identically
    // (d_{2k+2}(-k) = 0), leaving the j = 2k+3 term at exponent -3/2
    rep.terms.tail_completion = d.at(2 * k + 3) * odd_tail(1.5, N);

    Kahan zsum;
    for (int j = 1; j <= 2 * k + 1; ++j) {
        if (d.at(j) == 0.0) continue;
        zsum.add(d.at(j) * Z0(-static_cast<double>(k) + 0.5 * j).value);
    }
    rep.terms.zeta_correction = zsum.sum;

    rep.residual = rep.terms.partial_sum + rep.terms.tail_completion + rep.terms.zeta_correction;

    // envelope over the omitted orders j = 2k+4..2k+6 with a factor-2 margin
    // for the rest of the asymptotic tail
    double series_bound = 0.0;
    for (int j = 2 * k + 4; j <= 2 * k + 6; ++j)
        series_bound += std::abs(d.at(j)) * odd_tail(0.5 * j - k, N);
    rep.terms.bound_series = 2.0 * series_bound;

    // the spectral shifts carry an alternating WKB component ~ (-1)^n q-hat
    // that the smooth completion omits; its tail is bounded by the envelope
    // of the last consecutive-summand differences
    double env = 0.0;
    const int env_lo = std::max(1, N - 32);
    for (int n = env_lo; n < N; ++n)
        env = std::max(env, 0.5 * std::abs(summands[static_cast<size_t>(n)] -
                                           summands[static_cast<size_t>(n - 1)]));
    rep.terms.bound_oscillation = 3.5 * env;
    double spectral = 0.0;
    if (!spec.gaps.empty()) {
        for (int n = 1; n <= N; ++n) {
            const double lam = spec.lambda(n);
            spectral += 2.0 * k * std::pow(lam, k - 1) * spec.gaps[static_cast<size_t>(n - 1)];
        }
    }
    rep.terms.bound_spectral = spectral;
    rep.terms.bound_roundoff = 4.0 * 2.2e-16 * magnitude;
    rep.tail_error_bound = rep.terms.bound_series + rep.terms.bound_oscillation +
                           rep.terms.bound_spectral + rep.terms.bound_roundoff;
    rep.flagged = !(rep.tail_error_bound < requested_tol) ||
                  (n_use > 0 && n_use > spec.reliable_count);
    return rep;
}

} // namespace oscitrace
