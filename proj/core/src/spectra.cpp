#include "oscitrace/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "oscitrace/quadrature.hpp"

namespace oscitrace {

double hermite_fn(int n, double x) {
    std::vector<double> row(static_cast<size_t>(n) + 1);
    hermite_fn_row(n + 1, x, row);
    return row[static_cast<size_t>(n)];
}

void hermite_fn_row(int count, double x, std::span<double> out) {
    const double psi0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (count >= 1) out[0] = psi0;
    if (count >= 2) out[1] = std::sqrt(2.0) * x * psi0;
    for (int n = 1; n + 1 < count; ++n) {
        out[static_cast<size_t>(n + 1)] =
            x * std::sqrt(2.0 / (n + 1)) * out[static_cast<size_t>(n)] -
            std::sqrt(static_cast<double>(n) / (n + 1)) * out[static_cast<size_t>(n - 1)];
    }
}

SymMatrix galerkin_matrix(const Potential& q, int N) {
    if (N < 1) throw std::invalid_argument("galerkin_matrix: N must be >= 1");
    SymMatrix m(N);
    for (int i = 0; i < N; ++i) m.at(i, i) = 2.0 * i + 1.0;

    const auto sup = q.support();
    if (!sup) return m;

    // the integrand q psi_m psi_n oscillates at wavenumbers up to twice that
    // of the highest basis function, sqrt(2N); resolve the product frequency
    const double kprod = 2.0 * std::sqrt(2.0 * N + 1.0);
    const double width = sup->hi - sup->lo;
    const int rule_order = 20;
    const int nodes_needed =
        static_cast<int>(std::ceil(10.0 * width * kprod / (2.0 * std::numbers::pi)));
    const int panels = std::max(4, (nodes_needed + rule_order - 1) / rule_order);

    const auto& rule = gauss_legendre_rule(rule_order);
    std::vector<double> psi(static_cast<size_t>(N));
    const double h = width / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = sup->lo + (p + 0.5) * h;
        for (size_t g = 0; g < rule.nodes.size(); ++g) {
            const double x = mid + 0.5 * h * rule.nodes[g];
            const double wq = 0.5 * h * rule.weights[g] * q(x);
            if (wq == 0.0) continue;
            hermite_fn_row(N, x, psi);
            double* row = m.packed().data();
            for (int i = 0; i < N; ++i) {
                const double c = wq * psi[static_cast<size_t>(i)];
                for (int j = 0; j <= i; ++j) row[j] += c * psi[static_cast<size_t>(j)];
                row += i + 1;
            }
        }
    }
    return m;
}

namespace {

// Householder reduction of a packed lower-triangle symmetric matrix to
// tridiagonal form, eigenvalues only (EISPACK tred3 lineage)
void tridiagonalize_packed(std::vector<double>& a, int n, std::vector<double>& d,
                           std::vector<double>& e) {
    d.assign(static_cast<size_t>(n), 0.0);
    e.assign(static_cast<size_t>(n), 0.0);
    auto idx = [](int i, int j) { return static_cast<size_t>(i) * (i + 1) / 2 + j; };

    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(a[idx(i, k)]);
            if (scale == 0.0) {
                e[static_cast<size_t>(i)] = a[idx(i, l)];
            } else {
                for (int k = 0; k <= l; ++k) {
                    a[idx(i, k)] /= scale;
                    h += a[idx(i, k)] * a[idx(i, k)];
                }
                double f = a[idx(i, l)];
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[static_cast<size_t>(i)] = scale * g;
                h -= f * g;
                a[idx(i, l)] = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a[idx(j, k)] * a[idx(i, k)];
                    for (int k = j + 1; k <= l; ++k) g += a[idx(k, j)] * a[idx(i, k)];
                    e[static_cast<size_t>(j)] = g / h;
                    f += e[static_cast<size_t>(j)] * a[idx(i, j)];
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a[idx(i, j)];
                    g = e[static_cast<size_t>(j)] - hh * f;
                    e[static_cast<size_t>(j)] = g;
                    for (int k = 0; k <= j; ++k)
                        a[idx(j, k)] -= f * e[static_cast<size_t>(k)] + g * a[idx(i, k)];
                }
            }
        } else {
            e[static_cast<size_t>(i)] = a[idx(i, l)];
        }
        d[static_cast<size_t>(i)] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) d[static_cast<size_t>(i)] = a[idx(i, i)];
}

double hypot2(double a, double b) {
    const double absa = std::abs(a), absb = std::abs(b);
    if (absa > absb) {
        const double r = absb / absa;
        return absa * std::sqrt(1.0 + r * r);
    }
    return absb == 0.0 ? 0.0 : absb * std::sqrt(1.0 + (absa / absb) * (absa / absb));
}

// implicit-shift QL on a symmetric tridiagonal (d, e), eigenvalues only
void ql_implicit(std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[static_cast<size_t>(i - 1)] = e[static_cast<size_t>(i)];
    e[static_cast<size_t>(n - 1)] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[static_cast<size_t>(m)]) +
                                  std::abs(d[static_cast<size_t>(m + 1)]);
                if (std::abs(e[static_cast<size_t>(m)]) <= 2.2e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 50)
                    throw std::runtime_error("eigen_sym: QL failed to converge in 50 sweeps");
                double g = (d[static_cast<size_t>(l + 1)] - d[static_cast<size_t>(l)]) /
                           (2.0 * e[static_cast<size_t>(l)]);
                double r = hypot2(g, 1.0);
                g = d[static_cast<size_t>(m)] - d[static_cast<size_t>(l)] +
                    e[static_cast<size_t>(l)] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[static_cast<size_t>(i)];
                    const double b = c * e[static_cast<size_t>(i)];
                    r = hypot2(f, g);
                    e[static_cast<size_t>(i + 1)] = r;
                    if (r == 0.0) {
                        d[static_cast<size_t>(i + 1)] -= p;
                        e[static_cast<size_t>(m)] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[static_cast<size_t>(i + 1)] - p;
                    r = (d[static_cast<size_t>(i)] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[static_cast<size_t>(i + 1)] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[static_cast<size_t>(l)] -= p;
                e[static_cast<size_t>(l)] = g;
                e[static_cast<size_t>(m)] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

std::vector<double> eigen_sym(const SymMatrix& m) {
    const int n = m.dim();
    std::vector<double> a = m.packed();
    std::vector<double> d, e;
    tridiagonalize_packed(a, n, d, e);
    ql_implicit(d, e);
    std::sort(d.begin(), d.end());
    return d;
}

Spectrum compute_spectrum(const Potential& q, int N, int count, double tol) {
    if (count > N / 2) throw std::invalid_argument("compute_spectrum: insufficient basis");
    const auto lam_n = eigen_sym(galerkin_matrix(q, N));
    const auto lam_2n = eigen_sym(galerkin_matrix(q, 2 * N));

    Spectrum spec;
    spec.basis_size = N;
    spec.method = SpectrumMethod::galerkin;
    spec.eigenvalues.assign(lam_n.begin(), lam_n.begin() + count);
    spec.gaps.resize(static_cast<size_t>(count));
    int reliable = 0;
    for (int i = 0; i < count; ++i) {
        spec.gaps[static_cast<size_t>(i)] =
            std::abs(lam_n[static_cast<size_t>(i)] - lam_2n[static_cast<size_t>(i)]);
        if (reliable == i && spec.gaps[static_cast<size_t>(i)] < tol) reliable = i + 1;
    }
    spec.reliable_count = reliable;
    return spec;
}

namespace detail {

namespace {

// d(theta)/dx = cos^2 theta + (lambda - V) sin^2 theta: the Pruefer phase of
// psi = rho sin(theta), psi' = rho cos(theta)
struct PhaseOde {
    const Potential* q;
    double lambda;
    bool mirrored; // integrate V(-x) for the right-hand solution

    void operator()(const std::array<double, 1>& y, std::array<double, 1>& dydx,
                    double x) const {
        const double xx = mirrored ? -x : x;
        const double V = xx * xx + (*q)(xx);
        const double c = std::cos(y[0]);
        const double s = std::sin(y[0]);
        dydx[0] = c * c + (lambda - V) * s * s;
    }
};

double integrate_phase(const Potential& q, double lambda, bool mirrored, double L) {
    namespace odeint = boost::numeric::odeint;
    const double x0 = mirrored ? L : -L;
    const double V0 = x0 * x0 + q(x0);
    // WKB-decaying seed: psi'/psi = sqrt(V - lambda) toward the boundary
    const double r0 = std::sqrt(std::max(V0 - lambda, 1e-12));
    std::array<double, 1> y{std::atan(1.0 / r0)};

    using stepper_t = odeint::runge_kutta_fehlberg78<std::array<double, 1>>;
    auto stepper = odeint::make_controlled(1e-12, 1e-12, stepper_t());
    odeint::integrate_adaptive(stepper, PhaseOde{&q, lambda, mirrored}, y, -L, 0.0, 1e-3);
    return y[0];
}

} // namespace

double total_phase(const Potential& q, double lambda) {
    const auto sup = q.support();
    const double srad = sup ? std::max(std::abs(sup->lo), std::abs(sup->hi)) : 0.0;
    const double L = std::max(srad + 2.0, std::sqrt(std::max(lambda, 0.0)) + 4.0);
    return integrate_phase(q, lambda, false, L) + integrate_phase(q, lambda, true, L);
}

double solve_in_bracket(const Potential& q, int n, double lo, double hi) {
    const double target = n * std::numbers::pi;
    double flo = total_phase(q, lo) - target;
    double fhi = total_phase(q, hi) - target;
    if (flo >= 0.0 || fhi <= 0.0)
        throw std::runtime_error("shooting_eigenvalue: bracket failure");

    // bisection to tame the bracket, then secant to finish
    for (int it = 0; it < 28; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = total_phase(q, mid) - target;
        if (fmid <= 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    double a = lo, fa = flo, b = hi, fb = fhi;
    for (int it = 0; it < 40 && std::abs(b - a) > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
        const double m = b - fb * (b - a) / (fb - fa);
        if (!(m > std::min(a, b) && m < std::max(a, b))) break;
        const double fm = total_phase(q, m) - target;
        a = b;
        fa = fb;
        b = m;
        fb = fm;
        if (fm == 0.0) break;
    }
    return b;
}

} // namespace detail

ShootingResult shooting_eigenvalue_full(const Potential& q, int n) {
    if (n < 1) throw std::invalid_argument("shooting_eigenvalue: n must be >= 1");
    const double maxq = q.max_abs();
    const double lam0 = Spectrum::lambda0(n);
    const double lambda = detail::solve_in_bracket(q, n, lam0 - 1.0 - maxq, lam0 + 1.0 + maxq);

    ShootingResult res;
    res.lambda = lambda;
    const double phase = detail::total_phase(q, lambda);
    // an eigenfunction with total phase n*pi has n-1 interior nodes
    res.nodes = static_cast<int>(std::lround(phase / std::numbers::pi)) - 1;
    res.wronskian_scale = std::sin(phase);
    return res;
}

double shooting_eigenvalue(const Potential& q, int n) {
    return shooting_eigenvalue_full(q, n).lambda;
}

} // namespace oscitrace
