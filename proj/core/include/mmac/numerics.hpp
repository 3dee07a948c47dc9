#pragma once

#include <functional>

namespace mmac::numerics {

/// Stopping rule shared by root finding and quadrature.
struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_iters = 1 << 16;

    /// Throws domain_error unless abs_tol > 0, rel_tol > 0 and max_iters >= 1.
    void validate() const;
};

/// Gaussian tail probability P(N(0,1) > x).
double q_function(double x);

/// Binary entropy in bits, with H(0) = H(1) = 0.
double binary_entropy(double p);

/// Modified Bessel function of the first kind, order zero.
/// Throws domain_error for x < 0 and for x large enough that I0(x) overflows
/// a double; use log_bessel_i0 or bessel_i0e there.
double bessel_i0(double x);

/// Exponentially scaled I0: e^{-x} I0(x). Finite for every x >= 0.
double bessel_i0e(double x);

/// ln I0(x), accurate near zero (log1p form) and for arbitrarily large x.
double log_bessel_i0(double x);

/// First-order Marcum Q-function Q1(a, b), the upper tail of a Rician
/// amplitude with noncentrality a at b.
double marcum_q1(double a, double b);

/// 1 - Q1(a, b), computed without cancellation so that deep lower tails
/// (e.g. miss probabilities at large noncentrality) keep relative accuracy.
double marcum_q1_complement(double a, double b);

/// Density of the central chi-squared distribution with 2 degrees of freedom.
double chi2_pdf_2dof(double x);

/// Density of the noncentral chi-squared distribution with 2 degrees of
/// freedom and noncentrality lambda.
double nc_chi2_pdf_2dof(double x, double lambda);

/// M(N) = 2^{-N} sum_{i=0}^{N-1} C(N+i-1, i) (N-i) / 2^i, the first-order
/// coefficient of the diversity-N error probability around mu = 0.
double m_of_n(int n);

/// Largest n accepted by m_of_n.
inline constexpr int kMaxMOfN = 1000;

using RealFunction = std::function<double(double)>;

/// Bisection on a sign-changing bracket. Returns the midpoint of the final
/// bracket once its width falls below tol.abs_tol (or f hits zero exactly).
/// Throws bracket_error when f(lo) and f(hi) share a sign and
/// convergence_error after tol.max_iters halvings.
double bisect_root(const RealFunction& f, double lo, double hi, const Tolerance& tol = {});

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature. Either limit may be
/// infinite; infinite ranges are mapped onto finite ones by x = a + t/(1-t).
/// Converges when the summed error estimate is at most
/// max(abs_tol, rel_tol * |value|); otherwise throws quadrature_error with the
/// partial estimate once tol.max_iters intervals are in use.
QuadratureResult integrate(const RealFunction& f, double a, double b, const Tolerance& tol = {});

/// Convenience wrapper returning only the value.
inline double integrate_value(const RealFunction& f, double a, double b, const Tolerance& tol = {}) {
    return integrate(f, a, b, tol).value;
}

/// E[f(U)] for U ~ Gamma(shape, 1). The range is split around the mode so
/// the density peak is never missed for large shapes.
double gamma_expectation(const RealFunction& f, int shape, const Tolerance& tol = {});

} // namespace mmac::numerics
