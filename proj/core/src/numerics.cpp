#include "mmac/numerics.hpp"
#include "mmac/numerics_detail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mmac/error.hpp"

namespace mmac::numerics {

namespace {

// Above this argument the power series is replaced by the asymptotic
// expansion; at x = 20 the smallest asymptotic term is below 1e-17.
constexpr double kBesselSeriesLimit = 20.0;
// e^x overflows a double just above 709.78.
constexpr double kBesselOverflow = 700.0;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw domain_error(std::string(what) + ": non-finite argument");
    }
}

} // namespace

void Tolerance::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iters < 1) {
        throw domain_error("Tolerance: abs_tol and rel_tol must be positive, max_iters >= 1");
    }
}

double q_function(double x) {
    require_finite(x, "q_function");
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw domain_error("binary_entropy: p must lie in [0, 1]");
    }
    if (p == 0.0 || p == 1.0) {
        return 0.0;
    }
    const double h = -p * std::log(p) - (1.0 - p) * std::log1p(-p);
    return h / std::numbers::ln2;
}

namespace detail {

double i0_series_minus_one(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 2000; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-17 * sum) {
            break;
        }
    }
    return sum;
}

double i0e_asymptotic(double x) {
    // e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (next >= term) {
            break;  // series starts diverging
        }
        term = next;
        sum += term;
        if (term < 1e-17 * sum) {
            break;
        }
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

} // namespace detail

double bessel_i0(double x) {
    require_finite(x, "bessel_i0");
    if (x < 0.0) {
        throw domain_error("bessel_i0: x must be nonnegative");
    }
    if (x <= kBesselSeriesLimit) {
        return 1.0 + detail::i0_series_minus_one(x);
    }
    if (x > kBesselOverflow) {
        throw domain_error("bessel_i0: result overflows; use log_bessel_i0 or bessel_i0e");
    }
    return std::exp(x) * detail::i0e_asymptotic(x);
}

double bessel_i0e(double x) {
    require_finite(x, "bessel_i0e");
    if (x < 0.0) {
        throw domain_error("bessel_i0e: x must be nonnegative");
    }
    if (x <= kBesselSeriesLimit) {
        return std::exp(-x) * (1.0 + detail::i0_series_minus_one(x));
    }
    return detail::i0e_asymptotic(x);
}

double log_bessel_i0(double x) {
    require_finite(x, "log_bessel_i0");
    if (x < 0.0) {
        throw domain_error("log_bessel_i0: x must be nonnegative");
    }
    if (x <= kBesselSeriesLimit) {
        return std::log1p(detail::i0_series_minus_one(x));
    }
    return x + std::log(detail::i0e_asymptotic(x));
}

namespace {

struct MarcumSums {
    double value;
    bool is_complement;  // true when value holds 1 - Q1
};

// Q1(a,b) = sum_k Pois(k; mu) * P(Pois(y) <= k), mu = a^2/2, y = b^2/2.
// The complement is sum_k Pois(k; mu) * P(Pois(y) > k). Whichever of the two
// is the "small side" is accumulated as a sum of positive terms.
MarcumSums marcum_sums(double a, double b) {
    const double mu = 0.5 * a * a;
    const double y = 0.5 * b * b;
    const double spread = std::max(mu, y);
    const double width = 12.0 * std::sqrt(spread) + 60.0;
    const double log_mu = std::log(mu);
    const double log_y = std::log(y);

    if (y > mu) {
        // Upper tail is the small side.
        const auto k_max = static_cast<long>(std::ceil(mu + width));
        double log_w = -mu;
        double log_d = -y;
        double tail = 0.0;  // P(Pois(y) <= k)
        double sum = 0.0;
        for (long k = 0; k <= k_max; ++k) {
            if (k > 0) {
                log_w += log_mu - std::log(static_cast<double>(k));
                log_d += log_y - std::log(static_cast<double>(k));
            }
            tail += std::exp(log_d);
            const double contribution = std::exp(log_w) * tail;
            sum += contribution;
            if (k > mu && contribution < 1e-17 * sum) {
                break;
            }
        }
        return {sum, false};
    }

    // Lower tail (1 - Q1) is the small side.
    const auto k_top = static_cast<long>(std::ceil(mu + width));
    const long j_top = k_top + static_cast<long>(std::ceil(width));
    const long k_floor = std::max(0L, static_cast<long>(std::floor(mu - width)));

    // P(Pois(y) > k) accumulated downward from j_top where it is negligible.
    double log_d = -y + static_cast<double>(j_top) * log_y - std::lgamma(static_cast<double>(j_top) + 1.0);
    double upper = 0.0;
    for (long j = j_top; j > k_top; --j) {
        upper += std::exp(log_d);
        log_d -= log_y - std::log(static_cast<double>(j));
    }
    // log_d now holds log P(Pois(y) = k_top).
    double log_w = -mu + static_cast<double>(k_top) * log_mu - std::lgamma(static_cast<double>(k_top) + 1.0);
    double sum = 0.0;
    for (long k = k_top; k >= k_floor; --k) {
        sum += std::exp(log_w) * upper;
        upper += std::exp(log_d);
        if (k > 0) {
            log_d -= log_y - std::log(static_cast<double>(k));
            log_w -= log_mu - std::log(static_cast<double>(k));
        }
    }
    return {sum, true};
}

void check_marcum_args(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
        throw domain_error("marcum_q1: a and b must be finite and nonnegative");
    }
}

} // namespace

double marcum_q1(double a, double b) {
    check_marcum_args(a, b);
    if (b == 0.0) {
        return 1.0;
    }
    if (a == 0.0) {
        return std::exp(-0.5 * b * b);
    }
    const auto s = marcum_sums(a, b);
    const double q = s.is_complement ? 1.0 - s.value : s.value;
    return std::clamp(q, 0.0, 1.0);
}

double marcum_q1_complement(double a, double b) {
    check_marcum_args(a, b);
    if (b == 0.0) {
        return 0.0;
    }
    if (a == 0.0) {
        return -std::expm1(-0.5 * b * b);
    }
    const auto s = marcum_sums(a, b);
    const double c = s.is_complement ? s.value : 1.0 - s.value;
    return std::clamp(c, 0.0, 1.0);
}

double chi2_pdf_2dof(double x) {
    require_finite(x, "chi2_pdf_2dof");
    if (x < 0.0) {
        throw domain_error("chi2_pdf_2dof: x must be nonnegative");
    }
    return 0.5 * std::exp(-0.5 * x);
}

double nc_chi2_pdf_2dof(double x, double lambda) {
    require_finite(x, "nc_chi2_pdf_2dof");
    require_finite(lambda, "nc_chi2_pdf_2dof");
    if (x < 0.0 || lambda < 0.0) {
        throw domain_error("nc_chi2_pdf_2dof: x and lambda must be nonnegative");
    }
    const double z = std::sqrt(lambda * x);
    return 0.5 * std::exp(-0.5 * (x + lambda) + z) * bessel_i0e(z);
}

double m_of_n(int n) {
    if (n < 1 || n > kMaxMOfN) {
        throw domain_error("m_of_n: n must lie in [1, " + std::to_string(kMaxMOfN) + "]");
    }
    // t_i = C(N+i-1, i) / 2^{N+i}, built by ratio so no factorial is formed.
    double t = std::ldexp(1.0, -n);
    double sum = t * n;
    for (int i = 1; i < n; ++i) {
        t *= static_cast<double>(n + i - 1) / (2.0 * i);
        sum += t * (n - i);
    }
    return sum;
}

double bisect_root(const RealFunction& f, double lo, double hi, const Tolerance& tol) {
    tol.validate();
    if (!(lo < hi)) {
        throw bracket_error("bisect_root: require lo < hi");
    }
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) {
        return lo;
    }
    if (f_hi == 0.0) {
        return hi;
    }
    if (!(f_lo * f_hi < 0.0)) {
        throw bracket_error("bisect_root: f(lo) and f(hi) do not bracket a root");
    }
    for (int it = 0; it < tol.max_iters; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (hi - lo < tol.abs_tol || mid == lo || mid == hi) {
            return mid;
        }
        const double f_mid = f(mid);
        if (f_mid == 0.0) {
            return mid;
        }
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    throw convergence_error("bisect_root: max_iters exceeded");
}

} // namespace mmac::numerics
