#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "mmac/error.hpp"
#include "mmac/numerics.hpp"

namespace mmac::numerics {

namespace {

// Kronrod abscissae on [-1, 1]; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

double checked(const RealFunction& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        throw domain_error("integrate: integrand returned a non-finite value");
    }
    return v;
}

Segment gauss_kronrod(const RealFunction& f, double lo, double hi) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const double f_center = checked(f, center);
    double res_k = f_center * kWgk[7];
    double res_g = f_center * kWg[3];
    double res_abs = std::abs(res_k);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = checked(f, center - dx);
        f2[j] = checked(f, center + dx);
        const double pair = f1[j] + f2[j];
        res_k += kWgk[j] * pair;
        res_abs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) {
            res_g += kWg[j / 2] * pair;
        }
    }
    const double mean = 0.5 * res_k;
    double res_asc = kWgk[7] * std::abs(f_center - mean);
    for (std::size_t j = 0; j < 7; ++j) {
        res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }
    const double scale = std::abs(half);
    res_asc *= scale;
    res_abs *= scale;

    double err = std::abs((res_k - res_g) * half);
    if (res_asc != 0.0 && err != 0.0) {
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    }
    if (res_abs > tiny / (50.0 * eps)) {
        err = std::max(50.0 * eps * res_abs, err);
    }
    return {lo, hi, res_k * half, err};
}

QuadratureResult adaptive(const RealFunction& f, double lo, double hi, int initial_pieces, const Tolerance& tol) {
    std::priority_queue<Segment> active;
    double frozen_value = 0.0;  // segments too narrow to split further
    double frozen_error = 0.0;
    const double width = (hi - lo) / initial_pieces;
    for (int i = 0; i < initial_pieces; ++i) {
        const double a = lo + width * i;
        const double b = (i + 1 == initial_pieces) ? hi : lo + width * (i + 1);
        active.push(gauss_kronrod(f, a, b));
    }

    auto totals = [&]() {
        auto copy = active;
        double v = frozen_value;
        double e = frozen_error;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        return std::pair{v, e};
    };

    int intervals = initial_pieces;
    while (true) {
        const auto [value, error] = totals();
        if (error <= std::max(tol.abs_tol, tol.rel_tol * std::abs(value))) {
            return {value, error, intervals};
        }
        if (active.empty()) {
            throw quadrature_error("integrate: roundoff limits further subdivision", value, error);
        }
        if (intervals >= tol.max_iters) {
            throw quadrature_error("integrate: subdivision limit reached", value, error);
        }
        // Split the worst segments in bulk until the budget would be met or
        // the worst half of the error has been refined.
        const double target = 0.5 * error;
        double refined = 0.0;
        while (!active.empty() && refined < target && intervals < tol.max_iters) {
            const Segment worst = active.top();
            active.pop();
            refined += worst.error;
            const double mid = 0.5 * (worst.lo + worst.hi);
            if (!(mid > worst.lo && mid < worst.hi) ||
                (worst.hi - worst.lo) < 8.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
                frozen_value += worst.value;
                frozen_error += worst.error;
                continue;
            }
            active.push(gauss_kronrod(f, worst.lo, mid));
            active.push(gauss_kronrod(f, mid, worst.hi));
            ++intervals;
        }
    }
}

} // namespace

QuadratureResult integrate(const RealFunction& f, double a, double b, const Tolerance& tol) {
    tol.validate();
    if (std::isnan(a) || std::isnan(b)) {
        throw domain_error("integrate: NaN limit");
    }
    if (a == b) {
        return {0.0, 0.0, 0};
    }
    if (a > b) {
        auto r = integrate(f, b, a, tol);
        r.value = -r.value;
        return r;
    }
    const bool lo_inf = std::isinf(a);
    const bool hi_inf = std::isinf(b);
    if (!lo_inf && !hi_inf) {
        return adaptive(f, a, b, 1, tol);
    }
    if (lo_inf && hi_inf) {
        // x = t / (1 - |t|), t in (-1, 1)
        const RealFunction g = [&f](double t) {
            const double s = 1.0 - std::abs(t);
            return f(t / s) / (s * s);
        };
        return adaptive(g, -1.0, 1.0, 4, tol);
    }
    if (hi_inf) {
        const RealFunction g = [&f, a](double t) {
            const double s = 1.0 - t;
            return f(a + t / s) / (s * s);
        };
        return adaptive(g, 0.0, 1.0, 4, tol);
    }
    const RealFunction g = [&f, b](double t) {
        const double s = 1.0 - t;
        return f(b - t / s) / (s * s);
    };
    return adaptive(g, 0.0, 1.0, 4, tol);
}

double gamma_expectation(const RealFunction& f, int shape, const Tolerance& tol) {
    if (shape < 1) {
        throw domain_error("gamma_expectation: shape must be >= 1");
    }
    const double k = shape;
    const double log_norm = std::lgamma(k);
    const RealFunction weighted = [&f, k, log_norm](double u) {
        if (u <= 0.0) {
            return k == 1.0 ? f(0.0) : 0.0;
        }
        const double density = std::exp((k - 1.0) * std::log(u) - u - log_norm);
        return density == 0.0 ? 0.0 : density * f(u);
    };

    const double sd = std::sqrt(k);
    const double start = std::max(0.0, k - 10.0 * sd);
    const double stop = k + 10.0 * sd;
    std::vector<double> cuts{0.0};
    if (start > 0.0) {
        cuts.push_back(start);
    }
    for (double c = start + 2.0 * sd; c < stop; c += 2.0 * sd) {
        cuts.push_back(c);
    }
    cuts.push_back(stop);

    Tolerance piece = tol;
    piece.abs_tol = tol.abs_tol / static_cast<double>(cuts.size());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += integrate(weighted, cuts[i], cuts[i + 1], piece).value;
    }
    total += integrate(weighted, stop, std::numeric_limits<double>::infinity(), piece).value;
    return total;
}

} // namespace mmac::numerics
