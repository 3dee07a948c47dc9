#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mmac/analytics.hpp"
#include "mmac/error.hpp"
#include "mmac/numerics.hpp"
#include "mmac/rate_region.hpp"
#include "mmac/simulate.hpp"

using namespace mmac;

namespace {

SystemConfig detection(double snr_db, double g2rho, int n) {
    SystemConfig c;
    c.snr = std::pow(10.0, snr_db / 10.0);
    c.rho = 0.5;
    c.channel = {std::sqrt(g2rho / 0.5), std::nullopt};
    c.n = n;
    c.tag = TagConstellation::on_off();
    return c;
}

RunOptions threads(int t) {
    RunOptions o;
    o.threads = t;
    return o;
}

bool within_sigmas(const ErrorEstimate& e, double p, double k) {
    return std::abs(e.rate - p) <= k * std::sqrt(p * (1.0 - p) / static_cast<double>(e.trials));
}

} // namespace

TEST_CASE("from_counts") {
    const ErrorEstimate e = ErrorEstimate::from_counts(25, 10000, 7);
    CHECK(e.rate == 0.0025);
    CHECK(e.errors == 25);
    CHECK(e.trials == 10000);
    CHECK(e.seed == 7);
    CHECK(e.ci_halfwidth_95 == doctest::Approx(1.96 * std::sqrt(0.0025 * 0.9975 / 10000)).epsilon(1e-15));
    CHECK(ErrorEstimate::from_counts(0, 10, 1).ci_halfwidth_95 == 0.0);
}

TEST_CASE("SER without backscatter is plain QPSK") {
    SystemConfig c = detection(10.0, 0.1, 1);
    c.channel = {0.0, 0.0};
    const double q = numerics::q_function(std::sqrt(c.snr));
    const double p = 2.0 * q - q * q;
    const ErrorEstimate e = run_ser_x1(c, 0.0, 1'000'000, 3);
    CHECK(within_sigmas(e, p, 3.0));
}

TEST_CASE("SER with a random phase matches the analytic value") {
    const SystemConfig c = detection(10.0, 0.1, 1);
    const ErrorEstimate e = run_ser_x1(c, 0.0, 1'000'000, 21);
    CHECK(within_sigmas(e, ser_x1_sync(c), 3.0));
}

TEST_CASE("trials are rounded up to whole frames") {
    const SystemConfig c = detection(10.0, 0.1, 3);
    CHECK(run_ser_x1(c, 0.0, 10, 1).trials == 12);
    CHECK(run_ser_x1(c, 0.0, 9, 1).trials == 9);
    CHECK(run_ber_x2(c, 0.0, TagStrategy::full, 10, 1).trials == 10);
}

TEST_CASE("zero trials and unsupported strategies throw") {
    const SystemConfig c = detection(10.0, 0.1, 1);
    CHECK_THROWS_AS(run_ser_x1(c, 0.0, 0, 1), domain_error);
    CHECK_THROWS_AS(run_ber_x2(c, 0.0, TagStrategy::full, 0, 1), domain_error);
    CHECK_THROWS_AS(run_ber_x2(c, 0.2, TagStrategy::truncated, 1000, 1), unsupported_error);
}

TEST_CASE("estimates are a function of the seed only") {
    const SystemConfig c = detection(15.0, 0.1, 2);
    const std::uint64_t trials = 3 * kBatchFrames + 17;
    const ErrorEstimate a = run_ber_x2(c, 0.3, TagStrategy::full, trials, 99, threads(1));
    const ErrorEstimate b = run_ber_x2(c, 0.3, TagStrategy::full, trials, 99, threads(4));
    const ErrorEstimate again = run_ber_x2(c, 0.3, TagStrategy::full, trials, 99, threads(1));
    CHECK(a.errors == b.errors);
    CHECK(a.errors == again.errors);
    CHECK(a.rate == b.rate);
    const ErrorEstimate s1 = run_ser_x1(c, 0.3, trials, 5, threads(1));
    const ErrorEstimate s4 = run_ser_x1(c, 0.3, trials, 5, threads(3));
    CHECK(s1.errors == s4.errors);
    CHECK(run_ser_x1(c, 0.3, trials, 6).errors != s1.errors);
}

TEST_CASE("synchronous BER lies inside the analytic bounds") {
    const SystemConfig c = detection(20.0, 0.1, 4);
    const BoundPair b = ber_x2_bounds_sync(c);
    const ErrorEstimate e = run_ber_x2(c, 0.0, TagStrategy::full, 1'000'000, 12);
    const double slack = 3.0 * std::sqrt(b.upper / static_cast<double>(e.trials));
    CHECK(e.rate >= b.lower - slack);
    CHECK(e.rate <= b.upper + slack);
}

TEST_CASE("full detector wins under mild offset") {
    const std::uint64_t frames = 1'000'000;
    const ErrorEstimate full3 = run_ber_x2(detection(20.0, 0.1, 3), 0.2, TagStrategy::full, frames, 31);
    const ErrorEstimate trunc3 = run_ber_x2(detection(20.0, 0.1, 3), 0.2, TagStrategy::truncated, frames, 31);
    CHECK(full3.rate < trunc3.rate);
}

TEST_CASE("asynchronous SER follows the analytic value") {
    const SystemConfig c = detection(10.0, 0.1, 2);
    for (const double alpha : {0.25, 0.5}) {
        const ErrorEstimate e = run_ser_x1(c, alpha, 600'000, 8);
        CHECK(within_sigmas(e, ser_x1_async(c, alpha), 3.5));
    }
}

TEST_CASE("MI estimates") {
    SystemConfig c;
    c.snr = 10.0;
    c.rho = 0.5;
    c.n = 2;
    c.channel = {0.0, 0.0};
    const MiEstimate none = run_mi_estimates(c, 200'000, 4);
    CHECK(std::abs(none.sum_rate - 2.0 * std::log2(11.0)) < 0.02);
    CHECK(std::abs(none.tag_mi) < 1e-12);

    c.channel = {std::sqrt(0.2), std::numbers::pi / 2};
    c.tag = TagConstellation::bpsk();
    const MiEstimate flat = run_mi_estimates(c, 200'000, 4);
    CHECK(std::abs(flat.sum_rate - sum_rate_lower_bound(c)) < 0.02);

    c.channel = {std::sqrt(0.2), 0.6};
    c.tag = TagConstellation::on_off();
    const MiEstimate m = run_mi_estimates(c, 200'000, 9);
    CHECK(std::abs(m.sum_rate - sum_rate_exact(c)) < 3.0 * m.sum_rate_se + 1e-3);
    CHECK(std::abs(m.tag_mi - rate_tag_given_tx(c)) < 3.0 * m.tag_mi_se + 1e-3);

    c.channel.phase = std::nullopt;
    CHECK_THROWS_AS(run_mi_estimates(c, 200'000, 1), domain_error);
    c.channel.phase = 0.6;
    CHECK_THROWS_AS(run_mi_estimates(c, 9'999, 1), domain_error);
}

TEST_CASE("two-step receiver against the ML oracle") {
    const SystemConfig c = detection(10.0, 0.2, 2);
    const MlComparison r = run_ml_comparison(c, 20'000, 2);
    CHECK(r.ml_ser.trials == 40'000);
    CHECK(r.two_step_ber.trials == 20'000);
    // ML is optimal for the joint decision; allow sampling noise.
    CHECK(r.ml_ber.rate <= r.two_step_ber.rate + 3.0 * r.two_step_ber.ci_halfwidth_95);
    CHECK(r.ml_ser.rate <= r.two_step_ser.rate + 3.0 * r.two_step_ser.ci_halfwidth_95);
}
