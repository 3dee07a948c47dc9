#include "mmac/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

#include "mmac/detector.hpp"
#include "mmac/error.hpp"

namespace mmac {

namespace {

constexpr double kLn2 = std::numbers::ln2;

ReceivedFrame draw_frame(const SystemConfig& cfg, double alpha, RngStream& rng) {
    const std::vector<cplx> tx = draw_tx_symbols(cfg, rng);
    const bool bit = draw_tag_bit(rng);
    const bool prev = draw_tag_bit(rng);
    const double theta = channel_phase(cfg, rng);
    const std::vector<cplx> noise = draw_noise(cfg.n, rng);
    return synthesize_frame(cfg, tx, bit, prev, alpha, noise, theta);
}

// Runs body(stream, frames_in_batch) for every batch and returns the
// per-batch results in batch order.
template <typename Result, typename Body>
std::vector<Result> run_batches(std::uint64_t frames, std::uint64_t seed, int threads, const Body& body) {
    const std::uint64_t batches = (frames + kBatchFrames - 1) / kBatchFrames;
    std::vector<Result> results(batches);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        try {
            for (std::uint64_t b = next++; b < batches; b = next++) {
                const std::uint64_t count = std::min(kBatchFrames, frames - b * kBatchFrames);
                RngStream rng(seed, b);
                results[b] = body(rng, count);
            }
        } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = batches;
        }
    };

    const int n_threads = static_cast<int>(
        std::min<std::uint64_t>(batches, static_cast<std::uint64_t>(threads > 0 ? threads : worker_count())));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

std::uint64_t sum_counts(const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (const auto c : counts) {
        total += c;
    }
    return total;
}

void require_trials(std::uint64_t trials, const char* who) {
    if (trials == 0) {
        throw domain_error(std::string(who) + ": trials must be >= 1");
    }
}

int symbol_errors(std::span<const cplx> estimates, std::span<const cplx> truth) {
    int errors = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        errors += estimates[i] != truth[i] ? 1 : 0;
    }
    return errors;
}

// ln(1 + e^d)
double softplus(double d) { return d > 30.0 ? d + std::log1p(std::exp(-d)) : std::log1p(std::exp(d)); }

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

} // namespace

ErrorEstimate ErrorEstimate::from_counts(std::uint64_t errors, std::uint64_t trials, std::uint64_t seed) {
    ErrorEstimate e;
    e.errors = errors;
    e.trials = trials;
    e.seed = seed;
    e.rate = trials == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(trials);
    e.ci_halfwidth_95 = trials == 0 ? 0.0 : 1.96 * std::sqrt(e.rate * (1.0 - e.rate) / static_cast<double>(trials));
    return e;
}

int worker_count() {
    int count = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("MMAC_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) {
            count = static_cast<int>(std::min<long>(count, cap));
        }
    }
    return count;
}

ErrorEstimate run_ser_x1(const SystemConfig& cfg, double alpha, std::uint64_t trials, std::uint64_t seed,
                         const RunOptions& opts) {
    require_trials(trials, "run_ser_x1");
    cfg.validate();
    const auto n = static_cast<std::uint64_t>(cfg.n);
    const std::uint64_t frames = (trials + n - 1) / n;
    const auto counts = run_batches<std::uint64_t>(frames, seed, opts.threads, [&](RngStream& rng, std::uint64_t count) {
        std::uint64_t errors = 0;
        for (std::uint64_t f = 0; f < count; ++f) {
            const ReceivedFrame frame = draw_frame(cfg, alpha, rng);
            errors += static_cast<std::uint64_t>(symbol_errors(detect_tx(frame, cfg), frame.tx_truth));
        }
        return errors;
    });
    return ErrorEstimate::from_counts(sum_counts(counts), frames * n, seed);
}

ErrorEstimate run_ber_x2(const SystemConfig& cfg, double alpha, TagStrategy strategy, std::uint64_t trials,
                         std::uint64_t seed, const RunOptions& opts) {
    require_trials(trials, "run_ber_x2");
    cfg.validate();
    const bool truncated = strategy == TagStrategy::truncated;
    const double lambda = truncated ? lambda_truncated(cfg) : lambda_sync(cfg);
    ThresholdMethod method = ThresholdMethod::bisection;
    if (opts.threshold) {
        method = *opts.threshold;
    } else if (!truncated && alpha > 0.0) {
        method = ThresholdMethod::asymptotic;
    }
    const double threshold = threshold_lambda(lambda, method).threshold;

    const auto counts = run_batches<std::uint64_t>(trials, seed, opts.threads, [&](RngStream& rng, std::uint64_t count) {
        std::uint64_t errors = 0;
        for (std::uint64_t f = 0; f < count; ++f) {
            const ReceivedFrame frame = draw_frame(cfg, alpha, rng);
            const DetectionResult r =
                truncated ? detect_joint_truncated(frame, cfg, threshold) : detect_joint(frame, cfg, threshold);
            errors += r.tag_estimate != frame.tag_truth_current ? 1U : 0U;
        }
        return errors;
    });
    return ErrorEstimate::from_counts(sum_counts(counts), trials, seed);
}

MiEstimate run_mi_estimates(const SystemConfig& cfg, std::uint64_t samples, std::uint64_t seed,
                            const RunOptions& opts) {
    if (samples < 10000) {
        throw domain_error("run_mi_estimates: samples must be >= 10^4");
    }
    cfg.validate();
    SystemConfig gauss = cfg;
    gauss.tx_modulation = TxModulation::gaussian;
    const int n = cfg.n;
    const double amp = std::sqrt(cfg.snr);
    const cplx z = cfg.complex_gain();
    const cplx m1 = 1.0 + z * cfg.tag.c1;
    const cplx m0 = 1.0 + z * cfg.tag.c0;
    const double s1 = std::norm(m1) * cfg.snr + 1.0;
    const double s0 = std::norm(m0) * cfg.snr + 1.0;
    const double log_pi_e = std::log(std::numbers::pi) + 1.0;
    const double theta = *cfg.channel.phase;

    struct BatchSums {
        Moments sum_rate;
        Moments tag;
    };
    const auto batches = run_batches<BatchSums>(samples, seed, opts.threads, [&](RngStream& rng, std::uint64_t count) {
        BatchSums acc;
        for (std::uint64_t k = 0; k < count; ++k) {
            const std::vector<cplx> tx = draw_tx_symbols(gauss, rng);
            const bool bit = draw_tag_bit(rng);
            const std::vector<cplx> noise = draw_noise(n, rng);
            const ReceivedFrame frame = synthesize_frame(gauss, tx, bit, bit, 0.0, noise, theta);

            double energy = 0.0;
            double d_true = 0.0;
            double d_other = 0.0;
            const cplx m_true = bit ? m1 : m0;
            const cplx m_other = bit ? m0 : m1;
            for (int i = 0; i < n; ++i) {
                const auto u = static_cast<std::size_t>(i);
                const cplx y = frame.samples[u];
                energy += std::norm(y);
                d_true += std::norm(y - amp * tx[u] * m_true);
                d_other += std::norm(y - amp * tx[u] * m_other);
            }
            // -ln f(y) - N ln(pi e), f the equal-weight mixture of CN(0, s_i I)
            const double l1 = -n * std::log(s1) - energy / s1;
            const double l0 = -n * std::log(s0) - energy / s0;
            const double hi = std::max(l1, l0);
            const double log_mix = std::log(0.5) + hi + std::log1p(std::exp(std::min(l1, l0) - hi)) - n * std::log(std::numbers::pi);
            const double v_sum = (-log_mix - n * log_pi_e) / kLn2;
            const double v_tag = 1.0 - softplus(d_true - d_other) / kLn2;
            acc.sum_rate.sum += v_sum;
            acc.sum_rate.sum_sq += v_sum * v_sum;
            acc.tag.sum += v_tag;
            acc.tag.sum_sq += v_tag * v_tag;
        }
        return acc;
    });

    Moments sr;
    Moments tg;
    for (const auto& b : batches) {
        sr.sum += b.sum_rate.sum;
        sr.sum_sq += b.sum_rate.sum_sq;
        tg.sum += b.tag.sum;
        tg.sum_sq += b.tag.sum_sq;
    }
    const double count = static_cast<double>(samples);
    auto finish = [count](const Moments& m, double& mean, double& se) {
        mean = m.sum / count;
        const double var = std::max(0.0, m.sum_sq / count - mean * mean);
        se = std::sqrt(var / count);
    };
    MiEstimate out;
    finish(sr, out.sum_rate, out.sum_rate_se);
    finish(tg, out.tag_mi, out.tag_mi_se);
    return out;
}

MlComparison run_ml_comparison(const SystemConfig& cfg, std::uint64_t frames, std::uint64_t seed,
                               const RunOptions& opts) {
    require_trials(frames, "run_ml_comparison");
    cfg.validate();
    const double threshold = threshold_lambda(lambda_sync(cfg), opts.threshold.value_or(ThresholdMethod::bisection)).threshold;

    struct Counts {
        std::uint64_t two_step_sym = 0;
        std::uint64_t ml_sym = 0;
        std::uint64_t two_step_bit = 0;
        std::uint64_t ml_bit = 0;
    };
    const auto batches = run_batches<Counts>(frames, seed, opts.threads, [&](RngStream& rng, std::uint64_t count) {
        Counts c;
        for (std::uint64_t f = 0; f < count; ++f) {
            const ReceivedFrame frame = draw_frame(cfg, 0.0, rng);
            const DetectionResult two = detect_joint(frame, cfg, threshold);
            const MlDecision ml = ml_joint_oracle(frame, cfg);
            c.two_step_sym += static_cast<std::uint64_t>(symbol_errors(two.tx_estimates, frame.tx_truth));
            c.ml_sym += static_cast<std::uint64_t>(symbol_errors(ml.tx_estimates, frame.tx_truth));
            c.two_step_bit += two.tag_estimate != frame.tag_truth_current ? 1U : 0U;
            c.ml_bit += ml.tag_estimate != frame.tag_truth_current ? 1U : 0U;
        }
        return c;
    });
    Counts total;
    for (const auto& b : batches) {
        total.two_step_sym += b.two_step_sym;
        total.ml_sym += b.ml_sym;
        total.two_step_bit += b.two_step_bit;
        total.ml_bit += b.ml_bit;
    }
    const std::uint64_t symbols = frames * static_cast<std::uint64_t>(cfg.n);
    return {ErrorEstimate::from_counts(total.two_step_sym, symbols, seed),
            ErrorEstimate::from_counts(total.ml_sym, symbols, seed),
            ErrorEstimate::from_counts(total.two_step_bit, frames, seed),
            ErrorEstimate::from_counts(total.ml_bit, frames, seed)};
}

} // namespace mmac
