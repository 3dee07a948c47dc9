#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>

namespace mmac {

/// Philox4x32-10 block function. Pure; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Counter-based random stream. The stream is fully determined by
/// (seed, stream_index); two streams with different indices never share a
/// counter block, so per-batch streams can be drawn from in any order or on
/// any thread. Satisfies UniformRandomBitGenerator.
class RngStream {
public:
    using result_type = std::uint32_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();
    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform();
    /// Standard normal (Box-Muller, both outputs used).
    double normal();
    /// Circularly symmetric complex Gaussian with E|z|^2 = 1.
    std::complex<double> complex_normal();

private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

} // namespace mmac
