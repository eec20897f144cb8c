#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace maxfield {

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective 64-bit avalanche mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/**
 * Single-owner random stream: xoshiro256** seeded from a SplitMix64 sequence.
 *
 * A stream is identified by (master_seed, stream_index). The 256-bit state is
 * filled by iterating SplitMix64 from the key
 *
 *     key = mix64(master_seed ^ mix64(stream_index + 0x9E3779B97F4A7C15))
 *
 * so neighbouring indices land on unrelated states. Replication r of any
 * experiment always uses stream_index = r, which makes results independent of
 * the number of worker threads.
 */
class RngStream {
public:
    using State = std::array<std::uint64_t, 4>;

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept;

    static RngStream from_state(const State& state) noexcept;

    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    const State& state() const noexcept { return state_; }

    /// Hex encoding of the state, restorable via from_string.
    std::string to_string() const;
    static RngStream from_string(const std::string& encoded);

private:
    RngStream() = default;
    State state_{};
};

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept;

double sample_exponential(RngStream& stream) noexcept;

/// Standard normal quantile, accurate to ~1e-15 relative in both tails.
double normal_quantile(double p);

/// |N(0, sigma^2)| by inverse CDF (one uniform).
double sample_half_normal(RngStream& stream, double sigma);

/**
 * Descending Poisson arrivals t_i = 1 / (E_1 + ... + E_i) of intensity t^-2 dt.
 * Keeps every partial sum so that stopping decisions can be replayed.
 */
class ArrivalSequence {
public:
    /// Appends one exponential increment and returns the new arrival.
    double push(double exponential);

    std::size_t size() const noexcept { return partial_sums_.size(); }
    double partial_sum(std::size_t i) const { return partial_sums_.at(i); }
    double arrival(std::size_t i) const { return 1.0 / partial_sums_.at(i); }
    double last_sum() const { return partial_sums_.back(); }
    const std::vector<double>& partial_sums() const noexcept { return partial_sums_; }

private:
    std::vector<double> partial_sums_;
};

/// Draws E, appends it and returns (t_i, i) with i 1-based.
std::pair<double, std::size_t> next_arrival(ArrivalSequence& seq, RngStream& stream);

/// Inverse-CDF exponential: -log(1 - u). u = 0 maps to 0.
inline double exponential_from_uniform(double u) noexcept { return -std::log1p(-u); }

} // namespace maxfield
