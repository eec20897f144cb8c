#include "maxfield/rng.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace maxfield {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

} // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept {
    std::uint64_t x = master_seed ^ mix64(stream_index + kGolden);
    x = mix64(x);
    for (auto& word : state_) {
        x += kGolden;
        word = mix64(x);
    }
    // xoshiro must not start from the all-zero state.
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kGolden;
}

RngStream RngStream::from_state(const State& state) noexcept {
    RngStream s;
    s.state_ = state;
    return s;
}

std::uint64_t RngStream::next_u64() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

std::string RngStream::to_string() const {
    std::string out;
    char buf[17];
    for (std::size_t i = 0; i < state_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_[i]));
        if (i) out += ':';
        out += buf;
    }
    return out;
}

RngStream RngStream::from_string(const std::string& encoded) {
    State st{};
    std::size_t pos = 0;
    for (std::size_t i = 0; i < st.size(); ++i) {
        if (pos + 16 > encoded.size()) throw std::invalid_argument("RngStream::from_string: truncated state");
        st[i] = std::stoull(encoded.substr(pos, 16), nullptr, 16);
        pos += 17;
    }
    return from_state(st);
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept {
    return RngStream(master_seed, stream_index);
}

double sample_exponential(RngStream& stream) noexcept { return exponential_from_uniform(stream.uniform()); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw std::domain_error("normal_quantile: p outside [0, 1]");
    }
    // Acklam's rational approximation followed by one Halley step.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double sample_half_normal(RngStream& stream, double sigma) {
    // Upper-tail form keeps full precision for large deviates.
    const double tail = 0.5 * (1.0 - stream.uniform());
    return -sigma * normal_quantile(tail);
}

double ArrivalSequence::push(double exponential) {
    const double prev = partial_sums_.empty() ? 0.0 : partial_sums_.back();
    partial_sums_.push_back(prev + exponential);
    return 1.0 / partial_sums_.back();
}

std::pair<double, std::size_t> next_arrival(ArrivalSequence& seq, RngStream& stream) {
    const double t = seq.push(sample_exponential(stream));
    return {t, seq.size()};
}

} // namespace maxfield
