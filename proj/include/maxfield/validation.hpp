#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace maxfield {

inline constexpr const char* kValidationSchema = "maxfield.validation.v1";

struct ValidationConfig {
    std::uint64_t seed = 42;
    std::int64_t N = 5000;         // distributional checks
    std::int64_t N_large = 10000;  // count identities and two-sample comparisons
    std::int64_t N_coincide = 1000;
    int threads = 1;
    double ks_alpha = 1e-3;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    nlohmann::json details;
};

/**
 * Statistical and exact self-checks of the samplers:
 * Frechet margins, sup distribution, exponent-measure oracle, per-replication
 * count identity, singleton and weak-rule counts, indicator coincidence with
 * Schlather's sampler, and invariance under a non-optimal shift density.
 */
std::vector<CheckResult> run_validation(const ValidationConfig& config);

nlohmann::json validation_to_json(const ValidationConfig& config, const std::vector<CheckResult>& checks);

} // namespace maxfield
