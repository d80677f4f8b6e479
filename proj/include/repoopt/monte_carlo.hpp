#pragma once

#include "repoopt/gaussian.hpp"

#include <cstdint>
#include <string_view>

namespace repoopt {

enum class PayoffMode { Min, Max, PutPayoff };

std::string_view to_string(PayoffMode mode);
PayoffMode payoff_mode_from_string(std::string_view name);

struct McEstimate {
    double mean = 0.0;
    double sd = 0.0;
    double se_mean = 0.0;
    double se_sd = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Identifies the variate stream. Changing block size, seeding or the normal
/// transform must bump this string.
inline constexpr std::string_view kMcGeneratorName = "mt19937_64/box-muller/block65536/splitmix-seed/v1";

/// Samples per independently seeded block of the variate stream.
inline constexpr std::uint64_t kMcBlockSize = 65536;

/// Sample mean and sd of min(K, X), max(K, X) or max(K - X, 0), X ~ N(g.mean, g.sd^2).
///
/// The stream is cut into blocks of kMcBlockSize draws; block b uses an
/// mt19937_64 seeded with splitmix64(seed ^ splitmix64(b)). Blocks are reduced
/// in index order, so the result is bit-identical for any `workers` value.
/// `workers == 0` picks std::thread::hardware_concurrency().
///
/// Throws ValidationError for n < 2.
McEstimate mc_sample_stats(double strike, const GaussianParams& g, std::uint64_t n, std::uint64_t seed,
                           PayoffMode mode, unsigned workers = 0);

} // namespace repoopt
