#include "repoopt/monte_carlo.hpp"

#include "repoopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace repoopt {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform in (0, 1) from the top 53 bits; never returns 0 so log() is safe.
double open_uniform(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double payoff(PayoffMode mode, double strike, double x) {
    switch (mode) {
    case PayoffMode::Min:
        return std::min(strike, x);
    case PayoffMode::Max:
        return std::max(strike, x);
    case PayoffMode::PutPayoff:
        return std::max(strike - x, 0.0);
    }
    return 0.0;
}

// Power sums of (payoff - shift), accumulated in long double.
struct PowerSums {
    std::uint64_t n = 0;
    long double s1 = 0, s2 = 0, s3 = 0, s4 = 0;

    void add(double d) {
        const long double v = d;
        const long double v2 = v * v;
        ++n;
        s1 += v;
        s2 += v2;
        s3 += v2 * v;
        s4 += v2 * v2;
    }
    void merge(const PowerSums& o) {
        n += o.n;
        s1 += o.s1;
        s2 += o.s2;
        s3 += o.s3;
        s4 += o.s4;
    }
};

PowerSums run_block(std::uint64_t block, std::uint64_t count, double strike, const GaussianParams& g,
                    std::uint64_t seed, PayoffMode mode, double shift) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(block)));
    PowerSums sums;
    std::uint64_t drawn = 0;
    while (drawn < count) {
        const double u1 = open_uniform(rng);
        const double u2 = open_uniform(rng);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        const double z[2] = {radius * std::cos(angle), radius * std::sin(angle)};
        for (double zi : z) {
            if (drawn == count)
                break;
            sums.add(payoff(mode, strike, g.mean + g.sd * zi) - shift);
            ++drawn;
        }
    }
    return sums;
}

} // namespace

std::string_view to_string(PayoffMode mode) {
    switch (mode) {
    case PayoffMode::Min:
        return "min";
    case PayoffMode::Max:
        return "max";
    case PayoffMode::PutPayoff:
        return "put-payoff";
    }
    return "?";
}

PayoffMode payoff_mode_from_string(std::string_view name) {
    if (name == "min")
        return PayoffMode::Min;
    if (name == "max")
        return PayoffMode::Max;
    if (name == "put-payoff")
        return PayoffMode::PutPayoff;
    throw ValidationError("unknown payoff mode '" + std::string(name) + "'");
}

McEstimate mc_sample_stats(double strike, const GaussianParams& g, std::uint64_t n, std::uint64_t seed,
                           PayoffMode mode, unsigned workers) {
    validate(g);
    if (n < 2)
        throw ValidationError("mc_sample_stats needs n >= 2");
    if (!std::isfinite(strike))
        throw ValidationError("strike must be finite");

    // Centre the power sums on the payoff at the mean to keep them small.
    const double shift = payoff(mode, strike, g.mean);
    const std::uint64_t blocks = (n + kMcBlockSize - 1) / kMcBlockSize;
    std::vector<PowerSums> partial(blocks);

    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));

    auto work = [&](unsigned w) {
        for (std::uint64_t b = w; b < blocks; b += workers) {
            const std::uint64_t count = std::min(kMcBlockSize, n - b * kMcBlockSize);
            partial[b] = run_block(b, count, strike, g, seed, mode, shift);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
    }

    PowerSums total;
    for (const auto& p : partial)
        total.merge(p);

    const long double nn = static_cast<long double>(n);
    const long double mu = total.s1 / nn;
    // Central moments from raw moments of the shifted sample.
    const long double m2 = total.s2 / nn - mu * mu;
    const long double m4 = total.s4 / nn - 4 * mu * total.s3 / nn + 6 * mu * mu * total.s2 / nn - 3 * mu * mu * mu * mu;
    const long double var = std::max<long double>(0, m2 * nn / (nn - 1));

    McEstimate est;
    est.n_samples = n;
    est.seed = seed;
    est.mean = static_cast<double>(mu + shift);
    est.sd = static_cast<double>(std::sqrt(var));
    est.se_mean = est.sd / std::sqrt(static_cast<double>(n));
    if (var > 0) {
        const long double excess = std::max<long double>(0, m4 - m2 * m2);
        est.se_sd = static_cast<double>(std::sqrt(excess / (4 * nn * m2)));
    }
    return est;
}

} // namespace repoopt
