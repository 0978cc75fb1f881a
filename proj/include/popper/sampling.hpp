// Deterministic detector-click sampling from an outcome distribution.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "popper/quantum.hpp"

namespace popper {

struct CountTable {
    std::vector<std::string> labels;
    std::vector<std::int64_t> counts;

    std::int64_t total() const {
        std::int64_t n = 0;
        for (std::int64_t c : counts) n += c;
        return n;
    }
};

/// Inverse-CDF sampling over an explicitly seeded std::mt19937_64 stream.
/// Each variate is u = (next() >> 11) * 2^-53 in [0, 1); the sampled outcome
/// is the first index whose cumulative probability exceeds u (the final
/// cumulative entry is pinned to 1, so counts always sum to n). Identical
/// (dist, n, seed) triples yield identical counts.
template <class Scalar>
CountTable sample_counts(const OutcomeDistribution<Scalar>& dist, std::int64_t n,
                         std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("sample count must be non-negative");
    const Index k = dist.size();
    std::vector<double> cumulative(static_cast<std::size_t>(k));
    double acc = 0.0;
    for (Index i = 0; i < k; ++i) {
        acc += static_cast<double>(dist.probs[i]);
        cumulative[static_cast<std::size_t>(i)] = acc;
    }
    cumulative.back() = 1.0;

    std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
    std::mt19937_64 rng(seed);
    for (std::int64_t s = 0; s < n; ++s) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        ++counts[static_cast<std::size_t>(it - cumulative.begin())];
    }
    return CountTable{dist.labels, std::move(counts)};
}

}  // namespace popper
