#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "liftnet/activation.hpp"
#include "liftnet/maps.hpp"
#include "liftnet/matrix.hpp"
#include "liftnet/rng.hpp"

namespace liftnet::randomnet {

enum class EntryDist : uint8_t { bernoulli_pm1 = 0, standard_gaussian = 1 };

/// One random affine map x ↦ A x + b with i.i.d. standardized entries.
struct RandomAffineSpec {
    int d_in = 0;
    int d_out = 0;  // requires d_in ≤ d_out
    EntryDist dist = EntryDist::bernoulli_pm1;
    uint64_t seed = 0;
};

std::pair<Matrix, Vec> sample_random_affine(const RandomAffineSpec& spec, Rng& rng);

/// Frozen first-k-layers stack with realized matrices retained, so runs
/// replay exactly from a checkpoint regardless of the sampling RNG.
struct RandomStack {
    std::vector<int> dims;  // k+1 entries, non-decreasing
    Activation act = Activation::prelu();
    std::vector<Matrix> weights;
    std::vector<Vec> biases;
    int total_retries = 0;

    int k() const { return static_cast<int>(weights.size()); }
    Vec forward(const Vec& x) const;
    maps::FeatureMap feature_map() const;
};

/// Relative tolerance separating honest rank deficiency from float noise.
constexpr double kRankTolerance = 1e-10;

/// Test hook: may supply the candidate (A, b) for (layer, attempt) instead of
/// the distribution sampler.
using CandidateOverride = std::function<std::optional<std::pair<Matrix, Vec>>(int layer, int attempt)>;

/// Samples the k-layer random stack, resampling any layer whose smallest
/// singular value falls below kRankTolerance (relative to the largest) until
/// it is full rank or max_retries is exhausted. Requires non-decreasing dims
/// and a strictly increasing activation.
RandomStack build_random_stack(const std::vector<int>& dims, const Activation& act, EntryDist dist,
                               Rng& rng, int max_retries = 16, const CandidateOverride& override_fn = nullptr);

/// build_random_stack wrapped as a frozen injective FeatureMap.
maps::FeatureMap build_random_feature(const std::vector<int>& dims, const Activation& act, EntryDist dist,
                                      Rng& rng, int max_retries = 16);

/// Fraction of sampled d×d matrices that pass the relative rank check.
double rank_acceptance_rate(EntryDist dist, int d, int trials, Rng& rng);

}  // namespace liftnet::randomnet
