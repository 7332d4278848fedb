#include "liftnet/randomnet.hpp"

#include <memory>
#include <sstream>
#include <stdexcept>

#include "liftnet/linalg.hpp"

namespace liftnet::randomnet {

namespace {

double sample_entry(EntryDist dist, Rng& rng) {
    return dist == EntryDist::bernoulli_pm1 ? rng.bernoulli_pm1() : rng.gaussian();
}

bool full_rank(const Matrix& a) {
    const double smin = linalg::smallest_singular_value(a);
    const double smax = linalg::largest_singular_value(a);
    return smin > kRankTolerance * std::max(1.0, smax);
}

}  // namespace

std::pair<Matrix, Vec> sample_random_affine(const RandomAffineSpec& spec, Rng& rng) {
    if (spec.d_in < 1 || spec.d_out < spec.d_in)
        throw std::invalid_argument("sample_random_affine: need 1 ≤ d_in ≤ d_out");
    Matrix a(spec.d_out, spec.d_in);
    for (double& v : a.data()) v = sample_entry(spec.dist, rng);
    Vec b(static_cast<size_t>(spec.d_out));
    for (double& v : b) v = sample_entry(spec.dist, rng);
    return {std::move(a), std::move(b)};
}

Vec RandomStack::forward(const Vec& x) const {
    Vec h = x;
    for (size_t j = 0; j < weights.size(); ++j) h = act.apply(weights[j].apply(h) + biases[j]);
    return h;
}

maps::FeatureMap RandomStack::feature_map() const {
    auto stack = std::make_shared<RandomStack>(*this);
    maps::FeatureMap f;
    f.in_dim = dims.front();
    f.out_dim = dims.back();
    f.kind = "random_stack";
    f.apply = [stack](const Vec& x) { return stack->forward(x); };
    // Full-rank affine maps composed with a strictly increasing activation
    // never collide, layer by layer.
    f.claims_injective = true;
    return f;
}

RandomStack build_random_stack(const std::vector<int>& dims, const Activation& act, EntryDist dist,
                               Rng& rng, int max_retries, const CandidateOverride& override_fn) {
    if (dims.size() < 2) throw std::invalid_argument("build_random_stack: need k ≥ 1 (dims has k+1 entries)");
    for (size_t i = 1; i < dims.size(); ++i)
        if (dims[i] < dims[i - 1])
            throw std::invalid_argument("build_random_stack: dims must be non-decreasing");
    if (!act.strictly_increasing())
        throw std::invalid_argument("build_random_stack: activation '" + act.name() +
                                    "' is not strictly increasing, the stack would not be injective");

    RandomStack stack;
    stack.dims = dims;
    stack.act = act;
    const int k = static_cast<int>(dims.size()) - 1;
    for (int layer = 0; layer < k; ++layer) {
        const RandomAffineSpec spec{dims[static_cast<size_t>(layer)], dims[static_cast<size_t>(layer) + 1], dist, 0};
        bool accepted = false;
        double last_smin = 0.0;
        for (int attempt = 0; attempt <= max_retries; ++attempt) {
            std::pair<Matrix, Vec> cand;
            if (override_fn) {
                auto injected = override_fn(layer, attempt);
                cand = injected ? std::move(*injected) : sample_random_affine(spec, rng);
            } else {
                cand = sample_random_affine(spec, rng);
            }
            last_smin = linalg::smallest_singular_value(cand.first);
            if (full_rank(cand.first)) {
                stack.weights.push_back(std::move(cand.first));
                stack.biases.push_back(std::move(cand.second));
                stack.total_retries += attempt;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            std::ostringstream msg;
            msg << "build_random_stack: layer " << layer << " still rank-deficient after " << max_retries
                << " retries (last smallest singular value " << last_smin
                << "); the entry distribution looks degenerate";
            throw std::runtime_error(msg.str());
        }
    }
    return stack;
}

maps::FeatureMap build_random_feature(const std::vector<int>& dims, const Activation& act, EntryDist dist,
                                      Rng& rng, int max_retries) {
    return build_random_stack(dims, act, dist, rng, max_retries).feature_map();
}

double rank_acceptance_rate(EntryDist dist, int d, int trials, Rng& rng) {
    if (trials < 1) throw std::invalid_argument("rank_acceptance_rate: trials must be ≥ 1");
    int accepted = 0;
    for (int t = 0; t < trials; ++t) {
        Matrix a(d, d);
        for (double& v : a.data()) v = sample_entry(dist, rng);
        if (full_rank(a)) ++accepted;
    }
    return static_cast<double>(accepted) / static_cast<double>(trials);
}

}  // namespace liftnet::randomnet
