#include "liftnet/randomnet.hpp"

#include <cmath>

#include "doctest.h"
#include "liftnet/linalg.hpp"
#include "liftnet/net.hpp"
#include "oracles.hpp"

using namespace liftnet;
using namespace liftnet::randomnet;

TEST_CASE("sample_random_affine bernoulli support and shape") {
    Rng rng(1);
    const RandomAffineSpec spec{3, 5, EntryDist::bernoulli_pm1, 0};
    const auto [a, b] = sample_random_affine(spec, rng);
    CHECK(a.rows() == 5);
    CHECK(a.cols() == 3);
    CHECK(b.size() == 5);
    for (double v : a.data()) CHECK(std::fabs(v) == 1.0);
    for (double v : b) CHECK(std::fabs(v) == 1.0);
}

TEST_CASE("sample_random_affine rejects d_in > d_out") {
    Rng rng(2);
    const RandomAffineSpec spec{5, 3, EntryDist::standard_gaussian, 0};
    CHECK_THROWS_AS(sample_random_affine(spec, rng), std::invalid_argument);
}

TEST_CASE("gaussian entries are standardized") {
    Rng rng(3);
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = rng.gaussian();
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::fabs(mean) <= 3.0 * std::pow(10.0, -2.5));
    CHECK(std::fabs(var - 1.0) <= 0.05);
}

TEST_CASE("same seed reproduces the sampled affine map exactly") {
    const RandomAffineSpec spec{4, 4, EntryDist::standard_gaussian, 0};
    Rng r1(77), r2(77);
    const auto [a1, b1] = sample_random_affine(spec, r1);
    const auto [a2, b2] = sample_random_affine(spec, r2);
    CHECK(a1 == a2);
    CHECK(b1 == b2);
}

TEST_CASE("the 2×2 Hadamard-type sign matrix passes the rank gate") {
    const Matrix h(2, 2, {1.0, 1.0, 1.0, -1.0});
    // AᵀA = 2I so both singular values are √2.
    CHECK(linalg::smallest_singular_value(h) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("build_random_stack resamples an injected rank-deficient candidate") {
    Rng rng(5);
    Matrix ones(2, 2);
    for (double& v : ones.data()) v = 1.0;
    int injections = 0;
    const CandidateOverride inject = [&](int layer, int attempt) -> std::optional<std::pair<Matrix, Vec>> {
        if (layer == 0 && attempt == 0) {
            ++injections;
            return std::make_pair(ones, Vec{0.0, 0.0});
        }
        return std::nullopt;
    };
    const RandomStack stack =
        build_random_stack({2, 2}, Activation::prelu(), EntryDist::bernoulli_pm1, rng, 16, inject);
    CHECK(injections == 1);
    CHECK(stack.total_retries >= 1);
    CHECK(linalg::smallest_singular_value(stack.weights[0]) > kRankTolerance);
}

TEST_CASE("build_random_stack errors out for degenerate distributions") {
    Rng rng(6);
    Matrix ones(2, 2);
    for (double& v : ones.data()) v = 1.0;
    const CandidateOverride always_bad = [&](int, int) { return std::make_pair(ones, Vec{0.0, 0.0}); };
    CHECK_THROWS_WITH_AS(
        build_random_stack({2, 2}, Activation::prelu(), EntryDist::bernoulli_pm1, rng, 4, always_bad),
        doctest::Contains("rank-deficient"), std::runtime_error);
}

TEST_CASE("build_random_stack validates dims and activation") {
    Rng rng(7);
    CHECK_THROWS_AS(build_random_stack({4, 3}, Activation::prelu(), EntryDist::bernoulli_pm1, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_random_stack({2, 2}, Activation::relu(), EntryDist::bernoulli_pm1, rng),
                    std::invalid_argument);
}

TEST_CASE("built random features pass the injectivity probe") {
    Rng rng(8);
    for (EntryDist dist : {EntryDist::bernoulli_pm1, EntryDist::standard_gaussian}) {
        const maps::FeatureMap phi = build_random_feature({3, 3, 5}, Activation::prelu(), dist, rng);
        CHECK(phi.claims_injective);
        Rng probe_rng(9);
        const auto report = maps::check_injectivity(
            phi,
            [](Rng& r) {
                Vec x(3);
                for (double& v : x) v = r.uniform(-2.0, 2.0);
                return x;
            },
            1000, 1e-6, probe_rng);
        CHECK(report.violations == 0);
    }
}

TEST_CASE("seed determinism of whole stacks") {
    auto build = [] {
        Rng rng(4242);
        return build_random_stack({3, 3, 3}, Activation::prelu(), EntryDist::standard_gaussian, rng);
    };
    const RandomStack s1 = build();
    const RandomStack s2 = build();
    REQUIRE(s1.weights.size() == s2.weights.size());
    for (size_t j = 0; j < s1.weights.size(); ++j) {
        CHECK(s1.weights[j] == s2.weights[j]);
        CHECK(s1.biases[j] == s2.biases[j]);
    }
}

TEST_CASE("bernoulli 2×2 acceptance rate matches the exhaustive value 1/2") {
    // Brute force over all 16 sign patterns: singular iff ad = bc.
    int nonsingular = 0;
    for (int bits = 0; bits < 16; ++bits) {
        const double a = (bits & 1) ? 1.0 : -1.0;
        const double b = (bits & 2) ? 1.0 : -1.0;
        const double c = (bits & 4) ? 1.0 : -1.0;
        const double d = (bits & 8) ? 1.0 : -1.0;
        if (a * d - b * c != 0.0) ++nonsingular;
    }
    const double exact = static_cast<double>(nonsingular) / 16.0;
    CHECK(exact == doctest::Approx(0.5));

    Rng rng(10);
    const double rate = rank_acceptance_rate(EntryDist::bernoulli_pm1, 2, 10000, rng);
    CHECK(std::fabs(rate - exact) <= 0.02);
}

TEST_CASE("gaussian matrices are almost surely full rank; d = 1 bernoulli always") {
    Rng rng(11);
    CHECK(rank_acceptance_rate(EntryDist::standard_gaussian, 5, 10000, rng) == doctest::Approx(1.0));
    CHECK(rank_acceptance_rate(EntryDist::bernoulli_pm1, 1, 1000, rng) == doctest::Approx(1.0));
}

TEST_CASE("NN[2,k]: frozen random feature plus a trainable 2-layer head") {
    Rng rng(12);
    const maps::FeatureMap phi = build_random_feature({4, 4, 4}, Activation::prelu(),
                                                      EntryDist::bernoulli_pm1, rng);
    Rng init(13);
    net::Network head = net::mlp({4, 8, 2}, Activation::sigmoid(), init);
    const size_t head_params = head.trainable_parameter_count();
    const net::LiftedModel model = net::lift(phi, std::move(head), maps::identity_readout(2));
    CHECK(model.core.trainable_parameter_count() == head_params);
    CHECK(head_params == (4 * 8 + 8) + (8 * 2 + 2));
}
