#pragma once

#include <functional>
#include <string>
#include <vector>

#include "liftnet/activation.hpp"
#include "liftnet/manifold.hpp"
#include "liftnet/matrix.hpp"
#include "liftnet/rng.hpp"

namespace liftnet::maps {

using VecFn = std::function<Vec(const Vec&)>;

/// Fixed feature map φ with the metadata the composition rules depend on.
/// Immutable after construction; apply/inverse are pure.
struct FeatureMap {
    int in_dim = 0;
    int out_dim = 0;
    VecFn apply;
    bool claims_injective = false;
    bool invertible = false;
    VecFn inverse;  // set iff invertible
    std::string kind = "custom";
};

/// Fixed readout map ρ. `section` is a continuous right inverse on the image;
/// `componentwise_deriv(z, y)` gives dρ_i/dz_i for maps that act per
/// coordinate, which is what lets training losses flow through ρ.
struct ReadoutMap {
    int in_dim = 0;
    int out_dim = 0;
    VecFn apply;
    bool has_section = false;
    VecFn section;
    std::function<Vec(const Vec&, const Vec&)> componentwise_deriv;
    std::string codomain = "R^n";
    std::string kind = "custom";
};

/// Parameters of a depth-J stack σ•(exp(A_j)·x + b_j); all A_j are m×m.
struct LayerStackParams {
    std::vector<Matrix> generators;
    std::vector<Vec> biases;
    Activation act = Activation::identity();
};

FeatureMap identity_feature(int n);
ReadoutMap identity_readout(int n);

/// Builds the injective stack φ_J ∘ … ∘ φ_1, φ_j(x) = σ•(exp(A_j)x + b_j).
/// Rejects activations that are not strictly increasing (plain ReLU in
/// particular: it collapses the negative orthant, so the stack is not
/// injective and composition loses density). When σ is also surjective the
/// map is a homeomorphism and the exact inverse is attached.
FeatureMap injective_stack(const LayerStackParams& params);

/// φ_g(x) = (x, g(x)); injective for any g since the first block is the identity.
FeatureMap skip_feature(int in_dim, int g_out_dim, VecFn g, const std::string& g_kind = "custom");

/// Componentwise logistic Rⁿ → (0,1)ⁿ with the logit section.
ReadoutMap logistic_readout(int n);

/// I_{(α,1]} applied componentwise: 1 iff score > α (ties at α map to 0).
/// Inputs must lie in [0,1] up to 1e-9.
std::vector<int> hard_threshold(double alpha, const Vec& soft);

struct InjectivityReport {
    int violations = 0;
    double min_separation_ratio = 0.0;
};

/// Empirical injectivity probe: draws pairs with input separation ≥ tol and
/// counts output collisions (output separation < tol·1e-3).
InjectivityReport check_injectivity(const FeatureMap& phi, const std::function<Vec(Rng&)>& sampler,
                                    int n_pairs, double tol, Rng& rng);

// --- Geometric feature/readout pairs. SPD points travel as their
// spd_vectorize coordinates, ball points as raw coordinates. ---

FeatureMap spd_log_feature(const manifold::SPDPoint& base);
ReadoutMap spd_exp_readout(const manifold::SPDPoint& base);
FeatureMap hyperbolic_log0_feature(int n, double curvature);
ReadoutMap hyperbolic_exp0_readout(int n, double curvature);

}  // namespace liftnet::maps
