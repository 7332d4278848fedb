#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "liftnet/activation.hpp"
#include "liftnet/linalg.hpp"
#include "liftnet/maps.hpp"
#include "liftnet/matrix.hpp"
#include "liftnet/rng.hpp"

namespace liftnet::net {

/// One affine layer. The weight is either the parameter itself (direct) or
/// exp(A) of a square generator A, which keeps the effective weight in the
/// general linear group at every training step.
struct Layer {
    enum class Kind : uint8_t { direct = 0, exp_generator = 1 };

    Kind kind = Kind::direct;
    Matrix param;  // direct: W (out×in); exp_generator: A (m×m)
    Vec bias;
    std::optional<Activation> act;
    bool frozen = false;

    int in_dim() const { return param.cols(); }
    int out_dim() const { return kind == Kind::exp_generator ? param.cols() : param.rows(); }
};

Layer direct_layer(Matrix w, Vec b, std::optional<Activation> act = std::nullopt, bool frozen = false);
Layer exp_layer(Matrix a, Vec b, std::optional<Activation> act = std::nullopt);
/// Exp-generator layer at its stable initial point A = 0, b = 0 (weight = I).
Layer exp_layer_at_identity(int m, std::optional<Activation> act = std::nullopt);

class Network {
public:
    Network() = default;
    explicit Network(std::vector<Layer> layers);

    int in_dim() const { return layers_.empty() ? 0 : layers_.front().in_dim(); }
    int out_dim() const { return layers_.empty() ? 0 : layers_.back().out_dim(); }
    int depth() const { return static_cast<int>(layers_.size()); }

    const std::vector<Layer>& layers() const { return layers_; }
    Layer& layer_mut(int j) { return layers_[static_cast<size_t>(j)]; }

    /// Effective weight of layer j (exp(A) for generator layers, cached).
    const Matrix& weight(int j) const;
    const linalg::ExpmWorkspace& exp_workspace(int j) const;
    /// Recompute exponential caches after parameter changes.
    void refresh();
    void refresh_layer(int j);

    Vec forward(const Vec& x) const;

    size_t trainable_parameter_count() const;

private:
    std::vector<Layer> layers_;
    std::vector<linalg::ExpmWorkspace> exp_cache_;
};

/// Direct-weight MLP dims[0] → … → dims.back() with `hidden` on every layer
/// except the last, which stays affine. Glorot-uniform initialization.
Network mlp(const std::vector<int>& dims, const Activation& hidden, Rng& rng);

enum class Loss : uint8_t { mse = 0, mae = 1, bce = 2 };
enum class Optimizer : uint8_t { sgd = 0, adam = 1 };

/// Per-sample loss, averaged over output components.
double loss_value(Loss loss, const Vec& yhat, const Vec& y);
Vec loss_grad(Loss loss, const Vec& yhat, const Vec& y);

/// Per-layer gradients; for exp-generator layers the entry is ∂L/∂A.
struct Grads {
    std::vector<Matrix> w;
    std::vector<Vec> b;
};

/// Gradient of the batch-mean loss by reverse accumulation. Matches central
/// finite differences to ≤ 1e-4 relative error away from activation kinks.
/// Throws on a non-finite loss, naming the batch index.
Grads gradient(const Network& net, Loss loss, const std::vector<Vec>& xs, const std::vector<Vec>& ys);

/// ρ ∘ f ∘ φ with a frozen feature map and readout around a trainable core.
struct LiftedModel {
    maps::FeatureMap phi;
    Network core;
    maps::ReadoutMap rho;

    Vec operator()(const Vec& x) const { return rho.apply(core.forward(phi.apply(x))); }
};

/// Composes the model, checking the two dimension boundaries by name.
LiftedModel lift(maps::FeatureMap phi, Network core, maps::ReadoutMap rho);

struct TrainConfig {
    Optimizer optimizer = Optimizer::adam;
    double learning_rate = 1e-3;
    int batch_size = 256;
    int epochs = 200;
    uint64_t seed = 0;
    Loss loss = Loss::mse;
    /// Fraction of the training rows held out for best-epoch selection.
    double val_fraction = 0.1;
    double divergence_threshold = 1e12;
};

struct TrainResult {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    int best_epoch = -1;
    bool diverged = false;
    std::string diagnostic;
};

/// Mini-batch training of the core. If ρ has a componentwise derivative the
/// loss is taken on model outputs and pulled back through ρ; otherwise
/// targets are pulled back once through ρ's section and the loss lives in
/// core-output coordinates. φ is applied to the inputs once up front.
/// Deterministic for a fixed seed; returns the best-epoch parameters.
TrainResult train(LiftedModel& model, const std::vector<Vec>& xs, const std::vector<Vec>& ys,
                  const TrainConfig& cfg,
                  const std::function<void(const Network&, int)>& on_epoch = nullptr);

/// Convolutional filter mask with taps w_0..w_s (zero outside that range).
struct ConvFilter {
    std::vector<double> taps;
    explicit ConvFilter(std::vector<double> t);
    int sparsity() const { return static_cast<int>(taps.size()) - 1; }
};

/// (w ⋆ v)_i = Σ_{j=0}^{J−1} w_{i−j} v_j for i = 0 .. J+s−1.
Vec conv1d_apply(const ConvFilter& w, const Vec& v);

}  // namespace liftnet::net
