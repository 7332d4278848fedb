#include "liftnet/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace liftnet::net {

namespace {

struct Tape {
    std::vector<Vec> inputs;   // h_0 .. h_{L-1}: input to each layer
    std::vector<Vec> preacts;  // z_1 .. z_L
};

Vec forward_tape(const Network& net, const Vec& x, Tape& tape) {
    Vec h = x;
    tape.inputs.clear();
    tape.preacts.clear();
    for (int j = 0; j < net.depth(); ++j) {
        const Layer& layer = net.layers()[static_cast<size_t>(j)];
        tape.inputs.push_back(h);
        Vec z = net.weight(j).apply(h) + layer.bias;
        tape.preacts.push_back(z);
        h = layer.act ? layer.act->apply(z) : std::move(z);
    }
    return h;
}

/// Accumulates dL/dW_eff (not yet dL/dA for exp layers) and dL/db.
void backward_into(const Network& net, const Tape& tape, Vec delta, Grads& grads) {
    for (int j = net.depth() - 1; j >= 0; --j) {
        const Layer& layer = net.layers()[static_cast<size_t>(j)];
        const Vec& z = tape.preacts[static_cast<size_t>(j)];
        if (layer.act) {
            for (size_t i = 0; i < delta.size(); ++i) delta[i] *= layer.act->deriv(z[i]);
        }
        Vec& gb = grads.b[static_cast<size_t>(j)];
        for (size_t i = 0; i < delta.size(); ++i) gb[i] += delta[i];
        Matrix& gw = grads.w[static_cast<size_t>(j)];
        const Vec& h = tape.inputs[static_cast<size_t>(j)];
        for (int r = 0; r < gw.rows(); ++r)
            for (int c = 0; c < gw.cols(); ++c) gw(r, c) += delta[static_cast<size_t>(r)] * h[static_cast<size_t>(c)];
        if (j > 0) delta = net.weight(j).apply_transpose(delta);
    }
}

Grads zero_grads(const Network& net) {
    Grads g;
    for (const Layer& layer : net.layers()) {
        // For exp-generator layers A and W_eff = exp(A) share the m×m shape,
        // so dW_eff accumulates in place before the adjoint converts it to dA.
        g.w.emplace_back(layer.param.rows(), layer.param.cols());
        g.b.emplace_back(layer.bias.size(), 0.0);
    }
    return g;
}

/// Converts accumulated dL/dW_eff into dL/dA for exp-generator layers.
void finalize_exp_grads(const Network& net, Grads& grads) {
    for (int j = 0; j < net.depth(); ++j) {
        const Layer& layer = net.layers()[static_cast<size_t>(j)];
        if (layer.kind == Layer::Kind::exp_generator)
            grads.w[static_cast<size_t>(j)] = linalg::matrix_exp_adjoint(net.exp_workspace(j), grads.w[static_cast<size_t>(j)]);
    }
}

struct AdamState {
    std::vector<Matrix> mw, vw;
    std::vector<Vec> mb, vb;
    int t = 0;
};

AdamState init_adam(const Network& net) {
    AdamState s;
    for (const Layer& layer : net.layers()) {
        s.mw.emplace_back(layer.param.rows(), layer.param.cols());
        s.vw.emplace_back(layer.param.rows(), layer.param.cols());
        s.mb.emplace_back(layer.bias.size(), 0.0);
        s.vb.emplace_back(layer.bias.size(), 0.0);
    }
    return s;
}

void optimizer_step(Network& net, const Grads& grads, const TrainConfig& cfg, AdamState& adam) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    if (cfg.optimizer == Optimizer::adam) ++adam.t;
    for (int j = 0; j < net.depth(); ++j) {
        Layer& layer = net.layer_mut(j);
        if (layer.frozen) continue;
        const Matrix& gw = grads.w[static_cast<size_t>(j)];
        const Vec& gb = grads.b[static_cast<size_t>(j)];
        if (cfg.optimizer == Optimizer::sgd) {
            for (size_t i = 0; i < layer.param.data().size(); ++i)
                layer.param.data()[i] -= cfg.learning_rate * gw.data()[i];
            for (size_t i = 0; i < layer.bias.size(); ++i) layer.bias[i] -= cfg.learning_rate * gb[i];
        } else {
            const double bc1 = 1.0 - std::pow(b1, adam.t);
            const double bc2 = 1.0 - std::pow(b2, adam.t);
            auto& mw = adam.mw[static_cast<size_t>(j)];
            auto& vw = adam.vw[static_cast<size_t>(j)];
            for (size_t i = 0; i < layer.param.data().size(); ++i) {
                const double g = gw.data()[i];
                mw.data()[i] = b1 * mw.data()[i] + (1.0 - b1) * g;
                vw.data()[i] = b2 * vw.data()[i] + (1.0 - b2) * g * g;
                layer.param.data()[i] -= cfg.learning_rate * (mw.data()[i] / bc1) / (std::sqrt(vw.data()[i] / bc2) + eps);
            }
            auto& mb = adam.mb[static_cast<size_t>(j)];
            auto& vb = adam.vb[static_cast<size_t>(j)];
            for (size_t i = 0; i < layer.bias.size(); ++i) {
                const double g = gb[i];
                mb[i] = b1 * mb[i] + (1.0 - b1) * g;
                vb[i] = b2 * vb[i] + (1.0 - b2) * g * g;
                layer.bias[i] -= cfg.learning_rate * (mb[i] / bc1) / (std::sqrt(vb[i] / bc2) + eps);
            }
        }
        if (layer.kind == Layer::Kind::exp_generator) net.refresh_layer(j);
    }
}

struct Snapshot {
    std::vector<Matrix> params;
    std::vector<Vec> biases;
};

Snapshot take_snapshot(const Network& net) {
    Snapshot s;
    for (const Layer& layer : net.layers()) {
        s.params.push_back(layer.param);
        s.biases.push_back(layer.bias);
    }
    return s;
}

void restore_snapshot(Network& net, const Snapshot& s) {
    for (int j = 0; j < net.depth(); ++j) {
        net.layer_mut(j).param = s.params[static_cast<size_t>(j)];
        net.layer_mut(j).bias = s.biases[static_cast<size_t>(j)];
    }
    net.refresh();
}

}  // namespace

Layer direct_layer(Matrix w, Vec b, std::optional<Activation> act, bool frozen) {
    if (static_cast<int>(b.size()) != w.rows()) throw std::invalid_argument("direct_layer: bias length mismatch");
    Layer l;
    l.kind = Layer::Kind::direct;
    l.param = std::move(w);
    l.bias = std::move(b);
    l.act = act;
    l.frozen = frozen;
    return l;
}

Layer exp_layer(Matrix a, Vec b, std::optional<Activation> act) {
    if (!a.square()) throw std::invalid_argument("exp_layer: generator must be square");
    if (static_cast<int>(b.size()) != a.rows()) throw std::invalid_argument("exp_layer: bias length mismatch");
    Layer l;
    l.kind = Layer::Kind::exp_generator;
    l.param = std::move(a);
    l.bias = std::move(b);
    l.act = act;
    return l;
}

Layer exp_layer_at_identity(int m, std::optional<Activation> act) {
    return exp_layer(Matrix(m, m), Vec(static_cast<size_t>(m), 0.0), act);
}

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
    for (size_t j = 1; j < layers_.size(); ++j) {
        if (layers_[j].in_dim() != layers_[j - 1].out_dim()) {
            std::ostringstream msg;
            msg << "Network: layer " << j << " input dim " << layers_[j].in_dim() << " != previous output dim "
                << layers_[j - 1].out_dim();
            throw std::invalid_argument(msg.str());
        }
    }
    refresh();
}

const Matrix& Network::weight(int j) const {
    const Layer& layer = layers_[static_cast<size_t>(j)];
    if (layer.kind == Layer::Kind::direct) return layer.param;
    return exp_cache_[static_cast<size_t>(j)].value;
}

const linalg::ExpmWorkspace& Network::exp_workspace(int j) const { return exp_cache_[static_cast<size_t>(j)]; }

void Network::refresh() {
    exp_cache_.assign(layers_.size(), {});
    for (int j = 0; j < depth(); ++j) refresh_layer(j);
}

void Network::refresh_layer(int j) {
    const Layer& layer = layers_[static_cast<size_t>(j)];
    if (layer.kind == Layer::Kind::exp_generator)
        exp_cache_[static_cast<size_t>(j)] = linalg::matrix_exp_workspace(layer.param);
}

Vec Network::forward(const Vec& x) const {
    if (static_cast<int>(x.size()) != in_dim()) throw std::invalid_argument("forward: input length mismatch");
    Vec h = x;
    for (int j = 0; j < depth(); ++j) {
        const Layer& layer = layers_[static_cast<size_t>(j)];
        Vec z = weight(j).apply(h) + layer.bias;
        h = layer.act ? layer.act->apply(z) : std::move(z);
    }
    return h;
}

size_t Network::trainable_parameter_count() const {
    size_t n = 0;
    for (const Layer& layer : layers_)
        if (!layer.frozen) n += layer.param.data().size() + layer.bias.size();
    return n;
}

Network mlp(const std::vector<int>& dims, const Activation& hidden, Rng& rng) {
    if (dims.size() < 2) throw std::invalid_argument("mlp: need at least input and output dims");
    std::vector<Layer> layers;
    for (size_t j = 0; j + 1 < dims.size(); ++j) {
        const int fan_in = dims[j], fan_out = dims[j + 1];
        Matrix w(fan_out, fan_in);
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        for (double& v : w.data()) v = rng.uniform(-limit, limit);
        const bool last = (j + 2 == dims.size());
        layers.push_back(direct_layer(std::move(w), Vec(static_cast<size_t>(fan_out), 0.0),
                                      last ? std::nullopt : std::optional<Activation>(hidden)));
    }
    return Network(std::move(layers));
}

double loss_value(Loss loss, const Vec& yhat, const Vec& y) {
    if (yhat.size() != y.size()) throw std::invalid_argument("loss: length mismatch");
    const double n = static_cast<double>(y.size());
    double s = 0.0;
    switch (loss) {
        case Loss::mse:
            for (size_t i = 0; i < y.size(); ++i) s += (yhat[i] - y[i]) * (yhat[i] - y[i]);
            return s / n;
        case Loss::mae:
            for (size_t i = 0; i < y.size(); ++i) s += std::fabs(yhat[i] - y[i]);
            return s / n;
        case Loss::bce:
            for (size_t i = 0; i < y.size(); ++i) {
                const double p = std::clamp(yhat[i], 1e-12, 1.0 - 1e-12);
                s += -(y[i] * std::log(p) + (1.0 - y[i]) * std::log(1.0 - p));
            }
            return s / n;
    }
    return s;
}

Vec loss_grad(Loss loss, const Vec& yhat, const Vec& y) {
    const double n = static_cast<double>(y.size());
    Vec g(y.size());
    switch (loss) {
        case Loss::mse:
            for (size_t i = 0; i < y.size(); ++i) g[i] = 2.0 * (yhat[i] - y[i]) / n;
            break;
        case Loss::mae:
            for (size_t i = 0; i < y.size(); ++i)
                g[i] = (yhat[i] > y[i] ? 1.0 : (yhat[i] < y[i] ? -1.0 : 0.0)) / n;
            break;
        case Loss::bce:
            for (size_t i = 0; i < y.size(); ++i) {
                const double p = std::clamp(yhat[i], 1e-12, 1.0 - 1e-12);
                g[i] = (-y[i] / p + (1.0 - y[i]) / (1.0 - p)) / n;
            }
            break;
    }
    return g;
}

Grads gradient(const Network& net, Loss loss, const std::vector<Vec>& xs, const std::vector<Vec>& ys) {
    if (xs.empty() || xs.size() != ys.size()) throw std::invalid_argument("gradient: empty or mismatched batch");
    Grads grads = zero_grads(net);
    Tape tape;
    const double inv_n = 1.0 / static_cast<double>(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        const Vec yhat = forward_tape(net, xs[i], tape);
        const double l = loss_value(loss, yhat, ys[i]);
        if (!std::isfinite(l)) {
            std::ostringstream msg;
            msg << "gradient: non-finite loss at batch index " << i;
            throw std::runtime_error(msg.str());
        }
        backward_into(net, tape, inv_n * loss_grad(loss, yhat, ys[i]), grads);
    }
    finalize_exp_grads(net, grads);
    return grads;
}

LiftedModel lift(maps::FeatureMap phi, Network core, maps::ReadoutMap rho) {
    if (phi.out_dim != core.in_dim()) {
        std::ostringstream msg;
        msg << "lift: feature/core boundary mismatch (phi.out_dim=" << phi.out_dim
            << ", core.in_dim=" << core.in_dim() << ")";
        throw std::invalid_argument(msg.str());
    }
    if (core.out_dim() != rho.in_dim) {
        std::ostringstream msg;
        msg << "lift: core/readout boundary mismatch (core.out_dim=" << core.out_dim()
            << ", rho.in_dim=" << rho.in_dim << ")";
        throw std::invalid_argument(msg.str());
    }
    return LiftedModel{std::move(phi), std::move(core), std::move(rho)};
}

TrainResult train(LiftedModel& model, const std::vector<Vec>& xs, const std::vector<Vec>& ys,
                  const TrainConfig& cfg, const std::function<void(const Network&, int)>& on_epoch) {
    if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be ≥ 1");
    if (cfg.learning_rate <= 0.0) throw std::invalid_argument("train: learning rate must be > 0");
    if (cfg.batch_size < 1) throw std::invalid_argument("train: batch size must be ≥ 1");
    if (xs.empty() || xs.size() != ys.size()) throw std::invalid_argument("train: empty or mismatched data");

    const bool through_rho = static_cast<bool>(model.rho.componentwise_deriv);
    if (!through_rho && !model.rho.has_section)
        throw std::invalid_argument("train: readout has neither a componentwise derivative nor a section");

    // φ is frozen: featurize once.
    std::vector<Vec> feats(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) feats[i] = model.phi.apply(xs[i]);

    // Pull targets back through the section when the loss lives in core coordinates.
    std::vector<Vec> targets;
    if (through_rho) {
        targets = ys;
    } else {
        targets.resize(ys.size());
        for (size_t i = 0; i < ys.size(); ++i) targets[i] = model.rho.section(ys[i]);
    }

    Rng rng(cfg.seed);
    std::vector<int> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const int val_n = static_cast<int>(std::floor(cfg.val_fraction * static_cast<double>(xs.size())));
    std::vector<int> train_idx(order.begin(), order.end() - val_n);
    std::vector<int> val_idx(order.end() - val_n, order.end());
    if (train_idx.empty()) throw std::invalid_argument("train: validation fraction leaves no training rows");

    Network& net = model.core;
    AdamState adam = init_adam(net);
    Tape tape;

    auto eval_loss = [&](const std::vector<int>& idx) {
        if (idx.empty()) return std::numeric_limits<double>::quiet_NaN();
        double total = 0.0;
        for (int i : idx) {
            const Vec z = net.forward(feats[static_cast<size_t>(i)]);
            const Vec out = through_rho ? model.rho.apply(z) : z;
            total += loss_value(cfg.loss, out, targets[static_cast<size_t>(i)]);
        }
        return total / static_cast<double>(idx.size());
    };

    TrainResult result;
    Snapshot best = take_snapshot(net);
    double best_loss = std::numeric_limits<double>::infinity();

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(train_idx);
        for (size_t start = 0; start < train_idx.size(); start += static_cast<size_t>(cfg.batch_size)) {
            const size_t stop = std::min(train_idx.size(), start + static_cast<size_t>(cfg.batch_size));
            const double inv_b = 1.0 / static_cast<double>(stop - start);
            Grads grads = zero_grads(net);
            for (size_t k = start; k < stop; ++k) {
                const size_t i = static_cast<size_t>(train_idx[k]);
                const Vec z = forward_tape(net, feats[i], tape);
                Vec delta;
                if (through_rho) {
                    const Vec out = model.rho.apply(z);
                    delta = loss_grad(cfg.loss, out, targets[i]);
                    const Vec dr = model.rho.componentwise_deriv(z, out);
                    for (size_t c = 0; c < delta.size(); ++c) delta[c] *= dr[c];
                } else {
                    delta = loss_grad(cfg.loss, z, targets[i]);
                }
                backward_into(net, tape, inv_b * delta, grads);
            }
            finalize_exp_grads(net, grads);
            optimizer_step(net, grads, cfg, adam);
        }

        const double tl = eval_loss(train_idx);
        const double vl = eval_loss(val_idx);
        result.train_loss.push_back(tl);
        result.val_loss.push_back(vl);
        if (on_epoch) on_epoch(net, epoch);

        if (!std::isfinite(tl) || tl > cfg.divergence_threshold) {
            result.diverged = true;
            std::ostringstream msg;
            msg << "training diverged at epoch " << epoch << " (train loss " << tl << ")";
            result.diagnostic = msg.str();
            break;
        }
        const double select = val_idx.empty() ? tl : vl;
        if (select < best_loss) {
            best_loss = select;
            best = take_snapshot(net);
            result.best_epoch = epoch;
        }
    }

    restore_snapshot(net, best);
    return result;
}

ConvFilter::ConvFilter(std::vector<double> t) : taps(std::move(t)) {
    if (taps.empty()) throw std::invalid_argument("ConvFilter: need at least one tap");
    ensure_finite(taps, "ConvFilter taps");
}

Vec conv1d_apply(const ConvFilter& w, const Vec& v) {
    const int J = static_cast<int>(v.size());
    const int s = w.sparsity();
    Vec out(static_cast<size_t>(J + s), 0.0);
    for (int i = 0; i < J + s; ++i) {
        double acc = 0.0;
        for (int j = std::max(0, i - s); j < std::min(J, i + 1); ++j) acc += w.taps[static_cast<size_t>(i - j)] * v[static_cast<size_t>(j)];
        out[static_cast<size_t>(i)] = acc;
    }
    return out;
}

}  // namespace liftnet::net
