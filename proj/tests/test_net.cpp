#include "liftnet/net.hpp"

#include <cmath>

#include "doctest.h"
#include "liftnet/manifold.hpp"
#include "liftnet/rng.hpp"
#include "oracles.hpp"

using namespace liftnet;
using namespace liftnet::net;

namespace {

double batch_loss(const Network& n, Loss loss, const std::vector<Vec>& xs, const std::vector<Vec>& ys) {
    double total = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) total += loss_value(loss, n.forward(xs[i]), ys[i]);
    return total / static_cast<double>(xs.size());
}

/// Central-difference check of every trainable parameter against gradient().
void check_gradients(Network& n, Loss loss, const std::vector<Vec>& xs, const std::vector<Vec>& ys,
                     double tol = 1e-4) {
    const Grads grads = gradient(n, loss, xs, ys);
    for (int j = 0; j < n.depth(); ++j) {
        if (n.layers()[static_cast<size_t>(j)].frozen) continue;
        Matrix& p = n.layer_mut(j).param;
        for (size_t e = 0; e < p.data().size(); ++e) {
            const double saved = p.data()[e];
            p.data()[e] = saved + 1e-5;
            n.refresh_layer(j);
            const double up = batch_loss(n, loss, xs, ys);
            p.data()[e] = saved - 1e-5;
            n.refresh_layer(j);
            const double down = batch_loss(n, loss, xs, ys);
            p.data()[e] = saved;
            n.refresh_layer(j);
            const double fd = (up - down) / 2e-5;
            const double got = grads.w[static_cast<size_t>(j)].data()[e];
            CHECK(std::fabs(got - fd) <= tol * std::max({std::fabs(fd), std::fabs(got), 1e-6}));
        }
        Vec& b = n.layer_mut(j).bias;
        for (size_t e = 0; e < b.size(); ++e) {
            const double saved = b[e];
            b[e] = saved + 1e-5;
            const double up = batch_loss(n, loss, xs, ys);
            b[e] = saved - 1e-5;
            const double down = batch_loss(n, loss, xs, ys);
            b[e] = saved;
            const double fd = (up - down) / 2e-5;
            const double got = grads.b[static_cast<size_t>(j)][e];
            CHECK(std::fabs(got - fd) <= tol * std::max({std::fabs(fd), std::fabs(got), 1e-6}));
        }
    }
}

std::vector<Vec> random_batch(int n, int dim, Rng& rng, double scale = 1.5) {
    std::vector<Vec> out;
    for (int i = 0; i < n; ++i) {
        Vec x(static_cast<size_t>(dim));
        for (double& v : x) v = rng.uniform(-scale, scale);
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace

TEST_CASE("forward basics") {
    // Zero weights and biases with relu stay at zero.
    Network zeros({direct_layer(Matrix(3, 2), Vec(3, 0.0), Activation::relu()),
                   direct_layer(Matrix(1, 3), Vec(1, 0.0))});
    CHECK(zeros.forward({1.0, -2.0}) == Vec{0.0});

    Network ident({direct_layer(Matrix::identity(3), Vec(3, 0.0))});
    const Vec x{0.3, -0.7, 2.0};
    CHECK(ident.forward(x) == x);
}

TEST_CASE("forward matches a hand-evaluated two-layer pass") {
    // W1 = [[1,2],[0,−1]], b1 = (0.5, −0.5), σ = gprelu(0.5, 2):
    //   z1 = (−0.5, 0.5) → h1 = (−0.25, 1.0); W2 = [1, 1] → 0.75.
    Network n({direct_layer(Matrix(2, 2, {1.0, 2.0, 0.0, -1.0}), Vec{0.5, -0.5},
                            Activation::gprelu(0.5, 2.0)),
               direct_layer(Matrix(1, 2, {1.0, 1.0}), Vec{0.0})});
    const Vec out = n.forward({1.0, -1.0});
    CHECK(out[0] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("forward rejects dimension mismatch; ctor rejects broken chains") {
    Network n({direct_layer(Matrix(2, 3), Vec(2, 0.0))});
    CHECK_THROWS_AS(n.forward({1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(Network({direct_layer(Matrix(2, 3), Vec(2, 0.0)),
                             direct_layer(Matrix(1, 3), Vec(1, 0.0))}),
                    std::invalid_argument);
}

TEST_CASE("exp-generator layer computes σ(exp(A)h + b)") {
    const Matrix a = Matrix::diag({std::log(2.0), 0.0});
    Network n({exp_layer(a, Vec{1.0, 0.0})});
    const Vec out = n.forward({1.0, 3.0});
    CHECK(out[0] == doctest::Approx(3.0).epsilon(1e-12));  // 2·1 + 1
    CHECK(out[1] == doctest::Approx(3.0).epsilon(1e-12));  // 1·3 + 0
}

TEST_CASE("gradient is zero when the target equals the output") {
    Rng rng(3);
    Network n = mlp({2, 4, 2}, Activation::tanh_fn(), rng);
    const std::vector<Vec> xs = random_batch(5, 2, rng);
    std::vector<Vec> ys;
    for (const Vec& x : xs) ys.push_back(n.forward(x));
    const Grads g = gradient(n, Loss::mse, xs, ys);
    for (const Matrix& gw : g.w) CHECK(gw.frobenius_norm() <= 1e-12);
    for (const Vec& gb : g.b) CHECK(norm2(gb) <= 1e-12);
}

TEST_CASE("linear regression gradient matches the closed form 2Xᵀ(Xw−y)/N") {
    Rng rng(5);
    Network n({direct_layer(Matrix(1, 3, {0.2, -0.4, 0.6}), Vec{0.0})});
    const std::vector<Vec> xs = random_batch(16, 3, rng);
    std::vector<Vec> ys;
    for (const Vec& x : xs) ys.push_back({dot(x, Vec{1.0, 2.0, -1.0}) + 0.3});

    const Grads g = gradient(n, Loss::mse, xs, ys);
    const Matrix& w = n.layers()[0].param;
    Vec closed(3, 0.0);
    double closed_b = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double resid = w.apply(xs[i])[0] + n.layers()[0].bias[0] - ys[i][0];
        for (int c = 0; c < 3; ++c) closed[static_cast<size_t>(c)] += 2.0 * resid * xs[i][static_cast<size_t>(c)];
        closed_b += 2.0 * resid;
    }
    for (double& v : closed) v /= static_cast<double>(xs.size());
    closed_b /= static_cast<double>(xs.size());
    for (int c = 0; c < 3; ++c) CHECK(g.w[0](0, c) == doctest::Approx(closed[static_cast<size_t>(c)]).epsilon(1e-12));
    CHECK(g.b[0][0] == doctest::Approx(closed_b).epsilon(1e-12));
}

TEST_CASE("gradient matches finite differences across layer kinds") {
    Rng rng(7);
    for (int rep = 0; rep < 5; ++rep) {
        // Direct layers with assorted activations.
        Network a = mlp({3, 5, 2}, Activation::tanh_fn(), rng);
        auto xs = random_batch(4, 3, rng);
        auto ys = random_batch(4, 2, rng);
        check_gradients(a, Loss::mse, xs, ys);

        Network b = mlp({3, 4, 2}, Activation::gprelu(0.25, 1.5), rng);
        check_gradients(b, Loss::mse, xs, ys);
        check_gradients(b, Loss::mae, xs, ys);

        // Exp-generator stack feeding a direct head.
        Matrix gen(3, 3);
        for (double& v : gen.data()) v = rng.uniform(-0.8, 0.8);
        Matrix gen2(3, 3);
        for (double& v : gen2.data()) v = rng.uniform(-0.8, 0.8);
        Vec bias(3);
        for (double& v : bias) v = rng.uniform(-0.3, 0.3);
        Network c({exp_layer(gen, bias, Activation::gprelu(0.25, 1.5)),
                   exp_layer(gen2, Vec(3, 0.0), Activation::tanh_fn()),
                   direct_layer(Matrix(2, 3, {0.3, -0.2, 0.5, 0.1, 0.4, -0.6}), Vec(2, 0.1))});
        check_gradients(c, Loss::mse, xs, ys);
    }
}

TEST_CASE("gradient reports the batch index of a non-finite loss") {
    Network n({direct_layer(Matrix::identity(1), Vec(1, 0.0))});
    const std::vector<Vec> xs{{1.0}, {std::numeric_limits<double>::infinity()}};
    const std::vector<Vec> ys{{1.0}, {0.0}};
    CHECK_THROWS_WITH_AS(gradient(n, Loss::mse, xs, ys), doctest::Contains("batch index 1"),
                         std::runtime_error);
}

TEST_CASE("bias-free relu nets are positively homogeneous") {
    Rng rng(11);
    Network n = mlp({3, 6, 4, 2}, Activation::relu(), rng);
    for (int j = 0; j < n.depth(); ++j) std::fill(n.layer_mut(j).bias.begin(), n.layer_mut(j).bias.end(), 0.0);
    for (int rep = 0; rep < 50; ++rep) {
        Vec x(3);
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        const double lambda = rng.uniform(0.1, 5.0);
        const Vec direct = n.forward(lambda * x);
        const Vec scaled = lambda * n.forward(x);
        CHECK(norm2(direct - scaled) <= 1e-12 * std::max(1.0, norm2(scaled)));
    }
}

TEST_CASE("lift validates both composition boundaries by name") {
    Rng rng(13);
    Network core = mlp({3, 4, 2}, Activation::relu(), rng);
    CHECK_THROWS_WITH_AS(lift(maps::identity_feature(5), core, maps::identity_readout(2)),
                         doctest::Contains("feature/core"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(lift(maps::identity_feature(3), core, maps::identity_readout(5)),
                         doctest::Contains("core/readout"), std::invalid_argument);
}

TEST_CASE("lift with identity maps is extensionally the core") {
    Rng rng(17);
    Network core = mlp({2, 5, 2}, Activation::tanh_fn(), rng);
    const LiftedModel m = lift(maps::identity_feature(2), core, maps::identity_readout(2));
    for (int rep = 0; rep < 20; ++rep) {
        Vec x(2);
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        CHECK(norm2(m(x) - core.forward(x)) == 0.0);
    }
}

TEST_CASE("lift through the SPD round trip is the identity on P_d+") {
    const manifold::SPDPoint eye(SymMatrix::identity(2));
    Network ident({direct_layer(Matrix::identity(3), Vec(3, 0.0))});
    const LiftedModel m = lift(maps::spd_log_feature(eye), ident, maps::spd_exp_readout(eye));
    Rng rng(19);
    for (int rep = 0; rep < 25; ++rep) {
        const Vec x = manifold::spd_vectorize(oracles::random_spd(2, rng, 0.3, 5.0));
        CHECK(norm2(m(x) - x) <= 1e-8 * std::max(1.0, norm2(x)));
    }
}

TEST_CASE("lift with a zero skip and a projection core is the identity") {
    const maps::FeatureMap phi = maps::skip_feature(2, 1, [](const Vec&) { return Vec{0.0}; });
    Matrix proj(2, 3);
    proj(0, 0) = 1.0;
    proj(1, 1) = 1.0;
    Network core({direct_layer(proj, Vec(2, 0.0))});
    const LiftedModel m = lift(phi, core, maps::identity_readout(2));
    const Vec x{0.4, -1.1};
    CHECK(m(x) == x);
}

TEST_CASE("lifted gradient through the logistic readout matches finite differences") {
    Rng rng(23);
    Network core = mlp({2, 4, 2}, Activation::tanh_fn(), rng);
    LiftedModel m = lift(maps::identity_feature(2), core, maps::logistic_readout(2));
    const auto xs = random_batch(6, 2, rng);
    std::vector<Vec> ys;
    for (int i = 0; i < 6; ++i) ys.push_back({rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)});

    // One tiny Adam step must reduce the through-ρ loss computed externally.
    auto lifted_loss = [&](const LiftedModel& model) {
        double total = 0.0;
        for (size_t i = 0; i < xs.size(); ++i) total += loss_value(Loss::mse, model(xs[i]), ys[i]);
        return total / static_cast<double>(xs.size());
    };

    // Finite-difference the core parameters through ρ and compare with the
    // training path's gradient by taking one SGD step of known size.
    TrainConfig cfg;
    cfg.optimizer = Optimizer::sgd;
    cfg.learning_rate = 1e-7;
    cfg.epochs = 1;
    cfg.batch_size = static_cast<int>(xs.size());
    cfg.val_fraction = 0.0;
    cfg.loss = Loss::mse;
    LiftedModel stepped = m;
    const double before = lifted_loss(stepped);
    train(stepped, xs, ys, cfg);
    const double after = lifted_loss(stepped);
    CHECK(after <= before);

    // Direct FD check of d(loss)/d(param) via the rho chain used in train():
    // perturb one parameter and compare the loss slope with the expected
    // first-order decrease per unit learning rate.
    Matrix& w0 = m.core.layer_mut(0).param;
    const double saved = w0(0, 0);
    w0(0, 0) = saved + 1e-5;
    const double up = lifted_loss(m);
    w0(0, 0) = saved - 1e-5;
    const double down = lifted_loss(m);
    w0(0, 0) = saved;
    const double fd = (up - down) / 2e-5;
    // Step with lr ε along the training gradient changes the loss by
    // −ε·‖g‖² + O(ε²); recover g(0,0) by comparing parameter movement.
    const double moved = (stepped.core.layers()[0].param(0, 0) - saved) / -cfg.learning_rate;
    CHECK(std::fabs(moved - fd) <= 1e-4 * std::max({std::fabs(fd), std::fabs(moved), 1e-6}));
}

TEST_CASE("train learns the slope of y = 2x") {
    Rng rng(29);
    Network core({direct_layer(Matrix(1, 1, {0.0}), Vec(1, 0.0))});
    LiftedModel m = lift(maps::identity_feature(1), core, maps::identity_readout(1));
    std::vector<Vec> xs, ys;
    for (int i = 0; i < 64; ++i) {
        const double x = rng.uniform(-2.0, 2.0);
        xs.push_back({x});
        ys.push_back({2.0 * x});
    }
    TrainConfig cfg;
    cfg.optimizer = Optimizer::adam;
    cfg.learning_rate = 0.05;
    cfg.epochs = 200;
    cfg.batch_size = 64;
    cfg.val_fraction = 0.0;
    cfg.seed = 1;
    const TrainResult res = train(m, xs, ys, cfg);
    CHECK_FALSE(res.diverged);
    CHECK(m.core.layers()[0].param(0, 0) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("train rejects bad configs") {
    Rng rng(31);
    Network core = mlp({1, 1}, Activation::relu(), rng);
    LiftedModel m = lift(maps::identity_feature(1), core, maps::identity_readout(1));
    const std::vector<Vec> xs{{1.0}}, ys{{1.0}};
    TrainConfig cfg;
    cfg.epochs = 0;
    CHECK_THROWS_AS(train(m, xs, ys, cfg), std::invalid_argument);
    cfg.epochs = 1;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(train(m, xs, ys, cfg), std::invalid_argument);
}

TEST_CASE("training replays bitwise for a fixed seed") {
    auto run = [](uint64_t seed) {
        Rng rng(seed);
        Network core = mlp({2, 6, 1}, Activation::relu(), rng);
        LiftedModel m = lift(maps::identity_feature(2), core, maps::identity_readout(1));
        std::vector<Vec> xs, ys;
        Rng data_rng(99);
        for (int i = 0; i < 50; ++i) {
            Vec x{data_rng.uniform(-1.0, 1.0), data_rng.uniform(-1.0, 1.0)};
            ys.push_back({x[0] - 0.5 * x[1]});
            xs.push_back(std::move(x));
        }
        TrainConfig cfg;
        cfg.epochs = 20;
        cfg.batch_size = 16;
        cfg.seed = 7;
        cfg.val_fraction = 0.2;
        const TrainResult res = train(m, xs, ys, cfg);
        return std::make_pair(res, m.core.layers());
    };
    const auto [res1, layers1] = run(4242);
    const auto [res2, layers2] = run(4242);
    CHECK(res1.train_loss == res2.train_loss);
    CHECK(res1.val_loss == res2.val_loss);
    REQUIRE(layers1.size() == layers2.size());
    for (size_t j = 0; j < layers1.size(); ++j) {
        CHECK(layers1[j].param == layers2[j].param);
        CHECK(layers1[j].bias == layers2[j].bias);
    }
}

TEST_CASE("exp-generator weights stay invertible at every training step") {
    Rng rng(37);
    Network core({exp_layer_at_identity(2, Activation::gprelu(0.25, 1.5)),
                  direct_layer(Matrix(1, 2, {0.5, -0.5}), Vec(1, 0.0))});
    LiftedModel m = lift(maps::identity_feature(2), core, maps::identity_readout(1));
    std::vector<Vec> xs, ys;
    for (int i = 0; i < 40; ++i) {
        Vec x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        ys.push_back({std::sin(x[0]) + x[1]});
        xs.push_back(std::move(x));
    }
    TrainConfig cfg;
    cfg.epochs = 30;
    cfg.batch_size = 8;
    cfg.seed = 3;
    cfg.val_fraction = 0.0;
    cfg.learning_rate = 0.05;
    int checks = 0;
    train(m, xs, ys, cfg, [&](const Network& n, int) {
        CHECK(linalg::smallest_singular_value(n.weight(0)) > 0.0);
        ++checks;
    });
    CHECK(checks == 30);
}

TEST_CASE("conv1d identity filter pads") {
    const ConvFilter delta({1.0});
    CHECK(conv1d_apply(delta, {1.0, 2.0, 3.0}) == Vec{1.0, 2.0, 3.0});
    const ConvFilter delta_s2({1.0, 0.0, 0.0});
    CHECK(conv1d_apply(delta_s2, {1.0, 2.0, 3.0}) == Vec{1.0, 2.0, 3.0, 0.0, 0.0});
}

TEST_CASE("conv1d hand example") {
    const ConvFilter w({1.0, 1.0});
    CHECK(conv1d_apply(w, {1.0, 2.0, 3.0}) == Vec{1.0, 3.0, 5.0, 3.0});
}

TEST_CASE("conv1d is linear") {
    Rng rng(41);
    const ConvFilter w({0.5, -1.0, 2.0});
    for (int rep = 0; rep < 20; ++rep) {
        Vec v(6), u(6);
        for (double& x : v) x = rng.uniform(-2.0, 2.0);
        for (double& x : u) x = rng.uniform(-2.0, 2.0);
        const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
        Vec combo(6);
        for (size_t i = 0; i < 6; ++i) combo[i] = a * v[i] + b * u[i];
        const Vec lhs = conv1d_apply(w, combo);
        const Vec rhs = a * conv1d_apply(w, v) + b * conv1d_apply(w, u);
        CHECK(norm2(lhs - rhs) <= 1e-12);
    }
}
