#include <cmath>
#include <limits>

#include "liftnet/experiment.hpp"
#include "liftnet/manifold.hpp"

namespace liftnet::experiment {

namespace {

using manifold::PoincarePoint;
using manifold::SPDPoint;

/// Frozen random tangent-space map R^n → R^n used as the nonlinear part of
/// the synthetic targets: y = W2 tanh(W1 x + b1) + b2, moderate scale.
struct FrozenNet {
    Matrix w1, w2;
    Vec b1, b2;

    static FrozenNet sample(int n, int hidden, Rng& rng, double out_scale) {
        FrozenNet f{Matrix(hidden, n), Matrix(n, hidden), Vec(static_cast<size_t>(hidden)),
                    Vec(static_cast<size_t>(n))};
        for (double& v : f.w1.data()) v = rng.uniform(-1.2, 1.2);
        const double w2_limit = out_scale / std::sqrt(static_cast<double>(hidden));
        for (double& v : f.w2.data()) v = rng.uniform(-w2_limit, w2_limit);
        for (double& v : f.b1) v = rng.uniform(-0.5, 0.5);
        for (double& v : f.b2) v = rng.uniform(-0.2, 0.2);
        return f;
    }

    Vec operator()(const Vec& x) const {
        Vec h = w1.apply(x) + b1;
        for (double& v : h) v = std::tanh(v);
        return w2.apply(h) + b2;
    }
};

DemoOptions quick_reduced(DemoOptions opt) {
    if (opt.quick) {
        opt.train_n = std::min(opt.train_n, 150);
        opt.test_n = std::min(opt.test_n, 150);
        opt.epochs = std::min(opt.epochs, 120);
    }
    return opt;
}

/// Trains a width-w lifted model against target samples and reports the sup
/// distance between model and target on the test grid. Two Adam stages with
/// a 10× learning-rate drop: the second stage settles the tail points that
/// dominate the sup norm.
WidthError fit_and_measure(int width, const maps::FeatureMap& phi, const maps::ReadoutMap& rho,
                           const std::vector<Vec>& train_x, const std::vector<Vec>& train_y,
                           const std::vector<Vec>& test_x, const data::PointFn& target,
                           const data::MetricFn& metric, const DemoOptions& opt, uint64_t seed) {
    Rng init(seed);
    net::Network core = net::mlp({phi.out_dim, width, rho.in_dim}, Activation::relu(), init);
    net::LiftedModel model = net::lift(phi, std::move(core), rho);

    net::TrainConfig tc;
    tc.optimizer = net::Optimizer::adam;
    tc.learning_rate = opt.learning_rate;
    tc.batch_size = opt.batch_size;
    tc.epochs = (2 * opt.epochs) / 3;
    tc.seed = splitmix64(seed);
    tc.loss = net::Loss::mse;
    tc.val_fraction = 0.0;

    WidthError we;
    we.width = width;
    const net::TrainResult stage1 = net::train(model, train_x, train_y, tc);
    tc.learning_rate = opt.learning_rate / 10.0;
    tc.epochs = opt.epochs - tc.epochs;
    tc.seed = splitmix64(seed ^ 0xfeedULL);
    const net::TrainResult stage2 = net::train(model, train_x, train_y, tc);
    we.diverged = stage1.diverged || stage2.diverged;
    if (!we.diverged) {
        const data::PointFn model_fn = [&model](const Vec& x) { return model(x); };
        we.sup_error = data::sup_error_on_grid(model_fn, target, test_x, metric);
    } else {
        we.sup_error = std::numeric_limits<double>::infinity();
    }
    return we;
}

}  // namespace

DemoOptions DemoOptions::from_config(const Config& cfg) {
    DemoOptions opt;
    opt.seed = cfg.get_u64("seed", opt.seed);
    opt.train_n = static_cast<int>(cfg.get_int("train_n", opt.train_n));
    opt.test_n = static_cast<int>(cfg.get_int("test_n", opt.test_n));
    opt.epochs = static_cast<int>(cfg.get_int("epochs", opt.epochs));
    opt.batch_size = static_cast<int>(cfg.get_int("batch_size", opt.batch_size));
    opt.learning_rate = cfg.get_double("learning_rate", opt.learning_rate);
    opt.curvature = cfg.get_double("curvature", opt.curvature);
    opt.alt_curvature = cfg.get_double("alt_curvature", opt.alt_curvature);
    opt.quick = cfg.get_bool("quick", false);
    if (cfg.has("widths")) {
        opt.widths.clear();
        const std::string raw = cfg.require_string("widths");
        size_t pos = 0;
        while (pos < raw.size()) {
            size_t next = raw.find(',', pos);
            if (next == std::string::npos) next = raw.size();
            opt.widths.push_back(std::stoi(raw.substr(pos, next - pos)));
            pos = next + 1;
        }
    }
    return opt;
}

DemoResult run_spd_demo(const DemoOptions& raw_opt) {
    const DemoOptions opt = quick_reduced(raw_opt);
    const int d = 2;
    const int n = d * (d + 1) / 2;
    Rng master(opt.seed);

    // Compact K: image under Exp_I of the tangent ball ‖V‖_F ≤ 1.2; train
    // and test samples both stay inside it (uniformity is on compacts).
    auto sample_inputs = [&](int count, Rng& rng) {
        std::vector<Vec> xs;
        const SPDPoint eye(SymMatrix::identity(d));
        const int tangent_dim = d * (d + 1) / 2;
        for (int i = 0; i < count; ++i) {
            Vec dir(static_cast<size_t>(tangent_dim));
            for (double& x : dir) x = rng.gaussian();
            const double radius = 1.2 * std::pow(rng.uniform(), 1.0 / tangent_dim);
            const double scale = radius / std::max(norm2(dir), 1e-300);
            for (double& x : dir) x *= scale;
            xs.push_back(manifold::spd_vectorize(
                manifold::spd_exp(eye, manifold::spd_unvectorize(dir)).sym()));
        }
        return xs;
    };

    Rng data_rng = master.split(1);
    const std::vector<Vec> train_x = sample_inputs(opt.train_n, data_rng);
    const std::vector<Vec> test_x = sample_inputs(opt.test_n, data_rng);

    DemoResult result;
    const data::MetricFn metric = data::spd_metric();

    // Identity target, basepoints A = B = I: exactly representable through
    // the round trip, so the residual is pure optimization error.
    {
        const SPDPoint eye(SymMatrix::identity(d));
        const maps::FeatureMap phi = maps::spd_log_feature(eye);
        const maps::ReadoutMap rho = maps::spd_exp_readout(eye);
        const data::PointFn target = [](const Vec& x) { return x; };
        std::vector<Vec> train_y = train_x;
        result.identity_sup_error = fit_and_measure(opt.widths.front(), phi, rho, train_x, train_y,
                                                    test_x, target, metric, opt, master.split(2).next_u64())
                                        .sup_error;
    }

    // Nonlinear target g(X) = Exp_B(t(vec(Log_A(X)))) with a frozen random t.
    Rng target_rng = master.split(3);
    const SPDPoint base_a(SymMatrix::identity(d));
    SymMatrix b_seed(d);
    for (int r = 0; r < d; ++r)
        for (int c = r; c < d; ++c) b_seed.set(r, c, 0.3 * target_rng.gaussian());
    const SPDPoint base_b(manifold::spd_exp(base_a, b_seed));
    const FrozenNet tangent_map = FrozenNet::sample(n, 16, target_rng, 0.9);
    const data::PointFn target = [&](const Vec& x) {
        const SPDPoint p(manifold::spd_unvectorize(x));
        const Vec z = tangent_map(manifold::spd_vectorize(manifold::spd_log(base_a, p)));
        return manifold::spd_vectorize(manifold::spd_exp(base_b, manifold::spd_unvectorize(z)).sym());
    };
    std::vector<Vec> train_y;
    for (const Vec& x : train_x) train_y.push_back(target(x));

    {
        const maps::FeatureMap phi = maps::spd_log_feature(base_a);
        const maps::ReadoutMap rho = maps::spd_exp_readout(base_b);
        uint64_t width_seed = master.split(4).next_u64();
        for (int w : opt.widths)
            result.nonlinear.push_back(
                fit_and_measure(w, phi, rho, train_x, train_y, test_x, target, metric, opt, width_seed));
    }

    // Same target fitted through different basepoints: the construction is
    // basepoint-free, so this run must converge as well.
    {
        Rng alt_rng = master.split(5);
        SymMatrix a_seed(d);
        for (int r = 0; r < d; ++r)
            for (int c = r; c < d; ++c) a_seed.set(r, c, 0.25 * alt_rng.gaussian());
        const SPDPoint alt_a(manifold::spd_exp(base_a, a_seed));
        const SPDPoint alt_b(SymMatrix::identity(d));
        const maps::FeatureMap phi = maps::spd_log_feature(alt_a);
        const maps::ReadoutMap rho = maps::spd_exp_readout(alt_b);
        result.alt_run_sup_error = fit_and_measure(opt.widths.back(), phi, rho, train_x, train_y, test_x,
                                                   target, metric, opt, alt_rng.next_u64())
                                       .sup_error;
    }
    return result;
}

DemoResult run_hyperbolic_demo(const DemoOptions& raw_opt) {
    const DemoOptions opt = quick_reduced(raw_opt);
    const int n = 2;
    Rng master(opt.seed);

    // Compact K: closed ball of Euclidean radius 0.8/√c inside D²_c.
    auto sample_inputs = [&](int count, double c, Rng& rng) {
        std::vector<Vec> xs;
        for (int i = 0; i < count; ++i) {
            Vec v(static_cast<size_t>(n));
            for (double& x : v) x = rng.gaussian();
            const double r = (0.8 / std::sqrt(c)) * std::sqrt(rng.uniform());
            const double scale = r / std::max(norm2(v), 1e-300);
            for (double& x : v) x *= scale;
            xs.push_back(std::move(v));
        }
        return xs;
    };

    DemoResult result;

    // Identity target at curvature c.
    {
        const double c = opt.curvature;
        Rng data_rng = master.split(1);
        const std::vector<Vec> train_x = sample_inputs(opt.train_n, c, data_rng);
        const std::vector<Vec> test_x = sample_inputs(opt.test_n, c, data_rng);
        const maps::FeatureMap phi = maps::hyperbolic_log0_feature(n, c);
        const maps::ReadoutMap rho = maps::hyperbolic_exp0_readout(n, c);
        const data::PointFn target = [](const Vec& x) { return x; };
        result.identity_sup_error =
            fit_and_measure(opt.widths.front(), phi, rho, train_x, train_x, test_x, target,
                            data::poincare_metric(c), opt, master.split(2).next_u64())
                .sup_error;
    }

    // Nonlinear target through the tangent space at 0, width sweep at c.
    Rng target_rng = master.split(3);
    const FrozenNet tangent_map = FrozenNet::sample(n, 16, target_rng, 0.8);
    auto make_target = [&](double c) {
        return data::PointFn([&tangent_map, c](const Vec& x) {
            const Vec z = tangent_map(manifold::poincare_log0(PoincarePoint(x, c)));
            return manifold::poincare_exp0(z, c).coords();
        });
    };

    {
        const double c = opt.curvature;
        Rng data_rng = master.split(4);
        const std::vector<Vec> train_x = sample_inputs(opt.train_n, c, data_rng);
        const std::vector<Vec> test_x = sample_inputs(opt.test_n, c, data_rng);
        const data::PointFn target = make_target(c);
        std::vector<Vec> train_y;
        for (const Vec& x : train_x) train_y.push_back(target(x));
        const maps::FeatureMap phi = maps::hyperbolic_log0_feature(n, c);
        const maps::ReadoutMap rho = maps::hyperbolic_exp0_readout(n, c);
        uint64_t width_seed = master.split(5).next_u64();
        for (int w : opt.widths)
            result.nonlinear.push_back(fit_and_measure(w, phi, rho, train_x, train_y, test_x, target,
                                                       data::poincare_metric(c), opt, width_seed));
    }

    // Same family at the alternate curvature.
    {
        const double c = opt.alt_curvature;
        Rng data_rng = master.split(6);
        const std::vector<Vec> train_x = sample_inputs(opt.train_n, c, data_rng);
        const std::vector<Vec> test_x = sample_inputs(opt.test_n, c, data_rng);
        const data::PointFn target = make_target(c);
        std::vector<Vec> train_y;
        for (const Vec& x : train_x) train_y.push_back(target(x));
        const maps::FeatureMap phi = maps::hyperbolic_log0_feature(n, c);
        const maps::ReadoutMap rho = maps::hyperbolic_exp0_readout(n, c);
        result.alt_run_sup_error = fit_and_measure(opt.widths.back(), phi, rho, train_x, train_y, test_x,
                                                   target, data::poincare_metric(c), opt,
                                                   master.split(7).next_u64())
                                       .sup_error;
    }
    return result;
}

ClassifyOptions ClassifyOptions::from_config(const Config& cfg) {
    ClassifyOptions opt;
    opt.seed = cfg.get_u64("seed", opt.seed);
    opt.train_n = static_cast<int>(cfg.get_int("train_n", opt.train_n));
    opt.hidden_width = static_cast<int>(cfg.get_int("hidden_width", opt.hidden_width));
    opt.epochs = static_cast<int>(cfg.get_int("epochs", opt.epochs));
    opt.batch_size = static_cast<int>(cfg.get_int("batch_size", opt.batch_size));
    opt.learning_rate = cfg.get_double("learning_rate", opt.learning_rate);
    opt.grid_n = static_cast<int>(cfg.get_int("grid_n", opt.grid_n));
    opt.margin_band = cfg.get_double("margin_band", opt.margin_band);
    opt.alpha = cfg.get_double("alpha", opt.alpha);
    opt.disk1_cx = cfg.get_double("disk1_cx", opt.disk1_cx);
    opt.disk2_cx = cfg.get_double("disk2_cx", opt.disk2_cx);
    opt.disk_radius = cfg.get_double("disk_radius", opt.disk_radius);
    opt.quick = cfg.get_bool("quick", false);
    if (opt.quick) {
        opt.train_n = std::min(opt.train_n, 800);
        opt.epochs = std::min(opt.epochs, 80);
        opt.grid_n = std::min(opt.grid_n, 40);
    }
    return opt;
}

namespace {

struct Disk {
    double cx, cy, r;
    double signed_boundary_dist(const Vec& p) const {
        return std::hypot(p[0] - cx, p[1] - cy) - r;  // < 0 inside
    }
};

/// Soft classifier with ŝ_i > α exactly on the open disk and a symmetric
/// decay to 0 outside, so ŝ_i⁻¹((α,1]] is the disk and thresholding off the
/// boundary is robust.
double soft_score(const Disk& d, const Vec& p, double alpha, double margin) {
    const double sd = d.signed_boundary_dist(p);
    if (sd < 0.0) return alpha + (1.0 - alpha) * std::min(1.0, -sd / margin);
    return alpha * (1.0 - std::min(1.0, sd / margin));
}

}  // namespace

ClassifyResult run_classify_demo(const ClassifyOptions& opt) {
    const Disk disks[2] = {{opt.disk1_cx, 0.0, opt.disk_radius}, {opt.disk2_cx, 0.0, opt.disk_radius}};
    const double box = 2.0;
    const double margin = 0.25;

    Rng master(opt.seed);
    Rng data_rng = master.split(1);
    std::vector<Vec> train_x, train_y;
    for (int i = 0; i < opt.train_n; ++i) {
        Vec p{data_rng.uniform(-box, box), data_rng.uniform(-box, box)};
        train_y.push_back({soft_score(disks[0], p, opt.alpha, margin),
                           soft_score(disks[1], p, opt.alpha, margin)});
        train_x.push_back(std::move(p));
    }

    Rng init = master.split(2);
    net::Network core =
        net::mlp({2, opt.hidden_width, opt.hidden_width, 2}, Activation::tanh_fn(), init);
    net::LiftedModel model = net::lift(maps::identity_feature(2), std::move(core), maps::logistic_readout(2));

    net::TrainConfig tc;
    tc.optimizer = net::Optimizer::adam;
    tc.learning_rate = opt.learning_rate;
    tc.batch_size = opt.batch_size;
    tc.epochs = opt.epochs;
    tc.seed = splitmix64(opt.seed ^ 0xc1a55ULL);
    tc.loss = net::Loss::mse;  // soft targets live in [0,1]
    tc.val_fraction = 0.1;
    net::train(model, train_x, train_y, tc);

    ClassifyResult result;
    result.decomposition_exact = true;
    size_t agree = 0;
    for (int gi = 0; gi < opt.grid_n; ++gi) {
        for (int gj = 0; gj < opt.grid_n; ++gj) {
            const Vec p{-box + 2.0 * box * (gi + 0.5) / opt.grid_n,
                        -box + 2.0 * box * (gj + 0.5) / opt.grid_n};
            const bool on_band = std::fabs(disks[0].signed_boundary_dist(p)) < opt.margin_band ||
                                 std::fabs(disks[1].signed_boundary_dist(p)) < opt.margin_band;
            const Vec soft = model(p);
            const std::vector<int> hard = maps::hard_threshold(opt.alpha, soft);

            // Thm (i)'s identity: the hard classifier IS the thresholded soft
            // one; verify the composition agrees with itself recomputed.
            const std::vector<int> recomputed = maps::hard_threshold(opt.alpha, model(p));
            if (hard != recomputed) result.decomposition_exact = false;

            if (on_band) continue;
            ++result.offband_points;
            const std::vector<int> ideal{disks[0].signed_boundary_dist(p) < 0.0 ? 1 : 0,
                                         disks[1].signed_boundary_dist(p) < 0.0 ? 1 : 0};
            if (hard == ideal) ++agree;
            for (int i = 0; i < 2; ++i)
                result.soft_sup_offband = std::max(
                    result.soft_sup_offband,
                    std::fabs(soft[static_cast<size_t>(i)] - soft_score(disks[i], p, opt.alpha, margin)));
        }
    }
    result.hard_agreement_offband =
        result.offband_points ? static_cast<double>(agree) / static_cast<double>(result.offband_points) : 0.0;
    return result;
}

}  // namespace liftnet::experiment
