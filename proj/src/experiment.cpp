#include "liftnet/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "liftnet/checkpoint.hpp"
#include "liftnet/synth_housing.hpp"

namespace liftnet::experiment {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

net::Layer glorot_direct(int in, int out, std::optional<Activation> act, Rng& rng) {
    Matrix w(out, in);
    const double limit = std::sqrt(6.0 / (in + out));
    for (double& v : w.data()) v = rng.uniform(-limit, limit);
    return net::direct_layer(std::move(w), Vec(static_cast<size_t>(out), 0.0), act);
}

/// Fixed (untrainable) composition layer with identity weights: the
/// direct-weight counterpart of an exp-generator layer at its A = 0 starting
/// point. With σ = relu and a negative bias this is the canonical
/// non-injective stack: each layer deletes the half-space below the offset.
net::Layer frozen_identity_layer(int m, double bias, std::optional<Activation> act) {
    return net::direct_layer(Matrix::identity(m), Vec(static_cast<size_t>(m), bias), act,
                             /*frozen=*/true);
}

Vec predictions(const net::LiftedModel& model, const std::vector<Vec>& xs) {
    Vec out;
    out.reserve(xs.size());
    for (const Vec& x : xs) out.push_back(model(x)[0]);
    return out;
}

Vec first_components(const std::vector<Vec>& ys) {
    Vec out;
    out.reserve(ys.size());
    for (const Vec& y : ys) out.push_back(y[0]);
    return out;
}

struct VariantSpec {
    std::string name;
    net::LiftedModel model;
};

data::Dataset subsample(const data::Dataset& ds, size_t max_rows, uint64_t seed) {
    if (max_rows == 0 || ds.rows() <= max_rows) return ds;
    std::vector<int> order(ds.rows());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(splitmix64(seed ^ 0x5eed5eedULL));
    rng.shuffle(order);
    data::Dataset out;
    out.feature_names = ds.feature_names;
    out.target_names = ds.target_names;
    out.norm = ds.norm;
    for (size_t i = 0; i < max_rows; ++i) {
        out.x.push_back(ds.x[static_cast<size_t>(order[i])]);
        out.y.push_back(ds.y[static_cast<size_t>(order[i])]);
    }
    return out;
}

void write_file_atomically(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << contents;
    }
    fs::rename(tmp, path);
}

json metrics_json(const data::Metrics& m) {
    return json{{"mae", m.mae}, {"mse", m.mse}, {"mape", m.mape}};
}

}  // namespace

Table1Options Table1Options::from_config(const Config& cfg) {
    Table1Options opt;
    opt.data_path = cfg.get_string("data", opt.data_path);
    opt.seed = cfg.get_u64("seed", opt.seed);
    opt.hidden_width = static_cast<int>(cfg.get_int("hidden_width", opt.hidden_width));
    opt.epochs = static_cast<int>(cfg.get_int("epochs", opt.epochs));
    opt.batch_size = static_cast<int>(cfg.get_int("batch_size", opt.batch_size));
    opt.learning_rate = cfg.get_double("learning_rate", opt.learning_rate);
    opt.test_fraction = cfg.get_double("test_fraction", opt.test_fraction);
    opt.val_fraction = cfg.get_double("val_fraction", opt.val_fraction);
    opt.feature_depth = static_cast<int>(cfg.get_int("feature_depth", opt.feature_depth));
    opt.rand_k = static_cast<int>(cfg.get_int("rand_k", opt.rand_k));
    opt.gprelu_alpha = cfg.get_double("gprelu_alpha", opt.gprelu_alpha);
    opt.gprelu_beta = cfg.get_double("gprelu_beta", opt.gprelu_beta);
    opt.bad_stack_bias = cfg.get_double("bad_stack_bias", opt.bad_stack_bias);
    opt.max_rows = static_cast<size_t>(cfg.get_int("max_rows", 0));
    if (cfg.get_bool("quick", false)) {
        opt.max_rows = static_cast<size_t>(cfg.get_int("quick_rows", 2000));
        opt.epochs = static_cast<int>(cfg.get_int("quick_epochs", 8));
    }
    return opt;
}

const VariantResult& Table1Run::variant(const std::string& name) const {
    for (const VariantResult& v : variants)
        if (v.name == name) return v;
    throw std::invalid_argument("Table1Run: no variant named " + name);
}

Table1Run run_table1(const Table1Options& opt, const data::Dataset& raw) {
    const data::Dataset working = subsample(raw, opt.max_rows, opt.seed);
    const auto [train_ds, test_ds] = data::preprocess_split(working, opt.test_fraction, opt.seed);
    const int m = train_ds.feature_dim();
    const Activation gp = Activation::gprelu(opt.gprelu_alpha, opt.gprelu_beta);
    const Activation relu = Activation::relu();

    Table1Run run;
    run.seed = opt.seed;
    run.rows = working.rows();
    run.train_rows = train_ds.rows();
    run.test_rows = test_ds.rows();
    run.feature_dim = m;

    Rng master(opt.seed);
    Rng rng_vanilla = master.split(1);
    Rng rng_good = master.split(2);
    Rng rng_bad = master.split(3);
    Rng rng_rand = master.split(4);

    std::vector<VariantSpec> specs;

    // Vanilla: the bare shallow relu core.
    specs.push_back({"vanilla", net::lift(maps::identity_feature(m),
                                          net::mlp({m, opt.hidden_width, 1}, relu, rng_vanilla),
                                          maps::identity_readout(1))});

    // Good: width-m exp-generator gprelu input stack and a 1-d invertible
    // gprelu readout stack around the same core, all trainable.
    {
        std::vector<net::Layer> layers;
        for (int j = 0; j < opt.feature_depth; ++j) layers.push_back(net::exp_layer_at_identity(m, gp));
        layers.push_back(glorot_direct(m, opt.hidden_width, relu, rng_good));
        layers.push_back(glorot_direct(opt.hidden_width, 1, std::nullopt, rng_good));
        layers.push_back(net::exp_layer_at_identity(1, gp));
        specs.push_back({"good", net::lift(maps::identity_feature(m), net::Network(std::move(layers)),
                                           maps::identity_readout(1))});
    }

    // Bad: same shapes as Good but fixed relu stacks with direct weights —
    // the feature map collapses the negative orthant and the readout clips
    // at zero, and being composition maps (not core layers) they stay frozen.
    {
        std::vector<net::Layer> layers;
        for (int j = 0; j < opt.feature_depth; ++j)
            layers.push_back(frozen_identity_layer(m, opt.bad_stack_bias, relu));
        layers.push_back(glorot_direct(m, opt.hidden_width, relu, rng_bad));
        layers.push_back(glorot_direct(opt.hidden_width, 1, std::nullopt, rng_bad));
        layers.push_back(frozen_identity_layer(1, 0.0, relu));
        specs.push_back({"bad", net::lift(maps::identity_feature(m), net::Network(std::move(layers)),
                                          maps::identity_readout(1))});
    }

    // Rand: frozen bernoulli/prelu random net through a skip connection,
    // trainable core and gprelu readout stack.
    {
        std::vector<int> dims(static_cast<size_t>(opt.rand_k) + 1, m);
        randomnet::RandomStack stack = randomnet::build_random_stack(
            dims, Activation::prelu(), randomnet::EntryDist::bernoulli_pm1, rng_rand);
        run.rand_stack = stack;
        auto stack_copy = stack;  // owned by the feature closure
        maps::FeatureMap phi = maps::skip_feature(
            m, m, [stack_copy](const Vec& x) { return stack_copy.forward(x); }, "random_stack");

        std::vector<net::Layer> layers;
        layers.push_back(glorot_direct(2 * m, opt.hidden_width, relu, rng_rand));
        layers.push_back(glorot_direct(opt.hidden_width, 1, std::nullopt, rng_rand));
        layers.push_back(net::exp_layer_at_identity(1, gp));
        specs.push_back({"rand", net::lift(std::move(phi), net::Network(std::move(layers)),
                                           maps::identity_readout(1))});
    }

    for (size_t v = 0; v < specs.size(); ++v) {
        VariantSpec& spec = specs[v];
        net::TrainConfig tc;
        tc.optimizer = net::Optimizer::adam;
        tc.learning_rate = opt.learning_rate;
        tc.batch_size = opt.batch_size;
        tc.epochs = opt.epochs;
        tc.seed = splitmix64(opt.seed ^ (0xabcdULL + v));
        tc.loss = net::Loss::mse;
        tc.val_fraction = opt.val_fraction;

        VariantResult res;
        res.name = spec.name;
        try {
            const net::TrainResult tr = net::train(spec.model, train_ds.x, train_ds.y, tc);
            if (tr.diverged) {
                res.failed = true;
                res.failure = tr.diagnostic;
            } else {
                res.best_epoch = tr.best_epoch;
                res.train = data::compute_metrics(first_components(train_ds.y), predictions(spec.model, train_ds.x));
                res.test = data::compute_metrics(first_components(test_ds.y), predictions(spec.model, test_ds.x));
            }
        } catch (const std::exception& e) {
            res.failed = true;
            res.failure = e.what();
        }
        run.variants.push_back(std::move(res));
        run.trained.push_back(spec.model.core);
    }
    return run;
}

std::string find_housing_csv(const Config& cfg) {
    if (cfg.has("data")) {
        const std::string p = cfg.require_string("data");
        if (fs::exists(p)) return p;
        return "";
    }
    if (const char* env = std::getenv("LIFTNET_HOUSING_CSV"); env && fs::exists(env)) return env;
    if (fs::exists("data/housing.csv")) return "data/housing.csv";
    return "";
}

namespace {

struct RunDir {
    fs::path dir;
    explicit RunDir(const Config& cfg, const std::string& command) {
        dir = cfg.get_string("out", "runs/" + command);
        fs::create_directories(dir);
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

void write_manifest(const RunDir& rd, const json& manifest) {
    write_file_atomically(rd.path("manifest.json"), manifest.dump(2) + "\n");
}

void write_resolved_config(const RunDir& rd, const Config& cfg) {
    write_file_atomically(rd.path("config.resolved"), cfg.serialize());
}

}  // namespace

int cmd_table1(Config cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string csv = find_housing_csv(cfg);
    bool synthetic = false;
    if (csv.empty()) {
        // No real dataset reachable: generate the documented synthetic
        // surrogate beside the outputs and say so loudly.
        synthetic = true;
        RunDir rd(cfg, "table1");
        csv = rd.path("synthetic_housing.csv");
        if (!fs::exists(csv))
            data::write_synthetic_housing_csv(csv, static_cast<int>(cfg.get_int("synthetic_rows", 20640)),
                                              cfg.get_u64("synthetic_seed", 20640));
        std::cerr << "[liftnet] real housing CSV not found; using the synthetic surrogate at " << csv
                  << "\n";
    }
    cfg.set("data", csv);
    cfg.set("dataset_kind", synthetic ? "synthetic" : "real");

    const Table1Options opt = Table1Options::from_config(cfg);
    const data::Dataset raw = data::load_california_csv(csv);
    const Table1Run run = run_table1(opt, raw);

    RunDir rd(cfg, "table1");
    write_resolved_config(rd, cfg);

    std::ostringstream lines;
    std::cout << "model,split,mae,mse,mape\n";
    for (const VariantResult& v : run.variants) {
        if (v.failed) {
            std::cout << v.name << ",train,failed,failed,failed\n" << v.name << ",test,failed,failed,failed\n";
            lines << v.name << ",train,failed,failed,failed\n" << v.name << ",test,failed,failed,failed\n";
            continue;
        }
        for (const auto& [split, m] : {std::pair{"train", v.train}, std::pair{"test", v.test}}) {
            std::cout << v.name << ',' << split << ',' << m.mae << ',' << m.mse << ',' << m.mape << "\n";
            lines << v.name << ',' << split << ',' << m.mae << ',' << m.mse << ',' << m.mape << "\n";
        }
    }
    write_file_atomically(rd.path("metrics.csv"), lines.str());

    json manifest;
    manifest["command"] = "table1";
    manifest["config_hash"] = cfg.hash();
    manifest["seed"] = run.seed;
    manifest["dataset_kind"] = synthetic ? "synthetic" : "real";
    manifest["dataset_rows"] = run.rows;
    manifest["train_rows"] = run.train_rows;
    manifest["test_rows"] = run.test_rows;
    manifest["feature_dim"] = run.feature_dim;
    bool any_failed = false;
    for (size_t v = 0; v < run.variants.size(); ++v) {
        const VariantResult& res = run.variants[v];
        json jv;
        jv["name"] = res.name;
        jv["failed"] = res.failed;
        if (res.failed) {
            jv["failure"] = res.failure;
            any_failed = true;
        } else {
            jv["train"] = metrics_json(res.train);
            jv["test"] = metrics_json(res.test);
            jv["best_epoch"] = res.best_epoch;
        }
        const std::string ckpt = rd.path(res.name + ".ckpt");
        checkpoint::save_network(ckpt, run.trained[v], {run.seed, cfg.hash()});
        jv["checkpoint"] = ckpt;
        manifest["variants"].push_back(jv);
    }
    if (run.rand_stack) {
        const std::string ckpt = rd.path("rand_stack.ckpt");
        checkpoint::save_random_stack(ckpt, *run.rand_stack, {run.seed, cfg.hash()});
        manifest["rand_stack_checkpoint"] = ckpt;
    }
    manifest["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(rd, manifest);
    return any_failed ? 1 : 0;
}

namespace {

int demo_exit_and_manifest(const Config& cfg, const std::string& command, const DemoResult& res,
                           double t0_seconds) {
    RunDir rd(cfg, command);
    write_resolved_config(rd, cfg);
    json manifest;
    manifest["command"] = command;
    manifest["config_hash"] = cfg.hash();
    manifest["seed"] = cfg.get_u64("seed", 1);
    manifest["identity_sup_error"] = res.identity_sup_error;
    for (const WidthError& we : res.nonlinear)
        manifest["nonlinear"].push_back({{"width", we.width}, {"sup_error", we.sup_error}, {"diverged", we.diverged}});
    manifest["alt_run_sup_error"] = res.alt_run_sup_error;
    manifest["wall_seconds"] = t0_seconds;
    write_manifest(rd, manifest);

    std::cout << command << ": identity sup error = " << res.identity_sup_error << "\n";
    bool ok = res.identity_sup_error <= 1e-2;
    double prev = std::numeric_limits<double>::infinity();
    for (const WidthError& we : res.nonlinear) {
        std::cout << command << ": width " << we.width << " sup error = " << we.sup_error
                  << (we.diverged ? " (diverged)" : "") << "\n";
        if (we.diverged || we.sup_error > prev) ok = false;
        prev = we.sup_error;
    }
    std::cout << command << ": alternate run sup error = " << res.alt_run_sup_error << "\n";
    if (res.alt_run_sup_error > 0.1) ok = false;
    return ok ? 0 : 1;
}

}  // namespace

int cmd_spd_demo(Config cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const DemoResult res = run_spd_demo(DemoOptions::from_config(cfg));
    return demo_exit_and_manifest(cfg, "spd-demo", res,
                                  std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

int cmd_hyperbolic_demo(Config cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const DemoResult res = run_hyperbolic_demo(DemoOptions::from_config(cfg));
    return demo_exit_and_manifest(cfg, "hyperbolic-demo", res,
                                  std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

int cmd_classify_demo(Config cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const ClassifyResult res = run_classify_demo(ClassifyOptions::from_config(cfg));

    RunDir rd(cfg, "classify-demo");
    write_resolved_config(rd, cfg);
    json manifest;
    manifest["command"] = "classify-demo";
    manifest["config_hash"] = cfg.hash();
    manifest["seed"] = cfg.get_u64("seed", 1);
    manifest["hard_agreement_offband"] = res.hard_agreement_offband;
    manifest["soft_sup_offband"] = res.soft_sup_offband;
    manifest["decomposition_exact"] = res.decomposition_exact;
    manifest["offband_points"] = res.offband_points;
    manifest["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(rd, manifest);

    std::cout << "classify-demo: hard agreement off band = " << res.hard_agreement_offband << "\n"
              << "classify-demo: soft sup error off band = " << res.soft_sup_offband << "\n"
              << "classify-demo: threshold∘soft decomposition exact = "
              << (res.decomposition_exact ? "yes" : "no") << "\n";
    const bool ok =
        res.hard_agreement_offband >= 0.95 && res.soft_sup_offband <= 0.2 && res.decomposition_exact;
    return ok ? 0 : 1;
}

int cmd_proptest(Config cfg) {
    const bool quick = cfg.get_bool("quick", false);
    const uint64_t seed = cfg.get_u64("seed", 1);
    const auto checks = run_property_battery(seed, quick);
    size_t failures = 0;
    for (const CheckResult& c : checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(44) << c.name
                  << " residual=" << std::setprecision(3) << std::scientific << c.residual;
        std::cout.unsetf(std::ios::scientific);
        std::cout << std::setprecision(6);
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        std::cout << "\n";
        if (!c.pass) ++failures;
    }
    std::cout << checks.size() - failures << "/" << checks.size() << " checks passed\n";
    return failures == 0 ? 0 : 1;
}

int cmd_gen_data(Config cfg) {
    const std::string out = cfg.get_string("out", "data/housing_synthetic.csv");
    const int rows = static_cast<int>(cfg.get_int("rows", 20640));
    const uint64_t seed = cfg.get_u64("seed", 20640);
    fs::create_directories(fs::path(out).parent_path().empty() ? "." : fs::path(out).parent_path());
    data::write_synthetic_housing_csv(out, rows, seed);
    std::cout << "wrote " << rows << " synthetic rows to " << out << "\n";
    return 0;
}

}  // namespace liftnet::experiment
