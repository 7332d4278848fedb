// liftnet command-line harness: geometric feature/readout experiments around
// a trainable feed-forward core. Subcommands mirror the experiment layer:
//   table1          four-variant housing regression comparison
//   spd-demo        SPD-manifold regression width sweep
//   hyperbolic-demo Poincaré-ball regression width sweep
//   classify-demo   two-disk soft/hard classification
//   proptest        numerical property battery
//   gen-data        synthetic housing CSV generator
// Exit codes: 0 success, 1 check/training failure, 2 config or I/O error.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "liftnet/config.hpp"
#include "liftnet/experiment.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string data_path;
    std::string out_dir;
    uint64_t seed = 0;
    bool has_seed = false;
    bool quick = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "flat key = value config file");
    cmd->add_option("--data", args.data_path, "housing CSV path");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "master RNG seed")->each([&](const std::string&) {
        args.has_seed = true;
    });
    cmd->add_flag("--quick", args.quick, "reduced-scale smoke run");
}

liftnet::Config resolve(const CommonArgs& args) {
    liftnet::Config cfg;
    if (!args.config_path.empty()) cfg = liftnet::Config::parse_file(args.config_path);
    if (!args.data_path.empty()) cfg.set("data", args.data_path);
    if (!args.out_dir.empty()) cfg.set("out", args.out_dir);
    if (args.has_seed) cfg.set("seed", std::to_string(args.seed));
    if (args.quick) cfg.set("quick", "true");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"liftnet: universal approximators with modified input/output layers"};
    app.require_subcommand(1);

    CommonArgs table1_args, spd_args, hyp_args, cls_args, prop_args, gen_args;
    CLI::App* c_table1 = app.add_subcommand("table1", "train vanilla/good/bad/rand on housing data");
    add_common(c_table1, table1_args);
    CLI::App* c_spd = app.add_subcommand("spd-demo", "SPD-manifold regression demo");
    add_common(c_spd, spd_args);
    CLI::App* c_hyp = app.add_subcommand("hyperbolic-demo", "Poincaré-ball regression demo");
    add_common(c_hyp, hyp_args);
    CLI::App* c_cls = app.add_subcommand("classify-demo", "two-disk classification demo");
    add_common(c_cls, cls_args);
    CLI::App* c_prop = app.add_subcommand("proptest", "numerical property battery");
    add_common(c_prop, prop_args);
    CLI::App* c_gen = app.add_subcommand("gen-data", "write the synthetic housing CSV");
    add_common(c_gen, gen_args);
    int gen_rows = 20640;
    c_gen->add_option("--rows", gen_rows, "row count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_table1->parsed()) return liftnet::experiment::cmd_table1(resolve(table1_args));
        if (c_spd->parsed()) return liftnet::experiment::cmd_spd_demo(resolve(spd_args));
        if (c_hyp->parsed()) return liftnet::experiment::cmd_hyperbolic_demo(resolve(hyp_args));
        if (c_cls->parsed()) return liftnet::experiment::cmd_classify_demo(resolve(cls_args));
        if (c_prop->parsed()) return liftnet::experiment::cmd_proptest(resolve(prop_args));
        if (c_gen->parsed()) {
            liftnet::Config cfg = resolve(gen_args);
            cfg.set("rows", std::to_string(gen_rows));
            if (gen_args.out_dir.empty()) cfg.set("out", "data/housing_synthetic.csv");
            return liftnet::experiment::cmd_gen_data(cfg);
        }
    } catch (const liftnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
