#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liftnet/config.hpp"
#include "liftnet/data.hpp"
#include "liftnet/net.hpp"
#include "liftnet/randomnet.hpp"

namespace liftnet::experiment {

// --- Table 1: Vanilla / Good / Bad / Rand on the housing regression. ---

struct Table1Options {
    std::string data_path = "data/housing.csv";
    uint64_t seed = 1;
    int hidden_width = 100;
    int epochs = 200;
    int batch_size = 256;
    double learning_rate = 1e-3;
    double test_fraction = 0.3;
    double val_fraction = 0.1;
    int feature_depth = 2;  // J of the good/bad input stacks
    int rand_k = 2;         // random layers feeding the skip connection
    double gprelu_alpha = 0.25;
    double gprelu_beta = 1.5;
    // Offset of the fixed relu stacks (standardized-feature units); each
    // layer deletes everything below it, which is what breaks injectivity.
    double bad_stack_bias = -1.25;
    size_t max_rows = 0;  // 0 = use every row (quick mode subsamples)

    static Table1Options from_config(const Config& cfg);
};

struct VariantResult {
    std::string name;
    bool failed = false;
    std::string failure;
    data::Metrics train;
    data::Metrics test;
    int best_epoch = -1;
};

struct Table1Run {
    uint64_t seed = 0;
    size_t rows = 0, train_rows = 0, test_rows = 0;
    int feature_dim = 0;
    std::vector<VariantResult> variants;             // vanilla, good, bad, rand
    std::vector<net::Network> trained;               // aligned with variants
    std::optional<randomnet::RandomStack> rand_stack;

    const VariantResult& variant(const std::string& name) const;
};

/// Trains the four variants on one shared split of the already-loaded raw
/// dataset. Identical split and core shape across variants; only φ/ρ differ.
Table1Run run_table1(const Table1Options& opt, const data::Dataset& raw);

// --- Manifold regression demos. ---

struct DemoOptions {
    uint64_t seed = 1;
    std::vector<int> widths = {8, 32, 128};
    int train_n = 600;
    int test_n = 500;
    int epochs = 3000;
    int batch_size = 100;
    double learning_rate = 2e-3;
    double curvature = 1.0;      // hyperbolic demo
    double alt_curvature = 0.1;  // second point of the curvature family
    bool quick = false;

    static DemoOptions from_config(const Config& cfg);
};

struct WidthError {
    int width = 0;
    double sup_error = 0.0;
    bool diverged = false;
};

struct DemoResult {
    double identity_sup_error = 0.0;        // smallest width on the identity target
    std::vector<WidthError> nonlinear;      // width sweep on the nonlinear target
    double alt_run_sup_error = 0.0;         // second basepoint (SPD) / curvature (hyperbolic)
};

DemoResult run_spd_demo(const DemoOptions& opt);
DemoResult run_hyperbolic_demo(const DemoOptions& opt);

// --- Classification demo on two overlapping open disks. ---

struct ClassifyOptions {
    uint64_t seed = 1;
    int train_n = 4000;
    int hidden_width = 64;
    int epochs = 400;
    int batch_size = 128;
    double learning_rate = 3e-3;
    int grid_n = 100;
    double margin_band = 0.05;
    double alpha = 0.5;
    // Two open disks (overlapping by default, so labels are multi-hot).
    double disk1_cx = -0.3;
    double disk2_cx = 0.3;
    double disk_radius = 0.8;
    bool quick = false;

    static ClassifyOptions from_config(const Config& cfg);
};

struct ClassifyResult {
    double hard_agreement_offband = 0.0;
    double soft_sup_offband = 0.0;
    bool decomposition_exact = false;
    size_t offband_points = 0;
};

ClassifyResult run_classify_demo(const ClassifyOptions& opt);

// --- Property battery. ---

struct CheckResult {
    std::string name;
    bool pass = false;
    double residual = 0.0;
    std::string detail;
};

std::vector<CheckResult> run_property_battery(uint64_t seed, bool quick);

// --- CLI entry points (config resolution, output files, exit codes). ---

int cmd_table1(Config cfg);
int cmd_spd_demo(Config cfg);
int cmd_hyperbolic_demo(Config cfg);
int cmd_classify_demo(Config cfg);
int cmd_proptest(Config cfg);
int cmd_gen_data(Config cfg);

/// Locates a housing CSV: explicit config path, the LIFTNET_HOUSING_CSV
/// environment variable, then data/housing.csv. Empty if none exists.
std::string find_housing_csv(const Config& cfg);

}  // namespace liftnet::experiment
