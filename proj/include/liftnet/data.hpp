#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "liftnet/matrix.hpp"

namespace liftnet::data {

/// Per-column standardization statistics plus the target scale factor,
/// sufficient to invert the whole transform.
struct NormalizationRecord {
    Vec feature_mean;
    Vec feature_std;
    double target_scale = 1.0;
    bool standardized = false;
};

struct Dataset {
    std::vector<Vec> x;  // N rows of m features
    std::vector<Vec> y;  // N rows of targets (length 1 for scalar tasks)
    std::vector<std::string> feature_names;
    std::vector<std::string> target_names;
    NormalizationRecord norm;

    size_t rows() const { return x.size(); }
    int feature_dim() const { return x.empty() ? 0 : static_cast<int>(x.front().size()); }
};

/// Loads the California-housing CSV schema: eight numeric columns, the
/// median_house_value target, and an optional ocean_proximity categorical
/// that is one-hot encoded when present. Missing total_bedrooms entries are
/// imputed with the column median; unparseable rows are skipped (indices
/// logged to stderr). Throws std::runtime_error naming any absent column.
Dataset load_california_csv(const std::string& path);

/// Seeded shuffle + split; features standardized with train statistics only,
/// target scaled to units of 10^5 dollars. Returns (train, test).
std::pair<Dataset, Dataset> preprocess_split(const Dataset& ds, double test_fraction, uint64_t seed);

/// Map a model prediction back to dollars.
double unscale_target(const NormalizationRecord& norm, double yhat);

struct Metrics {
    double mae = 0.0;
    double mse = 0.0;
    double mape = 0.0;  // percent
};

/// MAE / MSE / MAPE (×100). MAPE requires y ≠ 0 componentwise.
Metrics compute_metrics(const Vec& y, const Vec& yhat);

using PointFn = std::function<Vec(const Vec&)>;
using MetricFn = std::function<double(const Vec&, const Vec&)>;

/// max over the grid of dist(f(x), g(x)): the empirical stand-in for
/// uniform closeness on a compact set.
double sup_error_on_grid(const PointFn& f, const PointFn& g, const std::vector<Vec>& grid,
                         const MetricFn& dist);

/// Registered codomain metrics for sup_error_on_grid.
MetricFn euclidean_metric();
/// Points are spd_vectorize coordinates; compares with the geodesic distance.
MetricFn spd_metric();
MetricFn poincare_metric(double curvature);

}  // namespace liftnet::data
