#include "liftnet/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "liftnet/manifold.hpp"
#include "liftnet/rng.hpp"

namespace liftnet::data {

namespace {

const std::vector<std::string> kNumericColumns = {
    "longitude",   "latitude",   "housing_median_age", "total_rooms",
    "total_bedrooms", "population", "households",      "median_income"};
const std::string kTargetColumn = "median_house_value";
const std::string kCategoricalColumn = "ocean_proximity";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    for (std::string& f : fields) {
        while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
        size_t start = 0;
        while (start < f.size() && f[start] == ' ') ++start;
        f = f.substr(start);
    }
    return fields;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Dataset load_california_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_california_csv: cannot open " + path);

    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("load_california_csv: empty file " + path);
    const std::vector<std::string> cols = split_csv_line(header);

    std::map<std::string, int> col_index;
    for (size_t i = 0; i < cols.size(); ++i) col_index[cols[i]] = static_cast<int>(i);
    for (const std::string& name : kNumericColumns)
        if (!col_index.count(name))
            throw std::runtime_error("load_california_csv: missing required column '" + name + "'");
    if (!col_index.count(kTargetColumn))
        throw std::runtime_error("load_california_csv: missing required column '" + kTargetColumn + "'");
    const bool has_categorical = col_index.count(kCategoricalColumn) > 0;

    struct RawRow {
        Vec numeric;  // NaN marks a missing total_bedrooms
        double target;
        std::string category;
    };
    std::vector<RawRow> raw;
    std::string line;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != cols.size()) {
            std::cerr << "[liftnet] skipping malformed row " << line_no << " in " << path << "\n";
            continue;
        }
        RawRow row;
        bool ok = true;
        for (const std::string& name : kNumericColumns) {
            const std::string& cell = fields[static_cast<size_t>(col_index[name])];
            if (cell.empty()) {
                row.numeric.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            try {
                size_t pos = 0;
                const double v = std::stod(cell, &pos);
                if (pos != cell.size()) throw std::invalid_argument(cell);
                row.numeric.push_back(v);
            } catch (const std::exception&) {
                ok = false;
                break;
            }
        }
        if (ok) {
            const std::string& cell = fields[static_cast<size_t>(col_index[kTargetColumn])];
            try {
                row.target = std::stod(cell);
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (!ok) {
            std::cerr << "[liftnet] skipping unparseable row " << line_no << " in " << path << "\n";
            continue;
        }
        if (has_categorical) row.category = fields[static_cast<size_t>(col_index[kCategoricalColumn])];
        raw.push_back(std::move(row));
    }
    if (raw.empty()) throw std::runtime_error("load_california_csv: no parseable rows in " + path);

    // Impute missing entries (total_bedrooms in the public file) with the column median.
    for (size_t c = 0; c < kNumericColumns.size(); ++c) {
        std::vector<double> present;
        for (const RawRow& r : raw)
            if (std::isfinite(r.numeric[c])) present.push_back(r.numeric[c]);
        if (present.size() == raw.size()) continue;
        if (present.empty())
            throw std::runtime_error("load_california_csv: column '" + kNumericColumns[c] + "' entirely missing");
        const double med = median_of(present);
        for (RawRow& r : raw)
            if (!std::isfinite(r.numeric[c])) r.numeric[c] = med;
    }

    std::vector<std::string> categories;
    if (has_categorical) {
        for (const RawRow& r : raw) categories.push_back(r.category);
        std::sort(categories.begin(), categories.end());
        categories.erase(std::unique(categories.begin(), categories.end()), categories.end());
    }

    Dataset ds;
    ds.feature_names = kNumericColumns;
    for (const std::string& cat : categories) ds.feature_names.push_back(kCategoricalColumn + "=" + cat);
    ds.target_names = {kTargetColumn};
    for (const RawRow& r : raw) {
        Vec feats = r.numeric;
        for (const std::string& cat : categories) feats.push_back(r.category == cat ? 1.0 : 0.0);
        ds.x.push_back(std::move(feats));
        ds.y.push_back({r.target});
    }
    std::cerr << "[liftnet] loaded " << ds.rows() << " rows from " << path << "\n";
    return ds;
}

std::pair<Dataset, Dataset> preprocess_split(const Dataset& ds, double test_fraction, uint64_t seed) {
    if (test_fraction <= 0.0 || test_fraction >= 1.0)
        throw std::invalid_argument("preprocess_split: test fraction must be in (0,1)");
    const size_t n = ds.rows();
    const size_t test_n = static_cast<size_t>(std::floor(test_fraction * static_cast<double>(n)));
    if (test_n == 0 || test_n == n) throw std::invalid_argument("preprocess_split: split leaves an empty side");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    const int m = ds.feature_dim();
    auto gather = [&](size_t begin, size_t end) {
        Dataset out;
        out.feature_names = ds.feature_names;
        out.target_names = ds.target_names;
        for (size_t i = begin; i < end; ++i) {
            out.x.push_back(ds.x[static_cast<size_t>(order[i])]);
            out.y.push_back(ds.y[static_cast<size_t>(order[i])]);
        }
        return out;
    };
    Dataset train = gather(0, n - test_n);
    Dataset test = gather(n - test_n, n);

    // Standardize with train statistics only.
    Vec mean(static_cast<size_t>(m), 0.0), stdev(static_cast<size_t>(m), 0.0);
    for (const Vec& row : train.x)
        for (int c = 0; c < m; ++c) mean[static_cast<size_t>(c)] += row[static_cast<size_t>(c)];
    for (double& v : mean) v /= static_cast<double>(train.rows());
    for (const Vec& row : train.x)
        for (int c = 0; c < m; ++c) {
            const double d = row[static_cast<size_t>(c)] - mean[static_cast<size_t>(c)];
            stdev[static_cast<size_t>(c)] += d * d;
        }
    for (double& v : stdev) {
        v = std::sqrt(v / static_cast<double>(train.rows()));
        if (v < 1e-12) v = 1.0;  // constant column
    }

    constexpr double kTargetScale = 1e5;  // dollars → 10^5-dollar units
    auto apply_norm = [&](Dataset& part) {
        for (Vec& row : part.x)
            for (int c = 0; c < m; ++c)
                row[static_cast<size_t>(c)] = (row[static_cast<size_t>(c)] - mean[static_cast<size_t>(c)]) / stdev[static_cast<size_t>(c)];
        for (Vec& t : part.y)
            for (double& v : t) v /= kTargetScale;
        part.norm.feature_mean = mean;
        part.norm.feature_std = stdev;
        part.norm.target_scale = kTargetScale;
        part.norm.standardized = true;
    };
    apply_norm(train);
    apply_norm(test);
    return {std::move(train), std::move(test)};
}

double unscale_target(const NormalizationRecord& norm, double yhat) { return yhat * norm.target_scale; }

Metrics compute_metrics(const Vec& y, const Vec& yhat) {
    if (y.empty() || y.size() != yhat.size()) throw std::invalid_argument("compute_metrics: length mismatch");
    Metrics m;
    for (size_t i = 0; i < y.size(); ++i) {
        const double err = y[i] - yhat[i];
        m.mae += std::fabs(err);
        m.mse += err * err;
        if (y[i] == 0.0) throw std::domain_error("compute_metrics: zero target makes MAPE undefined");
        m.mape += std::fabs(err / y[i]);
    }
    const double n = static_cast<double>(y.size());
    m.mae /= n;
    m.mse /= n;
    m.mape = 100.0 * m.mape / n;
    return m;
}

double sup_error_on_grid(const PointFn& f, const PointFn& g, const std::vector<Vec>& grid,
                         const MetricFn& dist) {
    if (grid.empty()) throw std::invalid_argument("sup_error_on_grid: empty grid");
    double worst = 0.0;
    for (const Vec& x : grid) worst = std::max(worst, dist(f(x), g(x)));
    return worst;
}

MetricFn euclidean_metric() {
    return [](const Vec& a, const Vec& b) {
        if (a.size() != b.size()) throw std::invalid_argument("euclidean_metric: dimension mismatch");
        return norm2(a - b);
    };
}

MetricFn spd_metric() {
    return [](const Vec& a, const Vec& b) {
        const manifold::SPDPoint pa(manifold::spd_unvectorize(a));
        const manifold::SPDPoint pb(manifold::spd_unvectorize(b));
        return manifold::spd_dist(pa, pb);
    };
}

MetricFn poincare_metric(double curvature) {
    return [curvature](const Vec& a, const Vec& b) {
        return manifold::poincare_dist(manifold::PoincarePoint(a, curvature),
                                       manifold::PoincarePoint(b, curvature));
    };
}

}  // namespace liftnet::data
