#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "liftnet/experiment.hpp"
#include "liftnet/manifold.hpp"

namespace liftnet::experiment {

namespace {

using linalg::SpectralFn;
using manifold::PoincarePoint;
using manifold::SPDPoint;

struct Battery {
    Rng rng;
    bool quick;
    std::vector<CheckResult> results;

    Battery(uint64_t seed, bool q) : rng(seed), quick(q) {}

    int n(int full, int reduced) const { return quick ? reduced : full; }

    void check(const std::string& name, double residual, double bound, const std::string& detail = "") {
        results.push_back({name, residual <= bound, residual, detail});
    }
    void check_flag(const std::string& name, bool pass, const std::string& detail = "") {
        results.push_back({name, pass, pass ? 0.0 : 1.0, detail});
    }

    SymMatrix random_symmetric(int d, double scale) {
        Matrix m(d, d);
        for (double& v : m.data()) v = rng.uniform(-scale, scale);
        return SymMatrix(m);
    }

    SymMatrix random_spd(int d, double lo, double hi) {
        const auto eig = linalg::sym_eig(random_symmetric(d, 1.0));
        Vec values(static_cast<size_t>(d));
        for (double& v : values) v = rng.uniform(lo, hi);
        Matrix m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double acc = 0.0;
                for (int k = 0; k < d; ++k) acc += eig.q(i, k) * values[static_cast<size_t>(k)] * eig.q(j, k);
                m(i, j) = acc;
            }
        return SymMatrix(m);
    }

    Vec random_ball(int n_dim, double c, double frac = 0.85) {
        Vec v(static_cast<size_t>(n_dim));
        for (double& x : v) x = rng.gaussian();
        const double r = frac * std::sqrt(rng.uniform()) / std::sqrt(c);
        const double s = r / std::max(norm2(v), 1e-300);
        for (double& x : v) x *= s;
        return v;
    }
};

double det_gauss(Matrix a) {
    const int n = a.rows();
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
        if (a(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            det = -det;
        }
        det *= a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
        }
    }
    return det;
}

void linalg_checks(Battery& b) {
    {
        double worst = 0.0;
        for (int rep = 0; rep < b.n(40, 10); ++rep) {
            const int d = 2 + b.rng.uniform_int(19);
            const SymMatrix s = b.random_symmetric(d, 3.0);
            const auto eig = linalg::sym_eig(s);
            Matrix lambda(d, d);
            for (int i = 0; i < d; ++i) lambda(i, i) = eig.values[static_cast<size_t>(i)];
            const double resid = (eig.q * lambda * eig.q.transpose() - s.mat()).frobenius_norm() /
                                 std::max(1.0, s.frobenius_norm());
            worst = std::max(worst, resid);
        }
        b.check("linalg.sym_eig.reconstruction", worst, 1e-10);
    }
    {
        double worst = 0.0;
        for (int rep = 0; rep < b.n(30, 8); ++rep) {
            const SymMatrix s = b.random_spd(4, 0.1, 10.0);
            const SymMatrix rt = linalg::spectral_fn(linalg::spectral_fn(s, SpectralFn::log), SpectralFn::exp);
            worst = std::max(worst, (rt.mat() - s.mat()).frobenius_norm() / std::max(1.0, s.frobenius_norm()));
        }
        b.check("linalg.spectral.exp_log_roundtrip", worst, 1e-9);
    }
    {
        double worst = 0.0;
        for (int rep = 0; rep < b.n(20, 5); ++rep) {
            Vec da(4), db(4);
            for (double& v : da) v = b.rng.uniform(-1.0, 1.0);
            for (double& v : db) v = b.rng.uniform(-1.0, 1.0);
            const Matrix lhs = linalg::matrix_exp(Matrix::diag(da) + Matrix::diag(db));
            const Matrix rhs = linalg::matrix_exp(Matrix::diag(da)) * linalg::matrix_exp(Matrix::diag(db));
            worst = std::max(worst, (lhs - rhs).frobenius_norm() / std::max(1.0, lhs.frobenius_norm()));
        }
        b.check("linalg.expm.commuting_homomorphism", worst, 1e-9);
    }
    {
        bool all_positive = true;
        for (int rep = 0; rep < b.n(100, 25); ++rep) {
            const int d = 2 + b.rng.uniform_int(4);
            Matrix a(d, d);
            for (double& v : a.data()) v = b.rng.uniform(-2.0, 2.0);
            if (det_gauss(linalg::matrix_exp(a)) <= 0.0) all_positive = false;
        }
        b.check_flag("linalg.expm.det_positive", all_positive, "exp maps into GL(d)");
    }
    {
        double worst = 0.0;
        for (int rep = 0; rep < b.n(6, 2); ++rep) {
            const int d = 3;
            Matrix a(d, d), g(d, d);
            for (double& v : a.data()) v = b.rng.uniform(-2.0, 2.0);
            for (double& v : g.data()) v = b.rng.uniform(-1.0, 1.0);
            const auto ws = linalg::matrix_exp_workspace(a);
            const Matrix grad = linalg::matrix_exp_adjoint(ws, g);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    const double saved = a(i, j);
                    auto obj = [&](double x) {
                        a(i, j) = x;
                        const Matrix e = linalg::matrix_exp(a);
                        double s = 0.0;
                        for (size_t k = 0; k < e.data().size(); ++k) s += g.data()[k] * e.data()[k];
                        return s;
                    };
                    const double fd = (obj(saved + 1e-5) - obj(saved - 1e-5)) / 2e-5;
                    a(i, j) = saved;
                    worst = std::max(worst, std::fabs(grad(i, j) - fd) /
                                                std::max({std::fabs(fd), std::fabs(grad(i, j)), 1e-6}));
                }
        }
        b.check("linalg.expm.adjoint_vs_fd", worst, 1e-4);
    }
}

void manifold_checks(Battery& b) {
    {
        double worst = 0.0;
        for (int rep = 0; rep < b.n(200, 40); ++rep) {
            const int d = 2 + b.rng.uniform_int(5);
            const SPDPoint base(b.random_spd(d, 0.3, 5.0));
            const SymMatrix v = b.random_symmetric(d, 0.7);
            const SymMatrix back = manifold::spd_log(base, manifold::spd_exp(base, v));
            worst = std::max(worst, (back.mat() - v.mat()).frobenius_norm() / std::max(1.0, v.frobenius_norm()));
        }
        b.check("manifold.spd.exp_log_roundtrip", worst, 1e-8);
    }
    {
        double worst = 0.0;
        for (int rep = 0; rep < b.n(30, 8); ++rep) {
            const SPDPoint base(b.random_spd(3, 0.4, 4.0));
            const SymMatrix v = b.random_symmetric(3, 0.4);
            const SymMatrix ri = linalg::spectral_fn(base.sym(), SpectralFn::inv_sqrt);
            const double speed = SymMatrix(ri.mat() * v.mat() * ri.mat()).frobenius_norm();
            for (double t : {0.3, 1.0, 2.0}) {
                const double d_t = manifold::spd_dist(base, manifold::spd_exp(base, v * t));
                worst = std::max(worst, std::fabs(d_t - t * speed) / std::max(1.0, t * speed));
            }
        }
        b.check("manifold.spd.geodesic_speed", worst, 1e-7);
    }
    {
        double worst = 0.0;
        for (int rep = 0; rep < b.n(100, 25); ++rep) {
            const SPDPoint a(b.random_spd(3, 0.2, 6.0));
            const SPDPoint c(b.random_spd(3, 0.2, 6.0));
            worst = std::max(worst, std::fabs(manifold::spd_dist(a, c) - manifold::spd_dist(c, a)));
        }
        b.check("manifold.spd.dist_symmetry", worst, 1e-9);
    }
    {
        double worst_violation = 0.0;
        for (int rep = 0; rep < b.n(1000, 150); ++rep) {
            const SPDPoint a(b.random_spd(2, 0.3, 5.0));
            const SPDPoint c(b.random_spd(2, 0.3, 5.0));
            const SPDPoint e(b.random_spd(2, 0.3, 5.0));
            const double gap = manifold::spd_dist(a, e) - manifold::spd_dist(a, c) - manifold::spd_dist(c, e);
            worst_violation = std::max(worst_violation, gap);
        }
        b.check("manifold.spd.triangle_inequality", worst_violation, 1e-9);
    }
    {
        double worst = 0.0;
        for (int rep = 0; rep < b.n(50, 10); ++rep) {
            const SymMatrix s = b.random_symmetric(4, 2.0);
            worst = std::max(worst, std::fabs(norm2(manifold::spd_vectorize(s)) - s.frobenius_norm()));
        }
        b.check("manifold.spd.vectorize_isometry", worst, 1e-12);
    }
    {
        double worst = 0.0;
        for (int rep = 0; rep < b.n(200, 40); ++rep) {
            const double c = (rep % 2 == 0) ? 1.0 : 0.5;
            Vec v(3);
            for (double& x : v) x = b.rng.gaussian();
            const double target = b.rng.uniform(0.0, 5.0 / std::sqrt(c));
            const double s = target / std::max(norm2(v), 1e-300);
            for (double& x : v) x *= s;
            const Vec back = manifold::poincare_log0(manifold::poincare_exp0(v, c));
            worst = std::max(worst, norm2(back - v) / std::max(1.0, norm2(v)));
        }
        b.check("manifold.poincare.exp_log_roundtrip", worst, 1e-10);
    }
    {
        double worst = 0.0;
        const PoincarePoint zero(Vec{0.0, 0.0}, 1.0);
        for (int rep = 0; rep < b.n(100, 25); ++rep) {
            Vec v{0.7 * b.rng.uniform(-1.0, 1.0), 0.7 * b.rng.uniform(-1.0, 1.0)};
            const double d0 = manifold::poincare_dist(zero, manifold::poincare_exp0(v, 1.0));
            worst = std::max(worst, std::fabs(d0 - 2.0 * norm2(v)) / std::max(1.0, norm2(v)));
        }
        b.check("manifold.poincare.base_point_distance", worst, 1e-9);
    }
    {
        double worst_sym = 0.0, worst_tri = 0.0;
        for (int rep = 0; rep < b.n(1000, 150); ++rep) {
            const double c = 1.0;
            const PoincarePoint x(b.random_ball(2, c), c);
            const PoincarePoint y(b.random_ball(2, c), c);
            const PoincarePoint z(b.random_ball(2, c), c);
            worst_sym = std::max(worst_sym,
                                 std::fabs(manifold::poincare_dist(x, y) - manifold::poincare_dist(y, x)));
            worst_tri = std::max(worst_tri, manifold::poincare_dist(x, z) - manifold::poincare_dist(x, y) -
                                                manifold::poincare_dist(y, z));
        }
        b.check("manifold.poincare.dist_symmetry", worst_sym, 1e-9);
        b.check("manifold.poincare.triangle_inequality", worst_tri, 1e-9);
    }
}

void maps_checks(Battery& b) {
    {
        maps::LayerStackParams p;
        p.act = Activation::gprelu(0.25, 1.5);
        for (int j = 0; j < 3; ++j) {
            Matrix a(4, 4);
            for (double& v : a.data()) v = b.rng.uniform(-0.6, 0.6);
            p.generators.push_back(a);
            Vec bias(4);
            for (double& v : bias) v = b.rng.uniform(-0.4, 0.4);
            p.biases.push_back(bias);
        }
        const maps::FeatureMap phi = maps::injective_stack(p);
        double worst = 0.0;
        for (int rep = 0; rep < b.n(1000, 200); ++rep) {
            Vec x(4);
            for (double& v : x) v = b.rng.uniform(-3.0, 3.0);
            worst = std::max(worst, norm2(phi.inverse(phi.apply(x)) - x) / std::max(1.0, norm2(x)));
            worst = std::max(worst, norm2(phi.apply(phi.inverse(x)) - x) / std::max(1.0, norm2(x)));
        }
        b.check("maps.injective_stack.two_sided_inverse", worst, 1e-8);
    }
    {
        bool rejected = false;
        try {
            maps::LayerStackParams p;
            p.generators.push_back(Matrix(2, 2));
            p.biases.push_back(Vec(2, 0.0));
            p.act = Activation::relu();
            maps::injective_stack(p);
        } catch (const std::invalid_argument&) {
            rejected = true;
        }
        b.check_flag("maps.injective_stack.rejects_relu", rejected);
    }
    {
        const maps::ReadoutMap rho = maps::logistic_readout(3);
        double worst = 0.0;
        for (int rep = 0; rep < b.n(500, 100); ++rep) {
            Vec y(3);
            for (double& v : y) v = b.rng.uniform(0.001, 0.999);
            worst = std::max(worst, norm2(rho.apply(rho.section(y)) - y));
        }
        b.check("maps.readout.section_right_inverse", worst, 1e-8);
    }
    {
        double worst = 0.0;
        const double alpha = 0.4;
        bool all_equal = true;
        for (int rep = 0; rep < b.n(1000, 200); ++rep) {
            Vec soft(4);
            for (double& v : soft) v = b.rng.uniform();
            Vec squared(4);
            for (size_t i = 0; i < 4; ++i) squared[i] = soft[i] * soft[i];
            if (maps::hard_threshold(alpha, soft) != maps::hard_threshold(alpha * alpha, squared))
                all_equal = false;
        }
        b.check_flag("maps.threshold.level_set_reparametrization", all_equal);
        (void)worst;
    }
    {
        // relu stack with strongly negative bias collapses the unit box.
        maps::FeatureMap collapse;
        collapse.in_dim = 3;
        collapse.out_dim = 3;
        collapse.apply = [](const Vec& x) {
            Vec out(x.size());
            for (size_t i = 0; i < x.size(); ++i) out[i] = std::max(0.0, x[i] - 10.0);
            return out;
        };
        Rng probe = b.rng.split(0x11);
        const auto report = maps::check_injectivity(
            collapse,
            [](Rng& r) {
                Vec x(3);
                for (double& v : x) v = r.uniform(0.0, 1.0);
                return x;
            },
            b.n(1000, 200), 1e-6, probe);
        b.check_flag("maps.check_injectivity.relu_counterexample", report.violations > 0,
                     "collisions detected as expected: " + std::to_string(report.violations));
    }
    {
        Rng init = b.rng.split(0x12);
        net::Network core = net::mlp({3, 6, 2}, Activation::tanh_fn(), init);
        const net::LiftedModel lifted =
            net::lift(maps::identity_feature(3), core, maps::identity_readout(2));
        double worst = 0.0;
        for (int rep = 0; rep < b.n(100, 25); ++rep) {
            Vec x(3);
            for (double& v : x) v = b.rng.uniform(-2.0, 2.0);
            worst = std::max(worst, norm2(lifted(x) - core.forward(x)));
        }
        b.check("maps.lift.identity_neutrality", worst, 0.0);
    }
}

void net_checks(Battery& b) {
    {
        double worst = 0.0;
        const int configs = b.n(6, 2);
        for (int rep = 0; rep < configs; ++rep) {
            Rng init = b.rng.split(0x20 + static_cast<uint64_t>(rep));
            Matrix gen(3, 3);
            for (double& v : gen.data()) v = b.rng.uniform(-0.8, 0.8);
            net::Network n({net::exp_layer(gen, Vec(3, 0.1), Activation::gprelu(0.25, 1.5)),
                            net::direct_layer(Matrix(2, 3, {0.4, -0.2, 0.3, 0.1, 0.5, -0.4}), Vec(2, 0.0))});
            std::vector<Vec> xs, ys;
            for (int i = 0; i < 4; ++i) {
                Vec x(3), y(2);
                for (double& v : x) v = b.rng.uniform(-1.5, 1.5);
                for (double& v : y) v = b.rng.uniform(-1.5, 1.5);
                xs.push_back(x);
                ys.push_back(y);
            }
            const net::Grads grads = net::gradient(n, net::Loss::mse, xs, ys);
            for (int j = 0; j < n.depth(); ++j) {
                Matrix& p = n.layer_mut(j).param;
                for (size_t e = 0; e < p.data().size(); ++e) {
                    const double saved = p.data()[e];
                    auto batch_loss = [&]() {
                        double total = 0.0;
                        for (size_t i = 0; i < xs.size(); ++i)
                            total += net::loss_value(net::Loss::mse, n.forward(xs[i]), ys[i]);
                        return total / static_cast<double>(xs.size());
                    };
                    p.data()[e] = saved + 1e-5;
                    n.refresh_layer(j);
                    const double up = batch_loss();
                    p.data()[e] = saved - 1e-5;
                    n.refresh_layer(j);
                    const double down = batch_loss();
                    p.data()[e] = saved;
                    n.refresh_layer(j);
                    const double fd = (up - down) / 2e-5;
                    const double got = grads.w[static_cast<size_t>(j)].data()[e];
                    worst = std::max(worst,
                                     std::fabs(got - fd) / std::max({std::fabs(fd), std::fabs(got), 1e-6}));
                }
            }
            (void)init;
        }
        b.check("net.gradient.finite_difference", worst, 1e-4);
    }
    {
        Rng init = b.rng.split(0x30);
        net::Network n = net::mlp({3, 5, 2}, Activation::relu(), init);
        for (int j = 0; j < n.depth(); ++j)
            std::fill(n.layer_mut(j).bias.begin(), n.layer_mut(j).bias.end(), 0.0);
        double worst = 0.0;
        for (int rep = 0; rep < b.n(100, 25); ++rep) {
            Vec x(3);
            for (double& v : x) v = b.rng.uniform(-2.0, 2.0);
            const double lambda = b.rng.uniform(0.1, 4.0);
            worst = std::max(worst, norm2(n.forward(lambda * x) - lambda * n.forward(x)));
        }
        b.check("net.relu.positive_homogeneity", worst, 1e-12);
    }
    {
        Rng init = b.rng.split(0x31);
        net::Network core({net::exp_layer_at_identity(2, Activation::gprelu(0.25, 1.5)),
                           net::direct_layer(Matrix(1, 2, {0.4, -0.6}), Vec(1, 0.0))});
        net::LiftedModel model = net::lift(maps::identity_feature(2), std::move(core), maps::identity_readout(1));
        std::vector<Vec> xs, ys;
        for (int i = 0; i < 32; ++i) {
            Vec x{b.rng.uniform(-1.0, 1.0), b.rng.uniform(-1.0, 1.0)};
            ys.push_back({x[0] * x[1]});
            xs.push_back(std::move(x));
        }
        net::TrainConfig tc;
        tc.epochs = b.n(25, 8);
        tc.batch_size = 8;
        tc.seed = 5;
        tc.val_fraction = 0.0;
        double min_sv = std::numeric_limits<double>::infinity();
        net::train(model, xs, ys, tc, [&](const net::Network& n, int) {
            min_sv = std::min(min_sv, linalg::smallest_singular_value(n.weight(0)));
        });
        b.check_flag("net.exp_layer.invertible_every_step", min_sv > 0.0,
                     "min singular value seen: " + std::to_string(min_sv));
        (void)init;
    }
    {
        auto run_once = [&](uint64_t seed) {
            Rng init(seed);
            net::Network core = net::mlp({2, 5, 1}, Activation::relu(), init);
            net::LiftedModel model =
                net::lift(maps::identity_feature(2), std::move(core), maps::identity_readout(1));
            std::vector<Vec> xs, ys;
            Rng data(seed ^ 0xdead);
            for (int i = 0; i < 40; ++i) {
                Vec x{data.uniform(-1.0, 1.0), data.uniform(-1.0, 1.0)};
                ys.push_back({x[0] + 0.3 * x[1]});
                xs.push_back(std::move(x));
            }
            net::TrainConfig tc;
            tc.epochs = b.n(15, 5);
            tc.batch_size = 10;
            tc.seed = 9;
            const net::TrainResult tr = net::train(model, xs, ys, tc);
            return std::make_pair(tr.train_loss, model.core.layers()[0].param.data());
        };
        const auto [h1, p1] = run_once(777);
        const auto [h2, p2] = run_once(777);
        b.check_flag("net.train.deterministic_replay", h1 == h2 && p1 == p2);
    }
    {
        const net::ConvFilter w({1.0, 1.0});
        const Vec out = net::conv1d_apply(w, {1.0, 2.0, 3.0});
        b.check_flag("net.conv1d.hand_example", out == Vec{1.0, 3.0, 5.0, 3.0});
    }
}

void randomnet_checks(Battery& b) {
    {
        Rng build = b.rng.split(0x40);
        const maps::FeatureMap phi = randomnet::build_random_feature(
            {3, 3, 4}, Activation::prelu(), randomnet::EntryDist::bernoulli_pm1, build);
        Rng probe = b.rng.split(0x41);
        const auto report = maps::check_injectivity(
            phi,
            [](Rng& r) {
                Vec x(3);
                for (double& v : x) v = r.uniform(-2.0, 2.0);
                return x;
            },
            b.n(1000, 200), 1e-6, probe);
        b.check_flag("randomnet.feature.injectivity", report.violations == 0);
    }
    {
        Rng build = b.rng.split(0x42);
        const double rate = randomnet::rank_acceptance_rate(randomnet::EntryDist::bernoulli_pm1, 2,
                                                            b.n(10000, 2000), build);
        b.check("randomnet.bernoulli_2x2_rate_half", std::fabs(rate - 0.5), 0.02,
                "rate=" + std::to_string(rate));
    }
    {
        auto build = [&](uint64_t seed) {
            Rng r(seed);
            return randomnet::build_random_stack({3, 3}, Activation::prelu(),
                                                 randomnet::EntryDist::standard_gaussian, r);
        };
        const auto s1 = build(4321), s2 = build(4321);
        b.check_flag("randomnet.seed_determinism", s1.weights[0] == s2.weights[0] && s1.biases[0] == s2.biases[0]);
    }
}

void data_checks(Battery& b) {
    {
        data::Dataset ds;
        for (int i = 0; i < 200; ++i) {
            ds.x.push_back({b.rng.uniform(-3.0, 3.0), b.rng.gaussian()});
            ds.y.push_back({b.rng.uniform(1e5, 5e5)});
        }
        const auto [tr1, te1] = data::preprocess_split(ds, 0.3, 77);
        const auto [tr2, te2] = data::preprocess_split(ds, 0.3, 77);
        const bool deterministic = tr1.x == tr2.x && te1.y == te2.y;
        const bool partition = tr1.rows() + te1.rows() == ds.rows();
        b.check_flag("data.split.partition_and_determinism", deterministic && partition);
    }
    {
        const data::Metrics m = data::compute_metrics({1.0, 1.0}, {2.0, 0.0});
        const bool ok = std::fabs(m.mae - 1.0) < 1e-12 && std::fabs(m.mse - 1.0) < 1e-12 &&
                        std::fabs(m.mape - 100.0) < 1e-12;
        b.check_flag("data.metrics.hand_example", ok);
    }
    {
        std::vector<Vec> grid;
        for (int i = 0; i < 40; ++i) grid.push_back({b.rng.uniform(-1.0, 1.0)});
        const data::PointFn f = [](const Vec& x) { return Vec{std::sin(x[0])}; };
        const data::PointFn g = [](const Vec& x) { return Vec{x[0]}; };
        const data::PointFn h = [](const Vec& x) { return Vec{x[0] * x[0]}; };
        const auto metric = data::euclidean_metric();
        const double fg = data::sup_error_on_grid(f, g, grid, metric);
        const double gf = data::sup_error_on_grid(g, f, grid, metric);
        const double fh = data::sup_error_on_grid(f, h, grid, metric);
        const double gh = data::sup_error_on_grid(g, h, grid, metric);
        const bool ok = std::fabs(fg - gf) == 0.0 && fh <= fg + gh + 1e-12 &&
                        data::sup_error_on_grid(f, f, grid, metric) == 0.0;
        b.check_flag("data.sup_error.pseudometric", ok);
    }
}

void classification_checks(Battery& b) {
    {
        // Degenerate label set covering the whole sample box: the ideal
        // classifier is constant 1 and trivially matched.
        bool ok = true;
        for (int rep = 0; rep < b.n(200, 50); ++rep) {
            const Vec soft{1.0};
            if (maps::hard_threshold(0.5, soft) != std::vector<int>{1}) ok = false;
        }
        b.check_flag("classify.degenerate_whole_space_label", ok);
    }
    if (!b.quick) {
        // Density surrogate: sup error against the soft target over two
        // disjoint disks is non-increasing in width 8 → 32 → 128.
        ClassifyOptions opt;
        opt.seed = 99;
        opt.train_n = 1500;
        opt.epochs = 150;
        opt.disk1_cx = -1.0;
        opt.disk2_cx = 1.0;
        opt.disk_radius = 0.6;
        Vec errors;
        for (int width : {8, 32, 128}) {
            opt.hidden_width = width;
            const ClassifyResult res = run_classify_demo(opt);
            errors.push_back(res.soft_sup_offband);
        }
        const bool monotone = errors[0] >= errors[1] - 5e-3 && errors[1] >= errors[2] - 5e-3;
        b.check_flag("classify.density_surrogate_width_trend", monotone,
                     "sup errors: " + std::to_string(errors[0]) + ", " + std::to_string(errors[1]) + ", " +
                         std::to_string(errors[2]));
    }
}

}  // namespace

std::vector<CheckResult> run_property_battery(uint64_t seed, bool quick) {
    Battery b(seed, quick);
    linalg_checks(b);
    manifold_checks(b);
    maps_checks(b);
    net_checks(b);
    randomnet_checks(b);
    data_checks(b);
    classification_checks(b);
    return b.results;
}

}  // namespace liftnet::experiment
