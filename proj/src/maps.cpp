#include "liftnet/maps.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "liftnet/linalg.hpp"

namespace liftnet::maps {

FeatureMap identity_feature(int n) {
    FeatureMap f;
    f.in_dim = n;
    f.out_dim = n;
    f.apply = [](const Vec& x) { return x; };
    f.claims_injective = true;
    f.invertible = true;
    f.inverse = [](const Vec& y) { return y; };
    f.kind = "identity";
    return f;
}

ReadoutMap identity_readout(int n) {
    ReadoutMap r;
    r.in_dim = n;
    r.out_dim = n;
    r.apply = [](const Vec& z) { return z; };
    r.has_section = true;
    r.section = [](const Vec& y) { return y; };
    r.componentwise_deriv = [](const Vec& z, const Vec&) { return Vec(z.size(), 1.0); };
    r.codomain = "R^n";
    r.kind = "identity";
    return r;
}

FeatureMap injective_stack(const LayerStackParams& params) {
    const size_t depth = params.generators.size();
    if (depth == 0 || params.biases.size() != depth)
        throw std::invalid_argument("injective_stack: need J ≥ 1 generator/bias pairs");
    const int m = params.generators.front().rows();
    for (const Matrix& a : params.generators) {
        if (!a.square() || a.rows() != m)
            throw std::invalid_argument("injective_stack: generators must all be m×m");
        ensure_finite(a, "injective_stack generator");
    }
    for (const Vec& b : params.biases)
        if (static_cast<int>(b.size()) != m) throw std::invalid_argument("injective_stack: bias length mismatch");

    if (!params.act.strictly_increasing()) {
        std::ostringstream msg;
        msg << "injective_stack: activation '" << params.act.name()
            << "' is not strictly increasing; such stacks are not injective (relu maps the whole "
               "negative orthant to 0) and do not preserve approximation capacity";
        throw std::invalid_argument(msg.str());
    }

    auto weights = std::make_shared<std::vector<Matrix>>();
    for (const Matrix& a : params.generators) weights->push_back(linalg::matrix_exp(a));
    auto biases = std::make_shared<std::vector<Vec>>(params.biases);
    const Activation act = params.act;

    FeatureMap f;
    f.in_dim = m;
    f.out_dim = m;
    f.kind = "injective_stack";
    f.apply = [weights, biases, act](const Vec& x) {
        Vec h = x;
        for (size_t j = 0; j < weights->size(); ++j) h = act.apply((*weights)[j].apply(h) + (*biases)[j]);
        return h;
    };
    f.claims_injective = true;

    if (act.surjective()) {
        auto inv_weights = std::make_shared<std::vector<Matrix>>();
        for (const Matrix& a : params.generators) inv_weights->push_back(linalg::matrix_exp(a * -1.0));
        f.invertible = true;
        f.inverse = [inv_weights, biases, act](const Vec& y) {
            Vec h = y;
            for (size_t j = inv_weights->size(); j-- > 0;)
                h = (*inv_weights)[j].apply(act.apply_inverse(h) - (*biases)[j]);
            return h;
        };
    }
    return f;
}

FeatureMap skip_feature(int in_dim, int g_out_dim, VecFn g, const std::string& g_kind) {
    FeatureMap f;
    f.in_dim = in_dim;
    f.out_dim = in_dim + g_out_dim;
    f.kind = "skip(" + g_kind + ")";
    f.apply = [g = std::move(g), in_dim, g_out_dim](const Vec& x) {
        Vec out = x;
        const Vec gx = g(x);
        if (static_cast<int>(gx.size()) != g_out_dim)
            throw std::invalid_argument("skip_feature: g output length mismatch");
        ensure_finite(gx, "skip_feature g output");
        out.insert(out.end(), gx.begin(), gx.end());
        return out;
    };
    f.claims_injective = true;  // first block is the identity regardless of g
    return f;
}

ReadoutMap logistic_readout(int n) {
    ReadoutMap r;
    r.in_dim = n;
    r.out_dim = n;
    r.kind = "logistic";
    r.codomain = "(0,1)^n";
    r.apply = [](const Vec& z) {
        Vec y(z.size());
        for (size_t i = 0; i < z.size(); ++i) y[i] = stable_logistic(z[i]);
        return y;
    };
    r.has_section = true;
    r.section = [](const Vec& y) {
        Vec z(y.size());
        for (size_t i = 0; i < y.size(); ++i) z[i] = logit(y[i]);
        return z;
    };
    r.componentwise_deriv = [](const Vec&, const Vec& y) {
        Vec d(y.size());
        for (size_t i = 0; i < y.size(); ++i) d[i] = y[i] * (1.0 - y[i]);
        return d;
    };
    return r;
}

std::vector<int> hard_threshold(double alpha, const Vec& soft) {
    if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("hard_threshold: alpha must be in (0,1)");
    std::vector<int> out(soft.size());
    for (size_t i = 0; i < soft.size(); ++i) {
        if (soft[i] < -1e-9 || soft[i] > 1.0 + 1e-9) {
            std::ostringstream msg;
            msg << "hard_threshold: score " << soft[i] << " outside [0,1]";
            throw std::invalid_argument(msg.str());
        }
        out[i] = soft[i] > alpha ? 1 : 0;
    }
    return out;
}

InjectivityReport check_injectivity(const FeatureMap& phi, const std::function<Vec(Rng&)>& sampler,
                                    int n_pairs, double tol, Rng& rng) {
    if (n_pairs < 1) throw std::invalid_argument("check_injectivity: n_pairs must be ≥ 1");
    InjectivityReport rep;
    rep.min_separation_ratio = std::numeric_limits<double>::infinity();
    for (int p = 0; p < n_pairs; ++p) {
        Vec x1 = sampler(rng);
        Vec x2 = sampler(rng);
        double sep = norm2(x1 - x2);
        int guard = 0;
        while (sep < tol && guard++ < 1000) {
            x2 = sampler(rng);
            sep = norm2(x1 - x2);
        }
        if (sep < tol) throw std::runtime_error("check_injectivity: sampler cannot produce separated pairs");
        const double out_sep = norm2(phi.apply(x1) - phi.apply(x2));
        if (out_sep < tol * 1e-3) ++rep.violations;
        rep.min_separation_ratio = std::min(rep.min_separation_ratio, out_sep / sep);
    }
    return rep;
}

FeatureMap spd_log_feature(const manifold::SPDPoint& base) {
    const int d = base.dim();
    const int n = d * (d + 1) / 2;
    auto base_ptr = std::make_shared<manifold::SPDPoint>(base);
    FeatureMap f;
    f.in_dim = n;
    f.out_dim = n;
    f.kind = "spd_log";
    f.apply = [base_ptr](const Vec& x) {
        const manifold::SPDPoint p(manifold::spd_unvectorize(x));
        return manifold::spd_vectorize(manifold::spd_log(*base_ptr, p));
    };
    f.claims_injective = true;
    f.invertible = true;
    f.inverse = [base_ptr](const Vec& v) {
        return manifold::spd_vectorize(manifold::spd_exp(*base_ptr, manifold::spd_unvectorize(v)).sym());
    };
    return f;
}

ReadoutMap spd_exp_readout(const manifold::SPDPoint& base) {
    const int d = base.dim();
    const int n = d * (d + 1) / 2;
    auto base_ptr = std::make_shared<manifold::SPDPoint>(base);
    ReadoutMap r;
    r.in_dim = n;
    r.out_dim = n;
    r.kind = "spd_exp";
    r.codomain = "P_d+";
    r.apply = [base_ptr](const Vec& z) {
        return manifold::spd_vectorize(manifold::spd_exp(*base_ptr, manifold::spd_unvectorize(z)).sym());
    };
    r.has_section = true;
    r.section = [base_ptr](const Vec& y) {
        const manifold::SPDPoint p(manifold::spd_unvectorize(y));
        return manifold::spd_vectorize(manifold::spd_log(*base_ptr, p));
    };
    return r;
}

FeatureMap hyperbolic_log0_feature(int n, double curvature) {
    FeatureMap f;
    f.in_dim = n;
    f.out_dim = n;
    f.kind = "hyperbolic_log0";
    f.apply = [curvature](const Vec& x) { return manifold::poincare_log0(manifold::PoincarePoint(x, curvature)); };
    f.claims_injective = true;
    f.invertible = true;
    f.inverse = [curvature](const Vec& v) { return manifold::poincare_exp0(v, curvature).coords(); };
    return f;
}

ReadoutMap hyperbolic_exp0_readout(int n, double curvature) {
    ReadoutMap r;
    r.in_dim = n;
    r.out_dim = n;
    r.kind = "hyperbolic_exp0";
    r.codomain = "D^n_c";
    r.apply = [curvature](const Vec& z) { return manifold::poincare_exp0(z, curvature).coords(); };
    r.has_section = true;
    r.section = [curvature](const Vec& y) { return manifold::poincare_log0(manifold::PoincarePoint(y, curvature)); };
    return r;
}

}  // namespace liftnet::maps
