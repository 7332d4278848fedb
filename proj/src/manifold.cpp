#include "liftnet/manifold.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace liftnet::manifold {

namespace {

using linalg::SpectralFn;

std::atomic<uint64_t> g_clamps{0};

SymMatrix sandwich(const SymMatrix& outer, const SymMatrix& inner) {
    return SymMatrix(outer.mat() * inner.mat() * outer.mat());
}

void require_same_space(const PoincarePoint& x, const PoincarePoint& y, const char* who) {
    if (x.dim() != y.dim() || x.curvature() != y.curvature()) {
        std::ostringstream msg;
        msg << who << ": dimension/curvature mismatch (" << x.dim() << ", c=" << x.curvature() << ") vs ("
            << y.dim() << ", c=" << y.curvature() << ")";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

SPDPoint::SPDPoint(const SymMatrix& m) : m_(m) {
    ensure_finite(m.mat(), "SPDPoint");
    const auto eig = linalg::sym_eig(m);
    if (eig.values.back() <= 1e-12) {
        std::ostringstream msg;
        msg << "SPDPoint: matrix not positive definite (smallest eigenvalue " << eig.values.back() << ")";
        throw std::domain_error(msg.str());
    }
}

PoincarePoint::PoincarePoint(Vec coords, double curvature) : coords_(std::move(coords)), c_(curvature) {
    if (c_ <= 0.0) throw std::invalid_argument("PoincarePoint: curvature must be > 0");
    ensure_finite(coords_, "PoincarePoint");
    const double r2 = dot(coords_, coords_);
    if (c_ * r2 >= 1.0) {
        std::ostringstream msg;
        msg << "PoincarePoint: c·‖x‖² = " << c_ * r2 << " outside the open ball";
        throw std::domain_error(msg.str());
    }
}

SPDPoint spd_exp(const SPDPoint& base, const SymMatrix& v) {
    ensure_finite(v.mat(), "spd_exp");
    if (v.dim() != base.dim()) throw std::invalid_argument("spd_exp: tangent dimension mismatch");
    const SymMatrix root = linalg::spectral_fn(base.sym(), SpectralFn::sqrt);
    const SymMatrix root_inv = linalg::spectral_fn(base.sym(), SpectralFn::inv_sqrt);
    const SymMatrix inner = linalg::spectral_fn(sandwich(root_inv, v), SpectralFn::exp);
    return SPDPoint(sandwich(root, inner));
}

SymMatrix spd_log(const SPDPoint& base, const SPDPoint& target) {
    if (target.dim() != base.dim()) throw std::invalid_argument("spd_log: dimension mismatch");
    const SymMatrix root = linalg::spectral_fn(base.sym(), SpectralFn::sqrt);
    const SymMatrix root_inv = linalg::spectral_fn(base.sym(), SpectralFn::inv_sqrt);
    const SymMatrix inner = linalg::spectral_fn(sandwich(root_inv, target.sym()), SpectralFn::log);
    return sandwich(root, inner);
}

double spd_dist(const SPDPoint& a, const SPDPoint& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("spd_dist: dimension mismatch");
    const SymMatrix root_inv = linalg::spectral_fn(a.sym(), SpectralFn::inv_sqrt);
    const SymMatrix inner = linalg::spectral_fn(sandwich(root_inv, b.sym()), SpectralFn::log);
    return inner.frobenius_norm();
}

Vec spd_vectorize(const SymMatrix& s) {
    const int d = s.dim();
    Vec out;
    out.reserve(static_cast<size_t>(d) * (d + 1) / 2);
    const double root2 = std::sqrt(2.0);
    for (int i = 0; i < d; ++i) {
        out.push_back(s(i, i));
        for (int j = i + 1; j < d; ++j) out.push_back(root2 * s(i, j));
    }
    return out;
}

int spd_dim_from_vec_len(int len) {
    const int d = static_cast<int>(std::floor((std::sqrt(8.0 * len + 1.0) - 1.0) / 2.0 + 0.5));
    if (d * (d + 1) / 2 != len) {
        std::ostringstream msg;
        msg << "spd_unvectorize: length " << len << " is not d(d+1)/2 for any d";
        throw std::invalid_argument(msg.str());
    }
    return d;
}

SymMatrix spd_unvectorize(const Vec& v) {
    const int d = spd_dim_from_vec_len(static_cast<int>(v.size()));
    SymMatrix s(d);
    const double inv_root2 = 1.0 / std::sqrt(2.0);
    size_t k = 0;
    for (int i = 0; i < d; ++i) {
        s.set(i, i, v[k++]);
        for (int j = i + 1; j < d; ++j) s.set(i, j, inv_root2 * v[k++]);
    }
    return s;
}

PoincarePoint mobius_add(const PoincarePoint& x, const PoincarePoint& y) {
    require_same_space(x, y, "mobius_add");
    const double c = x.curvature();
    const double xy = dot(x.coords(), y.coords());
    const double x2 = dot(x.coords(), x.coords());
    const double y2 = dot(y.coords(), y.coords());

    const double den = 1.0 + 2.0 * c * xy + c * c * x2 * y2;
    const double ax = (1.0 + 2.0 * c * xy + c * y2) / den;
    const double ay = (1.0 - c * x2) / den;

    Vec out(x.coords().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = ax * x.coords()[i] + ay * y.coords()[i];

    const double r2 = dot(out, out);
    if (c * r2 >= 1.0 - 1e-12) {
        // Rounding pushed the sum onto/past the boundary; pull it back inside.
        const double target = std::sqrt((1.0 - 1e-9) / c);
        const double scale = target / std::sqrt(r2);
        for (double& v : out) v *= scale;
        if (g_clamps.fetch_add(1) < 5)
            std::cerr << "[liftnet] warning: mobius_add result clamped inside the ball boundary\n";
    }
    return PoincarePoint(std::move(out), c);
}

double poincare_dist(const PoincarePoint& x, const PoincarePoint& y) {
    require_same_space(x, y, "poincare_dist");
    const double c = x.curvature();
    Vec neg_x(x.coords().size());
    for (size_t i = 0; i < neg_x.size(); ++i) neg_x[i] = -x.coords()[i];
    const PoincarePoint diff = mobius_add(PoincarePoint(std::move(neg_x), c), y);
    const double arg = std::sqrt(c) * norm2(diff.coords());
    return (2.0 / std::sqrt(c)) * std::atanh(std::min(arg, 1.0 - 1e-16));
}

PoincarePoint poincare_exp0(const Vec& v, double curvature) {
    ensure_finite(v, "poincare_exp0");
    if (curvature <= 0.0) throw std::invalid_argument("poincare_exp0: curvature must be > 0");
    const double n = norm2(v);
    const double rc = std::sqrt(curvature);
    // tanh(t)/t → 1 as t → 0: removable singularity.
    const double factor = (n < 1e-12) ? 1.0 : std::tanh(rc * n) / (rc * n);
    Vec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = factor * v[i];
    return PoincarePoint(std::move(out), curvature);
}

Vec poincare_log0(const PoincarePoint& y) {
    const double c = y.curvature();
    const double n = norm2(y.coords());
    if (c * n * n >= 1.0 - 1e-12) {
        std::ostringstream msg;
        msg << "poincare_log0: point within tolerance of the ball boundary (c·‖y‖² = " << c * n * n << ")";
        throw std::domain_error(msg.str());
    }
    const double rc = std::sqrt(c);
    const double factor = (n < 1e-12) ? 1.0 : std::atanh(rc * n) / (rc * n);
    Vec out(y.coords().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = factor * y.coords()[i];
    return out;
}

uint64_t boundary_clamp_count() { return g_clamps.load(); }

}  // namespace liftnet::manifold
