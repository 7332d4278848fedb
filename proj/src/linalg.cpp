#include "liftnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace liftnet::linalg {

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr int kMaxSeriesTerms = 40;

double offdiag_norm(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

EigResult sym_eig(const SymMatrix& s) {
    ensure_finite(s.mat(), "sym_eig");
    const int n = s.dim();
    Matrix a = s.mat();
    Matrix q = Matrix::identity(n);

    if (n == 1) return {q, {a(0, 0)}};

    const double scale = std::max(1.0, a.frobenius_norm());
    const double stop = 1e-15 * scale;

    int sweep = 0;
    for (; sweep < kMaxJacobiSweeps; ++sweep) {
        if (offdiag_norm(a) <= stop) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apr = a(p, r);
                if (std::fabs(apr) <= 1e-300) continue;
                const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;

                const double app = a(p, p), arr = a(r, r);
                a(p, p) = app - t * apr;
                a(r, r) = arr + t * apr;
                a(p, r) = 0.0;
                a(r, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == r) continue;
                    const double aip = a(i, p), air = a(i, r);
                    a(i, p) = c * aip - sn * air;
                    a(p, i) = a(i, p);
                    a(i, r) = sn * aip + c * air;
                    a(r, i) = a(i, r);
                }
                for (int i = 0; i < n; ++i) {
                    const double qip = q(i, p), qir = q(i, r);
                    q(i, p) = c * qip - sn * qir;
                    q(i, r) = sn * qip + c * qir;
                }
            }
        }
    }
    if (sweep == kMaxJacobiSweeps) {
        std::ostringstream msg;
        msg << "sym_eig: Jacobi did not converge, off-diagonal residual " << offdiag_norm(a);
        throw std::runtime_error(msg.str());
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) > a(j, j); });

    EigResult out;
    out.values.resize(n);
    out.q = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (int i = 0; i < n; ++i) out.q(i, k) = q(i, order[k]);
    }
    return out;
}

SymMatrix spectral_fn(const SymMatrix& s, SpectralFn fn) {
    const EigResult eig = sym_eig(s);
    const int n = s.dim();

    if (fn != SpectralFn::exp) {
        const double lmin = eig.values.back();
        if (lmin <= 0.0) {
            std::ostringstream msg;
            msg << "spectral_fn: non-positive eigenvalue " << lmin << " outside the domain of the requested function";
            throw std::domain_error(msg.str());
        }
    }

    Vec f(n);
    for (int i = 0; i < n; ++i) {
        const double l = eig.values[i];
        switch (fn) {
            case SpectralFn::sqrt: f[i] = std::sqrt(l); break;
            case SpectralFn::log: f[i] = std::log(l); break;
            case SpectralFn::exp: f[i] = std::exp(l); break;
            case SpectralFn::inv_sqrt: f[i] = 1.0 / std::sqrt(l); break;
        }
    }

    Matrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = 0.0;
            for (int k = 0; k < n; ++k) v += eig.q(i, k) * f[k] * eig.q(j, k);
            out(i, j) = v;
            out(j, i) = v;
        }
    return SymMatrix(out);
}

ExpmWorkspace matrix_exp_workspace(const Matrix& a) {
    if (!a.square()) throw std::invalid_argument("matrix_exp: matrix not square");
    ensure_finite(a, "matrix_exp");

    ExpmWorkspace ws;
    const int n = a.rows();
    const double norm = a.frobenius_norm();
    int s = 0;
    while (norm / std::pow(2.0, s) >= 0.5) ++s;
    ws.squarings = s;

    Matrix m = a * (1.0 / std::pow(2.0, s));

    // Truncated Taylor of the scaled matrix; powers are kept for the adjoint.
    ws.powers.push_back(Matrix::identity(n));
    ws.coeffs.push_back(1.0);
    Matrix sum = Matrix::identity(n);
    double coeff = 1.0;
    for (int k = 1; k <= kMaxSeriesTerms; ++k) {
        coeff /= k;
        Matrix pk = ws.powers.back() * m;
        const double term_norm = pk.frobenius_norm() * coeff;
        sum += pk * coeff;
        ws.powers.push_back(std::move(pk));
        ws.coeffs.push_back(coeff);
        if (term_norm <= 1e-18 * std::max(1.0, sum.frobenius_norm())) break;
    }

    Matrix x = sum;
    for (int i = 0; i < s; ++i) {
        ws.presquare.push_back(x);
        x = x * x;
    }
    ws.value = std::move(x);
    return ws;
}

Matrix matrix_exp(const Matrix& a) { return matrix_exp_workspace(a).value; }

Matrix matrix_exp_adjoint(const ExpmWorkspace& ws, const Matrix& gbar) {
    Matrix g = gbar;

    // Squaring steps in reverse: X ← X² pulls back as Ḡ ← XᵀḠ + ḠXᵀ.
    for (int i = ws.squarings - 1; i >= 0; --i) {
        const Matrix xt = ws.presquare[static_cast<size_t>(i)].transpose();
        g = xt * g + g * xt;
    }

    // Series: T = Σ_k c_k M^k, so Ḡ_M = Σ_{a+b+1≤K} c_{a+b+1} (Mᵀ)^a Ḡ (Mᵀ)^b.
    const int terms = static_cast<int>(ws.powers.size());  // K + 1
    const int n = g.rows();
    const Matrix mt = ws.powers[1].transpose();
    Matrix acc(n, n);
    for (int ai = 0; ai + 1 < terms; ++ai) {
        Matrix left = ws.powers[static_cast<size_t>(ai)].transpose() * g;
        for (int bi = 0; ai + bi + 1 < terms; ++bi) {
            acc += left * ws.coeffs[static_cast<size_t>(ai + bi + 1)];
            if (ai + bi + 2 < terms) left = left * mt;
        }
    }
    return acc * (1.0 / std::pow(2.0, ws.squarings));
}

double smallest_singular_value(const Matrix& a) {
    ensure_finite(a, "smallest_singular_value");
    // Work with the Gram matrix of the narrower side.
    const Matrix& tall = a;
    Matrix gram = (tall.rows() >= tall.cols()) ? tall.transpose() * tall : tall * tall.transpose();
    const EigResult eig = sym_eig(SymMatrix(gram));
    const double lmin = eig.values.back();
    return std::sqrt(std::max(0.0, lmin));
}

double largest_singular_value(const Matrix& a) {
    ensure_finite(a, "largest_singular_value");
    Matrix gram = (a.rows() >= a.cols()) ? a.transpose() * a : a * a.transpose();
    const EigResult eig = sym_eig(SymMatrix(gram));
    return std::sqrt(std::max(0.0, eig.values.front()));
}

}  // namespace liftnet::linalg
