#pragma once

#include <cstdint>

#include "liftnet/linalg.hpp"
#include "liftnet/matrix.hpp"

namespace liftnet::manifold {

/// Point of the SPD manifold: symmetric with smallest eigenvalue > 0
/// (checked on construction, tolerance 1e-12).
class SPDPoint {
public:
    explicit SPDPoint(const SymMatrix& m);
    int dim() const { return m_.dim(); }
    const SymMatrix& sym() const { return m_; }
    const Matrix& mat() const { return m_.mat(); }

private:
    SymMatrix m_;
};

/// Point of the curvature-c Poincaré ball {x : c‖x‖² < 1}, c > 0.
class PoincarePoint {
public:
    PoincarePoint(Vec coords, double curvature);
    int dim() const { return static_cast<int>(coords_.size()); }
    double curvature() const { return c_; }
    const Vec& coords() const { return coords_; }

private:
    Vec coords_;
    double c_;
};

// --- SPD geometry: Exp_A(V) = √A exp(√A⁻¹ V √A⁻¹) √A, Log its inverse. ---

SPDPoint spd_exp(const SPDPoint& base, const SymMatrix& v);
SymMatrix spd_log(const SPDPoint& base, const SPDPoint& target);

/// Affine-invariant geodesic distance ‖log(√A⁻¹ B √A⁻¹)‖_F.
double spd_dist(const SPDPoint& a, const SPDPoint& b);

/// Linear isometry SymMatrix → R^{d(d+1)/2}: upper triangle scanned row by
/// row, diagonal entry first in its row, off-diagonals scaled by √2 so the
/// Euclidean norm of the image equals the Frobenius norm of the input.
Vec spd_vectorize(const SymMatrix& s);
SymMatrix spd_unvectorize(const Vec& v);
/// Dimension d with d(d+1)/2 = len, or throws if len is not triangular.
int spd_dim_from_vec_len(int len);

// --- Poincaré ball geometry. ---

/// Gyro-vector Möbius addition x ⊕_c y. Results that land on or outside the
/// boundary through rounding are rescaled just inside it (warning counted).
PoincarePoint mobius_add(const PoincarePoint& x, const PoincarePoint& y);

/// d_c(x, y) = (2/√c)·artanh(√c‖(−x) ⊕_c y‖).
double poincare_dist(const PoincarePoint& x, const PoincarePoint& y);

/// Exp₀(v) = tanh(√c‖v‖)·v/(√c‖v‖), with the series limit at v = 0.
PoincarePoint poincare_exp0(const Vec& v, double curvature);

/// Log₀(y) = artanh(√c‖y‖)·y/(√c‖y‖); domain error within 1e-12 of the boundary.
Vec poincare_log0(const PoincarePoint& y);

/// Number of boundary clamps performed by mobius_add since process start.
uint64_t boundary_clamp_count();

}  // namespace liftnet::manifold
