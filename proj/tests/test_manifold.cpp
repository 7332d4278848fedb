#include "liftnet/manifold.hpp"

#include <cmath>

#include "doctest.h"
#include "liftnet/rng.hpp"
#include "oracles.hpp"

using namespace liftnet;
using namespace liftnet::manifold;

namespace {

Vec random_ball_point(int n, double c, Rng& rng, double max_radius_frac = 0.9) {
    Vec v(static_cast<size_t>(n));
    for (double& x : v) x = rng.gaussian();
    const double r = norm2(v);
    const double target = max_radius_frac * std::sqrt(rng.uniform()) / std::sqrt(c);
    for (double& x : v) x *= target / r;
    return v;
}

SymMatrix random_tangent(int d, Rng& rng, double scale = 0.5) {
    return oracles::random_symmetric(d, rng, scale);
}

}  // namespace

TEST_CASE("SPDPoint rejects indefinite matrices") {
    CHECK_THROWS_AS(SPDPoint(SymMatrix::diag({1.0, -1.0})), std::domain_error);
    CHECK_THROWS_AS(SPDPoint(SymMatrix::diag({1.0, 0.0})), std::domain_error);
    CHECK_NOTHROW(SPDPoint(SymMatrix::diag({1.0, 0.5})));
}

TEST_CASE("spd_exp at identity") {
    const SPDPoint eye(SymMatrix::identity(2));
    const SPDPoint same = spd_exp(eye, SymMatrix(2));
    CHECK((same.mat() - Matrix::identity(2)).frobenius_norm() <= 1e-14);

    const SPDPoint e = spd_exp(eye, SymMatrix::diag({1.0, 0.0}));
    CHECK(e.mat()(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(e.mat()(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spd_exp hand-derived diagonal case") {
    // base diag(4,1), V = diag(4 ln 3, 0): √A = diag(2,1), inner = diag(ln3, 0),
    // exp → diag(3,1), sandwich → diag(12,1).
    const SPDPoint base(SymMatrix::diag({4.0, 1.0}));
    const SPDPoint out = spd_exp(base, SymMatrix::diag({4.0 * std::log(3.0), 0.0}));
    CHECK(out.mat()(0, 0) == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(out.mat()(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(out.mat()(0, 1)) <= 1e-12);

    const SymMatrix back = spd_log(base, out);
    CHECK(back(0, 0) == doctest::Approx(4.0 * std::log(3.0)).epsilon(1e-12));
    CHECK(std::fabs(back(1, 1)) <= 1e-12);
}

TEST_CASE("spd_log basics") {
    Rng rng(5);
    const SPDPoint a(oracles::random_spd(3, rng, 0.5, 4.0));
    CHECK(spd_log(a, a).frobenius_norm() <= 1e-10);

    const SPDPoint eye(SymMatrix::identity(3));
    const SPDPoint b(oracles::random_spd(3, rng, 0.5, 4.0));
    const SymMatrix via_log0 = spd_log(eye, b);
    const SymMatrix spectral = linalg::spectral_fn(b.sym(), linalg::SpectralFn::log);
    CHECK((via_log0.mat() - spectral.mat()).frobenius_norm() <= 1e-10);
}

TEST_CASE("spd exp/log round trips at 1e-8 for d ≤ 6") {
    Rng rng(99);
    for (int d : {2, 3, 4, 6}) {
        for (int rep = 0; rep < 50; ++rep) {
            const SPDPoint base(oracles::random_spd(d, rng, 0.3, 5.0));
            const SymMatrix v = random_tangent(d, rng, 0.8);
            const SPDPoint fwd = spd_exp(base, v);
            const SymMatrix back = spd_log(base, fwd);
            CHECK((back.mat() - v.mat()).frobenius_norm() <= 1e-8 * std::max(1.0, v.frobenius_norm()));

            const SPDPoint target(oracles::random_spd(d, rng, 0.3, 5.0));
            const SPDPoint again = spd_exp(base, spd_log(base, target));
            CHECK((again.mat() - target.mat()).frobenius_norm() <=
                  1e-8 * std::max(1.0, target.mat().frobenius_norm()));
        }
    }
}

TEST_CASE("spd_dist examples") {
    Rng rng(31);
    const SPDPoint a(oracles::random_spd(3, rng));
    CHECK(spd_dist(a, a) <= 1e-9);

    const SPDPoint eye(SymMatrix::identity(2));
    const SPDPoint e(SymMatrix::diag({std::exp(1.0), 1.0}));
    CHECK(spd_dist(eye, e) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spd_dist is symmetric on random pairs") {
    Rng rng(37);
    for (int rep = 0; rep < 100; ++rep) {
        const SPDPoint a(oracles::random_spd(3, rng, 0.2, 6.0));
        const SPDPoint b(oracles::random_spd(3, rng, 0.2, 6.0));
        const double ab = spd_dist(a, b), ba = spd_dist(b, a);
        CHECK(std::fabs(ab - ba) <= 1e-9 * std::max(1.0, ab));
    }
}

TEST_CASE("geodesic speed: d(A, Exp_A(tV)) = t·‖√A⁻¹V√A⁻¹‖_F") {
    Rng rng(41);
    for (int rep = 0; rep < 20; ++rep) {
        const SPDPoint base(oracles::random_spd(3, rng, 0.4, 4.0));
        const SymMatrix v = random_tangent(3, rng, 0.4);
        const SymMatrix root_inv = linalg::spectral_fn(base.sym(), linalg::SpectralFn::inv_sqrt);
        const double speed = SymMatrix(root_inv.mat() * v.mat() * root_inv.mat()).frobenius_norm();
        for (double t : {0.0, 0.25, 0.7, 1.3, 2.0}) {
            const SPDPoint along = spd_exp(base, v * t);
            CHECK(std::fabs(spd_dist(base, along) - t * speed) <= 1e-7 * std::max(1.0, t * speed));
        }
    }
}

TEST_CASE("spd triangle inequality sampled") {
    Rng rng(43);
    for (int rep = 0; rep < 1000; ++rep) {
        const SPDPoint a(oracles::random_spd(2, rng, 0.3, 5.0));
        const SPDPoint b(oracles::random_spd(2, rng, 0.3, 5.0));
        const SPDPoint c(oracles::random_spd(2, rng, 0.3, 5.0));
        CHECK(spd_dist(a, c) <= spd_dist(a, b) + spd_dist(b, c) + 1e-9);
    }
}

TEST_CASE("spd_vectorize ordering, isometry, round trip") {
    CHECK(spd_vectorize(SymMatrix(2)) == Vec{0.0, 0.0, 0.0});
    CHECK(spd_vectorize(SymMatrix::identity(2)) == Vec{1.0, 0.0, 1.0});

    SymMatrix s(2);
    s.set(0, 0, 1.0);
    s.set(0, 1, 2.0);
    s.set(1, 1, 3.0);
    const Vec v = spd_vectorize(s);
    CHECK(v[0] == doctest::Approx(1.0));
    CHECK(v[1] == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(v[2] == doctest::Approx(3.0));
    CHECK(dot(v, v) == doctest::Approx(18.0).epsilon(1e-14));
    CHECK(dot(v, v) == doctest::Approx(s.frobenius_norm() * s.frobenius_norm()).epsilon(1e-14));

    Rng rng(47);
    for (int rep = 0; rep < 20; ++rep) {
        const SymMatrix m = oracles::random_symmetric(4, rng, 2.0);
        const SymMatrix back = spd_unvectorize(spd_vectorize(m));
        CHECK((back.mat() - m.mat()).frobenius_norm() <= 1e-15 * std::max(1.0, m.frobenius_norm()));
        CHECK(norm2(spd_vectorize(m)) == doctest::Approx(m.frobenius_norm()).epsilon(1e-13));
    }
    CHECK_THROWS_AS(spd_unvectorize(Vec{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("mobius_add identity and inverse") {
    Rng rng(53);
    const double c = 1.0;
    for (int rep = 0; rep < 20; ++rep) {
        const PoincarePoint y(random_ball_point(3, c, rng), c);
        const PoincarePoint zero(Vec(3, 0.0), c);
        const PoincarePoint sum = mobius_add(zero, y);
        CHECK(norm2(sum.coords() - y.coords()) <= 1e-14);

        Vec neg = y.coords();
        for (double& v : neg) v = -v;
        const PoincarePoint cancel = mobius_add(PoincarePoint(neg, c), y);
        CHECK(norm2(cancel.coords()) <= 1e-14);
    }
}

TEST_CASE("mobius_add collinear case matches scalar Möbius addition") {
    const double c = 1.0;
    const PoincarePoint x(Vec{0.3, 0.0}, c);
    const PoincarePoint y(Vec{0.4, 0.0}, c);
    const PoincarePoint sum = mobius_add(x, y);
    CHECK(sum.coords()[0] == doctest::Approx((0.3 + 0.4) / (1.0 + 0.12)).epsilon(1e-14));
    CHECK(std::fabs(sum.coords()[1]) <= 1e-15);
}

TEST_CASE("mobius_add clamps boundary overflow from rounding") {
    const double c = 1.0;
    const double edge = 1.0 - 1e-13;
    const PoincarePoint x(Vec{edge, 0.0}, c);
    const uint64_t before = boundary_clamp_count();
    const PoincarePoint sum = mobius_add(x, x);
    CHECK(boundary_clamp_count() > before);
    CHECK(c * dot(sum.coords(), sum.coords()) < 1.0);
}

TEST_CASE("poincare_dist examples and symmetry") {
    const double c = 1.0;
    const PoincarePoint zero(Vec{0.0, 0.0}, c);
    const PoincarePoint half(Vec{0.5, 0.0}, c);
    CHECK(poincare_dist(half, half) <= 1e-12);
    CHECK(poincare_dist(zero, half) == doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-12));

    Rng rng(59);
    for (int rep = 0; rep < 100; ++rep) {
        const PoincarePoint x(random_ball_point(2, c, rng), c);
        const PoincarePoint y(random_ball_point(2, c, rng), c);
        const double xy = poincare_dist(x, y);
        CHECK(std::fabs(xy - poincare_dist(y, x)) <= 1e-9 * std::max(1.0, xy));
    }
}

TEST_CASE("poincare_dist rejects mismatched spaces") {
    const PoincarePoint a(Vec{0.1, 0.1}, 1.0);
    const PoincarePoint b(Vec{0.1, 0.1}, 0.5);
    CHECK_THROWS_AS(poincare_dist(a, b), std::invalid_argument);
    const PoincarePoint c3(Vec{0.1, 0.1, 0.1}, 1.0);
    CHECK_THROWS_AS(poincare_dist(a, c3), std::invalid_argument);
}

TEST_CASE("poincare triangle inequality sampled") {
    Rng rng(61);
    const double c = 1.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const PoincarePoint x(random_ball_point(2, c, rng), c);
        const PoincarePoint y(random_ball_point(2, c, rng), c);
        const PoincarePoint z(random_ball_point(2, c, rng), c);
        CHECK(poincare_dist(x, z) <= poincare_dist(x, y) + poincare_dist(y, z) + 1e-9);
    }
}

TEST_CASE("poincare_exp0 basics") {
    const PoincarePoint at_zero = poincare_exp0(Vec{0.0, 0.0}, 1.0);
    CHECK(norm2(at_zero.coords()) == 0.0);

    const PoincarePoint p = poincare_exp0(Vec{std::atanh(0.5), 0.0}, 1.0);
    CHECK(p.coords()[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p.coords()[1] == doctest::Approx(0.0));
}

TEST_CASE("poincare exp0/log0 round trip at 1e-10 for ‖v‖ ≤ 5") {
    // √c‖v‖ ≤ 5 is the c-rescaled version of the c = 1 contract; past that,
    // tanh saturates below double precision and no inverse can recover v.
    Rng rng(67);
    for (double c : {1.0, 0.1, 4.0}) {
        for (int rep = 0; rep < 100; ++rep) {
            Vec v(3);
            for (double& x : v) x = rng.gaussian();
            const double target = rng.uniform(0.0, 5.0 / std::sqrt(c));
            const double n = norm2(v);
            for (double& x : v) x *= target / std::max(n, 1e-300);
            const Vec back = poincare_log0(poincare_exp0(v, c));
            CHECK(norm2(back - v) <= 1e-10 * std::max(1.0, norm2(v)));
        }
    }
}

TEST_CASE("log0 rejects points at the boundary tolerance") {
    const double c = 1.0;
    Vec edge{1.0 - 1e-14, 0.0};
    CHECK_THROWS_AS(poincare_log0(PoincarePoint(edge, c)), std::domain_error);
}

TEST_CASE("base-point distance equals twice the tangent norm at c = 1") {
    Rng rng(71);
    const double c = 1.0;
    const PoincarePoint zero(Vec{0.0, 0.0, 0.0}, c);
    for (int rep = 0; rep < 50; ++rep) {
        Vec v(3);
        for (double& x : v) x = 0.6 * rng.uniform(-1.0, 1.0);
        const double d = poincare_dist(zero, poincare_exp0(v, c));
        CHECK(std::fabs(d - 2.0 * norm2(v)) <= 1e-9 * std::max(1.0, norm2(v)));
    }
}
