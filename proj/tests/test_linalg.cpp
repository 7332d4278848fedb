#include "liftnet/linalg.hpp"

#include <cmath>

#include "doctest.h"
#include "liftnet/rng.hpp"
#include "oracles.hpp"

using namespace liftnet;
using namespace liftnet::linalg;

namespace {

Matrix reconstruct(const EigResult& eig) {
    const int n = eig.q.rows();
    Matrix lambda(n, n);
    for (int i = 0; i < n; ++i) lambda(i, i) = eig.values[static_cast<size_t>(i)];
    return eig.q * lambda * eig.q.transpose();
}

}  // namespace

TEST_CASE("sym_eig identity and diagonal") {
    const auto eig_i = sym_eig(SymMatrix::identity(2));
    CHECK(eig_i.values[0] == doctest::Approx(1.0));
    CHECK(eig_i.values[1] == doctest::Approx(1.0));

    const auto eig_d = sym_eig(SymMatrix::diag({3.0, 1.0}));
    CHECK(eig_d.values[0] == doctest::Approx(3.0));
    CHECK(eig_d.values[1] == doctest::Approx(1.0));
    // Columns are the axes up to sign/permutation.
    CHECK(std::fabs(eig_d.q(0, 0)) == doctest::Approx(1.0));
    CHECK(std::fabs(eig_d.q(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig matches the hand characteristic polynomial") {
    // (2−λ)² − 1 = 0 → λ = 3, 1.
    SymMatrix s(2);
    s.set(0, 0, 2.0);
    s.set(1, 1, 2.0);
    s.set(0, 1, 1.0);
    const auto eig = sym_eig(s);
    CHECK(eig.values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sym_eig reconstruction and orthogonality on random matrices") {
    Rng rng(42);
    for (int d : {2, 3, 5, 8, 13, 20}) {
        for (int rep = 0; rep < 5; ++rep) {
            const SymMatrix s = oracles::random_symmetric(d, rng, 3.0);
            const auto eig = sym_eig(s);
            const double resid = (reconstruct(eig) - s.mat()).frobenius_norm();
            CHECK(resid <= 1e-10 * std::max(1.0, s.frobenius_norm()));
            const Matrix qtq = eig.q.transpose() * eig.q;
            CHECK((qtq - Matrix::identity(d)).frobenius_norm() <= 1e-10);
            for (size_t i = 1; i < eig.values.size(); ++i) CHECK(eig.values[i - 1] >= eig.values[i]);
        }
    }
}

TEST_CASE("sym_eig rejects non-finite input") {
    SymMatrix s(2);
    s.set(0, 0, std::nan(""));
    CHECK_THROWS_AS(sym_eig(s), std::invalid_argument);
}

TEST_CASE("spectral_fn basics") {
    const SymMatrix sqrt_i = spectral_fn(SymMatrix::identity(3), SpectralFn::sqrt);
    CHECK((sqrt_i.mat() - Matrix::identity(3)).frobenius_norm() == doctest::Approx(0.0).epsilon(1e-14));

    const SymMatrix log_d = spectral_fn(SymMatrix::diag({std::exp(1.0), 1.0}), SpectralFn::log);
    CHECK(log_d(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(log_d(1, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(log_d(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spectral exp∘log round trip") {
    SymMatrix s(2);
    s.set(0, 0, 2.0);
    s.set(1, 1, 2.0);
    s.set(0, 1, 1.0);
    const SymMatrix back = spectral_fn(spectral_fn(s, SpectralFn::log), SpectralFn::exp);
    CHECK((back.mat() - s.mat()).frobenius_norm() <= 1e-9 * s.frobenius_norm());

    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        const SymMatrix spd = oracles::random_spd(4, rng);
        const SymMatrix rt = spectral_fn(spectral_fn(spd, SpectralFn::log), SpectralFn::exp);
        CHECK((rt.mat() - spd.mat()).frobenius_norm() <= 1e-9 * std::max(1.0, spd.frobenius_norm()));
    }
}

TEST_CASE("spectral_fn domain error reports the smallest eigenvalue") {
    const SymMatrix s = SymMatrix::diag({2.0, -0.5});
    CHECK_THROWS_AS(spectral_fn(s, SpectralFn::sqrt), std::domain_error);
    try {
        spectral_fn(s, SpectralFn::log);
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("-0.5") != std::string::npos);
    }
}

TEST_CASE("matrix_exp of zero is exactly the identity") {
    const Matrix e = matrix_exp(Matrix(3, 3));
    CHECK(e == Matrix::identity(3));
}

TEST_CASE("matrix_exp diagonal case") {
    const Matrix e = matrix_exp(Matrix::diag({std::log(2.0), 0.0}));
    CHECK(e(0, 0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(e(1, 1) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("matrix_exp rotation generator vs independent series") {
    const double theta = M_PI / 2.0;
    Matrix a(2, 2);
    a(0, 1) = -theta;
    a(1, 0) = theta;
    const Matrix e = matrix_exp(a);
    CHECK(e(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(e(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(e(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e(1, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((e - oracles::expm_taylor(a)).frobenius_norm() <= 1e-12);
}

TEST_CASE("matrix_exp inverse identity exp(A)exp(−A) = I") {
    Rng rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix a(4, 4);
        for (double& v : a.data()) v = rng.uniform(-1.2, 1.2);  // ‖A‖_F ≤ ~5
        const Matrix prod = matrix_exp(a) * matrix_exp(a * -1.0);
        CHECK((prod - Matrix::identity(4)).frobenius_norm() <= 1e-8);
    }
}

TEST_CASE("matrix_exp is a homomorphism on commuting pairs") {
    Rng rng(13);
    for (int rep = 0; rep < 10; ++rep) {
        Vec da(3), db(3);
        for (double& v : da) v = rng.uniform(-1.0, 1.0);
        for (double& v : db) v = rng.uniform(-1.0, 1.0);
        const Matrix a = Matrix::diag(da), b = Matrix::diag(db);
        const Matrix lhs = matrix_exp(a + b);
        const Matrix rhs = matrix_exp(a) * matrix_exp(b);
        CHECK((lhs - rhs).frobenius_norm() <= 1e-9 * std::max(1.0, lhs.frobenius_norm()));
    }
}

TEST_CASE("det(matrix_exp) stays positive: exp lands in the general linear group") {
    Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const int d = 2 + rng.uniform_int(4);
        Matrix a(d, d);
        for (double& v : a.data()) v = rng.uniform(-2.0, 2.0);
        CHECK(oracles::det_gauss(matrix_exp(a)) > 0.0);
    }
}

TEST_CASE("matrix_exp agrees with the plain series for moderate norms") {
    Rng rng(19);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix a(3, 3);
        for (double& v : a.data()) v = rng.uniform(-1.5, 1.5);
        const Matrix fast = matrix_exp(a);
        const Matrix slow = oracles::expm_taylor(a, 80);
        CHECK((fast - slow).frobenius_norm() <= 1e-11 * std::max(1.0, slow.frobenius_norm()));
    }
}

TEST_CASE("matrix_exp rejects non-square and non-finite input") {
    CHECK_THROWS_AS(matrix_exp(Matrix(2, 3)), std::invalid_argument);
    Matrix bad(2, 2);
    bad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(matrix_exp(bad), std::invalid_argument);
}

TEST_CASE("matrix_exp_adjoint matches finite differences") {
    Rng rng(23);
    for (int rep = 0; rep < 8; ++rep) {
        const int d = 2 + rep % 3;
        Matrix a(d, d);
        for (double& v : a.data()) v = rng.uniform(-2.5, 2.5);
        Matrix g(d, d);
        for (double& v : g.data()) v = rng.uniform(-1.0, 1.0);

        const auto ws = matrix_exp_workspace(a);
        const Matrix grad = matrix_exp_adjoint(ws, g);

        // Scalar objective L(A) = Σ_ij G_ij exp(A)_ij.
        auto objective = [&]() {
            const Matrix e = matrix_exp(a);
            double s = 0.0;
            for (size_t i = 0; i < e.data().size(); ++i) s += g.data()[i] * e.data()[i];
            return s;
        };
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                const double fd = oracles::central_diff(objective, a(i, j));
                CHECK(oracles::rel_err(grad(i, j), fd) <= 1e-6);
            }
        }
    }
}

TEST_CASE("smallest_singular_value basics") {
    CHECK(smallest_singular_value(Matrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(smallest_singular_value(Matrix::diag({3.0, 0.0})) == doctest::Approx(0.0).epsilon(1e-12));
    Matrix ones(2, 2);
    for (double& v : ones.data()) v = 1.0;
    CHECK(smallest_singular_value(ones) <= 1e-12);
}

TEST_CASE("smallest_singular_value of rectangular maps") {
    // Tall full-column-rank matrix keeps λ* > 0.
    Matrix tall(3, 2);
    tall(0, 0) = 1.0;
    tall(1, 1) = 1.0;
    tall(2, 0) = 1.0;
    CHECK(smallest_singular_value(tall) > 0.5);
}
