#include <cmath>

#include "doctest.h"
#include "ncerg/error.hpp"
#include "ncerg/numerics.hpp"
#include "test_util.hpp"

using namespace ncerg;
using testutil::random_hermitian;
using testutil::random_matrix;

namespace {

double reconstruction_residual(const Matrix& m, const EigenDecomposition& eig) {
  const Matrix lambda = Matrix::diagonal(std::span<const double>(eig.values));
  return max_abs_diff(m, eig.vectors * lambda * eig.vectors.adjoint());
}

}  // namespace

TEST_CASE("tolerance policy ordering") {
  CHECK_NOTHROW(Tolerance{}.validate());
  CHECK_THROWS_AS((Tolerance{1e-6, 1e-8}.validate()), Error);
  CHECK_THROWS_AS((Tolerance{0.0, 1e-8}.validate()), Error);
}

TEST_CASE("eigendecomposition of diag(2,1)") {
  const auto eig = hermitian_eigendecomposition(Matrix::diagonal(std::vector<double>{2.0, 1.0}));
  CHECK(eig.values[0] == doctest::Approx(1.0));
  CHECK(eig.values[1] == doctest::Approx(2.0));
}

TEST_CASE("eigendecomposition of Pauli-X") {
  const auto eig = hermitian_eigendecomposition(testutil::pauli_x());
  CHECK(eig.values[0] == doctest::Approx(-1.0));
  CHECK(eig.values[1] == doctest::Approx(1.0));
  const double r = 1.0 / std::sqrt(2.0);
  // Phase convention: first significant entry real positive.
  CHECK(std::abs(eig.vectors(0, 0) - Complex(r)) < 1e-12);
  CHECK(std::abs(eig.vectors(1, 0) - Complex(-r)) < 1e-12);
  CHECK(std::abs(eig.vectors(0, 1) - Complex(r)) < 1e-12);
  CHECK(std::abs(eig.vectors(1, 1) - Complex(r)) < 1e-12);
}

TEST_CASE("random Hermitian reconstruction and orthonormality") {
  Rng rng(7);
  for (std::size_t n : {1u, 2u, 3u, 6u, 12u, 30u}) {
    const Matrix m = random_hermitian(n, rng);
    const auto eig = hermitian_eigendecomposition(m);
    CHECK(reconstruction_residual(m, eig) <= 1e-10 * std::max<double>(1.0, static_cast<double>(n) / 6.0));
    CHECK(max_abs_diff(eig.vectors.adjoint() * eig.vectors, Matrix::identity(n)) <= 1e-10);
    for (std::size_t k = 1; k < n; ++k) CHECK(eig.values[k - 1] <= eig.values[k]);
  }
}

TEST_CASE("seeded 6x6 Hermitian reconstruction within 1e-10") {
  Rng rng(kDefaultSeed);
  const Matrix m = random_hermitian(6, rng);
  CHECK(reconstruction_residual(m, hermitian_eigendecomposition(m)) <= 1e-10);
}

TEST_CASE("degenerate spectrum keeps an orthonormal eigenbasis") {
  Rng rng(11);
  const Matrix u = testutil::random_unitary(5, rng);
  const Matrix d = Matrix::diagonal(std::vector<double>{1.0, 1.0, 1.0, 3.0, 3.0});
  const Matrix m = hermitian_part(u * d * u.adjoint());
  const auto eig = hermitian_eigendecomposition(m);
  CHECK(max_abs_diff(eig.vectors.adjoint() * eig.vectors, Matrix::identity(5)) <= 1e-12);
  CHECK(reconstruction_residual(m, eig) <= 1e-10);
}

TEST_CASE("eigendecomposition is bitwise deterministic") {
  Rng rng(3);
  const Matrix m = random_hermitian(7, rng);
  const auto a = hermitian_eigendecomposition(m);
  const auto b = hermitian_eigendecomposition(m);
  CHECK(a.values == b.values);
  for (std::size_t k = 0; k < a.vectors.entries().size(); ++k) CHECK(a.vectors.entries()[k] == b.vectors.entries()[k]);
}

TEST_CASE("eigendecomposition errors") {
  CHECK_THROWS_AS(hermitian_eigendecomposition(Matrix(2, 3)), Error);
  try {
    hermitian_eigendecomposition(Matrix{{0.0, 1.0}, {0.0, 0.0}});
    FAIL("expected NotHermitian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
  }
  try {
    hermitian_eigendecomposition(Matrix(2, 3));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSquare);
  }
}

TEST_CASE("support projection examples") {
  const Matrix p = support_projection_of_psd(Matrix::diagonal(std::vector<double>{0.5, 0.5, 0.0}));
  CHECK(max_abs_diff(p, Matrix::diagonal(std::vector<double>{1.0, 1.0, 0.0})) <= 1e-12);
  CHECK(max_abs(support_projection_of_psd(Matrix::zero(3))) == 0.0);

  Rng rng(5);
  const Vector v = testutil::random_unit_vector(4, rng);
  const Matrix rho = Matrix::outer(v, v);
  CHECK(max_abs_diff(support_projection_of_psd(rho), rho) <= 1e-10);

  try {
    support_projection_of_psd(Matrix::diagonal(std::vector<double>{1.0, -0.5}));
    FAIL("expected NotPSD");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPSD);
  }
}

TEST_CASE("support projection is idempotent on projections") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const Matrix u = testutil::random_unitary(n, rng);
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i] = (rng.uniform() < 0.5) ? 1.0 : 0.0;
    const Matrix p = hermitian_part(u * Matrix::diagonal(std::span<const double>(d)) * u.adjoint());
    const Matrix s = support_projection_of_psd(p);
    CHECK(max_abs_diff(s, p) <= 1e-10);
    CHECK(max_abs_diff(s * s, s) <= 1e-10);
  }
}

TEST_CASE("antilinear polar decomposition examples") {
  const auto id = antilinear_polar_decomposition(Matrix::identity(2));
  CHECK(max_abs_diff(id.j, Matrix::identity(2)) <= 1e-14);
  CHECK(max_abs_diff(id.delta_half, Matrix::identity(2)) <= 1e-14);

  // Real diagonal K: S*S = K^T conj(K) = diag(4, 1/4) computed by hand.
  const auto d = antilinear_polar_decomposition(Matrix::diagonal(std::vector<double>{2.0, 0.5}));
  CHECK(max_abs_diff(d.delta_half, Matrix::diagonal(std::vector<double>{2.0, 0.5})) <= 1e-12);
  CHECK(max_abs_diff(d.j, Matrix::identity(2)) <= 1e-12);

  try {
    antilinear_polar_decomposition(Matrix::diagonal(std::vector<double>{1.0, 0.0}));
    FAIL("expected Singular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Singular);
  }
}

TEST_CASE("seeded invertible 3x3 polar residual") {
  Rng rng(kDefaultSeed);
  const Matrix k = random_matrix(3, 3, rng) + Matrix::identity(3);
  const auto polar = antilinear_polar_decomposition(k);
  CHECK(max_abs_diff(k, polar.j * polar.delta_half.conj()) <= 1e-9);
  CHECK(max_abs_diff(polar.j.adjoint() * polar.j, Matrix::identity(3)) <= 1e-9);
  // Δ = S*S: for x ↦ K conj(x), S*S = conj(K^* K).
  CHECK(max_abs_diff(polar.delta_half * polar.delta_half, (k.adjoint() * k).conj()) <= 1e-9);
}

TEST_CASE("polar parts reproduce the input on 1000 seeded matrices") {
  Rng rng(17);
  double worst = 0.0;
  double worst_involution = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
    const Matrix k = random_matrix(n, n, rng) + Matrix::identity(n) * 0.5;
    const auto polar = antilinear_polar_decomposition(k);
    worst = std::max(worst, max_abs_diff(k, polar.j * polar.delta_half.conj()));
    CHECK(max_abs_diff(polar.j.adjoint() * polar.j, Matrix::identity(n)) <= 1e-9);

    // An involutive antilinear map S = M conj(M)^{-1} conj(.) has an
    // involutive antiunitary part: J conj(J) = I.
    const Matrix m = random_matrix(n, n, rng) + Matrix::identity(n) * 2.0;
    const Matrix kinv = m * testutil::inverse(m.conj());
    REQUIRE(max_abs_diff(kinv * kinv.conj(), Matrix::identity(n)) <= 1e-9);
    const auto pinv = antilinear_polar_decomposition(kinv);
    worst = std::max(worst, max_abs_diff(kinv, pinv.j * pinv.delta_half.conj()));
    // Rounding in J grows with the conditioning of K.
    const double cond = frobenius_norm(kinv) * frobenius_norm(testutil::inverse(kinv));
    worst_involution = std::max(worst_involution, max_abs_diff(pinv.j * pinv.j.conj(), Matrix::identity(n)) / cond);
  }
  CHECK(worst <= 1e-9);
  CHECK(worst_involution <= 100 * Tolerance{}.atol);
}
