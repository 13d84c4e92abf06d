#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ncerg/matrix.hpp"

namespace ncerg {

/// Tolerance policy.
///
/// `atol` bounds arithmetic residuals; `rank_tol` is the threshold for every
/// structural decision (rank, support, clustering, span membership of new
/// directions). Keeping the two apart stops rounding noise from changing a
/// dimension count.
struct Tolerance {
  double atol = 1e-10;
  double rank_tol = 1e-8;

  /// Throws InvalidArgument unless 0 < atol < rank_tol < 1.
  void validate() const;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // orthonormal columns, same order as values
};

/// Cyclic complex Jacobi.
///
/// Sweeps run over (p, q) in row-major order until the off-diagonal Frobenius
/// mass falls below atol * max(1, |M|_F), followed by one polishing sweep.
/// Eigenvectors inside a cluster (gap < rank_tol) are re-orthonormalized in
/// index order, and each column is rotated so that its first entry of
/// magnitude > rank_tol is real positive. Identical input gives identical
/// output bits.
EigenDecomposition hermitian_eigendecomposition(const Matrix& m, const Tolerance& tol = {});

/// Orthogonal projection onto the eigenvectors of `m` with eigenvalue > rank_tol.
/// Throws NotPSD if an eigenvalue lies below -rank_tol.
Matrix support_projection_of_psd(const Matrix& m, const Tolerance& tol = {});

struct AntilinearPolar {
  Matrix j;           // antiunitary part: x -> j * conj(x)
  Matrix delta_half;  // positive part: Delta^(1/2), Delta = S* S
};

/// Polar decomposition S = J o Delta^(1/2) of the antilinear map S(x) = K conj(x).
///
/// With |K| = (K* K)^(1/2) one has Delta = conj(K* K), Delta^(1/2) = conj(|K|)
/// and J = K |K|^(-1), so that K = J conj(Delta^(1/2)). Throws Singular when the
/// smallest singular value of K is below rank_tol.
AntilinearPolar antilinear_polar_decomposition(const Matrix& k, const Tolerance& tol = {});

/// f(M) for Hermitian M through its eigendecomposition.
template <class F>
Matrix spectral_apply(const EigenDecomposition& eig, F&& f) {
  const std::size_t n = eig.values.size();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = eig.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eig.vectors(j, k));
    }
  }
  return out;
}

/// Half-open index ranges of ascending `values` whose consecutive gaps are <= gap.
std::vector<std::pair<std::size_t, std::size_t>> cluster_sorted(std::span<const double> values, double gap);

/// Projection onto the span of the given eigenvector columns [begin, end).
Matrix eigenspace_projection(const Matrix& vectors, std::size_t begin, std::size_t end);

struct SpectralComponent {
  Complex value;
  Matrix projection;
};

/// Spectral projections of a unitary (normal) matrix, by joint diagonalization
/// of its Hermitian and anti-Hermitian parts.
std::vector<SpectralComponent> unitary_spectral_projections(const Matrix& w, const Tolerance& tol = {});

/// Largest singular value.
double operator_norm(const Matrix& m, const Tolerance& tol = {});

/// Positive square root of a PSD matrix (negative rounding clipped at 0).
Matrix psd_sqrt(const Matrix& m, const Tolerance& tol = {});

bool is_hermitian(const Matrix& m, double atol);
bool is_projection(const Matrix& m, double atol);
bool is_unitary(const Matrix& m, double atol);

/// Orthonormal basis of range(P), n x rank, columns from the eigensolver.
Matrix range_isometry(const Matrix& projection, const Tolerance& tol = {});

/// Orthonormal basis (as columns of a matrix) of the null space of a Hermitian
/// PSD Gram matrix: eigenvectors with eigenvalue <= rank_tol * max(1, lambda_max).
std::vector<Vector> gram_null_space(const Matrix& gram, const Tolerance& tol = {});

/// Incrementally built orthonormal basis of a subspace of n x n matrices
/// under the trace inner product.
class MatrixSpan {
 public:
  explicit MatrixSpan(std::size_t n) : n_(n) {}
  /// Trusts the caller that the matrices are orthonormal.
  static MatrixSpan from_orthonormal(std::size_t n, std::vector<Matrix> basis);

  std::size_t ambient_dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return basis_.size(); }
  const std::vector<Matrix>& basis() const noexcept { return basis_; }

  /// Two-pass Gram-Schmidt; keeps the new direction when its residual exceeds
  /// rank_tol relative to |x|_F. Returns whether the span grew.
  bool try_add(const Matrix& x, const Tolerance& tol);

  Vector coordinates(const Matrix& x) const;
  Matrix combine(std::span<const Complex> coords) const;
  Matrix project(const Matrix& x) const { return combine(coordinates(x)); }
  double residual(const Matrix& x) const { return max_abs_diff(x, project(x)); }

 private:
  std::size_t n_;
  std::vector<Matrix> basis_;
};

}  // namespace ncerg
