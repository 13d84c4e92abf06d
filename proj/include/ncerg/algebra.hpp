#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ncerg/matrix.hpp"
#include "ncerg/numerics.hpp"
#include "ncerg/rng.hpp"

namespace ncerg {

/// A unital *-subalgebra of M_n, stored as an orthonormal basis of its span
/// under the trace inner product. A generating set is kept alongside when the
/// algebra was built from one; commutant and center computations use it.
class OperatorAlgebra {
 public:
  /// Wraps a span that the caller knows to be a unital *-algebra.
  explicit OperatorAlgebra(MatrixSpan span, std::vector<Matrix> generators = {});

  std::size_t ambient_dim() const noexcept { return span_.ambient_dim(); }
  std::size_t dim() const noexcept { return span_.size(); }
  const std::vector<Matrix>& basis() const noexcept { return span_.basis(); }
  /// Generating set (the basis when none was recorded).
  const std::vector<Matrix>& generators() const noexcept {
    return generators_.empty() ? span_.basis() : generators_;
  }
  const MatrixSpan& span() const noexcept { return span_; }

  Vector coordinates(const Matrix& x) const { return span_.coordinates(x); }
  Matrix combine(std::span<const Complex> coords) const { return span_.combine(coords); }
  /// Orthogonal (trace-preserving) projection of x onto the span.
  Matrix project(const Matrix& x) const { return span_.project(x); }

  /// Checks unit, *-closure and multiplicative closure; throws Internal on failure.
  void validate(const Tolerance& tol) const;

 private:
  MatrixSpan span_;
  std::vector<Matrix> generators_;
};

struct BlockSpec {
  std::size_t dim = 1;
  std::size_t multiplicity = 1;
};

/// Smallest unital *-algebra containing the generators.
OperatorAlgebra generate_algebra(std::span<const Matrix> generators, std::size_t ambient_dim,
                                 const Tolerance& tol = {});

/// (+)_i M_{dim_i} (x) I_{mult_i}, blocks laid out consecutively.
OperatorAlgebra block_algebra(std::span<const BlockSpec> blocks);
OperatorAlgebra full_matrix_algebra(std::size_t n);
OperatorAlgebra diagonal_algebra(std::size_t n);

/// {X : XB = BX for every B in ops and every B*}, a unital *-algebra.
OperatorAlgebra commutant_of(std::span<const Matrix> ops, std::size_t ambient_dim, const Tolerance& tol = {});
OperatorAlgebra commutant(const OperatorAlgebra& a, const Tolerance& tol = {});

/// A ∩ A', solved in the coordinates of A.
OperatorAlgebra center(const OperatorAlgebra& a, const Tolerance& tol = {});

/// Residual-based membership: |X - P_A X|_max <= atol (1 + |X|_max).
bool contains(const OperatorAlgebra& a, const Matrix& x, const Tolerance& tol = {});

/// Whether the span of `inner` lies in the span of `outer`.
bool span_contains(const OperatorAlgebra& outer, const OperatorAlgebra& inner, const Tolerance& tol = {});

struct BlockDims {
  std::size_t size = 0;          // n_i
  std::size_t multiplicity = 0;  // m_i
};

struct CentralDecomposition {
  std::vector<Matrix> minimal_central_projections;  // ordered by first nonzero diagonal index
  std::vector<BlockDims> block_dims;
  std::size_t center_dim = 0;
};

/// Minimal central projections from the eigenprojections of a seeded random
/// self-adjoint central element. Throws ClusteringAmbiguous if two distinct
/// central eigenvalues sit closer than rank_tol but further than atol.
CentralDecomposition center_and_blocks(const OperatorAlgebra& a, const Tolerance& tol = {},
                                       std::uint64_t seed = kDefaultSeed);

/// Index of the minimal central projection z with zX = X, if any.
std::optional<std::size_t> block_of(const CentralDecomposition& cd, const Matrix& x, const Tolerance& tol = {});

/// rank(z_k E) for every minimal central projection.
std::vector<std::size_t> central_ranks(const CentralDecomposition& cd, const Matrix& projection);

/// Splits a projection E of A into mutually orthogonal minimal projections of A.
/// Each entry carries the index of the block it lives in.
struct MinimalProjection {
  Matrix projection;
  std::size_t block = 0;
};
std::vector<MinimalProjection> minimal_projection_decomposition(const OperatorAlgebra& a,
                                                                const CentralDecomposition& cd,
                                                                const Matrix& projection, Rng& rng,
                                                                const Tolerance& tol = {});

/// Partial isometry v in A with v*v = e and vv* = f, for minimal projections
/// e, f of A lying in the same central block.
Matrix partial_isometry_between(const OperatorAlgebra& a, const Matrix& e, const Matrix& f,
                                const Tolerance& tol = {});

/// Throws InvalidArgument unless p is a projection lying in A.
void require_projection_in(const OperatorAlgebra& a, const Matrix& p, const Tolerance& tol, const char* what);

struct MvnResult {
  bool equivalent = false;
  std::optional<Matrix> witness;  // V with V*V = E, VV* = F
};

/// Murray-von Neumann equivalence decided by central ranks; on success the
/// partial isometry is built blockwise and checked to atol.
MvnResult mvn_equivalent(const OperatorAlgebra& a, const Matrix& e, const Matrix& f, const Tolerance& tol = {},
                         std::uint64_t seed = kDefaultSeed);

struct Cutdown {
  OperatorAlgebra algebra;  // on range(E), unit I_r
  Matrix isometry;          // n x r, columns span range(E)
};

/// E A E compressed to an orthonormal basis of range(E).
Cutdown cutdown(const OperatorAlgebra& a, const Matrix& e, const Tolerance& tol = {});

/// Canonical non-scalar projection of a non-trivial *-algebra: the top spectral
/// projection of the first non-scalar image of a Hermitian matrix unit under
/// the orthogonal projection onto the algebra. Returns nullopt for C·I.
std::optional<Matrix> canonical_nontrivial_projection(const OperatorAlgebra& a, const Tolerance& tol = {});

}  // namespace ncerg
