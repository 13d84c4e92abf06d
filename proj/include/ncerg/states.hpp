#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ncerg/action.hpp"
#include "ncerg/algebra.hpp"

namespace ncerg {

/// f(A) = tr(ρA) on an algebra, for a density ρ on the ambient space.
/// The density is also kept in its algebra form σ = P_A(ρ), the unique
/// density inside the algebra that induces the same functional.
class StateFunctional {
 public:
  /// Throws DimensionMismatch, NotHermitian or NotPSD, and InvalidArgument
  /// when tr ρ differs from 1 by more than atol·n.
  StateFunctional(OperatorAlgebra algebra, Matrix density, const Tolerance& tol = {});

  const OperatorAlgebra& algebra() const noexcept { return algebra_; }
  const Matrix& density() const noexcept { return density_; }
  const Matrix& algebra_density() const noexcept { return algebra_density_; }

  Complex operator()(const Matrix& a) const;
  /// Values on the algebra basis.
  Vector basis_values() const;
  bool is_faithful(const Tolerance& tol = {}) const;
  /// Whether f∘α_g = f for every listed automorphism.
  bool is_invariant(const AutomorphicAction& action, const Tolerance& tol = {}) const;
  /// Density of f∘α_k.
  StateFunctional composed_with(const AutomorphicAction& action, std::size_t k) const;
  /// Whether both states agree on the algebra.
  bool same_as(const StateFunctional& other, const Tolerance& tol = {}) const;

 private:
  OperatorAlgebra algebra_;
  Matrix density_;
  Matrix algebra_density_;
};

/// State given by its values on the orthonormal basis of the algebra.
StateFunctional state_from_basis_values(const OperatorAlgebra& algebra, const Vector& values,
                                        const Tolerance& tol = {});

/// Trace-normalized state tr(A)/n.
StateFunctional tracial_state(const OperatorAlgebra& algebra);

/// Smallest projection E of the algebra with f(E) = 1.
Matrix support_of_state(const StateFunctional& f, const Tolerance& tol = {});

/// GNS space of a state in algebra coordinates. With a = coordinates of A in
/// the algebra basis, η(A) = embed · a and <η(A), η(B)> = f(A^*B). The
/// standard basis of H(f) is η(C_i) with C_i = combine(lift column i).
struct GnsData {
  StateFunctional state;
  std::size_t hilbert_dim = 0;
  Matrix embed;                 // hilbert_dim x dim(A)
  Matrix lift;                  // dim(A) x hilbert_dim
  Vector cyclic_vector;         // η(I)
  std::vector<Matrix> preimages;  // C_i
  std::vector<Matrix> rep_basis;  // π(B_j) for the algebra basis
  bool faithful = false;          // null space trivial
  /// sqrt(largest / smallest kept Gram eigenvalue); residual checks scale with it.
  double condition = 1.0;

  Vector eta(const Matrix& a) const;
  Matrix pi(const Matrix& x) const;
};

GnsData gns_construct(const StateFunctional& f, const Tolerance& tol = {});

/// Tomita data of a faithful state: S = J Δ^{1/2} with S η(A) = η(A^*).
/// Antilinear maps are stored as K with x ↦ K conj(x).
struct ModularData {
  Matrix s_conj;
  Matrix j_conj;
  Matrix delta;
  Matrix delta_half;

  /// Linear operator J X J.
  Matrix conjugate_by_j(const Matrix& x) const;
};

/// Throws NotFaithful when the GNS null space is nonzero.
ModularData modular_data(const GnsData& g, const Tolerance& tol = {});

/// U_k η(A) = η(α_k(A)) on H(f), one per listed automorphism.
/// Throws NotInvariant unless f∘α_k = f for every k.
std::vector<Matrix> covariant_unitaries(const GnsData& g, const AutomorphicAction& action, const Tolerance& tol = {});

struct StateSplit {
  double lambda = 0.0;
  StateFunctional part;        // f_E
  StateFunctional complement;  // f_{I-E}
};

/// f = λ f_E + (1-λ) f_{I-E} for a projection E on H(f) commuting with π and
/// the unitaries. Throws InvalidArgument if E is not such a projection and
/// TrivialProjection if λ is within atol of 0 or 1.
StateSplit decompose_by_commutant_projection(const GnsData& g, const std::vector<Matrix>& unitaries, const Matrix& e,
                                             const Tolerance& tol = {});

/// ⊕ GNS representation of a family of states closed under f ↦ f∘α_k, with
/// unitaries permuting the summands.
struct CovariantRepresentation {
  std::vector<GnsData> summands;
  std::vector<std::size_t> offsets;  // start of each summand in the direct sum
  std::size_t hilbert_dim = 0;
  std::vector<Matrix> rep_basis;     // π(B_j)
  std::vector<Matrix> unitaries;     // one per listed automorphism
  /// perm[k][i]: summand index of f_i∘α_k.
  std::vector<std::vector<std::size_t>> permutations;
  bool faithful = false;

  Matrix pi(const Matrix& x) const;
};

/// Throws FamilyNotClosed unless every f_i∘α_k is (up to atol) a member,
/// and InvalidArgument for an empty family or duplicate members.
CovariantRepresentation covariant_direct_sum(const std::vector<StateFunctional>& family,
                                             const AutomorphicAction& action, const Tolerance& tol = {});

/// -Σ f(E_i) log f(E_i) over a family of projections (0 log 0 = 0).
double partition_entropy(const StateFunctional& f, const std::vector<Matrix>& partition);

}  // namespace ncerg
