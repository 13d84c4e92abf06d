#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncerg/algebra.hpp"
#include "ncerg/group.hpp"

namespace ncerg {

/// An action by *-automorphisms α_g = W_g (.) W_g^* that preserve an algebra.
/// Either a finite abelian group with one unitary per element, or the
/// Z-action generated by a single automorphism θ.
class AutomorphicAction {
 public:
  /// Unitaries listed in element order. Validates unitarity, span
  /// preservation, α_e = id and α_g α_h = α_{g+h} on the algebra basis.
  static AutomorphicAction from_group(OperatorAlgebra algebra, FiniteAbelianGroup group, std::vector<Matrix> unitaries,
                                      const Tolerance& tol = {});
  /// Z_m generated by Ad w; requires Ad w^m = id on the algebra.
  static AutomorphicAction cyclic(OperatorAlgebra algebra, const Matrix& w, std::size_t order,
                                  const Tolerance& tol = {});
  /// Z-action of a single automorphism.
  static AutomorphicAction from_automorphism(OperatorAlgebra algebra, Matrix generator, const Tolerance& tol = {});
  static AutomorphicAction trivial(OperatorAlgebra algebra);

  bool is_finite() const noexcept { return finite_; }
  const OperatorAlgebra& algebra() const noexcept { return algebra_; }
  /// Throws InvalidArgument for a Z-action.
  const FiniteAbelianGroup& group() const;

  /// W_g in element order (finite), or {θ} (Z-action). Invariance and
  /// fixed-point questions only need this list.
  const std::vector<Matrix>& unitaries() const noexcept { return unitaries_; }
  std::size_t count() const noexcept { return unitaries_.size(); }
  /// Element keys for finite groups, "1" for the Z generator.
  std::string label(std::size_t k) const;

  Matrix apply(std::size_t k, const Matrix& x) const;
  Matrix apply_inverse(std::size_t k, const Matrix& x) const;
  /// Implementing unitary of θ^p; Z-actions only.
  Matrix generator_power(std::int64_t p) const;

  /// Same action restricted to range(E) for a projection E fixed by every α_g:
  /// W ↦ Q^* W Q with Q an isometry onto range(E).
  AutomorphicAction restricted(const Cutdown& cut, const Tolerance& tol = {}) const;

 private:
  AutomorphicAction(OperatorAlgebra algebra, bool finite, std::optional<FiniteAbelianGroup> group,
                    std::vector<Matrix> unitaries);
  void validate(const Tolerance& tol) const;

  OperatorAlgebra algebra_;
  bool finite_ = true;
  std::optional<FiniteAbelianGroup> group_;
  std::vector<Matrix> unitaries_;
};

}  // namespace ncerg
