#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncerg/action.hpp"
#include "ncerg/states.hpp"

namespace ncerg {

/// |T|^{-1} Σ_g f∘α_g. Finite groups only.
StateFunctional average_state(const StateFunctional& f, const AutomorphicAction& action);

/// Orthogonal projection (trace inner product) of x onto {X : W X W^* = X},
/// i.e. Σ_c Q_c X Q_c over the spectral projections Q_c of W.
Matrix mean_ergodic_average(const Matrix& w, const Matrix& x, const Tolerance& tol = {});

/// h = f∘P with P the eigenvalue-1 spectral projection of X ↦ θ X θ^*.
/// Accepts a Z-action or any action with a single listed unitary.
StateFunctional invariant_state_for_automorphism(const StateFunctional& f, const AutomorphicAction& theta,
                                                 const Tolerance& tol = {});

/// {A : α_g(A) = A for all listed g}.
OperatorAlgebra fixed_point_algebra(const AutomorphicAction& action, const Tolerance& tol = {});

struct ErgodicActionResult {
  bool ergodic = false;
  std::size_t fixed_dim = 0;
  std::optional<Matrix> witness;  // nontrivial fixed projection
};

ErgodicActionResult is_ergodic_action(const AutomorphicAction& action, const Tolerance& tol = {});

struct ErgodicStateResult {
  bool ergodic = false;
  Matrix support;
  std::size_t gns_dim = 0;
  /// dim of π(E_f A E_f)' ∩ {U_g}'.
  std::size_t commutant_dim = 0;
  /// On false: a nontrivial projection of that commutant, acting on the GNS
  /// space of the state restricted to its support.
  std::optional<Matrix> gns_witness;
  /// The split of f induced by gns_witness, as states on the original algebra.
  std::optional<StateSplit> split;
};

/// Throws NotInvariant, or SupportNotInvariant if α moves the support.
ErgodicStateResult is_ergodic_state(const StateFunctional& f, const AutomorphicAction& action,
                                    const Tolerance& tol = {});

struct WanderingFamily {
  Matrix projection;
  /// Group element indices (finite) or exponents of θ (Z-action), first is 0.
  std::vector<std::int64_t> elements;
  std::vector<Matrix> translates;
};

struct WanderingSearchOptions {
  std::size_t max_orbit = 4;
  std::size_t random_samples = 64;
  std::uint64_t seed = kDefaultSeed;
};

/// Looks for E != 0 among the minimal projections of the algebra (and seeded
/// random minimal projections) whose translates under k = min(max_orbit, |T|)
/// distinct elements are pairwise orthogonal. For a Z-action the exponents
/// 0 .. 8·max_orbit-1 are searched and k = max_orbit. k < 2 returns nothing.
std::optional<WanderingFamily> wandering_projection_search(const AutomorphicAction& action,
                                                           const WanderingSearchOptions& options = {},
                                                           const Tolerance& tol = {});

/// The same orthogonal-orbit test for one given projection E.
std::optional<WanderingFamily> wandering_family_for(const AutomorphicAction& action, const Matrix& e,
                                                    std::size_t max_orbit, const Tolerance& tol = {});

/// Whether some translate α_g(E) has |.|_F <= atol over the same element
/// window. Automorphisms preserve norms, so this is false for every E != 0.
bool has_weakly_null_orbit(const AutomorphicAction& action, const Matrix& e, std::size_t max_orbit,
                           const Tolerance& tol = {});

}  // namespace ncerg
