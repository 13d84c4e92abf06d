#pragma once

#include <cstddef>
#include <vector>

#include "ncerg/action.hpp"
#include "ncerg/crossed.hpp"

namespace ncerg {

/// Periodic lattice Z_{m_1} x ... x Z_{m_d}; sites are indexed like the group elements.
struct LatticePatch {
  std::vector<std::size_t> orders;

  FiniteAbelianGroup group() const { return FiniteAbelianGroup(orders); }
  std::size_t site_count() const;
};

/// Uniform fibre M_n with an optional per-site unitary twist (one per site, or none).
struct FibreSpec {
  std::size_t fibre_dim = 1;
  std::vector<Matrix> twist;
};

/// (+)_x M_n on (+)_x C^n, site x occupying rows x n .. x n + n - 1.
struct SectionsAlgebra {
  LatticePatch patch;
  std::size_t fibre_dim = 0;
  OperatorAlgebra algebra;
  std::vector<Matrix> site_projections;  // z_x
};

/// Throws DimensionOverflow when sites * n exceeds the cap.
SectionsAlgebra build_sections_algebra(const LatticePatch& patch, const FibreSpec& fibre,
                                       std::size_t cap = kDefaultDimensionCap);

/// Lattice translations: each standard generator acts by P_t diag(u_x), where
/// P_t moves site x to x + t; other elements are products of generator powers.
/// Throws TwistIncompatible when the twisted generators do not give a group action.
AutomorphicAction translation_action(const SectionsAlgebra& sa, const FibreSpec& fibre, const Tolerance& tol = {});

}  // namespace ncerg
