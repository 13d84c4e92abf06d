#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncerg/action.hpp"

namespace ncerg {

/// π_g on minimal central projections: α_g(z_k) = z_{perm[g][k]}.
/// Throws InvalidArgument if some α_g(z_k) is not a minimal central projection.
std::vector<std::vector<std::size_t>> central_block_permutations(const AutomorphicAction& action,
                                                                 const CentralDecomposition& cd,
                                                                 const Tolerance& tol = {});

/// Orbits of the block permutations, each sorted, ordered by smallest block.
std::vector<std::vector<std::size_t>> central_orbits(const std::vector<std::vector<std::size_t>>& perms,
                                                     std::size_t blocks);

/// τ(A) = Σ_k (w_k / n_k) Tr(z_k A) / m_k with w_k = τ(z_k).
struct InvariantTrace {
  CentralDecomposition blocks;
  std::vector<double> weights;  // τ(z_k), summing to 1

  double operator()(const Matrix& a) const;
  bool faithful() const;
};

/// Canonical block traces averaged over the block permutation, normalized.
/// Finite groups only.
InvariantTrace invariant_trace(const AutomorphicAction& action, const Tolerance& tol = {});

/// A_g for finitely many group element indices.
using TwistWitness = std::map<std::size_t, Matrix>;

/// E = Σ A_g^* A_g and F = Σ α_g(A_g A_g^*) to atol, with every A_g in the algebra.
bool verify_twist_witness(const Matrix& e, const Matrix& f, const TwistWitness& w, const AutomorphicAction& action,
                          const Tolerance& tol = {});

/// Whether Σ_{z∈O} rank(zE) = Σ_{z∈O} rank(zF) on every orbit O of central blocks.
bool orbit_trace_criterion(const Matrix& e, const Matrix& f, const AutomorphicAction& action,
                           const Tolerance& tol = {}, std::uint64_t seed = kDefaultSeed);

/// Decision by the orbit-trace criterion; on success an explicit witness,
/// verified before it is returned. Throws InvalidArgument unless E and F are
/// projections of the algebra and the group is finite.
std::optional<TwistWitness> t_equivalent(const Matrix& e, const Matrix& f, const AutomorphicAction& action,
                                         const Tolerance& tol = {}, std::uint64_t seed = kDefaultSeed);

struct TFiniteCertificate {
  bool finite = true;
  InvariantTrace trace;
  /// Every proper subprojection E < F has τ(E) <= τ(F) - gap; gap > 0 for F != 0.
  double gap = 0.0;
};

TFiniteCertificate is_t_finite(const Matrix& f, const AutomorphicAction& action, const Tolerance& tol = {});

enum class TType { Finite, Semifinite, PurelyInfinite };

struct TTypeResult {
  TType type = TType::Finite;
  std::string label;               // "T-Type II(1)" and so on
  std::string conventional_label;  // "T-finite" and so on
  TFiniteCertificate certificate;  // is_t_finite(I)
};

TTypeResult classify_t_type(const AutomorphicAction& action, const Tolerance& tol = {});

const char* t_type_label(TType t);
const char* t_type_conventional_label(TType t);

}  // namespace ncerg
