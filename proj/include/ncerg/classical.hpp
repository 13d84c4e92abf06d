#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "ncerg/actions.hpp"

namespace ncerg {

/// Weights on the points 0..n-1.
struct FiniteProbabilitySpace {
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
  /// Throws InvalidArgument unless weights are >= 0 and sum to 1 within 1e-12.
  void validate() const;
};

using Subset = std::vector<std::size_t>;

/// Bijection of {0..n-1}, stored as the list of images.
class Permutation {
 public:
  /// Throws InvalidArgument unless `images` is a bijection.
  explicit Permutation(std::vector<std::size_t> images);
  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return images_.size(); }
  std::size_t operator()(std::size_t i) const { return images_.at(i); }
  const std::vector<std::size_t>& images() const noexcept { return images_; }

  Permutation compose(const Permutation& inner) const;  // this ∘ inner
  Permutation inverse() const;
  std::size_t order() const;
  /// Cycles ordered by their smallest point; each cycle starts at its smallest point.
  std::vector<Subset> cycles() const;
  Subset image(const Subset& s) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> images_;
};

/// x ↦ x + 1 on Z, acting on finitely supported subsets.
struct IntegerShift {};

using MeasurableMap = std::variant<Permutation, IntegerShift>;

/// -Σ μ(A_j) ln μ(A_j). Throws InvalidArgument when blocks overlap or miss a
/// point of positive weight.
double partition_entropy(const std::vector<Subset>& blocks, const FiniteProbabilitySpace& mu);

bool is_invariant_measure(const Permutation& t, const FiniteProbabilitySpace& mu);

struct ClassicalErgodicity {
  bool ergodic = false;
  std::optional<Subset> witness;  // an invariant set of intermediate measure
};

/// True iff the support of μ is a single cycle. Throws NotInvariantMeasure.
ClassicalErgodicity is_ergodic_transformation(const Permutation& t, const FiniteProbabilitySpace& mu);

struct ExtremePointResult {
  bool extreme = false;
  /// Vertices of the invariant-measure polytope: uniform measures on cycles.
  std::vector<FiniteProbabilitySpace> vertices;
  /// Barycentric coordinates of μ over `vertices`.
  std::vector<double> coefficients;
  /// When not extreme: μ = λ μ1 + (1-λ) μ2 with μ1 != μ2 invariant.
  double lambda = 0.0;
  std::optional<FiniteProbabilitySpace> mu1, mu2;
};

/// Throws NotInvariantMeasure.
ExtremePointResult is_extreme_invariant_measure(const FiniteProbabilitySpace& mu, const Permutation& t);

/// Closure of the generators under composition, identity first.
std::vector<Permutation> generated_group(const std::vector<Permutation>& generators, std::size_t n);

struct HopfWitness {
  std::vector<Subset> pieces;           // partition of H
  std::vector<std::size_t> elements;    // index into the group list, one per piece
  std::vector<Subset> images;           // partition of K
};

/// Splits H into pieces carried onto a partition of K by group elements, via
/// bipartite matching of points that share an orbit. `group` lists the whole group.
std::optional<HopfWitness> hopf_equivalent_sets(const Subset& h, const Subset& k, const std::vector<Permutation>& group);

struct WanderingCertificate {
  std::vector<std::int64_t> exponents;       // n_j
  std::vector<std::vector<std::int64_t>> images;  // T^{n_j}(S)
};

/// Shift: exponents j·(diam S + 1), j < k, whose images are pairwise disjoint.
/// Permutation: nothing, since T^{order}(S) = S for every S.
std::optional<WanderingCertificate> wandering_set_search(const MeasurableMap& t, const std::vector<std::int64_t>& s,
                                                         std::size_t k);

/// The commutative system as a diagonal algebra with a permutation action.
struct DiagonalModel {
  OperatorAlgebra algebra;
  AutomorphicAction action;
  StateFunctional state;

  Matrix projection_of(const Subset& s) const;
};

DiagonalModel diagonal_embedding(const FiniteProbabilitySpace& mu, const Permutation& t);

}  // namespace ncerg
