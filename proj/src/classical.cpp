#include "ncerg/classical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "ncerg/error.hpp"

namespace ncerg {

namespace {

constexpr double kWeightTol = 1e-12;

void require_invariant(const Permutation& t, const FiniteProbabilitySpace& mu) {
  mu.validate();
  if (t.size() != mu.size()) throw Error(ErrorCode::DimensionMismatch, "map and measure have different point counts");
  if (!is_invariant_measure(t, mu)) throw Error(ErrorCode::NotInvariantMeasure, "measure is not invariant");
}

double measure_of(const Subset& s, const FiniteProbabilitySpace& mu) {
  double m = 0.0;
  for (std::size_t i : s) m += mu.weights.at(i);
  return m;
}

}  // namespace

void FiniteProbabilitySpace::validate() const {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InvalidArgument, "negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightTol) throw Error(ErrorCode::InvalidArgument, "weights do not sum to 1");
}

Permutation::Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t x : images_) {
    if (x >= images_.size() || seen[x]) throw Error(ErrorCode::InvalidArgument, "not a permutation");
    seen[x] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), 0);
  return Permutation(std::move(id));
}

Permutation Permutation::compose(const Permutation& inner) const {
  if (inner.size() != size()) throw Error(ErrorCode::DimensionMismatch, "permutations of different sizes");
  std::vector<std::size_t> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = images_[inner.images_[i]];
  return Permutation(std::move(out));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[images_[i]] = i;
  return Permutation(std::move(out));
}

std::size_t Permutation::order() const {
  std::size_t ord = 1;
  for (const auto& c : cycles()) ord = std::lcm(ord, c.size());
  return ord;
}

std::vector<Subset> Permutation::cycles() const {
  std::vector<Subset> out;
  std::vector<bool> seen(size(), false);
  for (std::size_t start = 0; start < size(); ++start) {
    if (seen[start]) continue;
    Subset c;
    for (std::size_t x = start; !seen[x]; x = images_[x]) {
      seen[x] = true;
      c.push_back(x);
    }
    out.push_back(std::move(c));
  }
  return out;
}

Subset Permutation::image(const Subset& s) const {
  Subset out;
  for (std::size_t x : s) out.push_back(images_.at(x));
  std::sort(out.begin(), out.end());
  return out;
}

double partition_entropy(const std::vector<Subset>& blocks, const FiniteProbabilitySpace& mu) {
  mu.validate();
  std::vector<bool> covered(mu.size(), false);
  double h = 0.0;
  for (const auto& b : blocks) {
    for (std::size_t x : b) {
      if (x >= mu.size() || covered[x]) throw Error(ErrorCode::InvalidArgument, "partition blocks overlap");
      covered[x] = true;
    }
    const double m = measure_of(b, mu);
    if (m > 0.0) h -= m * std::log(m);
  }
  for (std::size_t x = 0; x < mu.size(); ++x)
    if (!covered[x] && mu.weights[x] > 0.0) throw Error(ErrorCode::InvalidArgument, "partition misses the support");
  return h;
}

bool is_invariant_measure(const Permutation& t, const FiniteProbabilitySpace& mu) {
  if (t.size() != mu.size()) return false;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::abs(mu.weights[t(i)] - mu.weights[i]) > kWeightTol) return false;
  return true;
}

ClassicalErgodicity is_ergodic_transformation(const Permutation& t, const FiniteProbabilitySpace& mu) {
  require_invariant(t, mu);
  std::vector<Subset> charged;
  for (auto& c : t.cycles())
    if (measure_of(c, mu) > kWeightTol) charged.push_back(std::move(c));
  ClassicalErgodicity out;
  out.ergodic = charged.size() == 1;
  if (!out.ergodic) {
    Subset w = charged.front();
    std::sort(w.begin(), w.end());
    out.witness = std::move(w);
  }
  return out;
}

ExtremePointResult is_extreme_invariant_measure(const FiniteProbabilitySpace& mu, const Permutation& t) {
  require_invariant(t, mu);
  ExtremePointResult out;
  std::vector<std::size_t> charged;
  for (const auto& c : t.cycles()) {
    FiniteProbabilitySpace v{std::vector<double>(mu.size(), 0.0)};
    for (std::size_t x : c) v.weights[x] = 1.0 / static_cast<double>(c.size());
    const double coeff = measure_of(c, mu);
    if (coeff > kWeightTol) charged.push_back(out.vertices.size());
    out.vertices.push_back(std::move(v));
    out.coefficients.push_back(coeff);
  }
  out.extreme = charged.size() == 1;
  if (!out.extreme) {
    const std::size_t first = charged.front();
    out.lambda = out.coefficients[first];
    out.mu1 = out.vertices[first];
    FiniteProbabilitySpace rest{std::vector<double>(mu.size(), 0.0)};
    for (std::size_t x = 0; x < mu.size(); ++x)
      rest.weights[x] = (mu.weights[x] - out.lambda * out.mu1->weights[x]) / (1.0 - out.lambda);
    for (double& w : rest.weights) w = std::max(w, 0.0);
    out.mu2 = std::move(rest);
  }
  return out;
}

std::vector<Permutation> generated_group(const std::vector<Permutation>& generators, std::size_t n) {
  std::vector<Permutation> group{Permutation::identity(n)};
  std::set<std::vector<std::size_t>> seen{group.front().images()};
  for (std::size_t i = 0; i < group.size(); ++i)
    for (const auto& g : generators) {
      Permutation next = g.compose(group[i]);
      if (seen.insert(next.images()).second) group.push_back(std::move(next));
    }
  return group;
}

std::optional<HopfWitness> hopf_equivalent_sets(const Subset& h, const Subset& k, const std::vector<Permutation>& group) {
  if (h.size() != k.size()) return std::nullopt;
  // Kuhn's augmenting paths; edge (i, j) when some g carries h[i] to k[j].
  std::vector<std::vector<std::size_t>> edge_element(h.size(), std::vector<std::size_t>(k.size(), group.size()));
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < k.size(); ++j)
      for (std::size_t g = 0; g < group.size(); ++g)
        if (group[g](h[i]) == k[j]) {
          edge_element[i][j] = g;
          break;
        }
  std::vector<std::size_t> match_of_k(k.size(), h.size());
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t i, std::vector<bool>& visited) {
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (edge_element[i][j] == group.size() || visited[j]) continue;
      visited[j] = true;
      if (match_of_k[j] == h.size() || augment(match_of_k[j], visited)) {
        match_of_k[j] = i;
        return true;
      }
    }
    return false;
  };
  // Points shared by H and K start matched to themselves, so H = K yields the identity.
  std::vector<bool> matched(h.size(), false);
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < k.size(); ++j)
      if (h[i] == k[j] && edge_element[i][j] != group.size() && group[edge_element[i][j]] == Permutation::identity(group[0].size())) {
        match_of_k[j] = i;
        matched[i] = true;
      }
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (matched[i]) continue;
    std::vector<bool> visited(k.size(), false);
    if (!augment(i, visited)) return std::nullopt;
  }

  HopfWitness w;
  std::vector<std::size_t> piece_of_element(group.size(), group.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    const std::size_t i = match_of_k[j];
    const std::size_t g = edge_element[i][j];
    if (piece_of_element[g] == group.size()) {
      piece_of_element[g] = w.pieces.size();
      w.pieces.emplace_back();
      w.images.emplace_back();
      w.elements.push_back(g);
    }
    w.pieces[piece_of_element[g]].push_back(h[i]);
    w.images[piece_of_element[g]].push_back(k[j]);
  }
  for (auto& p : w.pieces) std::sort(p.begin(), p.end());
  for (auto& p : w.images) std::sort(p.begin(), p.end());
  return w;
}

std::optional<WanderingCertificate> wandering_set_search(const MeasurableMap& t, const std::vector<std::int64_t>& s,
                                                         std::size_t k) {
  if (s.empty()) return std::nullopt;
  if (std::holds_alternative<Permutation>(t)) {
    const auto& p = std::get<Permutation>(t);
    for (std::int64_t x : s)
      if (x < 0 || static_cast<std::size_t>(x) >= p.size())
        throw Error(ErrorCode::InvalidArgument, "subset point outside the permutation's domain");
    return std::nullopt;
  }
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  const std::int64_t spacing = *hi - *lo + 1;
  WanderingCertificate cert;
  std::set<std::int64_t> used;
  for (std::size_t j = 0; j < k; ++j) {
    const std::int64_t n = static_cast<std::int64_t>(j) * spacing;
    std::vector<std::int64_t> img;
    for (std::int64_t x : s) {
      img.push_back(x + n);
      if (!used.insert(x + n).second) throw Error(ErrorCode::Internal, "shift images overlap");
    }
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    cert.exponents.push_back(n);
    cert.images.push_back(std::move(img));
  }
  return cert;
}

Matrix DiagonalModel::projection_of(const Subset& s) const {
  Matrix p(algebra.ambient_dim(), algebra.ambient_dim());
  for (std::size_t x : s) p(x, x) = 1.0;
  return p;
}

DiagonalModel diagonal_embedding(const FiniteProbabilitySpace& mu, const Permutation& t) {
  mu.validate();
  const std::size_t n = mu.size();
  if (t.size() != n) throw Error(ErrorCode::DimensionMismatch, "map and measure have different point counts");
  OperatorAlgebra algebra = diagonal_algebra(n);
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) w(t(i), i) = 1.0;
  AutomorphicAction action = AutomorphicAction::cyclic(algebra, w, t.order());
  StateFunctional state(algebra, Matrix::diagonal(std::span<const double>(mu.weights)));
  return DiagonalModel{std::move(algebra), std::move(action), std::move(state)};
}

}  // namespace ncerg
