#include "ncerg/equivalence.hpp"

#include <algorithm>
#include <numeric>

#include "ncerg/error.hpp"

namespace ncerg {

namespace {

void require_finite(const AutomorphicAction& action) {
  if (!action.is_finite()) throw Error(ErrorCode::InvalidArgument, "T-equivalence needs a finite group");
}

// Orbit sums of central ranks.
std::vector<std::size_t> orbit_ranks(const std::vector<std::vector<std::size_t>>& orbits,
                                     const std::vector<std::size_t>& ranks) {
  std::vector<std::size_t> out;
  for (const auto& o : orbits) {
    std::size_t s = 0;
    for (std::size_t k : o) s += ranks[k];
    out.push_back(s);
  }
  return out;
}

// First group element (lexicographic) carrying block `from` to block `to`.
std::size_t element_between(const std::vector<std::vector<std::size_t>>& perms, std::size_t from, std::size_t to) {
  for (std::size_t g = 0; g < perms.size(); ++g)
    if (perms[g][from] == to) return g;
  throw Error(ErrorCode::Internal, "blocks are not in the same orbit");
}

}  // namespace

std::vector<std::vector<std::size_t>> central_block_permutations(const AutomorphicAction& action,
                                                                 const CentralDecomposition& cd,
                                                                 const Tolerance& tol) {
  const auto& zs = cd.minimal_central_projections;
  std::vector<std::vector<std::size_t>> perms;
  for (std::size_t g = 0; g < action.count(); ++g) {
    std::vector<std::size_t> perm;
    for (const auto& z : zs) {
      const Matrix moved = action.apply(g, z);
      std::size_t k = 0;
      while (k < zs.size() && max_abs_diff(moved, zs[k]) > 100 * tol.atol) ++k;
      if (k == zs.size()) throw Error(ErrorCode::InvalidArgument, "automorphism does not permute the central blocks");
      perm.push_back(k);
    }
    perms.push_back(std::move(perm));
  }
  return perms;
}

std::vector<std::vector<std::size_t>> central_orbits(const std::vector<std::vector<std::size_t>>& perms,
                                                     std::size_t blocks) {
  std::vector<std::size_t> root(blocks);
  std::iota(root.begin(), root.end(), 0);
  const auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x];
    return x;
  };
  for (const auto& p : perms)
    for (std::size_t k = 0; k < blocks; ++k) {
      const std::size_t a = find(k), b = find(p[k]);
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  std::vector<std::vector<std::size_t>> orbits;
  std::vector<std::size_t> slot(blocks, blocks);
  for (std::size_t k = 0; k < blocks; ++k) {
    const std::size_t r = find(k);
    if (slot[r] == blocks) {
      slot[r] = orbits.size();
      orbits.emplace_back();
    }
    orbits[slot[r]].push_back(k);
  }
  return orbits;
}

double InvariantTrace::operator()(const Matrix& a) const {
  double t = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const auto& bd = blocks.block_dims[k];
    const double block_trace = (blocks.minimal_central_projections[k] * a).trace().real();
    t += weights[k] / static_cast<double>(bd.size) * block_trace / static_cast<double>(bd.multiplicity);
  }
  return t;
}

bool InvariantTrace::faithful() const {
  return std::all_of(weights.begin(), weights.end(), [](double w) { return w > 0.0; });
}

InvariantTrace invariant_trace(const AutomorphicAction& action, const Tolerance& tol) {
  require_finite(action);
  InvariantTrace tr{center_and_blocks(action.algebra(), tol), {}};
  const std::size_t nb = tr.blocks.block_dims.size();
  const auto perms = central_block_permutations(action, tr.blocks, tol);
  // Canonical weight of block k is its matrix trace of the unit, n_k.
  std::vector<double> w(nb, 0.0);
  for (const auto& p : perms)
    for (std::size_t k = 0; k < nb; ++k) w[k] += static_cast<double>(tr.blocks.block_dims[p[k]].size);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  tr.weights = std::move(w);
  return tr;
}

bool verify_twist_witness(const Matrix& e, const Matrix& f, const TwistWitness& w, const AutomorphicAction& action,
                          const Tolerance& tol) {
  const std::size_t n = action.algebra().ambient_dim();
  Matrix left(n, n), right(n, n);
  for (const auto& [g, a] : w) {
    if (g >= action.count() || a.rows() != n || a.cols() != n) return false;
    if (!contains(action.algebra(), a, tol)) return false;
    left += a.adjoint() * a;
    right += action.apply(g, a * a.adjoint());
  }
  return max_abs_diff(left, e) <= tol.atol && max_abs_diff(right, f) <= tol.atol;
}

bool orbit_trace_criterion(const Matrix& e, const Matrix& f, const AutomorphicAction& action, const Tolerance& tol,
                           std::uint64_t seed) {
  require_finite(action);
  const auto cd = center_and_blocks(action.algebra(), tol, seed);
  const auto orbits = central_orbits(central_block_permutations(action, cd, tol), cd.block_dims.size());
  return orbit_ranks(orbits, central_ranks(cd, e)) == orbit_ranks(orbits, central_ranks(cd, f));
}

std::optional<TwistWitness> t_equivalent(const Matrix& e, const Matrix& f, const AutomorphicAction& action,
                                         const Tolerance& tol, std::uint64_t seed) {
  require_finite(action);
  const auto& a = action.algebra();
  require_projection_in(a, e, tol, "t_equivalent(E)");
  require_projection_in(a, f, tol, "t_equivalent(F)");
  if (max_abs_diff(e, f) <= tol.atol) return TwistWitness{{0, e}};

  const auto cd = center_and_blocks(a, tol, seed);
  const auto perms = central_block_permutations(action, cd, tol);
  const auto orbits = central_orbits(perms, cd.block_dims.size());
  if (orbit_ranks(orbits, central_ranks(cd, e)) != orbit_ranks(orbits, central_ranks(cd, f))) return std::nullopt;

  Rng rng(seed);
  const auto es = minimal_projection_decomposition(a, cd, e, rng, tol);
  const auto fs = minimal_projection_decomposition(a, cd, f, rng, tol);
  std::vector<bool> e_used(es.size(), false), f_used(fs.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  // Same block first, so MvN-equivalent pairs only use the identity.
  for (std::size_t i = 0; i < es.size(); ++i)
    for (std::size_t j = 0; j < fs.size(); ++j)
      if (!f_used[j] && fs[j].block == es[i].block) {
        pairs.emplace_back(i, j);
        e_used[i] = f_used[j] = true;
        break;
      }
  // Leftovers are matched within each orbit.
  for (const auto& orbit : orbits) {
    const auto in_orbit = [&](std::size_t block) { return std::find(orbit.begin(), orbit.end(), block) != orbit.end(); };
    std::vector<std::size_t> el, fl;
    for (std::size_t i = 0; i < es.size(); ++i)
      if (!e_used[i] && in_orbit(es[i].block)) el.push_back(i);
    for (std::size_t j = 0; j < fs.size(); ++j)
      if (!f_used[j] && in_orbit(fs[j].block)) fl.push_back(j);
    if (el.size() != fl.size()) throw Error(ErrorCode::Internal, "orbit counts disagree after the rank check");
    for (std::size_t t = 0; t < el.size(); ++t) pairs.emplace_back(el[t], fl[t]);
  }

  const std::size_t n = a.ambient_dim();
  TwistWitness w;
  for (const auto& [i, j] : pairs) {
    const std::size_t g = element_between(perms, es[i].block, fs[j].block);
    // A_g maps e_i onto α_g^{-1}(f_j), which lies in the block of e_i.
    const Matrix target = hermitian_part(action.apply_inverse(g, fs[j].projection));
    auto [it, inserted] = w.try_emplace(g, Matrix(n, n));
    it->second += partial_isometry_between(a, es[i].projection, target, tol);
  }
  if (!verify_twist_witness(e, f, w, action, tol))
    throw Error(ErrorCode::Internal, "constructed twist witness failed verification");
  return w;
}

TFiniteCertificate is_t_finite(const Matrix& f, const AutomorphicAction& action, const Tolerance& tol) {
  require_projection_in(action.algebra(), f, tol, "is_t_finite");
  TFiniteCertificate c{true, invariant_trace(action, tol), 0.0};
  // The smallest τ of a minimal projection under F bounds τ(F) - τ(E) from below.
  const auto ranks = central_ranks(c.trace.blocks, f);
  double gap = 0.0;
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    if (ranks[k] == 0) continue;
    const double unit = c.trace.weights[k] / static_cast<double>(c.trace.blocks.block_dims[k].size);
    gap = gap == 0.0 ? unit : std::min(gap, unit);
  }
  c.gap = gap;
  if (!c.trace.faithful()) throw Error(ErrorCode::Internal, "invariant trace is not faithful");
  return c;
}

const char* t_type_label(TType t) {
  switch (t) {
    case TType::Finite: return "T-Type II(1)";
    case TType::Semifinite: return "T-Type II(∞)";
    case TType::PurelyInfinite: return "T-Type III";
  }
  return "";
}

const char* t_type_conventional_label(TType t) {
  switch (t) {
    case TType::Finite: return "T-finite";
    case TType::Semifinite: return "T-semifinite";
    case TType::PurelyInfinite: return "T-purely-infinite";
  }
  return "";
}

TTypeResult classify_t_type(const AutomorphicAction& action, const Tolerance& tol) {
  TTypeResult r;
  r.certificate = is_t_finite(Matrix::identity(action.algebra().ambient_dim()), action, tol);
  // A faithful finite invariant trace makes I itself T-finite.
  r.type = r.certificate.trace.faithful() ? TType::Finite : TType::Semifinite;
  r.label = t_type_label(r.type);
  r.conventional_label = t_type_conventional_label(r.type);
  return r;
}

}  // namespace ncerg
