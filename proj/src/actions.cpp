#include "ncerg/actions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "ncerg/error.hpp"

namespace ncerg {

StateFunctional average_state(const StateFunctional& f, const AutomorphicAction& action) {
  if (!action.is_finite()) throw Error(ErrorCode::InvalidArgument, "averaging needs a finite group");
  const std::size_t n = f.algebra().ambient_dim();
  Matrix sum(n, n);
  for (std::size_t k = 0; k < action.count(); ++k) sum += action.apply_inverse(k, f.density());
  return StateFunctional(f.algebra(), hermitian_part(sum * (1.0 / static_cast<double>(action.count()))));
}

Matrix mean_ergodic_average(const Matrix& w, const Matrix& x, const Tolerance& tol) {
  Matrix out(x.rows(), x.cols());
  for (const auto& c : unitary_spectral_projections(w, tol)) out += c.projection * x * c.projection;
  return out;
}

StateFunctional invariant_state_for_automorphism(const StateFunctional& f, const AutomorphicAction& theta,
                                                 const Tolerance& tol) {
  if (theta.count() != 1) throw Error(ErrorCode::InvalidArgument, "expected a single automorphism");
  // P is self-adjoint in the trace inner product, so f∘P has density P(ρ).
  return StateFunctional(f.algebra(), hermitian_part(mean_ergodic_average(theta.unitaries()[0], f.density(), tol)),
                         tol);
}

OperatorAlgebra fixed_point_algebra(const AutomorphicAction& action, const Tolerance& tol) {
  const auto& a = action.algebra();
  const auto& basis = a.basis();
  const std::size_t d = basis.size();
  // Σ_g (R_g - I)^*(R_g - I), with R_g the matrix of α_g in the basis.
  Matrix gram(d, d);
  for (std::size_t k = 0; k < action.count(); ++k) {
    Matrix r(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      const Vector c = a.coordinates(action.apply(k, basis[j]));
      for (std::size_t i = 0; i < d; ++i) r(i, j) = c[i];
    }
    const Matrix m = r - Matrix::identity(d);
    gram += m.adjoint() * m;
  }
  MatrixSpan span(a.ambient_dim());
  span.try_add(Matrix::identity(a.ambient_dim()), tol);
  for (const auto& v : gram_null_space(gram, tol)) span.try_add(a.combine(v), tol);
  return OperatorAlgebra(std::move(span));
}

ErgodicActionResult is_ergodic_action(const AutomorphicAction& action, const Tolerance& tol) {
  const auto fixed = fixed_point_algebra(action, tol);
  ErgodicActionResult out;
  out.fixed_dim = fixed.dim();
  out.ergodic = fixed.dim() == 1;
  if (!out.ergodic) out.witness = canonical_nontrivial_projection(fixed, tol);
  return out;
}

ErgodicStateResult is_ergodic_state(const StateFunctional& f, const AutomorphicAction& action, const Tolerance& tol) {
  if (!f.is_invariant(action, tol)) throw Error(ErrorCode::NotInvariant, "state is not invariant under the action");
  ErgodicStateResult out;
  out.support = support_of_state(f, tol);
  for (std::size_t k = 0; k < action.count(); ++k)
    if (max_abs_diff(action.apply(k, out.support), out.support) > 100 * tol.atol)
      throw Error(ErrorCode::SupportNotInvariant, "invariant state with a non-invariant support");

  const Cutdown cut = cutdown(f.algebra(), out.support, tol);
  const Matrix& q = cut.isometry;
  const AutomorphicAction cut_action = action.restricted(cut, tol);
  const StateFunctional cut_state(cut.algebra, hermitian_part(q.adjoint() * f.algebra_density() * q), tol);
  const GnsData g = gns_construct(cut_state, tol);
  const auto unitaries = covariant_unitaries(g, cut_action, tol);
  out.gns_dim = g.hilbert_dim;

  std::vector<Matrix> ops = g.rep_basis;
  ops.insert(ops.end(), unitaries.begin(), unitaries.end());
  const OperatorAlgebra comm = commutant_of(ops, g.hilbert_dim, tol);
  out.commutant_dim = comm.dim();
  out.ergodic = comm.dim() == 1;
  if (out.ergodic) return out;

  out.gns_witness = canonical_nontrivial_projection(comm, tol);
  if (!out.gns_witness) throw Error(ErrorCode::Internal, "nontrivial commutant without a nontrivial projection");
  const StateSplit cut_split = decompose_by_commutant_projection(g, unitaries, *out.gns_witness, tol);
  const auto lift = [&](const StateFunctional& s) {
    return StateFunctional(f.algebra(), hermitian_part(q * s.density() * q.adjoint()), tol);
  };
  out.split = StateSplit{cut_split.lambda, lift(cut_split.part), lift(cut_split.complement)};
  return out;
}

namespace {

struct Orbit {
  std::vector<std::int64_t> elements;
  std::vector<Matrix> unitaries;
};

Orbit search_window(const AutomorphicAction& action, std::size_t max_orbit) {
  Orbit o;
  if (action.is_finite()) {
    for (std::size_t k = 0; k < action.count(); ++k) {
      o.elements.push_back(static_cast<std::int64_t>(k));
      o.unitaries.push_back(action.unitaries()[k]);
    }
    return o;
  }
  Matrix p = Matrix::identity(action.algebra().ambient_dim());
  for (std::size_t k = 0; k < 8 * max_orbit; ++k) {
    o.elements.push_back(static_cast<std::int64_t>(k));
    o.unitaries.push_back(p);
    p = action.unitaries()[0] * p;
  }
  return o;
}

// Clique of size k in the orthogonality graph that contains vertex 0.
std::optional<std::vector<std::size_t>> orthogonal_clique(const std::vector<std::vector<bool>>& orth, std::size_t k) {
  std::vector<std::size_t> chosen{0};
  std::function<bool(std::size_t)> extend = [&](std::size_t next) {
    if (chosen.size() == k) return true;
    for (std::size_t v = next; v < orth.size(); ++v) {
      if (!std::all_of(chosen.begin(), chosen.end(), [&](std::size_t c) { return orth[c][v]; })) continue;
      chosen.push_back(v);
      if (extend(v + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (extend(1)) return chosen;
  return std::nullopt;
}

}  // namespace

namespace {

std::size_t family_size(const AutomorphicAction& action, std::size_t max_orbit) {
  return action.is_finite() ? std::min(max_orbit, action.count()) : max_orbit;
}

std::optional<WanderingFamily> family_in_window(const Orbit& window, const Matrix& e, std::size_t k,
                                                const Tolerance& tol) {
  std::vector<Matrix> translates;
  for (const auto& w : window.unitaries) translates.push_back(w * e * w.adjoint());
  const std::size_t m = translates.size();
  std::vector<std::vector<bool>> orth(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      orth[i][j] = orth[j][i] = max_abs(translates[i] * translates[j]) <= 10 * tol.atol;
  const auto clique = orthogonal_clique(orth, k);
  if (!clique) return std::nullopt;
  WanderingFamily out{e, {}, {}};
  for (std::size_t v : *clique) {
    out.elements.push_back(window.elements[v]);
    out.translates.push_back(translates[v]);
  }
  return out;
}

}  // namespace

std::optional<WanderingFamily> wandering_family_for(const AutomorphicAction& action, const Matrix& e,
                                                    std::size_t max_orbit, const Tolerance& tol) {
  require_projection_in(action.algebra(), e, tol, "wandering_family_for");
  const std::size_t k = family_size(action, max_orbit);
  if (k < 2 || max_abs(e) <= tol.atol) return std::nullopt;
  return family_in_window(search_window(action, max_orbit), e, k, tol);
}

std::optional<WanderingFamily> wandering_projection_search(const AutomorphicAction& action,
                                                           const WanderingSearchOptions& options,
                                                           const Tolerance& tol) {
  const std::size_t k = family_size(action, options.max_orbit);
  if (k < 2) return std::nullopt;
  const Orbit window = search_window(action, options.max_orbit);

  const auto& a = action.algebra();
  const auto cd = center_and_blocks(a, tol, options.seed);
  Rng rng(options.seed);
  const Matrix unit = Matrix::identity(a.ambient_dim());
  std::vector<Matrix> candidates;
  for (const auto& m : minimal_projection_decomposition(a, cd, unit, rng, tol)) candidates.push_back(m.projection);
  for (std::size_t s = 0; s < options.random_samples; ++s) {
    const auto ms = minimal_projection_decomposition(a, cd, unit, rng, tol);
    candidates.push_back(ms[rng.below(ms.size())].projection);
  }
  for (const auto& e : candidates)
    if (auto family = family_in_window(window, e, k, tol)) return family;
  return std::nullopt;
}

bool has_weakly_null_orbit(const AutomorphicAction& action, const Matrix& e, std::size_t max_orbit,
                           const Tolerance& tol) {
  for (const auto& w : search_window(action, max_orbit).unitaries)
    if (frobenius_norm(w * e * w.adjoint()) <= tol.atol) return true;
  return false;
}

}  // namespace ncerg
