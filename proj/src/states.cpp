#include "ncerg/states.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ncerg/error.hpp"

namespace ncerg {

namespace {

void require_same_algebra(const OperatorAlgebra& a, const OperatorAlgebra& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim())
    throw Error(ErrorCode::DimensionMismatch, "state and action live on different algebras");
}

// Residual budget for identities evaluated through the GNS coordinates.
double gns_budget(const GnsData& g, const Tolerance& tol) { return 100 * tol.atol * g.condition * g.condition; }

}  // namespace

StateFunctional::StateFunctional(OperatorAlgebra algebra, Matrix density, const Tolerance& tol)
    : algebra_(std::move(algebra)), density_(std::move(density)) {
  const std::size_t n = algebra_.ambient_dim();
  if (density_.rows() != n || density_.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "density does not match the ambient dimension");
  if (!is_hermitian(density_, tol.atol)) throw Error(ErrorCode::NotHermitian, "density is not Hermitian");
  density_ = hermitian_part(density_);
  const auto eig = hermitian_eigendecomposition(density_, tol);
  if (!eig.values.empty() && eig.values.front() < -tol.rank_tol)
    throw Error(ErrorCode::NotPSD, "density has a negative eigenvalue");
  if (std::abs(density_.trace() - Complex(1.0)) > tol.atol * static_cast<double>(std::max<std::size_t>(n, 1)))
    throw Error(ErrorCode::InvalidArgument, "density does not have unit trace");
  algebra_density_ = hermitian_part(algebra_.project(density_));
}

Complex StateFunctional::operator()(const Matrix& a) const { return inner(density_, a); }

Vector StateFunctional::basis_values() const {
  Vector out;
  for (const auto& b : algebra_.basis()) out.push_back((*this)(b));
  return out;
}

bool StateFunctional::is_faithful(const Tolerance& tol) const {
  const auto eig = hermitian_eigendecomposition(algebra_density_, tol);
  return eig.values.front() > tol.rank_tol;
}

bool StateFunctional::is_invariant(const AutomorphicAction& action, const Tolerance& tol) const {
  require_same_algebra(algebra_, action.algebra());
  for (std::size_t k = 0; k < action.count(); ++k)
    if (max_abs_diff(action.apply_inverse(k, algebra_density_), algebra_density_) > tol.atol) return false;
  return true;
}

StateFunctional StateFunctional::composed_with(const AutomorphicAction& action, std::size_t k) const {
  require_same_algebra(algebra_, action.algebra());
  return StateFunctional(algebra_, action.apply_inverse(k, density_));
}

bool StateFunctional::same_as(const StateFunctional& other, const Tolerance& tol) const {
  return max_abs_diff(algebra_density_, other.algebra_density_) <= tol.atol;
}

StateFunctional state_from_basis_values(const OperatorAlgebra& algebra, const Vector& values, const Tolerance& tol) {
  if (values.size() != algebra.dim()) throw Error(ErrorCode::DimensionMismatch, "one value per basis element");
  Vector coords(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) coords[k] = std::conj(values[k]);
  return StateFunctional(algebra, hermitian_part(algebra.combine(coords)), tol);
}

StateFunctional tracial_state(const OperatorAlgebra& algebra) {
  const std::size_t n = algebra.ambient_dim();
  return StateFunctional(algebra, Matrix::identity(n) * (1.0 / static_cast<double>(n)));
}

Matrix support_of_state(const StateFunctional& f, const Tolerance& tol) {
  const Matrix e = support_projection_of_psd(f.algebra_density(), tol);
  if (!contains(f.algebra(), e, tol)) throw Error(ErrorCode::Internal, "support projection left the algebra");
  if (std::abs(f(e) - Complex(1.0)) > 100 * tol.atol)
    throw Error(ErrorCode::Internal, "support projection does not carry the state");
  return e;
}

Vector GnsData::eta(const Matrix& a) const {
  const Vector coords = state.algebra().coordinates(a);
  return embed * std::span<const Complex>(coords);
}

Matrix GnsData::pi(const Matrix& x) const {
  Matrix out(hilbert_dim, hilbert_dim);
  for (std::size_t i = 0; i < hilbert_dim; ++i) out.set_column(i, eta(x * preimages[i]));
  return out;
}

GnsData gns_construct(const StateFunctional& f, const Tolerance& tol) {
  const auto& a = f.algebra();
  const auto& basis = a.basis();
  const std::size_t d = basis.size();
  const Matrix& sigma = f.algebra_density();

  Matrix gram(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    const Matrix bs = basis[k] * sigma;
    for (std::size_t j = 0; j < d; ++j) gram(j, k) = inner(basis[j], bs);
  }
  const auto eig = hermitian_eigendecomposition(hermitian_part(gram), tol);

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < d; ++i)
    if (eig.values[i] > tol.rank_tol) kept.push_back(i);
  const std::size_t r = kept.size();

  GnsData g{f, r, Matrix(r, d), Matrix(d, r), {}, {}, {}, r == d, 1.0};
  for (std::size_t c = 0; c < r; ++c) {
    const double lam = eig.values[kept[c]];
    const double s = std::sqrt(lam);
    for (std::size_t j = 0; j < d; ++j) {
      g.embed(c, j) = std::conj(eig.vectors(j, kept[c])) * s;
      g.lift(j, c) = eig.vectors(j, kept[c]) / s;
    }
  }
  if (r > 0) g.condition = std::sqrt(eig.values[kept.back()] / eig.values[kept.front()]);
  for (std::size_t i = 0; i < r; ++i) g.preimages.push_back(a.combine(g.lift.column(i)));
  g.cyclic_vector = g.eta(Matrix::identity(a.ambient_dim()));
  for (const auto& b : basis) g.rep_basis.push_back(g.pi(b));
  return g;
}

Matrix ModularData::conjugate_by_j(const Matrix& x) const { return j_conj * x.conj() * j_conj.conj(); }

ModularData modular_data(const GnsData& g, const Tolerance& tol) {
  if (!g.faithful) throw Error(ErrorCode::NotFaithful, "modular data needs a faithful state; cut down to the support");
  Matrix k(g.hilbert_dim, g.hilbert_dim);
  for (std::size_t i = 0; i < g.hilbert_dim; ++i) k.set_column(i, g.eta(g.preimages[i].adjoint()));
  const auto polar = antilinear_polar_decomposition(k, tol);
  return ModularData{k, polar.j, polar.delta_half * polar.delta_half, polar.delta_half};
}

std::vector<Matrix> covariant_unitaries(const GnsData& g, const AutomorphicAction& action, const Tolerance& tol) {
  if (!g.state.is_invariant(action, tol)) throw Error(ErrorCode::NotInvariant, "state is not invariant under the action");
  const double budget = gns_budget(g, tol);
  std::optional<ModularData> modular;
  if (g.faithful) modular = modular_data(g, tol);

  std::vector<Matrix> out;
  for (std::size_t k = 0; k < action.count(); ++k) {
    Matrix u(g.hilbert_dim, g.hilbert_dim);
    for (std::size_t i = 0; i < g.hilbert_dim; ++i) u.set_column(i, g.eta(action.apply(k, g.preimages[i])));
    if (!is_unitary(u, budget)) throw Error(ErrorCode::Internal, "implementing operator is not unitary");
    if (modular && max_abs_diff(modular->j_conj * u.conj(), u * modular->j_conj) > budget)
      throw Error(ErrorCode::Internal, "implementing unitary does not commute with J");
    out.push_back(std::move(u));
  }
  return out;
}

StateSplit decompose_by_commutant_projection(const GnsData& g, const std::vector<Matrix>& unitaries, const Matrix& e,
                                             const Tolerance& tol) {
  const std::size_t r = g.hilbert_dim;
  if (e.rows() != r || e.cols() != r) throw Error(ErrorCode::DimensionMismatch, "projection is not on H(f)");
  const double budget = gns_budget(g, tol);
  if (!is_projection(e, budget)) throw Error(ErrorCode::InvalidArgument, "E is not a projection");
  for (const auto& p : g.rep_basis)
    if (max_abs(commutator(e, p)) > budget) throw Error(ErrorCode::InvalidArgument, "E does not commute with π");
  for (const auto& u : unitaries)
    if (max_abs(commutator(e, u)) > budget)
      throw Error(ErrorCode::InvalidArgument, "E does not commute with the unitaries");

  const Vector& xi = g.cyclic_vector;
  const double lambda = dot(xi, e * std::span<const Complex>(xi)).real();
  if (lambda <= tol.atol || lambda >= 1.0 - tol.atol)
    throw Error(ErrorCode::TrivialProjection, "projection carries all or none of the state");

  const Matrix perp = Matrix::identity(r) - e;
  Vector part, complement;
  for (const auto& p : g.rep_basis) {
    const Vector pxi = p * std::span<const Complex>(xi);
    part.push_back(dot(xi, e * std::span<const Complex>(pxi)) / lambda);
    complement.push_back(dot(xi, perp * std::span<const Complex>(pxi)) / (1.0 - lambda));
  }
  const auto& a = g.state.algebra();
  return StateSplit{lambda, state_from_basis_values(a, part, tol), state_from_basis_values(a, complement, tol)};
}

Matrix CovariantRepresentation::pi(const Matrix& x) const {
  Matrix out(hilbert_dim, hilbert_dim);
  for (std::size_t i = 0; i < summands.size(); ++i) out.set_block(offsets[i], offsets[i], summands[i].pi(x));
  return out;
}

CovariantRepresentation covariant_direct_sum(const std::vector<StateFunctional>& family,
                                             const AutomorphicAction& action, const Tolerance& tol) {
  if (family.empty()) throw Error(ErrorCode::InvalidArgument, "empty state family");
  for (const auto& f : family) require_same_algebra(f.algebra(), action.algebra());
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (family[i].same_as(family[j], tol)) throw Error(ErrorCode::InvalidArgument, "duplicate state in family");

  CovariantRepresentation rep;
  for (const auto& f : family) {
    rep.offsets.push_back(rep.hilbert_dim);
    rep.summands.push_back(gns_construct(f, tol));
    rep.hilbert_dim += rep.summands.back().hilbert_dim;
  }

  for (std::size_t k = 0; k < action.count(); ++k) {
    std::vector<std::size_t> perm;
    Matrix u(rep.hilbert_dim, rep.hilbert_dim);
    for (std::size_t i = 0; i < family.size(); ++i) {
      const StateFunctional moved = family[i].composed_with(action, k);
      std::size_t j = 0;
      while (j < family.size() && !family[j].same_as(moved, tol)) ++j;
      if (j == family.size())
        throw Error(ErrorCode::FamilyNotClosed, "family is not closed under the action '" + action.label(k) + "'");
      perm.push_back(j);
      // η_j(A) ↦ η_i(α_k(A)) is isometric because f_j = f_i∘α_k.
      const GnsData& src = rep.summands[j];
      const GnsData& dst = rep.summands[i];
      Matrix v(dst.hilbert_dim, src.hilbert_dim);
      for (std::size_t c = 0; c < src.hilbert_dim; ++c) v.set_column(c, dst.eta(action.apply(k, src.preimages[c])));
      u.set_block(rep.offsets[i], rep.offsets[j], v);
    }
    rep.unitaries.push_back(std::move(u));
    rep.permutations.push_back(std::move(perm));
  }

  MatrixSpan image(rep.hilbert_dim);
  for (const auto& b : action.algebra().basis()) {
    rep.rep_basis.push_back(rep.pi(b));
    image.try_add(rep.rep_basis.back(), tol);
  }
  rep.faithful = image.size() == action.algebra().dim();
  return rep;
}

double partition_entropy(const StateFunctional& f, const std::vector<Matrix>& partition) {
  double h = 0.0;
  for (const auto& e : partition) {
    const double p = f(e).real();
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace ncerg
