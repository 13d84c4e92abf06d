#include "ncerg/crossed.hpp"

#include <algorithm>
#include <cmath>

#include "ncerg/error.hpp"

namespace ncerg {

Matrix CrossedProduct::embed(const Matrix& a) const {
  if (a.rows() != base_dim || a.cols() != base_dim)
    throw Error(ErrorCode::DimensionMismatch, "embed: operator is not on the base space");
  Matrix out(space_dim, space_dim);
  for (std::size_t g = 0; g < action.count(); ++g) out.set_block(g * base_dim, g * base_dim, action.apply(g, a));
  return out;
}

Matrix CrossedProduct::fiber_block(const Matrix& b, std::size_t s, std::size_t t) const {
  return b.block(s * base_dim, t * base_dim, base_dim, base_dim);
}

CrossedProduct build_crossed_product(const AutomorphicAction& action, std::size_t cap, const Tolerance& tol) {
  tol.validate();
  if (!action.is_finite()) throw Error(ErrorCode::InvalidArgument, "crossed products need a finite group");
  const FiniteAbelianGroup& grp = action.group();
  const std::size_t n = action.algebra().ambient_dim();
  const std::size_t order = grp.size();
  if (n * order > cap)
    throw Error(ErrorCode::DimensionOverflow, "crossed product space has dimension " + std::to_string(n * order) +
                                                  ", above the cap " + std::to_string(cap));
  CrossedProduct cp{action, n, n * order, {}, {}, OperatorAlgebra(MatrixSpan(n * order))};
  const Matrix id = Matrix::identity(n);
  for (std::size_t h = 0; h < order; ++h) {
    Matrix u(cp.space_dim, cp.space_dim);
    for (std::size_t g = 0; g < order; ++g) u.set_block(grp.add(g, grp.inverse(h)) * n, g * n, id);
    cp.shift_unitaries.push_back(std::move(u));
    Matrix e(cp.space_dim, cp.space_dim);
    e.set_block(h * n, h * n, id);
    cp.fiber_projections.push_back(std::move(e));
  }

  // Covariance makes span{U_h Φ(A)} closed under products and adjoints, and
  // these elements are orthogonal with norm^2 = |T| |A|^2.
  const Complex scale(1.0 / std::sqrt(static_cast<double>(order)));
  std::vector<Matrix> embedded;
  for (const auto& b : action.algebra().basis()) embedded.push_back(cp.embed(b));
  std::vector<Matrix> basis;
  basis.reserve(order * embedded.size());
  for (std::size_t h = 0; h < order; ++h)
    for (const auto& phi : embedded) basis.push_back(cp.shift_unitaries[h] * phi * scale);

  std::vector<Matrix> generators;
  for (std::size_t g : grp.generators()) generators.push_back(cp.shift_unitaries[g]);
  for (const auto& a : action.algebra().generators()) generators.push_back(cp.embed(a));
  cp.algebra = OperatorAlgebra(MatrixSpan::from_orthonormal(cp.space_dim, std::move(basis)), std::move(generators));
  return cp;
}

Matrix gamma_expectation(const CrossedProduct& cp, const Matrix& b, const Tolerance& tol) {
  if (b.rows() != cp.space_dim || b.cols() != cp.space_dim)
    throw Error(ErrorCode::DimensionMismatch, "gamma_expectation: operator is not on the crossed product space");
  if (!contains(cp.algebra, b, tol)) throw Error(ErrorCode::NotInAlgebra, "gamma_expectation: not in the crossed algebra");
  return cp.fiber_block(b, 0, 0);
}

std::vector<Matrix> fourier_coefficients(const CrossedProduct& cp, const Matrix& b) {
  std::vector<Matrix> d;
  const auto& grp = cp.group();
  for (std::size_t k = 0; k < grp.size(); ++k) d.push_back(cp.action.apply(grp.inverse(k), cp.fiber_block(b, 0, k)));
  return d;
}

double fourier_residual(const CrossedProduct& cp, const Matrix& b) {
  const auto d = fourier_coefficients(cp, b);
  const auto& grp = cp.group();
  double worst = 0.0;
  for (std::size_t s = 0; s < grp.size(); ++s)
    for (std::size_t t = 0; t < grp.size(); ++t) {
      const std::size_t k = grp.add(grp.inverse(s), t);
      const Matrix lhs = cp.fiber_projections[s] * b * cp.fiber_projections[t];
      const Matrix rhs = cp.fiber_projections[s] * cp.shift_unitaries[k] * cp.embed(d[k]) * cp.fiber_projections[t];
      worst = std::max(worst, max_abs_diff(lhs, rhs));
    }
  return worst;
}

MvnTypeResult murray_von_neumann_type(const OperatorAlgebra& a, const Tolerance& tol) {
  MvnTypeResult r;
  r.trace = invariant_trace(AutomorphicAction::trivial(a), tol);
  for (const auto& bd : r.trace.blocks.block_dims) r.factors.push_back({bd.size, bd.multiplicity});
  if (!r.trace.faithful()) throw Error(ErrorCode::Internal, "canonical trace is not faithful");
  return r;
}

std::string factor_type_label(const FactorType& f) { return "I_" + std::to_string(f.size); }

TypeConsistencyReport type_consistency(const AutomorphicAction& action, std::size_t cap, const Tolerance& tol) {
  TypeConsistencyReport r;
  r.t_type = classify_t_type(action, tol);
  const CrossedProduct cp = build_crossed_product(action, cap, tol);
  r.crossed_dim = cp.algebra.dim();
  r.crossed_type = murray_von_neumann_type(cp.algebra, tol);
  if (r.t_type.type == TType::Finite) {
    const Matrix phi_id = cp.embed(Matrix::identity(cp.base_dim));
    r.embedded_identity = is_t_finite(phi_id, AutomorphicAction::trivial(cp.algebra), tol);
  } else {
    r.embedded_identity.finite = false;
  }
  r.consistent = r.t_type.type != TType::PurelyInfinite && !r.crossed_type.has_type_iii &&
                 r.embedded_identity.finite && r.crossed_type.trace.faithful();
  return r;
}

AutomorphicAction product_action(const AutomorphicAction& first, const AutomorphicAction& second,
                                 const Tolerance& tol) {
  if (!first.is_finite() || !second.is_finite())
    throw Error(ErrorCode::InvalidArgument, "product_action needs finite groups");
  const std::size_t n1 = first.algebra().ambient_dim();
  const std::size_t n2 = second.algebra().ambient_dim();
  std::vector<Matrix> basis, gens;
  for (const auto& a : first.algebra().basis())
    for (const auto& b : second.algebra().basis()) basis.push_back(kron(a, b));
  for (const auto& a : first.algebra().generators()) gens.push_back(kron(a, Matrix::identity(n2)));
  for (const auto& b : second.algebra().generators()) gens.push_back(kron(Matrix::identity(n1), b));
  OperatorAlgebra algebra(MatrixSpan::from_orthonormal(n1 * n2, std::move(basis)), std::move(gens));

  std::vector<std::size_t> orders = first.group().cyclic_orders();
  const auto& more = second.group().cyclic_orders();
  orders.insert(orders.end(), more.begin(), more.end());
  std::vector<Matrix> unitaries;
  for (const auto& wg : first.unitaries())
    for (const auto& wh : second.unitaries()) unitaries.push_back(kron(wg, wh));
  return AutomorphicAction::from_group(std::move(algebra), FiniteAbelianGroup(std::move(orders)),
                                       std::move(unitaries), tol);
}

TensorIsomorphismReport tensor_crossed_isomorphism(const AutomorphicAction& first, const AutomorphicAction& second,
                                                   std::size_t cap, const Tolerance& tol) {
  if (!first.is_finite() || !second.is_finite())
    throw Error(ErrorCode::InvalidArgument, "tensor_crossed_isomorphism needs finite groups");
  const std::size_t n1 = first.algebra().ambient_dim(), n2 = second.algebra().ambient_dim();
  const std::size_t o1 = first.count(), o2 = second.count();
  const std::size_t total = n1 * n2 * o1 * o2;
  if (total > cap)
    throw Error(ErrorCode::DimensionOverflow, "product crossed space has dimension " + std::to_string(total) +
                                                  ", above the cap " + std::to_string(cap));
  const CrossedProduct cp1 = build_crossed_product(first, cap, tol);
  const CrossedProduct cp2 = build_crossed_product(second, cap, tol);
  TensorIsomorphismReport r{Matrix(total, total), build_crossed_product(product_action(first, second, tol), cap, tol)};

  // Source index (g n1 + x) (o2 n2) + (h n2 + y); target ((g o2 + h) n1 + x) n2 + y.
  for (std::size_t g = 0; g < o1; ++g)
    for (std::size_t x = 0; x < n1; ++x)
      for (std::size_t h = 0; h < o2; ++h)
        for (std::size_t y = 0; y < n2; ++y) {
          const std::size_t src = (g * n1 + x) * (o2 * n2) + h * n2 + y;
          const std::size_t dst = ((g * o2 + h) * n1 + x) * n2 + y;
          r.reorder(dst, src) = 1.0;
        }
  const Matrix& w = r.reorder;
  const Matrix wt = w.adjoint();
  auto conj = [&](const Matrix& x, const Matrix& y) { return w * kron(x, y) * wt; };

  for (std::size_t g = 0; g < o1; ++g)
    for (std::size_t h = 0; h < o2; ++h)
      r.shift_residual = std::max(
          r.shift_residual,
          max_abs_diff(conj(cp1.shift_unitaries[g], cp2.shift_unitaries[h]), r.product.shift_unitaries[g * o2 + h]));
  for (const auto& a : first.algebra().basis())
    for (const auto& b : second.algebra().basis())
      r.embed_residual =
          std::max(r.embed_residual, max_abs_diff(conj(cp1.embed(a), cp2.embed(b)), r.product.embed(kron(a, b))));

  r.generators_inside = true;
  for (const auto& x : cp1.algebra.generators())
    for (const auto& y : cp2.algebra.generators())
      r.generators_inside = r.generators_inside && contains(r.product.algebra, conj(x, y), tol);
  return r;
}

}  // namespace ncerg
