#include "ncerg/action.hpp"

#include <utility>

#include "ncerg/error.hpp"

namespace ncerg {

AutomorphicAction::AutomorphicAction(OperatorAlgebra algebra, bool finite, std::optional<FiniteAbelianGroup> group,
                                     std::vector<Matrix> unitaries)
    : algebra_(std::move(algebra)), finite_(finite), group_(std::move(group)), unitaries_(std::move(unitaries)) {}

AutomorphicAction AutomorphicAction::from_group(OperatorAlgebra algebra, FiniteAbelianGroup group,
                                                std::vector<Matrix> unitaries, const Tolerance& tol) {
  if (unitaries.size() != group.size())
    throw Error(ErrorCode::InvalidArgument, "expected one unitary per group element");
  AutomorphicAction act(std::move(algebra), true, std::move(group), std::move(unitaries));
  act.validate(tol);
  return act;
}

AutomorphicAction AutomorphicAction::cyclic(OperatorAlgebra algebra, const Matrix& w, std::size_t order,
                                            const Tolerance& tol) {
  std::vector<Matrix> unitaries;
  Matrix p = Matrix::identity(algebra.ambient_dim());
  for (std::size_t k = 0; k < order; ++k) {
    unitaries.push_back(p);
    p = w * p;
  }
  return from_group(std::move(algebra), FiniteAbelianGroup({order}), std::move(unitaries), tol);
}

AutomorphicAction AutomorphicAction::from_automorphism(OperatorAlgebra algebra, Matrix generator,
                                                       const Tolerance& tol) {
  AutomorphicAction act(std::move(algebra), false, std::nullopt, {std::move(generator)});
  act.validate(tol);
  return act;
}

AutomorphicAction AutomorphicAction::trivial(OperatorAlgebra algebra) {
  const std::size_t n = algebra.ambient_dim();
  return AutomorphicAction(std::move(algebra), true, FiniteAbelianGroup(), {Matrix::identity(n)});
}

const FiniteAbelianGroup& AutomorphicAction::group() const {
  if (!group_) throw Error(ErrorCode::InvalidArgument, "a Z-action has no finite group");
  return *group_;
}

std::string AutomorphicAction::label(std::size_t k) const { return finite_ ? group_->key(k) : "1"; }

Matrix AutomorphicAction::apply(std::size_t k, const Matrix& x) const {
  const Matrix& w = unitaries_.at(k);
  return w * x * w.adjoint();
}

Matrix AutomorphicAction::apply_inverse(std::size_t k, const Matrix& x) const {
  const Matrix& w = unitaries_.at(k);
  return w.adjoint() * x * w;
}

Matrix AutomorphicAction::generator_power(std::int64_t p) const {
  if (finite_) throw Error(ErrorCode::InvalidArgument, "generator_power applies to Z-actions");
  const Matrix base = p >= 0 ? unitaries_[0] : unitaries_[0].adjoint();
  Matrix out = Matrix::identity(algebra_.ambient_dim());
  for (std::int64_t k = 0; k < (p >= 0 ? p : -p); ++k) out = base * out;
  return out;
}

AutomorphicAction AutomorphicAction::restricted(const Cutdown& cut, const Tolerance& tol) const {
  const Matrix& q = cut.isometry;
  std::vector<Matrix> ws;
  for (const auto& w : unitaries_) {
    const Matrix wq = q.adjoint() * w * q;
    if (!is_unitary(wq, 100 * tol.atol))
      throw Error(ErrorCode::SupportNotInvariant, "action does not fix the cut-down projection");
    ws.push_back(wq);
  }
  AutomorphicAction act(cut.algebra, finite_, group_, std::move(ws));
  act.validate(tol);
  return act;
}

void AutomorphicAction::validate(const Tolerance& tol) const {
  const std::size_t n = algebra_.ambient_dim();
  const double utol = 100 * tol.atol;
  for (std::size_t k = 0; k < unitaries_.size(); ++k) {
    const Matrix& w = unitaries_[k];
    if (w.rows() != n || w.cols() != n)
      throw Error(ErrorCode::DimensionMismatch, "implementing unitary has the wrong size");
    if (!is_unitary(w, utol)) throw Error(ErrorCode::InvalidArgument, "implementing matrix is not unitary");
    for (const auto& b : algebra_.basis())
      if (!contains(algebra_, apply(k, b), tol))
        throw Error(ErrorCode::InvalidArgument, "automorphism '" + label(k) + "' does not preserve the algebra");
  }
  if (!finite_) return;
  const auto& g = *group_;
  for (const auto& b : algebra_.basis())
    if (max_abs_diff(apply(0, b), b) > utol)
      throw Error(ErrorCode::InvalidArgument, "identity element does not act trivially");
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t y = 0; y < g.size(); ++y) {
      const std::size_t xy = g.add(x, y);
      for (const auto& b : algebra_.basis())
        if (max_abs_diff(apply(x, apply(y, b)), apply(xy, b)) > utol)
          throw Error(ErrorCode::InvalidArgument,
                      "action is not a homomorphism at (" + g.key(x) + ") + (" + g.key(y) + ")");
    }
}

}  // namespace ncerg
