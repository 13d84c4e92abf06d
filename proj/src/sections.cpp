#include "ncerg/sections.hpp"

#include "ncerg/error.hpp"

namespace ncerg {

std::size_t LatticePatch::site_count() const { return group().size(); }

SectionsAlgebra build_sections_algebra(const LatticePatch& patch, const FibreSpec& fibre, std::size_t cap) {
  if (patch.orders.empty()) throw Error(ErrorCode::InvalidArgument, "lattice needs at least one dimension");
  for (std::size_t m : patch.orders)
    if (m == 0) throw Error(ErrorCode::InvalidArgument, "lattice orders must be positive");
  if (fibre.fibre_dim == 0) throw Error(ErrorCode::InvalidArgument, "fibre dimension must be positive");
  const std::size_t sites = patch.site_count();
  const std::size_t n = fibre.fibre_dim;
  if (sites * n > cap)
    throw Error(ErrorCode::DimensionOverflow, "sections space has dimension " + std::to_string(sites * n) +
                                                  ", above the cap " + std::to_string(cap));
  const std::vector<BlockSpec> blocks(sites, BlockSpec{n, 1});
  SectionsAlgebra sa{patch, n, block_algebra(blocks), {}};
  for (std::size_t x = 0; x < sites; ++x) {
    Matrix z(sites * n, sites * n);
    z.set_block(x * n, x * n, Matrix::identity(n));
    sa.site_projections.push_back(std::move(z));
  }
  return sa;
}

AutomorphicAction translation_action(const SectionsAlgebra& sa, const FibreSpec& fibre, const Tolerance& tol) {
  const FiniteAbelianGroup grp = sa.patch.group();
  const std::size_t n = sa.fibre_dim;
  const std::size_t sites = grp.size();
  const std::size_t dim = sites * n;
  if (fibre.fibre_dim != n) throw Error(ErrorCode::DimensionMismatch, "fibre dimension differs from the algebra's");
  if (!fibre.twist.empty() && fibre.twist.size() != sites)
    throw Error(ErrorCode::DimensionMismatch, "twist needs one unitary per site");
  Matrix twist = Matrix::identity(dim);
  for (std::size_t x = 0; x < fibre.twist.size(); ++x) {
    const Matrix& u = fibre.twist[x];
    if (u.rows() != n || u.cols() != n) throw Error(ErrorCode::DimensionMismatch, "twist unitary has wrong size");
    if (!is_unitary(u, tol.atol)) throw Error(ErrorCode::InvalidArgument, "twist is not unitary");
    twist.set_block(x * n, x * n, u);
  }
  auto translation = [&](std::size_t t) {
    Matrix p(dim, dim);
    for (std::size_t x = 0; x < sites; ++x) p.set_block(grp.add(x, t) * n, x * n, Matrix::identity(n));
    return p;
  };

  const std::vector<std::size_t> orders = grp.cyclic_orders();
  std::vector<Matrix> generator_unitaries;
  for (std::size_t g : grp.generators()) generator_unitaries.push_back(translation(g) * twist);
  std::vector<Matrix> unitaries;
  for (std::size_t t = 0; t < sites; ++t) {
    const auto multi = grp.element(t);
    Matrix w = Matrix::identity(dim);
    std::size_t gen = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (orders[i] == 1) continue;
      for (std::size_t k = 0; k < multi[i]; ++k) w = generator_unitaries[gen] * w;
      ++gen;
    }
    unitaries.push_back(std::move(w));
  }
  try {
    return AutomorphicAction::from_group(sa.algebra, grp, std::move(unitaries), tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidArgument) throw;
    throw Error(ErrorCode::TwistIncompatible, std::string("twisted translations are not a group action: ") + e.what());
  }
}

}  // namespace ncerg
