#include "ncerg/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncerg/error.hpp"

namespace ncerg {

namespace {

std::vector<Matrix> with_adjoints(std::span<const Matrix> ops, double atol) {
  std::vector<Matrix> out;
  out.reserve(2 * ops.size());
  for (const auto& op : ops) {
    out.push_back(op);
    if (!is_hermitian(op, atol)) out.push_back(op.adjoint());
  }
  return out;
}

Matrix unvec(std::span<const Complex> v, std::size_t n) { return Matrix(n, n, std::vector<Complex>(v.begin(), v.end())); }

std::size_t rounded_rank(const Matrix& projection) {
  return static_cast<std::size_t>(std::llround(projection.trace().real()));
}

std::size_t leading_index(const Matrix& p) {
  for (std::size_t i = 0; i < p.rows(); ++i)
    if (std::abs(p(i, i)) > 0.5 / static_cast<double>(p.rows() + 1)) return i;
  return p.rows();
}

Matrix random_hermitian_in(const OperatorAlgebra& a, Rng& rng) {
  Vector c(a.dim());
  for (auto& z : c) z = rng.complex_normal();
  const Matrix x = a.combine(c);
  return x + x.adjoint();
}

}  // namespace

OperatorAlgebra::OperatorAlgebra(MatrixSpan span, std::vector<Matrix> generators)
    : span_(std::move(span)), generators_(std::move(generators)) {}

void OperatorAlgebra::validate(const Tolerance& tol) const {
  const Matrix id = Matrix::identity(ambient_dim());
  if (span_.residual(id) > tol.atol) throw Error(ErrorCode::Internal, "algebra does not contain the identity");
  const auto& b = basis();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Matrix adj = b[i].adjoint();
    if (span_.residual(adj) > tol.atol * (1.0 + max_abs(adj)))
      throw Error(ErrorCode::Internal, "algebra is not *-closed");
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Matrix prod = b[i] * b[j];
      if (span_.residual(prod) > tol.atol * (1.0 + max_abs(prod)))
        throw Error(ErrorCode::Internal, "algebra is not multiplicatively closed");
    }
  }
}

OperatorAlgebra generate_algebra(std::span<const Matrix> generators, std::size_t ambient_dim, const Tolerance& tol) {
  if (ambient_dim == 0) throw Error(ErrorCode::DimensionMismatch, "ambient dimension must be positive");
  for (const auto& g : generators) {
    if (g.rows() != ambient_dim || g.cols() != ambient_dim)
      throw Error(ErrorCode::DimensionMismatch, "generator is not " + std::to_string(ambient_dim) + "x" +
                                                    std::to_string(ambient_dim));
  }
  const std::vector<Matrix> gens = with_adjoints(generators, tol.atol);
  MatrixSpan span(ambient_dim);
  span.try_add(Matrix::identity(ambient_dim), tol);

  // Breadth-first closure of span{I} under left multiplication by the
  // generators; level k holds the directions first reached by words of length k.
  std::size_t level_begin = 0;
  std::size_t levels = 0;
  const std::size_t cap = ambient_dim * ambient_dim + 1;
  while (level_begin < span.size()) {
    if (++levels > cap) throw Error(ErrorCode::Internal, "algebra closure did not stabilize within n^2 steps");
    const std::size_t level_end = span.size();
    for (std::size_t k = level_begin; k < level_end; ++k) {
      for (const auto& g : gens) {
        const Matrix candidate = g * span.basis()[k];
        span.try_add(candidate, tol);
      }
    }
    level_begin = level_end;
  }
  return OperatorAlgebra(std::move(span), std::vector<Matrix>(generators.begin(), generators.end()));
}

OperatorAlgebra block_algebra(std::span<const BlockSpec> blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) {
    if (b.dim == 0 || b.multiplicity == 0) throw Error(ErrorCode::InvalidArgument, "block sizes must be positive");
    n += b.dim * b.multiplicity;
  }
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "block algebra needs at least one block");
  MatrixSpan span(n);
  std::size_t offset = 0;
  const Tolerance tol;
  for (const auto& b : blocks) {
    const Matrix id_m = Matrix::identity(b.multiplicity);
    for (std::size_t i = 0; i < b.dim; ++i)
      for (std::size_t j = 0; j < b.dim; ++j) {
        Matrix unit(n, n);
        unit.set_block(offset, offset, kron(Matrix::unit(b.dim, i, j), id_m));
        span.try_add(unit, tol);
      }
    offset += b.dim * b.multiplicity;
  }
  return OperatorAlgebra(std::move(span));
}

OperatorAlgebra full_matrix_algebra(std::size_t n) {
  const BlockSpec b{n, 1};
  return block_algebra(std::span<const BlockSpec>(&b, 1));
}

OperatorAlgebra diagonal_algebra(std::size_t n) {
  std::vector<BlockSpec> blocks(n, BlockSpec{1, 1});
  return block_algebra(blocks);
}

OperatorAlgebra commutant_of(std::span<const Matrix> ops, std::size_t n, const Tolerance& tol) {
  for (const auto& op : ops)
    if (op.rows() != n || op.cols() != n) throw Error(ErrorCode::DimensionMismatch, "commutant: operator size");
  const std::vector<Matrix> all = with_adjoints(ops, tol.atol);
  // With row-major vec, X -> XB - BX is L = I(x)B^T - B(x)I and
  // L*L = I(x)conj(B)B^T + B*B(x)I - B*(x)B^T - B(x)conj(B).
  Matrix left(n, n);   // sum B* B
  Matrix right(n, n);  // sum conj(B) B^T
  Matrix gram(n * n, n * n);
  for (const auto& b : all) {
    const Matrix bt = b.transpose();
    const Matrix bc = b.conj();
    const Matrix bh = b.adjoint();
    left += bh * b;
    right += bc * bt;
    gram -= kron(bh, bt);
    gram -= kron(b, bc);
  }
  gram += kron(Matrix::identity(n), right);
  gram += kron(left, Matrix::identity(n));
  MatrixSpan span(n);
  span.try_add(Matrix::identity(n), tol);
  for (const auto& v : gram_null_space(gram, tol)) span.try_add(unvec(v, n), tol);
  return OperatorAlgebra(std::move(span));
}

OperatorAlgebra commutant(const OperatorAlgebra& a, const Tolerance& tol) {
  return commutant_of(a.generators(), a.ambient_dim(), tol);
}

OperatorAlgebra center(const OperatorAlgebra& a, const Tolerance& tol) {
  const auto& basis = a.basis();
  const std::vector<Matrix> gens = with_adjoints(a.generators(), tol.atol);
  const std::size_t d = basis.size();
  // Z = sum c_k B_k is central iff sum c_k [B_k, G] = 0 for every generator G.
  Matrix gram(d, d);
  std::vector<Matrix> comm(d);
  for (const auto& g : gens) {
    for (std::size_t k = 0; k < d; ++k) comm[k] = commutator(basis[k], g);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t l = k; l < d; ++l) {
        const Complex v = inner(comm[k], comm[l]);
        gram(k, l) += v;
        if (l != k) gram(l, k) += std::conj(v);
      }
  }
  MatrixSpan span(a.ambient_dim());
  span.try_add(Matrix::identity(a.ambient_dim()), tol);
  for (const auto& v : gram_null_space(gram, tol)) span.try_add(a.combine(v), tol);
  return OperatorAlgebra(std::move(span));
}

bool contains(const OperatorAlgebra& a, const Matrix& x, const Tolerance& tol) {
  if (x.rows() != a.ambient_dim() || x.cols() != a.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "contains: matrix does not act on the ambient space");
  return a.span().residual(x) <= tol.atol * (1.0 + max_abs(x));
}

bool span_contains(const OperatorAlgebra& outer, const OperatorAlgebra& inner_alg, const Tolerance& tol) {
  for (const auto& b : inner_alg.basis())
    if (!contains(outer, b, tol)) return false;
  return true;
}

CentralDecomposition center_and_blocks(const OperatorAlgebra& a, const Tolerance& tol, std::uint64_t seed) {
  const std::size_t n = a.ambient_dim();
  const OperatorAlgebra z = center(a, tol);
  Rng rng(seed);
  const Matrix h = random_hermitian_in(z, rng);
  const auto eig = hermitian_eigendecomposition(h, tol);
  const double noise = tol.atol * std::max(1.0, max_abs(h));
  const auto clusters = cluster_sorted(eig.values, tol.rank_tol);
  for (const auto& [begin, end] : clusters)
    for (std::size_t k = begin + 1; k < end; ++k)
      if (eig.values[k] - eig.values[k - 1] > noise)
        throw Error(ErrorCode::ClusteringAmbiguous,
                    "central eigenvalues separated by " + std::to_string(eig.values[k] - eig.values[k - 1]));
  if (clusters.size() != z.dim())
    throw Error(ErrorCode::ClusteringAmbiguous, "random central element has a degenerate spectrum");

  CentralDecomposition out;
  out.center_dim = z.dim();
  for (const auto& [begin, end] : clusters) out.minimal_central_projections.push_back(
      eigenspace_projection(eig.vectors, begin, end));
  std::stable_sort(out.minimal_central_projections.begin(), out.minimal_central_projections.end(),
                   [](const Matrix& x, const Matrix& y) { return leading_index(x) < leading_index(y); });

  std::size_t total = 0;
  for (const auto& p : out.minimal_central_projections) {
    // dim(pA) from the rank of the Gram matrix of {p B_j}.
    const auto& basis = a.basis();
    std::vector<Matrix> cut;
    cut.reserve(basis.size());
    for (const auto& b : basis) cut.push_back(p * b);
    Matrix gram(basis.size(), basis.size());
    for (std::size_t i = 0; i < cut.size(); ++i)
      for (std::size_t j = i; j < cut.size(); ++j) {
        gram(i, j) = inner(cut[i], cut[j]);
        gram(j, i) = std::conj(gram(i, j));
      }
    const std::size_t block_dim = basis.size() - gram_null_space(gram, tol).size();
    const auto size = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(block_dim))));
    const std::size_t rank = rounded_rank(p);
    if (size * size != block_dim || size == 0 || rank % size != 0)
      throw Error(ErrorCode::Internal, "central block is not a full matrix block");
    out.block_dims.push_back({size, rank / size});
    total += block_dim;
  }
  if (total != a.dim()) throw Error(ErrorCode::Internal, "block dimensions do not add up to the algebra dimension");
  (void)n;
  return out;
}

std::optional<std::size_t> block_of(const CentralDecomposition& cd, const Matrix& x, const Tolerance& tol) {
  for (std::size_t k = 0; k < cd.minimal_central_projections.size(); ++k) {
    const auto& z = cd.minimal_central_projections[k];
    if (max_abs_diff(z * x, x) <= tol.atol * (1.0 + max_abs(x)) * 100.0) return k;
  }
  return std::nullopt;
}

std::vector<std::size_t> central_ranks(const CentralDecomposition& cd, const Matrix& projection) {
  std::vector<std::size_t> ranks;
  ranks.reserve(cd.minimal_central_projections.size());
  for (const auto& z : cd.minimal_central_projections) ranks.push_back(rounded_rank(z * projection));
  return ranks;
}

void require_projection_in(const OperatorAlgebra& a, const Matrix& p, const Tolerance& tol, const char* what) {
  if (p.rows() != a.ambient_dim() || p.cols() != a.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": wrong size");
  if (!is_projection(p, 100.0 * tol.atol)) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": not a projection");
  if (!contains(a, p, tol)) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": not in the algebra");
}

std::vector<MinimalProjection> minimal_projection_decomposition(const OperatorAlgebra& a,
                                                                const CentralDecomposition& cd,
                                                                const Matrix& projection, Rng& rng,
                                                                const Tolerance& tol) {
  std::vector<MinimalProjection> out;
  for (std::size_t k = 0; k < cd.minimal_central_projections.size(); ++k) {
    const Matrix p = cd.minimal_central_projections[k] * projection;
    const std::size_t rank = rounded_rank(p);
    if (rank == 0) continue;
    const std::size_t mult = cd.block_dims[k].multiplicity;
    const Matrix q = range_isometry(hermitian_part(p), tol);
    bool done = false;
    for (int attempt = 0; attempt < 16 && !done; ++attempt) {
      const Matrix h = hermitian_part(q.adjoint() * random_hermitian_in(a, rng) * q);
      const auto eig = hermitian_eigendecomposition(h, tol);
      const auto clusters = cluster_sorted(eig.values, tol.rank_tol);
      if (clusters.size() * mult != rank) continue;
      bool sizes_ok = true;
      for (const auto& [b, e] : clusters) sizes_ok = sizes_ok && (e - b == mult);
      if (!sizes_ok) continue;
      for (const auto& [b, e] : clusters)
        out.push_back({q * eigenspace_projection(eig.vectors, b, e) * q.adjoint(), k});
      done = true;
    }
    if (!done) throw Error(ErrorCode::Internal, "could not split a projection into minimal projections");
  }
  return out;
}

Matrix partial_isometry_between(const OperatorAlgebra& a, const Matrix& e, const Matrix& f, const Tolerance& tol) {
  Matrix best;
  double best_norm = -1.0;
  for (const auto& b : a.basis()) {
    Matrix x = f * b * e;
    const double nx = frobenius_norm(x);
    if (nx > best_norm) {
      best_norm = nx;
      best = std::move(x);
    }
  }
  const double rank = e.trace().real();
  if (best_norm <= tol.rank_tol || rank < 0.5)
    throw Error(ErrorCode::Internal, "projections do not lie in a common block");
  // best = gamma |a><b| (x) I_m, so |best|_F^2 = |gamma|^2 m.
  return best * (std::sqrt(rank) / best_norm);
}

MvnResult mvn_equivalent(const OperatorAlgebra& a, const Matrix& e, const Matrix& f, const Tolerance& tol,
                         std::uint64_t seed) {
  require_projection_in(a, e, tol, "mvn_equivalent E");
  require_projection_in(a, f, tol, "mvn_equivalent F");
  const CentralDecomposition cd = center_and_blocks(a, tol, seed);
  if (central_ranks(cd, e) != central_ranks(cd, f)) return {false, std::nullopt};
  if (max_abs_diff(e, f) <= tol.atol) return {true, e};

  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const auto es = minimal_projection_decomposition(a, cd, e, rng, tol);
  const auto fs = minimal_projection_decomposition(a, cd, f, rng, tol);
  Matrix v(a.ambient_dim(), a.ambient_dim());
  // Both lists are grouped by block in the same order with equal counts per block.
  for (std::size_t i = 0; i < es.size(); ++i) v += partial_isometry_between(a, es[i].projection, fs[i].projection, tol);
  if (max_abs_diff(v.adjoint() * v, e) > tol.atol || max_abs_diff(v * v.adjoint(), f) > tol.atol ||
      !contains(a, v, tol))
    throw Error(ErrorCode::Internal, "constructed partial isometry failed verification");
  return {true, v};
}

Cutdown cutdown(const OperatorAlgebra& a, const Matrix& e, const Tolerance& tol) {
  require_projection_in(a, e, tol, "cutdown");
  Matrix q = range_isometry(hermitian_part(e), tol);
  if (q.cols() == 0) throw Error(ErrorCode::InvalidArgument, "cutdown by the zero projection");
  const Matrix qh = q.adjoint();
  MatrixSpan span(q.cols());
  span.try_add(Matrix::identity(q.cols()), tol);
  for (const auto& b : a.basis()) span.try_add(qh * b * q, tol);
  return {OperatorAlgebra(std::move(span)), std::move(q)};
}

std::optional<Matrix> canonical_nontrivial_projection(const OperatorAlgebra& a, const Tolerance& tol) {
  if (a.dim() <= 1) return std::nullopt;
  const std::size_t n = a.ambient_dim();
  auto try_candidate = [&](const Matrix& y) -> std::optional<Matrix> {
    const Matrix x = hermitian_part(a.project(y));
    const Complex mean = x.trace() / static_cast<double>(n);
    if (max_abs_diff(x, Matrix::identity(n) * mean) <= tol.rank_tol) return std::nullopt;
    const auto eig = hermitian_eigendecomposition(x, tol);
    const auto clusters = cluster_sorted(eig.values, tol.rank_tol);
    const auto [begin, end] = clusters.back();
    return eigenspace_projection(eig.vectors, begin, end);
  };
  for (std::size_t i = 0; i < n; ++i)
    if (auto p = try_candidate(Matrix::unit(n, i, i))) return p;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (auto p = try_candidate(Matrix::unit(n, i, j) + Matrix::unit(n, j, i))) return p;
      if (auto p = try_candidate((Matrix::unit(n, i, j) - Matrix::unit(n, j, i)) * Complex(0.0, 1.0))) return p;
    }
  return std::nullopt;
}

}  // namespace ncerg
