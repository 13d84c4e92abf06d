#include "ncerg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ncerg/error.hpp"

namespace ncerg {

void Tolerance::validate() const {
  if (!(atol > 0.0 && atol < rank_tol && rank_tol < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must satisfy 0 < atol < rank_tol < 1");
  }
}

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_mass(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One Jacobi rotation annihilating a(p, q), p < q. Entries below `skip` are
// left alone; they cannot keep the off-diagonal mass above the threshold.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q, double skip) {
  const std::size_t n = a.rows();
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r <= skip || r < 1e-300) return;
  const Complex phase = apq / r;  // e^{i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * r);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Complex em = std::conj(phase);  // e^{-i phi}
  const Complex s_em = s * em, c_em = c * em, s_ph = s * phase, c_ph = c * phase;

  // A <- A W with W_pp = c, W_pq = s, W_qp = -s e^{-i phi}, W_qq = c e^{-i phi}.
  for (std::size_t i = 0; i < n; ++i) {
    const Complex aip = a(i, p);
    const Complex aiq = a(i, q);
    a(i, p) = c * aip - s_em * aiq;
    a(i, q) = s * aip + c_em * aiq;
  }
  // A <- W* A.
  for (std::size_t j = 0; j < n; ++j) {
    const Complex apj = a(p, j);
    const Complex aqj = a(q, j);
    a(p, j) = c * apj - s_ph * aqj;
    a(q, j) = s * apj + c_ph * aqj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Complex vip = v(i, p);
    const Complex viq = v(i, q);
    v(i, p) = c * vip - s_em * viq;
    v(i, q) = s * vip + c_em * viq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * r;
  a(q, q) = aqq + t * r;
}

void gram_schmidt_columns(Matrix& v, std::size_t begin, std::size_t end) {
  const std::size_t n = v.rows();
  for (std::size_t k = begin; k < end; ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = begin; j < k; ++j) {
        Complex proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(v(i, j)) * v(i, k);
        for (std::size_t i = 0; i < n; ++i) v(i, k) -= proj * v(i, j);
      }
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(v(i, k));
    nrm = std::sqrt(nrm);
    if (nrm > 0.0)
      for (std::size_t i = 0; i < n; ++i) v(i, k) /= nrm;
  }
}

}  // namespace

EigenDecomposition hermitian_eigendecomposition(const Matrix& m, const Tolerance& tol) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "eigendecomposition of a non-square matrix");
  const double asym = max_abs_diff(m, m.adjoint());
  if (asym > tol.atol) {
    throw Error(ErrorCode::NotHermitian, "symmetry residual " + std::to_string(asym) + " exceeds atol");
  }
  const std::size_t n = m.rows();
  Matrix a = hermitian_part(m);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  Matrix v = Matrix::identity(n);

  const double threshold = tol.atol * std::max(1.0, frobenius_norm(a));
  const double skip = threshold / (4.0 * static_cast<double>(n));
  bool polished = false;
  for (int sweep = 0; sweep < kMaxSweeps && n > 1; ++sweep) {
    if (off_diagonal_mass(a) < threshold) {
      if (polished) break;
      polished = true;
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q, skip);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }

  for (const auto& [begin, end] : cluster_sorted(out.values, tol.rank_tol)) {
    if (end - begin > 1) gram_schmidt_columns(out.vectors, begin, end);
  }

  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(out.vectors(i, k));
      if (mag > tol.rank_tol) {
        const Complex rot = std::conj(out.vectors(i, k)) / mag;
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) *= rot;
        out.vectors(i, k) = mag;
        break;
      }
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> cluster_sorted(std::span<const double> values, double gap) {
  std::vector<std::pair<std::size_t, std::size_t>> clusters;
  std::size_t begin = 0;
  for (std::size_t k = 1; k <= values.size(); ++k) {
    if (k == values.size() || values[k] - values[k - 1] > gap) {
      clusters.emplace_back(begin, k);
      begin = k;
    }
  }
  return clusters;
}

Matrix eigenspace_projection(const Matrix& vectors, std::size_t begin, std::size_t end) {
  const std::size_t n = vectors.rows();
  Matrix p(n, n);
  for (std::size_t k = begin; k < end; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) p(i, j) += vik * std::conj(vectors(j, k));
    }
  return p;
}

Matrix support_projection_of_psd(const Matrix& m, const Tolerance& tol) {
  const auto eig = hermitian_eigendecomposition(m, tol);
  if (!eig.values.empty() && eig.values.front() < -tol.rank_tol) {
    throw Error(ErrorCode::NotPSD, "negative eigenvalue " + std::to_string(eig.values.front()));
  }
  const auto first = std::find_if(eig.values.begin(), eig.values.end(), [&](double x) { return x > tol.rank_tol; });
  return eigenspace_projection(eig.vectors, static_cast<std::size_t>(first - eig.values.begin()), eig.values.size());
}

AntilinearPolar antilinear_polar_decomposition(const Matrix& k, const Tolerance& tol) {
  if (!k.is_square()) throw Error(ErrorCode::NotSquare, "polar decomposition of a non-square matrix");
  Matrix gram = k.adjoint() * k;
  gram = hermitian_part(gram);
  const auto eig = hermitian_eigendecomposition(gram, tol);
  const double smin = std::sqrt(std::max(0.0, eig.values.front()));
  if (smin < tol.rank_tol) {
    throw Error(ErrorCode::Singular, "antilinear map is not invertible (smallest singular value " +
                                         std::to_string(smin) + ")");
  }
  const Matrix abs_k = spectral_apply(eig, [](double x) { return std::sqrt(x); });
  const Matrix abs_k_inv = spectral_apply(eig, [](double x) { return 1.0 / std::sqrt(x); });
  return {k * abs_k_inv, abs_k.conj()};
}

std::vector<SpectralComponent> unitary_spectral_projections(const Matrix& w, const Tolerance& tol) {
  if (!w.is_square()) throw Error(ErrorCode::NotSquare, "spectral projections of a non-square matrix");
  const Matrix re = hermitian_part(w);
  const Matrix im = (w - w.adjoint()) * Complex(0.0, -0.5);
  const auto eig_re = hermitian_eigendecomposition(re, tol);
  std::vector<SpectralComponent> out;
  for (const auto& [begin, end] : cluster_sorted(eig_re.values, tol.rank_tol)) {
    const std::size_t r = end - begin;
    Matrix q = eig_re.vectors.block(0, begin, w.rows(), r);
    const Matrix im_c = hermitian_part(q.adjoint() * im * q);
    const auto eig_im = hermitian_eigendecomposition(im_c, tol);
    double mean_re = 0.0;
    for (std::size_t k = begin; k < end; ++k) mean_re += eig_re.values[k];
    mean_re /= static_cast<double>(r);
    for (const auto& [b2, e2] : cluster_sorted(eig_im.values, tol.rank_tol)) {
      double mean_im = 0.0;
      for (std::size_t k = b2; k < e2; ++k) mean_im += eig_im.values[k];
      mean_im /= static_cast<double>(e2 - b2);
      const Matrix sub = eigenspace_projection(eig_im.vectors, b2, e2);
      out.push_back({Complex(mean_re, mean_im), q * sub * q.adjoint()});
    }
  }
  return out;
}

double operator_norm(const Matrix& m, const Tolerance& tol) {
  if (m.empty()) return 0.0;
  const Matrix g = hermitian_part(m.adjoint() * m);
  const auto eig = hermitian_eigendecomposition(g, {std::max(tol.atol, 1e-14 * max_abs(g)), tol.rank_tol});
  return std::sqrt(std::max(0.0, eig.values.back()));
}

Matrix psd_sqrt(const Matrix& m, const Tolerance& tol) {
  const auto eig = hermitian_eigendecomposition(m, tol);
  return spectral_apply(eig, [](double x) { return std::sqrt(std::max(0.0, x)); });
}

bool is_hermitian(const Matrix& m, double atol) { return m.is_square() && max_abs_diff(m, m.adjoint()) <= atol; }

bool is_projection(const Matrix& m, double atol) {
  return is_hermitian(m, atol) && max_abs_diff(m * m, m) <= atol;
}

bool is_unitary(const Matrix& m, double atol) {
  return m.is_square() && max_abs_diff(m.adjoint() * m, Matrix::identity(m.rows())) <= atol;
}

Matrix range_isometry(const Matrix& projection, const Tolerance& tol) {
  const auto eig = hermitian_eigendecomposition(hermitian_part(projection), tol);
  const auto first = std::find_if(eig.values.begin(), eig.values.end(), [&](double x) { return x > 0.5; });
  const std::size_t begin = static_cast<std::size_t>(first - eig.values.begin());
  return eig.vectors.block(0, begin, projection.rows(), projection.rows() - begin);
}

std::vector<Vector> gram_null_space(const Matrix& gram, const Tolerance& tol) {
  std::vector<Vector> out;
  if (gram.rows() == 0) return out;
  const Matrix g = hermitian_part(gram);
  const auto eig = hermitian_eigendecomposition(g, {std::max(tol.atol, 1e-15 * max_abs(g)), tol.rank_tol});
  const double cut = tol.rank_tol * std::max(1.0, eig.values.back());
  for (std::size_t k = 0; k < eig.values.size() && eig.values[k] <= cut; ++k) out.push_back(eig.vectors.column(k));
  return out;
}

MatrixSpan MatrixSpan::from_orthonormal(std::size_t n, std::vector<Matrix> basis) {
  for (const auto& b : basis)
    if (b.rows() != n || b.cols() != n) throw Error(ErrorCode::DimensionMismatch, "span element has wrong size");
  MatrixSpan s(n);
  s.basis_ = std::move(basis);
  return s;
}

bool MatrixSpan::try_add(const Matrix& x, const Tolerance& tol) {
  if (x.rows() != n_ || x.cols() != n_) throw Error(ErrorCode::DimensionMismatch, "span element has wrong size");
  const double nx = frobenius_norm(x);
  if (nx <= tol.atol) return false;
  Matrix r = x;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis_) r -= b * inner(b, r);
  }
  const double nr = frobenius_norm(r);
  if (nr <= tol.rank_tol * nx) return false;
  r *= Complex(1.0 / nr);
  basis_.push_back(std::move(r));
  return true;
}

Vector MatrixSpan::coordinates(const Matrix& x) const {
  Vector c(basis_.size());
  for (std::size_t j = 0; j < basis_.size(); ++j) c[j] = inner(basis_[j], x);
  return c;
}

Matrix MatrixSpan::combine(std::span<const Complex> coords) const {
  Matrix out(n_, n_);
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    if (coords[j] == Complex(0.0)) continue;
    out += basis_[j] * coords[j];
  }
  return out;
}

}  // namespace ncerg
