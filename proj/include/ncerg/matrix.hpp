#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ncerg {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

/// Dense complex matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t rows, std::size_t cols);
  static Matrix zero(std::size_t n) { return zero(n, n); }
  static Matrix diagonal(std::span<const double> d);
  static Matrix diagonal(std::span<const Complex> d);
  /// Matrix unit e_{ij} in dimension n.
  static Matrix unit(std::size_t n, std::size_t i, std::size_t j);
  /// Outer product u v*.
  static Matrix outer(std::span<const Complex> u, std::span<const Complex> v);
  static Matrix from_columns(std::span<const Vector> columns, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  Vector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const Complex> v);

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conj() const;
  Complex trace() const;

  /// Rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Complex s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, Complex s) { return a *= s; }
  friend Matrix operator*(Complex s, Matrix a) { return a *= s; }
  friend Matrix operator*(Matrix a, double s) { return a *= Complex(s); }
  friend Matrix operator*(double s, Matrix a) { return a *= Complex(s); }
  friend Matrix operator-(Matrix a) { return a *= Complex(-1.0); }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, std::span<const Complex> v);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

/// Kronecker product; (a ⊗ b)(i*rb + k, j*cb + l) = a(i,j) b(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

/// Block-diagonal direct sum.
Matrix direct_sum(std::span<const Matrix> blocks);

/// Trace inner product <a, b> = trace(a* b).
Complex inner(const Matrix& a, const Matrix& b);

Complex dot(std::span<const Complex> u, std::span<const Complex> v);  // u* v
double norm(std::span<const Complex> v);

double max_abs(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& m);

Matrix commutator(const Matrix& a, const Matrix& b);

/// Hermitian part (m + m*)/2.
Matrix hermitian_part(const Matrix& m);

}  // namespace ncerg
