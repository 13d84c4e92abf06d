#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ncerg/action.hpp"
#include "ncerg/equivalence.hpp"

namespace ncerg {

inline constexpr std::size_t kDefaultDimensionCap = 96;

/// Crossed product of an algebra on C^n by a finite abelian group T, acting on
/// C^n (x) l^2(T). Basis vectors x (x) ε_g are indexed g-major: g * n + x.
struct CrossedProduct {
  AutomorphicAction action;
  std::size_t base_dim = 0;   // n
  std::size_t space_dim = 0;  // n |T|
  std::vector<Matrix> shift_unitaries;    // U_h(x (x) ε_g) = x (x) ε_{g-h}
  std::vector<Matrix> fiber_projections;  // E_s onto C^n (x) ε_s
  OperatorAlgebra algebra;

  const OperatorAlgebra& base() const noexcept { return action.algebra(); }
  const FiniteAbelianGroup& group() const { return action.group(); }

  /// Φ(A) = blockdiag(α_g(A)) over the fibers.
  Matrix embed(const Matrix& a) const;
  /// The n x n block E_s B E_t read in fiber coordinates.
  Matrix fiber_block(const Matrix& b, std::size_t s, std::size_t t) const;
};

/// Throws InvalidArgument for a Z-action, DimensionOverflow when n |T| > cap.
CrossedProduct build_crossed_product(const AutomorphicAction& action, std::size_t cap = kDefaultDimensionCap,
                                     const Tolerance& tol = {});

/// Identity-fiber compression E_e B E_e read back as an operator on C^n.
/// Throws NotInAlgebra unless B lies in the crossed algebra.
Matrix gamma_expectation(const CrossedProduct& cp, const Matrix& b, const Tolerance& tol = {});

/// D_k with E_s B E_t = E_s U_{t-s} Φ(D_{t-s}) E_t, recovered from the
/// identity row of fiber blocks: D_k = α_{-k}(B_{e,k}).
std::vector<Matrix> fourier_coefficients(const CrossedProduct& cp, const Matrix& b);

/// max over s, t of |E_s B E_t - E_s U_{t-s} Φ(D_{t-s}) E_t|.
double fourier_residual(const CrossedProduct& cp, const Matrix& b);

struct FactorType {
  std::size_t size = 0;          // I_n
  std::size_t multiplicity = 0;  // ambient copies
};

struct MvnTypeResult {
  std::vector<FactorType> factors;  // one per central block
  bool has_type_iii = false;        // never in finite dimension
  InvariantTrace trace;             // faithful finite trace, the finiteness certificate
};

MvnTypeResult murray_von_neumann_type(const OperatorAlgebra& a, const Tolerance& tol = {});

/// "I_2" and so on.
std::string factor_type_label(const FactorType& f);

struct TypeConsistencyReport {
  TTypeResult t_type;
  MvnTypeResult crossed_type;
  std::size_t crossed_dim = 0;
  /// Φ(I) is finite in the crossed product: MvN finiteness under the trivial action.
  TFiniteCertificate embedded_identity;
  /// Both sides report "not type III".
  bool consistent = false;
};

/// Only joint consistency is checkable in finite dimension: neither side is type III.
TypeConsistencyReport type_consistency(const AutomorphicAction& action, std::size_t cap = kDefaultDimensionCap,
                                    const Tolerance& tol = {});

struct TensorIsomorphismReport {
  Matrix reorder;  // W : (C^n1 (x) l^2(G)) (x) (C^n2 (x) l^2(H)) -> (C^n1 (x) C^n2) (x) l^2(G x H)
  CrossedProduct product;
  double shift_residual = 0.0;   // max |W (U_g (x) U_h) W^* - U_(g,h)|
  double embed_residual = 0.0;   // max |W (Φ1(A) (x) Φ2(B)) W^* - Φ(A (x) B)| over basis pairs
  bool generators_inside = false;  // W (X (x) Y) W^* in the product crossed algebra
};

/// Product action of G x H on the tensor product algebra; G x H indexed with H fastest.
AutomorphicAction product_action(const AutomorphicAction& first, const AutomorphicAction& second,
                                 const Tolerance& tol = {});

TensorIsomorphismReport tensor_crossed_isomorphism(const AutomorphicAction& first, const AutomorphicAction& second,
                                                   std::size_t cap = kDefaultDimensionCap,
                                                   const Tolerance& tol = {});

}  // namespace ncerg
