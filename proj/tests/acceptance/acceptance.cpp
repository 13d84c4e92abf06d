// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "equivalence_oracle.hpp"
#include "extremality_oracle.hpp"
#include "ncerg/actions.hpp"
#include "ncerg/classical.hpp"
#include "ncerg/crossed.hpp"
#include "ncerg/error.hpp"
#include "ncerg/sections.hpp"
#include "test_util.hpp"

using namespace ncerg;
using namespace testutil;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Failures keep the first message; counters go into the detail line.
struct Tally {
  bool pass = true;
  std::string first_failure;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) first_failure = what;
    pass = pass && ok;
  }
  Outcome done(const std::string& summary) const { return {pass, pass ? summary : first_failure + "; " + summary}; }
};

StateFunctional random_state(const OperatorAlgebra& a, Rng& rng, bool faithful) {
  const std::size_t n = a.ambient_dim();
  Matrix x = random_matrix(n, n, rng);
  if (!faithful) {
    const std::size_t keep = 1 + rng.below(n);
    for (std::size_t i = keep; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) x(j, i) = 0.0;
  }
  Matrix rho = x * x.adjoint();
  if (faithful) rho += Matrix::identity(n) * 0.05;
  rho *= Complex(1.0 / rho.trace().real());
  return StateFunctional(a, hermitian_part(rho));
}

OperatorAlgebra random_block_algebra(Rng& rng, std::size_t max_dim) {
  while (true) {
    std::vector<BlockSpec> blocks;
    const std::size_t count = 1 + rng.below(3);
    std::size_t total = 0;
    for (std::size_t k = 0; k < count; ++k) {
      blocks.push_back({1 + rng.below(3), 1 + rng.below(2)});
      total += blocks.back().dim * blocks.back().multiplicity;
    }
    if (total <= max_dim) return block_algebra(blocks);
  }
}

Vector mat_vec(const Matrix& m, const Vector& v) { return m * std::span<const Complex>(v); }

// ---- 1 ----
Outcome gns_soundness() {
  Rng rng(1001);
  Tally t;
  double worst_value = 0.0, worst_hom = 0.0;
  for (int s = 0; s < 100; ++s) {
    const auto a = random_block_algebra(rng, 9);
    const auto f = random_state(a, rng, s % 2 == 0);
    const auto g = gns_construct(f);
    const auto& basis = a.basis();
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Matrix& p = g.rep_basis[j];
      worst_value = std::max(worst_value, std::abs(f(basis[j]) - dot(g.cyclic_vector, mat_vec(p, g.cyclic_vector))));
      worst_hom = std::max(worst_hom, max_abs_diff(g.pi(basis[j].adjoint()), p.adjoint()));
      for (std::size_t k = 0; k < basis.size(); ++k)
        worst_hom = std::max(worst_hom, max_abs_diff(g.pi(basis[j] * basis[k]), p * g.rep_basis[k]));
    }
  }
  t.require(worst_value <= 1e-9, "state value residual above 1e-9");
  t.require(worst_hom <= 1e-9, "homomorphism residual above 1e-9");
  return t.done("100 states; max |f(A) - <xi,pi(A)xi>| " + fmt(worst_value) + ", max homomorphism residual " +
                fmt(worst_hom));
}

// ---- 2 ----
Outcome tomita_identity() {
  Rng rng(1002);
  Tally t;
  std::vector<OperatorAlgebra> algebras;
  for (std::size_t n = 1; n <= 4; ++n) algebras.push_back(full_matrix_algebra(n));
  for (std::size_t n = 1; n <= 6; ++n) algebras.push_back(diagonal_algebra(n));
  algebras.push_back(block_algebra(std::vector<BlockSpec>{{1, 2}, {1, 1}}));
  algebras.push_back(block_algebra(std::vector<BlockSpec>{{1, 3}, {1, 1}, {1, 2}}));
  double polar = 0.0, contain = 0.0;
  std::size_t states = 0;
  for (const auto& a : algebras)
    for (int s = 0; s < 5; ++s) {
      const auto g = gns_construct(random_state(a, rng, true));
      const auto md = modular_data(g);
      for (const auto& b : a.basis()) {
        const Vector y = mat_vec(md.delta_half, g.eta(b));
        Vector cy(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) cy[i] = std::conj(y[i]);
        const Vector lhs = mat_vec(md.j_conj, cy), rhs = g.eta(b.adjoint());
        for (std::size_t i = 0; i < lhs.size(); ++i) polar = std::max(polar, std::abs(lhs[i] - rhs[i]));
      }
      const auto comm = commutant_of(g.rep_basis, g.hilbert_dim);
      std::vector<Matrix> conjugated;
      for (const auto& p : g.rep_basis) {
        const Matrix jpj = md.conjugate_by_j(p);
        contain = std::max(contain, max_abs_diff(jpj, comm.project(jpj)));
        conjugated.push_back(jpj);
      }
      t.require(span_rank(conjugated, 1e-8) == comm.dim(), "J pi J span dimension differs from the commutant's");
      ++states;
    }
  t.require(polar <= 1e-8, "S = J Delta^1/2 residual above 1e-8");
  t.require(contain <= 1e-8, "commutant containment residual above 1e-8");
  return t.done(std::to_string(states) + " faithful states; S residual " + fmt(polar) + ", containment residual " +
                fmt(contain));
}

// ---- 3 ----
// Group of commuting cycles, one per block of a set partition.
AutomorphicAction partition_action(const OperatorAlgebra& d, const std::vector<std::vector<std::size_t>>& blocks) {
  const std::size_t n = d.ambient_dim();
  std::vector<std::size_t> orders;
  std::vector<Matrix> cycles;
  for (const auto& b : blocks) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) p[b[i]] = b[(i + 1) % b.size()];
    orders.push_back(b.size());
    cycles.push_back(permutation_matrix(p));
  }
  const FiniteAbelianGroup grp(orders);
  std::vector<Matrix> us;
  for (std::size_t k = 0; k < grp.size(); ++k) {
    const auto m = grp.element(k);
    Matrix w = Matrix::identity(n);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t r = 0; r < m[i]; ++r) w = cycles[i] * w;
    us.push_back(w);
  }
  return AutomorphicAction::from_group(d, grp, us);
}

void set_partitions(std::size_t n, std::size_t i, std::vector<std::vector<std::size_t>>& cur,
                    std::vector<std::vector<std::vector<std::size_t>>>& out) {
  if (i == n) {
    out.push_back(cur);
    return;
  }
  for (std::size_t b = 0; b < cur.size(); ++b) {
    cur[b].push_back(i);
    set_partitions(n, i + 1, cur, out);
    cur[b].pop_back();
  }
  cur.push_back({i});
  set_partitions(n, i + 1, cur, out);
  cur.pop_back();
}

// Uniform on each orbit, uniform overall, and a random orbit mixture.
std::vector<std::vector<double>> test_measures(const std::vector<std::size_t>& labels, Rng& rng) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> orbits(labels);
  std::sort(orbits.begin(), orbits.end());
  orbits.erase(std::unique(orbits.begin(), orbits.end()), orbits.end());
  std::vector<std::vector<double>> out;
  for (std::size_t o : orbits) {
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) w[i] = labels[i] == o ? 1.0 : 0.0;
    out.push_back(w);
  }
  out.push_back(std::vector<double>(n, 1.0));
  std::vector<double> w(n, 0.0);
  for (std::size_t o : orbits) {
    const double x = rng.uniform() < 0.5 ? 0.0 : 0.1 + rng.uniform();
    for (std::size_t i = 0; i < n; ++i)
      if (labels[i] == o) w[i] = x;
  }
  if (std::accumulate(w.begin(), w.end(), 0.0) > 0.0) out.push_back(w);
  for (auto& v : out) {
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    for (auto& x : v) x /= total;
  }
  return out;
}

Outcome ergodic_equivalence() {
  Rng rng(1003);
  Tally t;
  std::size_t cases = 0, agree = 0;
  auto record = [&](bool verdict, bool oracle) {
    ++cases;
    if (verdict == oracle) ++agree;
  };
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto d = diagonal_algebra(n);
    // Every cyclic subgroup.
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
      const auto act = AutomorphicAction::cyclic(d, permutation_matrix(p), perm_order(p));
      for (const auto& w : test_measures(orbit_labels({p}, n), rng)) {
        const StateFunctional f(d, Matrix::diagonal(std::span<const double>(w)));
        record(is_ergodic_state(f, act).ergodic, diagonal_extreme_oracle(w, {p}));
      }
    } while (std::next_permutation(p.begin(), p.end()));
    // Every orbit partition, realized by commuting cycles.
    std::vector<std::vector<std::vector<std::size_t>>> parts;
    std::vector<std::vector<std::size_t>> cur;
    set_partitions(n, 0, cur, parts);
    for (const auto& blocks : parts) {
      const auto act = partition_action(d, blocks);
      std::vector<Perm> gens;
      std::vector<std::size_t> labels(n);
      for (const auto& b : blocks) {
        Perm c(n);
        std::iota(c.begin(), c.end(), 0);
        for (std::size_t i = 0; i < b.size(); ++i) c[b[i]] = b[(i + 1) % b.size()];
        gens.push_back(c);
      }
      for (const auto& w : test_measures(orbit_labels(gens, n), rng)) {
        const StateFunctional f(d, Matrix::diagonal(std::span<const double>(w)));
        record(is_ergodic_state(f, act).ergodic, diagonal_extreme_oracle(w, gens));
      }
    }
  }
  // Z2 inner actions on M2.
  const auto m2 = full_matrix_algebra(2);
  std::vector<Matrix> us{pauli_x(), pauli_y(), pauli_z()};
  for (int k = 0; k < 5; ++k) {
    const Matrix v = random_unitary(2, rng);
    us.push_back(v * pauli_z() * v.adjoint());
  }
  for (const auto& u : us) {
    const auto act = AutomorphicAction::cyclic(m2, u, 2);
    const auto eig = hermitian_eigendecomposition(hermitian_part(u));
    const Matrix pm = eigenspace_projection(eig.vectors, 0, 1), pp = eigenspace_projection(eig.vectors, 1, 2);
    for (double x : {0.0, 1.0, 0.5, 0.2 + 0.6 * rng.uniform()}) {
      const StateFunctional f(m2, hermitian_part(pp * x + pm * (1.0 - x)));
      const Matrix support = x == 0.0 ? pm : (x == 1.0 ? pp : Matrix::identity(2));
      record(is_ergodic_state(f, act).ergodic, matrix_extreme_oracle(u, support));
    }
  }
  t.require(agree == cases, "disagreement with the extremality oracle");
  return t.done(std::to_string(agree) + "/" + std::to_string(cases) + " verdicts agree");
}

// ---- 4 ----
AutomorphicAction random_finite_action(Rng& rng, int kind) {
  switch (kind % 3) {
    case 0: {  // permutation of a diagonal algebra
      const std::size_t n = 2 + rng.below(5);
      Perm p(n);
      std::iota(p.begin(), p.end(), 0);
      for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
      return AutomorphicAction::cyclic(diagonal_algebra(n), permutation_matrix(p), perm_order(p));
    }
    case 1: {  // block swap composed with an inner unitary
      const std::size_t k = 1 + rng.below(2);
      const auto a = block_algebra(std::vector<BlockSpec>{{k, 1}, {k, 1}});
      Perm p(2 * k);
      for (std::size_t i = 0; i < 2 * k; ++i) p[i] = (i + k) % (2 * k);
      const Matrix v = random_unitary(k, rng);
      const std::vector<Matrix> parts{v, v.adjoint()};
      // (P diag(v, v*))^2 = diag(v* v, v v*) = I.
      return AutomorphicAction::cyclic(a, permutation_matrix(p) * direct_sum(parts), 2);
    }
    default: {  // inner Z_m on M_n by a diagonal phase unitary
      const std::size_t n = 2 + rng.below(3), m = 2 + rng.below(4);
      std::vector<Complex> ph;
      for (std::size_t j = 0; j < n; ++j) ph.push_back(std::polar(1.0, 2 * std::numbers::pi * double(j) / double(m)));
      const Matrix v = random_unitary(n, rng);
      return AutomorphicAction::cyclic(full_matrix_algebra(n), v * Matrix::diagonal(std::span<const Complex>(ph)) * v.adjoint(), m);
    }
  }
}

Outcome finite_wandering() {
  Rng rng(1004);
  Tally t;
  double min_eig = 1.0;
  std::size_t projections = 0;
  for (int s = 0; s < 50; ++s) {
    const auto act = random_finite_action(rng, s);
    const auto f = random_state(act.algebra(), rng, true);
    const auto avg = average_state(f, act);
    t.require(avg.is_invariant(act), "averaged state is not invariant");
    min_eig = std::min(min_eig, hermitian_eigendecomposition(hermitian_part(avg.density())).values.front());
    std::vector<Matrix> candidates;
    if (const auto w = wandering_projection_search(act, {4, 64, 1004u + s}); w) candidates.push_back(w->projection);
    const auto cd = center_and_blocks(act.algebra());
    Rng prng(1004u + s);
    for (const auto& mp : minimal_projection_decomposition(act.algebra(), cd, Matrix::identity(act.algebra().ambient_dim()), prng))
      candidates.push_back(mp.projection);
    for (const auto& e : candidates) {
      t.require(!has_weakly_null_orbit(act, e, 8), "weakly null orbit found");
      ++projections;
    }
  }
  t.require(min_eig > 0.0, "averaged density is not positive definite");

  std::size_t shift_found = 0, perms = 0;
  for (int s = 0; s < 20; ++s) {
    std::vector<std::int64_t> set;
    const std::size_t size = 1 + rng.below(6);
    while (set.size() < size) {
      const auto x = static_cast<std::int64_t>(rng.below(41)) - 20;
      if (std::find(set.begin(), set.end(), x) == set.end()) set.push_back(x);
    }
    const auto cert = wandering_set_search(IntegerShift{}, set, 5);
    if (!cert) continue;
    bool ok = cert->images.size() == 5;
    std::vector<std::int64_t> all;
    for (std::size_t j = 0; j < cert->images.size(); ++j) {
      for (std::int64_t x : set)
        ok = ok && std::count(cert->images[j].begin(), cert->images[j].end(), x + cert->exponents[j]) == 1;
      all.insert(all.end(), cert->images[j].begin(), cert->images[j].end());
    }
    std::sort(all.begin(), all.end());
    ok = ok && std::adjacent_find(all.begin(), all.end()) == all.end();
    if (ok) ++shift_found;
  }
  t.require(shift_found == 20, "shift wandering certificate missing or invalid");
  for (std::size_t n = 1; n <= 8; ++n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
      const Permutation perm(p);
      Subset s;
      std::vector<std::int64_t> si;
      for (std::size_t x = 0; x < n; ++x)
        if (rng.uniform() < 0.5 || x == 0) s.push_back(x), si.push_back(static_cast<std::int64_t>(x));
      // T^order(S) = S, so the translates of S repeat.
      Subset img = s;
      for (std::size_t k = 0; k < perm.order(); ++k) img = perm.image(img);
      std::sort(img.begin(), img.end());
      t.require(img == s, "a permutation orbit of a set does not close up");
      t.require(!wandering_set_search(perm, si, 2), "a permutation admitted a wandering certificate");
      ++perms;
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return t.done("50 actions, min averaged eigenvalue " + fmt(min_eig) + ", " + std::to_string(projections) +
                " projections without weakly null orbits; shift certificates " + std::to_string(shift_found) +
                "/20; " + std::to_string(perms) + " permutations without certificates");
}

// ---- 5, 6 ----
std::vector<std::pair<std::string, AutomorphicAction>> crossed_family() {
  std::vector<std::pair<std::string, AutomorphicAction>> out;
  const auto m1 = full_matrix_algebra(1);
  out.push_back({"C, trivial Z2", AutomorphicAction::cyclic(m1, Matrix::identity(1), 2)});
  out.push_back({"C, trivial Z3", AutomorphicAction::cyclic(m1, Matrix::identity(1), 3)});
  out.push_back({"C^2, swap", AutomorphicAction::cyclic(diagonal_algebra(2), pauli_x(), 2)});
  out.push_back({"C^2, trivial Z2", AutomorphicAction::cyclic(diagonal_algebra(2), Matrix::identity(2), 2)});
  out.push_back({"M2, trivial Z2", AutomorphicAction::cyclic(full_matrix_algebra(2), Matrix::identity(2), 2)});
  out.push_back({"M2, Ad Z", AutomorphicAction::cyclic(full_matrix_algebra(2), pauli_z(), 2)});
  out.push_back({"M2, Ad X", AutomorphicAction::cyclic(full_matrix_algebra(2), pauli_x(), 2)});
  out.push_back({"C^3, shift", AutomorphicAction::cyclic(diagonal_algebra(3), cyclic_shift(3), 3)});
  out.push_back({"C^4, shift", AutomorphicAction::cyclic(diagonal_algebra(4), cyclic_shift(4), 4)});
  out.push_back({"C^6, shift", AutomorphicAction::cyclic(diagonal_algebra(6), cyclic_shift(6), 6)});
  {
    std::vector<Complex> ph;
    for (int j = 0; j < 3; ++j) ph.push_back(std::polar(1.0, 2 * std::numbers::pi * j / 3));
    out.push_back({"M3, inner Z3", AutomorphicAction::cyclic(full_matrix_algebra(3), Matrix::diagonal(std::span<const Complex>(ph)), 3)});
  }
  {
    std::vector<Complex> ph;
    for (int j = 0; j < 4; ++j) ph.push_back(std::polar(1.0, 2 * std::numbers::pi * j / 12));
    out.push_back({"M4, inner Z12", AutomorphicAction::cyclic(full_matrix_algebra(4), Matrix::diagonal(std::span<const Complex>(ph)), 12)});
  }
  {
    const auto a = block_algebra(std::vector<BlockSpec>{{2, 1}, {2, 1}});
    const Matrix swap = permutation_matrix({2, 3, 0, 1});
    const std::vector<Matrix> zz{pauli_z(), pauli_z()};
    const Matrix inner = direct_sum(zz);
    out.push_back({"M2+M2, Z2 x Z2", AutomorphicAction::from_group(a, FiniteAbelianGroup({2, 2}),
                                                                   {Matrix::identity(4), inner, swap, swap * inner})});
  }
  for (const auto& [orders, n] : std::vector<std::pair<std::vector<std::size_t>, std::size_t>>{
           {{2}, 2}, {{3}, 2}, {{4}, 2}, {{2, 2}, 1}, {{2, 2}, 2}, {{2, 3}, 1}}) {
    const auto sa = build_sections_algebra({orders}, {n, {}});
    std::string name = "lattice";
    for (auto m : orders) name += " " + std::to_string(m);
    out.push_back({name + ", fibre M" + std::to_string(n), translation_action(sa, {n, {}})});
  }
  {
    const auto sa = build_sections_algebra({{2}}, {2, {}});
    out.push_back({"twisted lattice 2, fibre M2", translation_action(sa, {2, {pauli_z(), pauli_z()}})});
  }
  return out;
}

Outcome conditional_expectation() {
  Rng rng(1005);
  Tally t;
  double inv = 0.0, off = 0.0, cov = 0.0, bimodule = 0.0, norm_gain = 0.0, min_eig = 1e300, min_faithful = 1e300, fourier = 0.0;
  std::size_t products = 0, psd = 0, faithful_samples = 0;
  for (const auto& [name, act] : crossed_family()) {
    const std::size_t space = act.algebra().ambient_dim() * act.count();
    if (space > 48) continue;
    const auto cp = build_crossed_product(act, 48);
    ++products;
    const auto& base = act.algebra().basis();
    for (const auto& b : base) {
      inv = std::max(inv, max_abs_diff(gamma_expectation(cp, cp.embed(b)), b));
      for (std::size_t h = 0; h < act.count(); ++h)
        cov = std::max(cov, max_abs_diff(cp.shift_unitaries[h] * cp.embed(b) * cp.shift_unitaries[h].adjoint(),
                                         cp.embed(act.apply(h, b))));
      for (std::size_t h = 1; h < act.count(); ++h)
        off = std::max(off, max_abs(gamma_expectation(cp, cp.shift_unitaries[h] * cp.embed(b))));
    }
    const int samples = 200;
    for (int s = 0; s < samples; ++s) {
      Vector c(cp.algebra.dim());
      for (auto& x : c) x = rng.complex_normal();
      Matrix b = cp.algebra.combine(c);
      b *= Complex(1.0 / operator_norm(b));
      const Matrix bb = b.adjoint() * b;
      const Matrix gb = hermitian_part(gamma_expectation(cp, bb));
      const auto eig = hermitian_eigendecomposition(gb);
      min_eig = std::min(min_eig, eig.values.front());
      min_faithful = std::min(min_faithful, eig.values.back());
      fourier = std::max(fourier, fourier_residual(cp, b));
      norm_gain = std::max(norm_gain, operator_norm(gamma_expectation(cp, b)) - 1.0);
      if (s < 10) {
        const Matrix& x = base[rng.below(base.size())];
        const Matrix& y = base[rng.below(base.size())];
        bimodule = std::max(bimodule, max_abs_diff(gamma_expectation(cp, cp.embed(x) * b * cp.embed(y)),
                                                   x * gamma_expectation(cp, b) * y));
      }
      ++psd;
      ++faithful_samples;
    }
  }
  t.require(inv <= 1e-10, "Gamma o Phi differs from the identity");
  t.require(off <= 1e-10, "Gamma(U_h Phi(A)) nonzero for h != e");
  t.require(cov <= 1e-10, "covariance identity fails");
  t.require(bimodule <= 1e-10, "bimodule property fails");
  t.require(norm_gain <= 1e-10, "Gamma increases a norm");
  t.require(min_eig >= -1e-10, "Gamma not positive");
  t.require(min_faithful >= 1e-8, "|Gamma(B*B)| below 1e-8 for a unit-norm B");
  t.require(fourier <= 1e-10, "compression structure residual above 1e-10");
  return t.done(std::to_string(products) + " crossed products; |Gamma Phi - id| " + fmt(inv) + ", |Gamma(U_h Phi)| " +
                fmt(off) + ", covariance " + fmt(cov) + ", bimodule " + fmt(bimodule) + ", min eigenvalue on " + std::to_string(psd) + " PSD elements " + fmt(min_eig) +
                ", min |Gamma(B*B)| " + fmt(min_faithful) + ", Fourier residual " + fmt(fourier));
}

Outcome type_correspondence() {
  Rng rng(1006);
  Tally t;
  std::size_t scenarios = 0;
  for (const auto& [name, act] : crossed_family()) {
    const auto r = type_consistency(act);
    ++scenarios;
    t.require(r.consistent, name + ": inconsistent");
    t.require(r.t_type.type != TType::PurelyInfinite, name + ": T-Type III");
    t.require(!r.crossed_type.has_type_iii, name + ": crossed product of type III");
    const auto& tau = r.t_type.certificate.trace;
    const auto& basis = act.algebra().basis();
    t.require(tau.faithful(), name + ": invariant trace not faithful");
    for (const auto& b : basis) {
      for (std::size_t k = 0; k < act.count(); ++k)
        t.require(std::abs(tau(act.apply(k, b)) - tau(b)) <= 1e-10, name + ": trace not invariant");
      for (const auto& c : basis) t.require(std::abs(tau(b * c) - tau(c * b)) <= 1e-10, name + ": trace not tracial");
    }
    const auto cp = build_crossed_product(act);
    const auto& canon = r.crossed_type.trace;
    t.require(canon.faithful(), name + ": canonical trace not faithful");
    for (int s = 0; s < 5; ++s) {
      Vector x(cp.algebra.dim()), y(cp.algebra.dim());
      for (auto& z : x) z = rng.complex_normal();
      for (auto& z : y) z = rng.complex_normal();
      const Matrix bx = cp.algebra.combine(x), by = cp.algebra.combine(y);
      t.require(std::abs(canon(bx * by) - canon(by * bx)) <= 1e-9 * (1.0 + max_abs(bx) * max_abs(by)),
                name + ": canonical trace not tracial");
    }
    t.require(r.embedded_identity.finite && r.embedded_identity.gap > 0.0, name + ": no finiteness certificate for Phi(I)");
    // A proper T-finite subprojection too: a minimal projection.
    const auto cd = center_and_blocks(act.algebra());
    Rng prng(1006);
    const auto mins = minimal_projection_decomposition(act.algebra(), cd, Matrix::identity(act.algebra().ambient_dim()), prng);
    const Matrix& e = mins.front().projection;
    t.require(is_t_finite(e, act).finite, name + ": minimal projection not T-finite");
    const auto cert = is_t_finite(cp.embed(e), AutomorphicAction::trivial(cp.algebra));
    t.require(cert.finite && cert.gap > 0.0, name + ": no finiteness certificate for Phi(E)");
  }
  return t.done(std::to_string(scenarios) + " scenarios consistent; invariant and canonical traces verified");
}

// ---- 7 ----
Outcome tensor_isomorphism() {
  Tally t;
  std::vector<AutomorphicAction> sides;
  const auto m1 = full_matrix_algebra(1), d2 = diagonal_algebra(2), m2 = full_matrix_algebra(2);
  for (const auto& a : {m1, d2, m2}) {
    sides.push_back(AutomorphicAction::trivial(a));
    sides.push_back(AutomorphicAction::cyclic(a, Matrix::identity(a.ambient_dim()), 2));
  }
  sides.push_back(AutomorphicAction::cyclic(d2, pauli_x(), 2));
  sides.push_back(AutomorphicAction::cyclic(m2, pauli_z(), 2));
  sides.push_back(AutomorphicAction::cyclic(m2, pauli_x(), 2));
  double shift = 0.0, embed = 0.0;
  std::size_t pairs = 0;
  for (const auto& a : sides)
    for (const auto& b : sides) {
      const auto r = tensor_crossed_isomorphism(a, b);
      shift = std::max(shift, r.shift_residual);
      embed = std::max(embed, r.embed_residual);
      t.require(is_unitary(r.reorder, 1e-12), "reordering is not unitary");
      t.require(r.generators_inside, "a generator pair leaves the product crossed algebra");
      ++pairs;
    }
  t.require(shift <= 1e-10 && embed <= 1e-10, "generator residual above 1e-10");
  return t.done(std::to_string(pairs) + " pairs; shift residual " + fmt(shift) + ", embedding residual " + fmt(embed));
}

// ---- 8 ----
Outcome t_equivalence_calibration() {
  Rng rng(1008);
  Tally t;
  std::size_t pairs = 0, equivalent = 0;
  for (const auto& c : small_configs()) {
    const auto profiles = rank_profiles(c.sizes);
    for (const auto& pe : profiles)
      for (const auto& pf : profiles) {
        const auto e = random_projection(c.sizes, pe, rng);
        const auto f = random_projection(c.sizes, pf, rng);
        const auto w = t_equivalent(e.projection, f.projection, c.action);
        t.require(w.has_value() == brute_force_equivalent(e, f, c, rng, 5000), "decision differs from brute force");
        if (w) {
          ++equivalent;
          t.require(verify_twist_witness(e.projection, f.projection, *w, c.action, Tolerance{1e-10, 1e-8}),
                    "witness fails to verify");
        }
        ++pairs;
      }
  }
  const auto a = block_algebra(std::vector<BlockSpec>{{2, 1}, {2, 1}});
  const auto swap = AutomorphicAction::cyclic(a, permutation_matrix({2, 3, 0, 1}), 2);
  Matrix e(4, 4), f(4, 4);
  e(0, 0) = 1.0;
  f(2, 2) = 1.0;
  const auto w = t_equivalent(e, f, swap);
  t.require(!mvn_equivalent(a, e, f).equivalent, "swap example is MvN equivalent");
  t.require(w && w->size() == 1 && w->begin()->first == 1 && verify_twist_witness(e, f, *w, swap),
            "swap example lacks its single-element witness");
  t.require(!t_equivalent(e, Matrix::identity(4), swap), "(e11, 0) reported equivalent to I");
  return t.done(std::to_string(pairs) + " pairs agree with brute force (" + std::to_string(equivalent) +
                " equivalent); swap example T-equivalent but not MvN");
}

// ---- 9 ----
FiniteProbabilitySpace uniform(std::size_t n) { return {std::vector<double>(n, 1.0 / static_cast<double>(n))}; }

FiniteProbabilitySpace random_invariant(const Permutation& p, Rng& rng) {
  FiniteProbabilitySpace mu{std::vector<double>(p.size(), 0.0)};
  double total = 0.0;
  for (const auto& c : p.cycles()) {
    const double w = rng.uniform() < 0.4 ? 0.0 : 0.1 + rng.uniform();
    for (std::size_t x : c) mu.weights[x] = w;
    total += w * static_cast<double>(c.size());
  }
  if (total == 0.0) return uniform(p.size());
  for (double& w : mu.weights) w /= total;
  return mu;
}

Outcome classical_oracle() {
  Rng rng(1009);
  Tally t;
  const double e1 = partition_entropy({{0}, {1}, {2}, {3}}, uniform(4));
  const double e2 = partition_entropy({{0}, {1}, {2}}, FiniteProbabilitySpace{{0.5, 0.25, 0.25}});
  const double e3 = partition_entropy({{0, 1, 2, 3}}, uniform(4));
  t.require(std::abs(e1 - std::log(4.0)) <= 1e-12 && std::abs(e2 - 1.5 * std::log(2.0)) <= 1e-12 && std::abs(e3) <= 1e-12,
            "entropy closed forms");
  std::size_t perms = 0, hopf = 0;
  double hopf_gap = 0.0;
  for (std::size_t n = 1; n <= 7; ++n) {
    Perm img(n);
    std::iota(img.begin(), img.end(), 0);
    do {
      const Permutation p(img);
      for (const auto& mu : {uniform(n), random_invariant(p, rng)})
        t.require(is_ergodic_transformation(p, mu).ergodic == is_extreme_invariant_measure(mu, p).extreme,
                  "ergodic and extreme disagree");
      ++perms;
      if (n <= 6 && rng.uniform() < 0.3) {
        const auto group = generated_group({p}, n);
        Subset h, k;
        for (std::size_t x = 0; x < n; ++x) {
          if (rng.uniform() < 0.5) h.push_back(x);
          if (rng.uniform() < 0.5) k.push_back(x);
        }
        const auto w = hopf_equivalent_sets(h, k, group);
        if (!w) continue;
        ++hopf;
        const auto mu = random_invariant(p, rng);
        for (std::size_t j = 0; j < w->pieces.size(); ++j) {
          double a = 0.0, b = 0.0;
          for (std::size_t x : w->pieces[j]) a += mu.weights[x];
          for (std::size_t x : w->images[j]) b += mu.weights[x];
          hopf_gap = std::max(hopf_gap, std::abs(a - b));
          t.require(group[w->elements[j]].image(w->pieces[j]) == w->images[j] ||
                        [&] {
                          Subset s = group[w->elements[j]].image(w->pieces[j]);
                          std::sort(s.begin(), s.end());
                          Subset r = w->images[j];
                          std::sort(r.begin(), r.end());
                          return s == r;
                        }(),
                    "Hopf piece is not carried onto its image");
        }
      }
    } while (std::next_permutation(img.begin(), img.end()));
  }
  t.require(hopf_gap <= 1e-12, "Hopf witness changes measure");
  return t.done("entropies " + fmt(e1) + ", " + fmt(e2) + ", " + fmt(e3) + "; " + std::to_string(perms) +
                " permutations ergodic <=> extreme; " + std::to_string(hopf) + " Hopf witnesses, max measure gap " +
                fmt(hopf_gap));
}

// ---- 10 ----
Outcome bridge() {
  Rng rng(1010);
  Tally t;
  std::size_t cases = 0, pairs = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    Perm img(n);
    std::iota(img.begin(), img.end(), 0);
    do {
      const Permutation p(img);
      const auto cycles = p.cycles();
      for (const auto& mu : {uniform(n), random_invariant(p, rng)}) {
        const auto model = diagonal_embedding(mu, p);
        t.require(is_ergodic_state(model.state, model.action).ergodic == is_ergodic_transformation(p, mu).ergodic,
                  "ergodicity verdicts differ");
        std::vector<Matrix> projections;
        for (const auto& c : cycles) projections.push_back(model.projection_of(c));
        t.require(std::abs(partition_entropy(model.state, projections) - partition_entropy(cycles, mu)) <= 1e-12,
                  "entropies differ");
        ++cases;
      }
      const auto model = diagonal_embedding(uniform(n), p);
      std::vector<Permutation> powers{Permutation::identity(n)};
      for (std::size_t k = 1; k < p.order(); ++k) powers.push_back(p.compose(powers.back()));
      for (int s = 0; s < 2; ++s) {
        Subset h, k;
        for (std::size_t x = 0; x < n; ++x) {
          if (rng.uniform() < 0.5) h.push_back(x);
          if (rng.uniform() < 0.5) k.push_back(x);
        }
        const bool classical = hopf_equivalent_sets(h, k, powers).has_value();
        const bool quantum = t_equivalent(model.projection_of(h), model.projection_of(k), model.action).has_value();
        t.require(classical == quantum, "Hopf and T-equivalence differ");
        ++pairs;
      }
    } while (std::next_permutation(img.begin(), img.end()));
  }
  return t.done(std::to_string(cases) + " ergodicity and entropy comparisons, " + std::to_string(pairs) +
                " Hopf/T-equivalence comparisons agree");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"GNS soundness", gns_soundness},
      {"Tomita identity", tomita_identity},
      {"ergodic states are extreme invariant states", ergodic_equivalence},
      {"finite corollary and classical wandering sets", finite_wandering},
      {"conditional expectation onto the embedded algebra", conditional_expectation},
      {"type consistency of action and crossed product", type_correspondence},
      {"tensor product of crossed products", tensor_isomorphism},
      {"T-equivalence calibration", t_equivalence_calibration},
      {"classical oracle", classical_oracle},
      {"classical and noncommutative bridge", bridge},
  };
  const auto start = std::chrono::steady_clock::now();
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of %zu criteria passed in %.1fs\n", static_cast<int>(criteria.size()) - failures, criteria.size(), total);
  return failures == 0 ? 0 : 1;
}
