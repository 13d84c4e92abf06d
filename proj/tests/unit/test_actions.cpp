#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "ncerg/actions.hpp"
#include "ncerg/error.hpp"
#include "extremality_oracle.hpp"
#include "test_util.hpp"

using namespace ncerg;
using namespace testutil;

namespace {

double min_eigenvalue(const Matrix& m) { return hermitian_eigendecomposition(hermitian_part(m)).values.front(); }

}  // namespace

TEST_CASE("finite abelian group") {
  const FiniteAbelianGroup g({2, 3});
  CHECK(g.size() == 6);
  CHECK(g.key(0) == "0,0");
  CHECK(g.key(5) == "1,2");
  CHECK(g.parse_key("1,1") == 4);
  CHECK(g.add(g.parse_key("1,2"), g.parse_key("1,2")) == g.parse_key("0,1"));
  for (std::size_t a = 0; a < g.size(); ++a) {
    CHECK(g.add(a, g.inverse(a)) == 0);
    CHECK(g.add(a, 0) == a);
    for (std::size_t b = 0; b < g.size(); ++b) {
      CHECK(g.add(a, b) == g.add(b, a));
      for (std::size_t c = 0; c < g.size(); ++c) CHECK(g.add(g.add(a, b), c) == g.add(a, g.add(b, c)));
    }
  }
  CHECK(g.order_of(g.parse_key("1,1")) == 6);
  CHECK_THROWS_AS(g.parse_key("2,0"), Error);
  CHECK_THROWS_AS(g.parse_key("1"), Error);
  CHECK_THROWS_AS(g.parse_key("a,0"), Error);
  CHECK(FiniteAbelianGroup().size() == 1);
}

TEST_CASE("action validation") {
  const auto d3 = diagonal_algebra(3);
  // Not a homomorphism: Z_2 acting by a 3-cycle.
  CHECK_THROWS_AS(AutomorphicAction::cyclic(d3, testutil::cyclic_shift(3), 2), Error);
  // Does not preserve the diagonal algebra.
  const Matrix h = Matrix{{1.0, 1.0}, {1.0, -1.0}} * (1.0 / std::sqrt(2.0));
  CHECK_THROWS_AS(AutomorphicAction::from_automorphism(diagonal_algebra(2), h), Error);
  CHECK_NOTHROW(AutomorphicAction::from_automorphism(full_matrix_algebra(2), h));
  CHECK_THROWS_AS(AutomorphicAction::from_automorphism(d3, Matrix::identity(3) * 2.0), Error);
}

TEST_CASE("average_state examples") {
  const auto d3 = diagonal_algebra(3);
  const auto shift = AutomorphicAction::cyclic(d3, testutil::cyclic_shift(3), 3);
  const auto uniform = tracial_state(d3);
  CHECK(average_state(uniform, shift).same_as(uniform));
  const StateFunctional point(d3, Matrix::unit(3, 0, 0));
  CHECK(max_abs_diff(average_state(point, shift).density(), Matrix::identity(3) * (1.0 / 3.0)) <= 1e-15);

  Rng rng(51);
  const auto m2 = full_matrix_algebra(2);
  const auto z2 = AutomorphicAction::cyclic(m2, testutil::pauli_x(), 2);
  for (int t = 0; t < 20; ++t) {
    const StateFunctional f(m2, testutil::random_density(2, rng));
    const auto h = average_state(f, z2);
    for (std::size_t k = 0; k < z2.count(); ++k)
      CHECK(max_abs_diff(h.composed_with(z2, k).density(), h.density()) <= 1e-12);
    CHECK(min_eigenvalue(h.density()) >= min_eigenvalue(f.density()) / 2.0 - 1e-15);
  }
}

TEST_CASE("average_state needs a finite group") {
  const auto d2 = diagonal_algebra(2);
  const auto z = AutomorphicAction::from_automorphism(d2, testutil::pauli_x());
  CHECK_THROWS_AS(average_state(tracial_state(d2), z), Error);
}

TEST_CASE("invariant_state_for_automorphism examples") {
  Rng rng(53);
  const auto d5 = diagonal_algebra(5);
  const StateFunctional f(d5, Matrix::diagonal(std::vector<double>{0.1, 0.2, 0.3, 0.15, 0.25}));
  const auto id = AutomorphicAction::from_automorphism(d5, Matrix::identity(5));
  CHECK(invariant_state_for_automorphism(f, id).same_as(f));

  // Cyclic shift on diagonals: oracle is the Cesàro average over n steps.
  const Matrix w = testutil::cyclic_shift(5);
  const auto shift = AutomorphicAction::from_automorphism(d5, w);
  Matrix cesaro(5, 5);
  Matrix wk = Matrix::identity(5);
  for (int k = 0; k < 5; ++k) {
    cesaro += wk.adjoint() * f.density() * wk;
    wk = w * wk;
  }
  cesaro *= Complex(0.2);
  const auto h = invariant_state_for_automorphism(f, shift);
  CHECK(max_abs_diff(h.density(), cesaro) <= 1e-12);
  CHECK(max_abs_diff(h.density(), Matrix::identity(5) * 0.2) <= 1e-12);

  // Irrational rotation on M_2: Cesàro averages at N = 10^4 converge to the diagonal part.
  const double phi = std::sqrt(2.0);
  const Matrix rot = Matrix::diagonal(std::vector<Complex>{1.0, std::polar(1.0, phi)});
  const auto m2 = full_matrix_algebra(2);
  const auto theta = AutomorphicAction::from_automorphism(m2, rot);
  const StateFunctional g(m2, testutil::random_density(2, rng));
  const auto hg = invariant_state_for_automorphism(g, theta);
  Matrix avg(2, 2);
  Matrix rk = Matrix::identity(2);
  const int big_n = 10000;
  for (int k = 0; k < big_n; ++k) {
    avg += rk.adjoint() * g.density() * rk;
    rk = rot * rk;
  }
  avg *= Complex(1.0 / big_n);
  CHECK(max_abs_diff(hg.density(), avg) <= 1e-3);
  Matrix diag_part(2, 2);
  diag_part(0, 0) = g.density()(0, 0);
  diag_part(1, 1) = g.density()(1, 1);
  CHECK(max_abs_diff(hg.density(), diag_part) <= 1e-12);
}

TEST_CASE("mean ergodic projection is Θ-invariant and preserves faithfulness") {
  Rng rng(57);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 4;
    // Unitary with a repeated eigenvalue so the fixed space is nontrivial.
    const Matrix v = testutil::random_unitary(n, rng);
    std::vector<Complex> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = std::polar(1.0, (i % 2 == 0) ? 0.3 : 1.7 + static_cast<double>(i));
    const Matrix w = v * Matrix::diagonal(std::span<const Complex>(d)) * v.adjoint();
    const Matrix x = testutil::random_matrix(n, n, rng);
    const Matrix px = mean_ergodic_average(w, x);
    CHECK(max_abs_diff(mean_ergodic_average(w, w * x * w.adjoint()), px) <= 1e-10);
    CHECK(max_abs_diff(w * px * w.adjoint(), px) <= 1e-10);
    CHECK(max_abs_diff(mean_ergodic_average(w, px), px) <= 1e-10);

    const auto a = full_matrix_algebra(n);
    const auto theta = AutomorphicAction::from_automorphism(a, w);
    const StateFunctional f(a, testutil::random_density(n, rng));
    const auto h = invariant_state_for_automorphism(f, theta);
    CHECK(h.is_invariant(theta));
    CHECK(h.is_faithful());
  }
}

TEST_CASE("fixed_point_algebra examples") {
  const auto m2 = full_matrix_algebra(2);
  CHECK(fixed_point_algebra(AutomorphicAction::trivial(m2)).dim() == 4);

  const Matrix swap = testutil::permutation_matrix({0, 2, 1, 3});
  const auto m4 = full_matrix_algebra(4);
  std::vector<Matrix> images;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) images.push_back(swap * Matrix::unit(4, i, j) * swap - Matrix::unit(4, i, j));
  const std::size_t oracle = 16 - testutil::span_rank(images);
  CHECK(oracle == 10);
  CHECK(fixed_point_algebra(AutomorphicAction::cyclic(m4, swap, 2)).dim() == oracle);

  const auto d4 = diagonal_algebra(4);
  CHECK(fixed_point_algebra(AutomorphicAction::cyclic(d4, testutil::cyclic_shift(4), 4)).dim() == 1);
  CHECK(fixed_point_algebra(AutomorphicAction::from_automorphism(d4, testutil::cyclic_shift(4))).dim() == 1);
}

TEST_CASE("is_ergodic_action examples") {
  for (std::size_t n : {2u, 3u, 5u}) {
    const auto d = diagonal_algebra(n);
    CHECK(is_ergodic_action(AutomorphicAction::cyclic(d, testutil::cyclic_shift(n), n)).ergodic);
  }
  const auto d4 = diagonal_algebra(4);
  const auto by2 = is_ergodic_action(AutomorphicAction::cyclic(d4, testutil::cyclic_shift(4, 2), 2));
  CHECK_FALSE(by2.ergodic);
  REQUIRE(by2.witness);
  CHECK(max_abs_diff(*by2.witness, Matrix::diagonal(std::vector<double>{1, 0, 1, 0})) <= 1e-12);

  const auto triv = is_ergodic_action(AutomorphicAction::trivial(full_matrix_algebra(2)));
  CHECK_FALSE(triv.ergodic);
  REQUIRE(triv.witness);
  CHECK(max_abs_diff(*triv.witness, Matrix::unit(2, 0, 0)) <= 1e-12);
}

TEST_CASE("is_ergodic_state examples") {
  for (std::size_t n : {2u, 4u, 6u}) {
    const auto d = diagonal_algebra(n);
    const auto r = is_ergodic_state(tracial_state(d), AutomorphicAction::cyclic(d, testutil::cyclic_shift(n), n));
    CHECK(r.ergodic);
    CHECK(r.commutant_dim == 1);
  }

  const auto d4 = diagonal_algebra(4);
  const auto two = AutomorphicAction::cyclic(d4, testutil::permutation_matrix({1, 0, 3, 2}), 2);
  const auto f = tracial_state(d4);
  const auto r = is_ergodic_state(f, two);
  CHECK_FALSE(r.ergodic);
  CHECK(r.commutant_dim == 2);
  REQUIRE(r.split);
  CHECK(r.split->lambda == doctest::Approx(0.5));
  CHECK(max_abs_diff(r.split->part.density(), Matrix::diagonal(std::vector<double>{0.5, 0.5, 0, 0})) <= 1e-12);
  // The witness carries the indicator of the cycle {0, 1}.
  REQUIRE(r.gns_witness);
  CHECK(std::abs(r.gns_witness->trace() - Complex(2.0)) <= 1e-12);
  CHECK(max_abs_diff(support_of_state(r.split->part), Matrix::diagonal(std::vector<double>{1, 1, 0, 0})) <= 1e-12);

  const auto m2 = full_matrix_algebra(2);
  const auto tr = is_ergodic_state(tracial_state(m2), AutomorphicAction::trivial(m2));
  CHECK_FALSE(tr.ergodic);
  REQUIRE(tr.split);
  for (const auto& b : m2.basis()) {
    const Complex mix = tr.split->lambda * tr.split->part(b) + (1 - tr.split->lambda) * tr.split->complement(b);
    CHECK(std::abs(mix - tracial_state(m2)(b)) <= 1e-10);
  }

  // A pure state is ergodic for the trivial group; its support is cut down first.
  const auto pure = is_ergodic_state(StateFunctional(m2, Matrix::unit(2, 1, 1)), AutomorphicAction::trivial(m2));
  CHECK(pure.ergodic);
  CHECK(pure.gns_dim == 1);

  const auto d3 = diagonal_algebra(3);
  try {
    is_ergodic_state(StateFunctional(d3, Matrix::unit(3, 0, 0)),
                     AutomorphicAction::cyclic(d3, testutil::cyclic_shift(3), 3));
    FAIL("expected NotInvariant");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInvariant);
  }
}

TEST_CASE("ergodic states are the extreme invariant states on diagonal algebras") {
  Rng rng(59);
  std::size_t cases = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto d = diagonal_algebra(n);
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::pair<Perm, Perm>> actions;
    do {
      if (n <= 4 || rng.uniform() < 0.08) actions.push_back({p, Perm(p.size())});
    } while (std::next_permutation(p.begin(), p.end()));
    for (auto& [s, t] : actions) std::iota(t.begin(), t.end(), 0);
    if (n <= 4) {
      // Commuting pairs give Z_a x Z_b actions.
      std::vector<Perm> all;
      std::iota(p.begin(), p.end(), 0);
      do all.push_back(p);
      while (std::next_permutation(p.begin(), p.end()));
      for (const auto& s : all)
        for (const auto& t : all)
          if (compose(s, t) == compose(t, s) && rng.uniform() < 0.1) actions.push_back({s, t});
    }
    for (const auto& [s, t] : actions) {
      const auto act = permutation_action(d, s, t);
      const auto labels = orbit_labels({s, t}, n);
      std::vector<std::size_t> orbits(labels);
      std::sort(orbits.begin(), orbits.end());
      orbits.erase(std::unique(orbits.begin(), orbits.end()), orbits.end());

      std::vector<std::vector<double>> weights;
      for (std::size_t o : orbits) {  // uniform on each orbit
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) w[i] = labels[i] == o ? 1.0 : 0.0;
        weights.push_back(w);
      }
      weights.push_back(std::vector<double>(n, 1.0));
      {
        std::vector<double> w(n, 0.0);  // random orbit weights on a random subset of orbits
        for (std::size_t o : orbits) {
          const double x = rng.uniform() < 0.5 ? 0.0 : 0.1 + rng.uniform();
          for (std::size_t i = 0; i < n; ++i)
            if (labels[i] == o) w[i] = x;
        }
        if (std::accumulate(w.begin(), w.end(), 0.0) == 0.0) w[0] = 1.0, w = std::vector<double>(n, 1.0);
        weights.push_back(w);
      }
      for (auto w : weights) {
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (auto& x : w) x /= total;
        const StateFunctional f(d, Matrix::diagonal(std::span<const double>(w)));
        CHECK(is_ergodic_state(f, act).ergodic == diagonal_extreme_oracle(w, {s, t}));
        ++cases;
      }
    }
  }
  CHECK(cases > 300);
}

TEST_CASE("ergodic states are the extreme invariant states for Z2 inner actions on M2") {
  Rng rng(61);
  const auto m2 = full_matrix_algebra(2);
  std::vector<Matrix> us{testutil::pauli_x(), testutil::pauli_y(), testutil::pauli_z()};
  for (int t = 0; t < 5; ++t) {
    const Matrix v = testutil::random_unitary(2, rng);
    us.push_back(v * testutil::pauli_z() * v.adjoint());
  }
  for (const auto& u : us) {
    const auto act = AutomorphicAction::cyclic(m2, u, 2);
    const auto eig = hermitian_eigendecomposition(hermitian_part(u));
    const Matrix pm = eigenspace_projection(eig.vectors, 0, 1);
    const Matrix pp = eigenspace_projection(eig.vectors, 1, 2);
    for (double p : {0.0, 1.0, 0.5, 0.2 + 0.6 * rng.uniform()}) {
      const Matrix rho = hermitian_part(pp * p + pm * (1.0 - p));
      const StateFunctional f(m2, rho);
      const Matrix support = p == 0.0 ? pm : (p == 1.0 ? pp : Matrix::identity(2));
      CHECK(is_ergodic_state(f, act).ergodic == matrix_extreme_oracle(u, support));
      CHECK(is_ergodic_state(f, act).ergodic == (p == 0.0 || p == 1.0));
    }
  }
}

TEST_CASE("wandering projection examples") {
  const auto m2 = full_matrix_algebra(2);
  CHECK_FALSE(wandering_projection_search(AutomorphicAction::trivial(m2)));

  const auto d4 = diagonal_algebra(4);
  const auto shift = AutomorphicAction::cyclic(d4, testutil::cyclic_shift(4), 4);
  const auto fam = wandering_family_for(shift, Matrix::unit(4, 0, 0), 4);
  REQUIRE(fam);
  CHECK(fam->translates.size() == 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(max_abs(fam->translates[i] * fam->translates[j]) <= 1e-12);
  CHECK(wandering_projection_search(shift, {4, 8, kDefaultSeed}));

  const auto m2m2 = block_algebra(std::vector<BlockSpec>{{2, 1}, {2, 1}});
  const auto swap = AutomorphicAction::cyclic(m2m2, testutil::permutation_matrix({2, 3, 0, 1}), 2);
  CHECK_FALSE(wandering_family_for(swap, Matrix::identity(4), 2));

  // Z-action window: four distinct translates exist, five do not.
  const auto z = AutomorphicAction::from_automorphism(d4, testutil::cyclic_shift(4));
  CHECK(wandering_family_for(z, Matrix::unit(4, 0, 0), 4));
  CHECK_FALSE(wandering_family_for(z, Matrix::unit(4, 0, 0), 5));
  CHECK_FALSE(wandering_family_for(z, Matrix::unit(4, 0, 0), 1));
}

TEST_CASE("no weakly null orbits and faithful averages") {
  Rng rng(67);
  const auto m2m2 = block_algebra(std::vector<BlockSpec>{{2, 1}, {2, 1}});
  const auto swap = AutomorphicAction::cyclic(m2m2, testutil::permutation_matrix({2, 3, 0, 1}), 2);
  const auto d4 = diagonal_algebra(4);
  const auto shift = AutomorphicAction::from_automorphism(d4, testutil::cyclic_shift(4));
  const auto cd = center_and_blocks(m2m2);
  for (int t = 0; t < 20; ++t) {
    for (const auto& m : minimal_projection_decomposition(m2m2, cd, Matrix::identity(4), rng))
      CHECK_FALSE(has_weakly_null_orbit(swap, m.projection, 4));
    CHECK_FALSE(has_weakly_null_orbit(shift, Matrix::unit(4, t % 4, t % 4), 4));

    Matrix rho(4, 4);
    for (std::size_t k = 0; k < 2; ++k) rho.set_block(2 * k, 2 * k, testutil::random_density(2, rng));
    rho *= Complex(0.5);
    const StateFunctional f(m2m2, rho);
    const auto h = average_state(f, swap);
    CHECK(h.is_faithful());
    CHECK(h.is_invariant(swap));
  }
}
