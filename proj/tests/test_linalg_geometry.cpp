// Exact linear algebra, tropical points, configuration matroids and the
// shifted difference-direction models, with determinant and margin oracles
// computed independently inside the tests.

#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "omw/core_ops.hpp"
#include "omw/errors.hpp"
#include "omw/flips.hpp"
#include "omw/geometry.hpp"
#include "omw/instance.hpp"
#include "omw/linalg.hpp"
#include "omw/prng.hpp"

using namespace omw;

namespace {

QMat random_matrix(int rows, int cols, SplitMix64& rng) {
  QMat a(rows, QVec(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      a[i][j] = mpq_class(rng.range(-5, 5), rng.range(1, 3));
  return a;
}

// Determinant by the permutation formula, independent of the elimination in
// q_det.
mpq_class det_by_permutations(const QMat& a) {
  const int n = static_cast<int>(a.size());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  mpq_class total = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    mpq_class term = (inversions % 2 == 0) ? 1 : -1;
    for (int i = 0; i < n; ++i) term *= a[i][perm[i]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

RationalVectorConfig random_config(int n, int d, SplitMix64& rng) {
  std::vector<std::string> tokens;
  for (int i = 0; i < n; ++i) tokens.push_back("p" + std::to_string(i));
  RationalVectorConfig cfg;
  cfg.ground = make_ground(tokens);
  for (int i = 0; i < n; ++i) {
    QVec v;
    for (int j = 0; j < d; ++j)
      v.emplace_back(rng.range(-4, 4), rng.range(1, 3));
    cfg.vectors.push_back(std::move(v));
  }
  return cfg;
}

std::string pair_token(int p, int q) {
  return "(" + std::to_string(std::min(p, q)) + "," +
         std::to_string(std::max(p, q)) + ")";
}

// True when the lifting carries a cocircuit that is + at the lift element,
// zero exactly at `zeros` among the listed base elements, and matches every
// given (token, sign) constraint.
bool has_positive_cocircuit(const LiftingOM& m,
                            const std::vector<std::string>& zeros,
                            const std::vector<std::pair<std::string, Sign>>&
                                constraints) {
  const int f = m.lift_index();
  const GroundPtr g = m.matroid.ground();
  for (int s = 0; s < m.matroid.signed_count(); ++s) {
    const SignVector v = m.matroid.signed_cocircuit(s);
    if (v.at(f) != Sign::plus) continue;
    bool ok = true;
    for (const std::string& t : zeros)
      if (v.at(g->index_of(t)) != Sign::zero) ok = false;
    for (const auto& [t, want] : constraints)
      if (v.at(g->index_of(t)) != want) ok = false;
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("determinants match the permutation formula") {
  CHECK(q_det({{mpq_class(2), mpq_class(1)}, {mpq_class(7), mpq_class(4)}}) ==
        1);
  SplitMix64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const QMat a = random_matrix(3, 3, rng);
    CHECK(q_det(a) == det_by_permutations(a));
  }
  for (int t = 0; t < 5; ++t) {
    const QMat a = random_matrix(4, 4, rng);
    CHECK(q_det(a) == det_by_permutations(a));
  }
}

TEST_CASE("solves and kernels verify against the defining equations") {
  SplitMix64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const QMat a = random_matrix(3, 4, rng);
    QVec x0;
    for (int j = 0; j < 4; ++j) x0.emplace_back(rng.range(-3, 3));
    QVec b(3, 0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) b[i] += a[i][j] * x0[j];
    const auto x = q_solve(a, b);
    REQUIRE(x.has_value());
    for (int i = 0; i < 3; ++i) {
      mpq_class lhs = 0;
      for (int j = 0; j < 4; ++j) lhs += a[i][j] * (*x)[j];
      CHECK(lhs == b[i]);
    }
    const std::vector<QVec> kernel = q_kernel(a);
    CHECK(static_cast<int>(kernel.size()) == 4 - q_rank(a));
    for (const QVec& v : kernel) {
      for (int i = 0; i < 3; ++i) {
        mpq_class lhs = 0;
        for (int j = 0; j < 4; ++j) lhs += a[i][j] * v[j];
        CHECK(lhs == 0);
      }
    }
  }
  CHECK_FALSE(q_solve({{mpq_class(1), mpq_class(0)}, {mpq_class(1), mpq_class(0)}},
                      {mpq_class(1), mpq_class(2)})
                  .has_value());
}

TEST_CASE("tropical points are translation classes with an invariant pairing") {
  const TropicalPoint a(std::array<mpq_class, 4>{1, 2, 3, 4});
  const TropicalPoint b(std::array<mpq_class, 4>{2, 3, 4, 5});
  CHECK(a == b);
  CHECK(a.chart() == std::array<mpq_class, 3>{-3, -2, -1});
  QVec sz = a.sum_zero();
  mpq_class total = 0;
  for (const mpq_class& c : sz) total += c;
  CHECK(total == 0);

  const TropicalPoint d12 = TropicalPoint::pair_difference(1, 2);
  CHECK(tp_inner(d12, a) == a.sum_zero()[0] - a.sum_zero()[1]);
  // Pairing against a difference direction reads off a coordinate gap, which
  // is shift-invariant by construction.
  CHECK(tp_inner(d12, a) == tp_inner(d12, b));
  CHECK(TropicalPoint::axis(1) - TropicalPoint::axis(2) == d12);
  CHECK(d12.scaled(mpq_class(-1)) == TropicalPoint::pair_difference(2, 1));
}

TEST_CASE("chirotopes alternate and read determinant signs") {
  SplitMix64 rng(13);
  const RationalVectorConfig cfg = random_config(6, 3, rng);
  const Chirotope chi = chirotope_of(cfg, 3);
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      for (int c = b + 1; c < 6; ++c) {
        QMat m{cfg.vectors[a], cfg.vectors[b], cfg.vectors[c]};
        const mpq_class det = det_by_permutations(m);
        CHECK(chi.sign_sorted({a, b, c}) == sign_of_int(sgn(det)));
        CHECK(chi.sign_ordered({b, a, c}) ==
              opposite(chi.sign_sorted({a, b, c})));
        CHECK(chi.sign_ordered({c, a, b}) == chi.sign_sorted({a, b, c}));
      }
    }
  }
}

TEST_CASE("the fast configuration matroid agrees with the serial reference on "
          "seeded draws") {
  SplitMix64 rng(14);
  for (int t = 0; t < 30; ++t) {
    const int n = static_cast<int>(rng.range(2, 7));
    const int d = static_cast<int>(rng.range(1, 3));
    const RationalVectorConfig cfg = random_config(n, d, rng);
    const OrientedMatroid fast = om_of_config(cfg);
    const OrientedMatroid slow = om_of_config_reference(cfg);
    CHECK(fast == slow);
  }
}

TEST_CASE("shifted models carry offset one on the cycle pairs, oriented "
          "canonically") {
  const AffineArrangement b123 = braid_model(CyclicTriple(1, 2, 3));
  const GroundPtr g = b123.ground;
  auto offset = [&](const std::string& t) {
    return b123.offsets[static_cast<std::size_t>(g->index_of(t))];
  };
  // Cycle 1→2→3→1: the wall of {1,3} is traversed against its canonical
  // (1,3) reading, so its stored offset is −1.
  CHECK(offset("(1,2)") == 1);
  CHECK(offset("(2,3)") == 1);
  CHECK(offset("(1,3)") == -1);
  CHECK(offset("(1,4)") == 0);
  CHECK(offset("(2,4)") == 0);
  CHECK(offset("(3,4)") == 0);

  const AffineArrangement b124 = braid_model(CyclicTriple(1, 2, 4));
  const GroundPtr g2 = b124.ground;
  auto offset2 = [&](const std::string& t) {
    return b124.offsets[static_cast<std::size_t>(g2->index_of(t))];
  };
  CHECK(offset2("(1,2)") == 1);
  CHECK(offset2("(2,4)") == 1);
  CHECK(offset2("(1,4)") == -1);
  CHECK(offset2("(1,3)") == 0);
  CHECK(offset2("(2,3)") == 0);
  CHECK(offset2("(3,4)") == 0);

  // At the origin every through-4 wall is incident and the triangle walls
  // have margin −(their offset sign).
  const TropicalPoint origin;
  CHECK(b123.margin(g->index_of("(1,2)"), origin) == -1);
  CHECK(b123.margin(g->index_of("(1,3)"), origin) == 1);
  CHECK(b123.margin(g->index_of("(1,4)"), origin) == 0);
}

TEST_CASE("every shifted model lifts the difference-direction matroid with "
          "triple vertices only") {
  const OrientedMatroid m0 = om_of_config(braid_config());
  std::set<std::string> keys;
  for (const CyclicTriple& gamma : CyclicTriple::all_classes()) {
    const AffineArrangement model = braid_model(gamma);
    CHECK(model.vertex_concurrence_max() == 3);
    const LiftingOM lift = lifting_from_affine(model, m0);
    lift.check_lifting();
    CHECK(lift.matroid.rank() == 4);
    CHECK(lift.base == m0);
    keys.insert(canonical_key(lift));
  }
  CHECK(keys.size() == 8);
}

TEST_CASE("the triangle and vertex cocircuits of the shifted models") {
  const OrientedMatroid m0 = om_of_config(braid_config());
  for (const CyclicTriple& gamma : CyclicTriple::all_classes()) {
    const LiftingOM lift = lifting_from_affine(braid_model(gamma), m0);
    const auto [i, j, k] = gamma.rep();
    const int l = gamma.missing();

    // Triangle-corner family: for each distinguished axis p, three cocircuits
    // each vanishing on two triangle walls and the (p,l) wall, with the
    // stated sign on the remaining triangle wall.
    for (const int p : {i, j, k}) {
      CHECK(has_positive_cocircuit(
          lift, {pair_token(k, i), pair_token(i, j), pair_token(p, l)},
          {{pair_token(j, k), alpha_sign(k, j)}}));
      CHECK(has_positive_cocircuit(
          lift, {pair_token(j, k), pair_token(i, j), pair_token(p, l)},
          {{pair_token(k, i), alpha_sign(i, k)}}));
      CHECK(has_positive_cocircuit(
          lift, {pair_token(j, k), pair_token(k, i), pair_token(p, l)},
          {{pair_token(i, j), alpha_sign(j, i)}}));
    }

    // Central vertex: zero on the three through-l walls, the three stated
    // signs on the triangle walls.
    CHECK(has_positive_cocircuit(
        lift, {pair_token(i, l), pair_token(j, l), pair_token(k, l)},
        {{pair_token(j, k), alpha_sign(k, j)},
         {pair_token(k, i), alpha_sign(i, k)},
         {pair_token(i, j), alpha_sign(j, i)}}));
  }
}
