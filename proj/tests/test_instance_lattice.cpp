// Instance sampling, the wall element scheme, lattice-point sets and the
// entangled orientation data, checked against brute-force enumerations and
// the defining formulas.

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "omw/errors.hpp"
#include "omw/instance.hpp"
#include "omw/lattice.hpp"
#include "omw/prng.hpp"

using namespace omw;

namespace {

// All canonical points of the bounded-difference set, by scanning the cube
// [0,N]^4 and keeping tuples that touch 0.
std::vector<LatticePoint> brute_qstar(int N) {
  std::vector<LatticePoint> out;
  for (long long a = 0; a <= N; ++a)
    for (long long b = 0; b <= N; ++b)
      for (long long c = 0; c <= N; ++c)
        for (long long d = 0; d <= N; ++d)
          if (a == 0 || b == 0 || c == 0 || d == 0)
            out.push_back(LatticePoint{{a, b, c, d}});
  return out;
}

bool brute_in_q(const LatticePoint& p, int N) {
  std::array<long long, 4> s = p.x;
  std::sort(s.begin(), s.end());
  for (int i = 0; i + 1 < 4; ++i)
    if (s[static_cast<std::size_t>(i) + 1] - s[static_cast<std::size_t>(i)] > N)
      return false;
  return true;
}

bool brute_in_qstar(const LatticePoint& p, int N) {
  const auto [lo, hi] = std::minmax_element(p.x.begin(), p.x.end());
  return *hi - *lo <= N;
}

}  // namespace

TEST_CASE("pair order, orientation signs and tilt directions") {
  CHECK(axis_pairs().size() == 6);
  CHECK(axis_pairs()[0].i == 1);
  CHECK(axis_pairs()[0].j == 2);
  CHECK(pair_index(1, 2) == 0);
  CHECK(pair_index(3, 4) == 5);
  CHECK(alpha_sign(1, 3) == Sign::plus);
  CHECK(alpha_sign(3, 1) == Sign::minus);

  for (int u = 0; u < 6; ++u) {
    const QVec v = delta_direction(u).sum_zero();
    mpq_class total = 0;
    int plus = 0, minus = 0;
    for (int axis = 1; axis <= 4; ++axis) {
      const mpq_class& c = v[static_cast<std::size_t>(axis) - 1];
      total += c;
      CHECK((c == 1 || c == -1));
      if (c == 1) ++plus;
      if (c == -1) ++minus;
      CHECK(delta_coord(u, axis) == sgn(c));
    }
    CHECK(total == 0);
    CHECK(plus == 2);
    CHECK(minus == 2);
  }
  // The second half of the table is the negation of the first.
  for (int u = 0; u < 3; ++u)
    CHECK(delta_direction(u + 3) == delta_direction(u).scaled(mpq_class(-1)));
}

TEST_CASE("wall tokens and indices round-trip, including reversed readings") {
  const int N = 2;
  CHECK(base_element_count(N) == 30);
  const GroundPtr g = construction_ground(N);
  CHECK(g->size() == 31);
  CHECK(g->token(30) == "f");
  for (int idx = 0; idx < 30; ++idx) {
    const ElementRef ref = element_ref(N, idx);
    CHECK(ref.i < ref.j);
    CHECK(element_index(N, ref.i, ref.j, ref.r) == idx);
    CHECK(element_index(N, ref.j, ref.i, -ref.r) == idx);
    CHECK(g->token(idx) == element_token(ref.i, ref.j, ref.r));
  }
  CHECK_THROWS_AS(element_index(N, 1, 2, 3), usage_error);
  CHECK_THROWS_AS(element_index(N, 1, 1, 0), usage_error);
}

TEST_CASE("instances are pure functions of scale and seed") {
  const ConstructionInstance a = sample_instance(1, 77);
  const ConstructionInstance b = sample_instance(1, 77);
  const ConstructionInstance c = sample_instance(1, 78);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.to_json() != c.to_json());

  const int E = base_element_count(1);
  CHECK(static_cast<int>(a.g.size()) == E);
  CHECK(static_cast<int>(a.u.size()) == E);
  CHECK(static_cast<int>(a.eps.size()) == E);
  for (int e = 0; e < E; ++e) {
    CHECK((a.g[static_cast<std::size_t>(e)] == 0 ||
           a.g[static_cast<std::size_t>(e)] == 1));
    CHECK(a.u[static_cast<std::size_t>(e)] >= 0);
    CHECK(a.u[static_cast<std::size_t>(e)] <= 5);
    for (const mpq_class& x : a.eps[static_cast<std::size_t>(e)])
      CHECK(abs(x) <= a.delta * a.delta);
  }
  CHECK(a.delta == mpq_class(1, 1 << 20));

  // Attempt zero of the retry stream reproduces the sampled jitter.
  ConstructionInstance copy = a;
  resample_eps(copy, 0);
  CHECK(copy.to_json() == a.to_json());
  resample_eps(copy, 3);
  CHECK(copy.to_json() != a.to_json());
}

TEST_CASE("instance files round-trip losslessly") {
  const ConstructionInstance a = sample_instance(2, 5);
  const ConstructionInstance back = ConstructionInstance::from_json(a.to_json());
  CHECK(back.to_json() == a.to_json());

  const std::string path = "instance_roundtrip.json";
  save_instance(a, path);
  const ConstructionInstance loaded = load_instance(path);
  CHECK(loaded.to_json() == a.to_json());
  std::remove(path.c_str());
}

TEST_CASE("coin flips attach the wall's own pair generator") {
  ConstructionInstance inst = sample_instance(0, 3);
  const int e12 = element_index(0, 1, 2, 0);
  inst.g[static_cast<std::size_t>(e12)] = 0;
  CHECK(inst.g_element(e12).is_identity());
  inst.g[static_cast<std::size_t>(e12)] = 1;
  CHECK(inst.g_element(e12) == group_generator(1, 2));
}

TEST_CASE("lattice membership matches the gap and spread definitions") {
  for (const int N : {0, 1, 2}) {
    for (long long a = -2; a <= 2; ++a)
      for (long long b = -2; b <= 2; ++b)
        for (long long c = -2; c <= 2; ++c) {
          const LatticePoint p{{a, b, c, 0}};
          CHECK(in_Q(p, N) == brute_in_q(p, N));
          CHECK(in_Qstar(p, N) == brute_in_qstar(p, N));
        }
  }
  // Bounded spread implies bounded consecutive gaps but not conversely.
  const LatticePoint spread{{0, 2, 4, 6}};
  CHECK(in_Q(spread, 2));
  CHECK_FALSE(in_Qstar(spread, 2));

  const LatticePoint p{{5, 7, 6, 9}};
  CHECK(p.canonicalized().x == std::array<long long, 4>{0, 2, 1, 4});
  CHECK(p.coord(1) == 5);
  CHECK(p.diff(4, 2) == 2);
  CHECK(p.canonicalized().diff(4, 2) == 2);
}

TEST_CASE("the bounded-difference set enumerates to (N+1)^4 - N^4 canonical "
          "points") {
  for (const int N : {0, 1, 2, 3}) {
    const std::vector<LatticePoint> qs = enumerate_Qstar(N);
    const long long expect =
        (N + 1LL) * (N + 1) * (N + 1) * (N + 1) - 1LL * N * N * N * N;
    CHECK(static_cast<long long>(qs.size()) == expect);
    std::set<std::string> seen;
    for (const LatticePoint& p : qs) {
      CHECK(in_Qstar(p, N));
      CHECK(p.canonicalized() == p);
      seen.insert(p.to_string());
    }
    CHECK(static_cast<long long>(seen.size()) == expect);
    // Same set as the brute cube scan.
    std::set<std::string> brute;
    for (const LatticePoint& p : brute_qstar(N)) brute.insert(p.to_string());
    CHECK(brute == seen);
  }
}

TEST_CASE("run lengths and members match a step-by-step walk") {
  const int N = 2;
  for (const LatticePoint& p : enumerate_Qstar(N)) {
    for (int axis = 1; axis <= 4; ++axis) {
      for (const Sign dir : {Sign::plus, Sign::minus}) {
        long long walk = 0;
        std::vector<LatticePoint> members;
        while (true) {
          LatticePoint q = p;
          q.x[static_cast<std::size_t>(axis) - 1] +=
              (dir == Sign::plus ? walk + 1 : -(walk + 1));
          if (!in_Qstar(q, N)) break;
          ++walk;
          members.push_back(q.canonicalized());
        }
        CHECK(r_size(p, axis, dir, N) == walk);
        CHECK(r_members(p, axis, dir, N) == members);
      }
    }
  }
}

TEST_CASE("the point class is the commuting product of the incident coin "
          "flips") {
  ConstructionInstance inst = sample_instance(0, 9);
  std::fill(inst.g.begin(), inst.g.end(), 0);
  const LatticePoint origin;
  CHECK(gamma_of_point(inst, origin) == CyclicTriple(1, 2, 3));

  inst.g[static_cast<std::size_t>(element_index(0, 1, 2, 0))] = 1;
  CHECK(gamma_of_point(inst, origin) == pi_action(1, 2, CyclicTriple(1, 2, 3)));

  inst.g[static_cast<std::size_t>(element_index(0, 3, 4, 0))] = 1;
  CHECK(gamma_of_point(inst, origin) ==
        pi_action(3, 4, pi_action(1, 2, CyclicTriple(1, 2, 3))));

  // A wall whose offset does not exist at this scale contributes nothing:
  // at x = (1,0,0,0) the three walls through axis 1 would need offset 1.
  const LatticePoint off{{1, 0, 0, 0}};
  std::fill(inst.g.begin(), inst.g.end(), 0);
  inst.g[static_cast<std::size_t>(element_index(0, 1, 2, 0))] = 1;
  CHECK(gamma_of_point(inst, off) == CyclicTriple(1, 2, 3));
  inst.g[static_cast<std::size_t>(element_index(0, 2, 3, 0))] = 1;
  CHECK(gamma_of_point(inst, off) == pi_action(2, 3, CyclicTriple(1, 2, 3)));
}

TEST_CASE("beta reads the tilt coordinates through the orientation signs") {
  const ConstructionInstance inst = sample_instance(1, 21);
  const int i = 2, j = 3, k = 1, l = 4;
  const long long r = 1, s = 0, t = -1;
  int total = 0;
  const struct {
    int p, q;
    long long off;
  } walls[3] = {{i, j, r}, {j, k, s}, {k, i, t}};
  for (const auto& w : walls) {
    const int e = element_index(inst.N, w.p, w.q, w.off);
    const int coord = delta_coord(inst.u[static_cast<std::size_t>(e)], l);
    total += static_cast<int>(alpha_sign(w.p, w.q)) * coord;
  }
  CHECK(total != 0);
  CHECK(beta(i, j, k, r, s, t, inst) == sign_of_int(total));

  // The per-axis reading at a point uses the rotation assigned by the
  // point's class and the point's own offsets.
  for (const LatticePoint& p : enumerate_Qstar(inst.N)) {
    for (int axis = 1; axis <= 4; ++axis) {
      const CyclicTriple tri =
          orientation_of(gamma_of_point(inst, p),
                         [&] {
                           std::array<int, 3> rest{};
                           int pos = 0;
                           for (int m = 1; m <= 4; ++m)
                             if (m != axis) rest[static_cast<std::size_t>(pos++)] = m;
                           return rest;
                         }());
      const auto [a, b, c] = tri.rep();
      CHECK(beta_axis(inst, p, axis) ==
            beta(a, b, c, p.diff(a, b), p.diff(b, c), p.diff(c, a), inst));
    }
  }
}

TEST_CASE("special-set certificates carry verifiable data") {
  int nonempty = 0;
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const ConstructionInstance inst = sample_instance(1, 1000 + seed);
    const std::vector<OmegaCertificate> omega = omega_set(inst);
    std::set<std::string> in_omega;
    for (const OmegaCertificate& cert : omega) {
      in_omega.insert(cert.x.to_string());
      CHECK(cert.gamma == gamma_of_point(inst, cert.x));
      const auto rep3 = cert.gamma.rep();
      for (int axis = 1; axis <= 4; ++axis) {
        CHECK(cert.beta_by_axis[static_cast<std::size_t>(axis) - 1] ==
              beta_axis(inst, cert.x, axis));
        CHECK(cert.r_plus[static_cast<std::size_t>(axis) - 1] ==
              r_size(cert.x, axis, Sign::plus, inst.N));
        CHECK(cert.r_minus[static_cast<std::size_t>(axis) - 1] ==
              r_size(cert.x, axis, Sign::minus, inst.N));
      }
      // Membership needs the beta-direction runs of the triple's own axes
      // (not the missing one) at least N/2 long.
      for (const int axis : rep3) {
        const Sign dir = cert.beta_by_axis[static_cast<std::size_t>(axis) - 1];
        const long long run =
            dir == Sign::plus
                ? cert.r_plus[static_cast<std::size_t>(axis) - 1]
                : cert.r_minus[static_cast<std::size_t>(axis) - 1];
        CHECK(2 * run >= inst.N);
      }
      for (const bool cond : cert.sign_conditions) CHECK(cond);
      // Onward sets: beta-direction run members landing back in the special
      // set with the rotated class.
      for (int m = 0; m < 3; ++m) {
        const int axis = rep3[static_cast<std::size_t>(m)];
        const Sign dir =
            cert.beta_by_axis[static_cast<std::size_t>(axis) - 1];
        const std::vector<LatticePoint> run =
            r_members(cert.x, axis, dir, inst.N);
        const auto rot = cert.gamma.rotations()[static_cast<std::size_t>(m)];
        const CyclicTriple rotated(rot[1], rot[2], cert.gamma.missing());
        for (const LatticePoint& z :
             cert.s_sets[static_cast<std::size_t>(m)]) {
          CHECK(std::find(run.begin(), run.end(), z) != run.end());
          CHECK(omega_member(inst, z));
          CHECK(gamma_of_point(inst, z) == rotated);
        }
      }
    }
    if (!omega.empty()) ++nonempty;
    // The point test agrees with the sweep.
    for (const LatticePoint& p : enumerate_Qstar(inst.N))
      CHECK(omega_member(inst, p) == (in_omega.count(p.to_string()) > 0));
  }
  MESSAGE("nonempty special sets among 24 seeds: ", nonempty);
}
