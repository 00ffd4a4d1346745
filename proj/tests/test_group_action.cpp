// The eight cyclic orientation classes and the pair action: canonical forms,
// the completion map on 3-subsets, the generator table checked by hand, and
// the exhaustive structural audit.

#include <doctest.h>

#include <array>
#include <set>
#include <vector>

#include "omw/group_action.hpp"

using namespace omw;

namespace {

const std::array<std::array<int, 2>, 6> kPairs{
    std::array<int, 2>{1, 2}, std::array<int, 2>{1, 3},
    std::array<int, 2>{1, 4}, std::array<int, 2>{2, 3},
    std::array<int, 2>{2, 4}, std::array<int, 2>{3, 4}};

const std::array<std::array<int, 3>, 4> kTriples{
    std::array<int, 3>{1, 2, 3}, std::array<int, 3>{1, 2, 4},
    std::array<int, 3>{1, 3, 4}, std::array<int, 3>{2, 3, 4}};

}  // namespace

TEST_CASE("cyclic triples canonicalize to the smallest leading axis") {
  CHECK(CyclicTriple(2, 3, 1) == CyclicTriple(1, 2, 3));
  CHECK(CyclicTriple(3, 1, 2) == CyclicTriple(1, 2, 3));
  CHECK(CyclicTriple(1, 2, 3) != CyclicTriple(1, 3, 2));
  CHECK(CyclicTriple(1, 2, 3).rep() == std::array<int, 3>{1, 2, 3});
  CHECK(CyclicTriple(4, 2, 3).rep() == std::array<int, 3>{2, 3, 4});
  CHECK(CyclicTriple(1, 2, 3).missing() == 4);
  CHECK(CyclicTriple(2, 4, 3).missing() == 1);
  CHECK(CyclicTriple(1, 2, 3).reversed() == CyclicTriple(1, 3, 2));
  CHECK(CyclicTriple(1, 2, 3).contains(2));
  CHECK_FALSE(CyclicTriple(1, 2, 3).contains(4));

  const auto rots = CyclicTriple(1, 2, 4).rotations();
  CHECK(rots[0] == std::array<int, 3>{1, 2, 4});
  CHECK(rots[1] == std::array<int, 3>{2, 4, 1});
  CHECK(rots[2] == std::array<int, 3>{4, 1, 2});

  CHECK(CyclicTriple::parse("(143)") == CyclicTriple(1, 4, 3));
  // (314) and (134) are opposite orientations of the same 3-subset.
  CHECK(CyclicTriple(3, 1, 4).to_string() == "(143)");
  CHECK(CyclicTriple(3, 1, 4) != CyclicTriple(1, 3, 4));
  CHECK(CyclicTriple(3, 1, 4) == CyclicTriple(1, 4, 3));

  const auto& all = CyclicTriple::all_classes();
  CHECK(all.size() == 8);
  std::set<std::string> names;
  for (const CyclicTriple& g : all) {
    names.insert(g.to_string());
    CHECK(all[static_cast<std::size_t>(g.class_index())] == g);
  }
  CHECK(names.size() == 8);
}

TEST_CASE("the completion map assigns the documented classes to every "
          "3-subset") {
  const CyclicTriple g(1, 2, 3);
  CHECK(orientation_of(g, {1, 2, 3}) == CyclicTriple(1, 2, 3));
  CHECK(orientation_of(g, {1, 2, 4}) == CyclicTriple(1, 2, 4));
  CHECK(orientation_of(g, {2, 3, 4}) == CyclicTriple(2, 3, 4));
  CHECK(orientation_of(g, {1, 3, 4}) == CyclicTriple(3, 1, 4));
  // Subset order must not matter.
  CHECK(orientation_of(g, {4, 3, 1}) == CyclicTriple(3, 1, 4));
  // A class determines its completion map injectively.
  for (const CyclicTriple& a : CyclicTriple::all_classes()) {
    for (const CyclicTriple& b : CyclicTriple::all_classes()) {
      if (a == b) continue;
      bool same = true;
      for (const auto& t : kTriples)
        if (orientation_of(a, t) != orientation_of(b, t)) same = false;
      CHECK_FALSE(same);
    }
  }
}

TEST_CASE("the generator table on (123) matches the defining rules") {
  const CyclicTriple g(1, 2, 3);
  // (ij) inside the triple: (ijk) -> (jil); (kl) through the missing axis:
  // (ijk) -> (ijl).  The six pairs, written out by renaming:
  CHECK(pi_action(1, 2, g) == CyclicTriple(2, 1, 4));
  CHECK(pi_action(2, 3, g) == CyclicTriple(3, 2, 4));
  CHECK(pi_action(1, 3, g) == CyclicTriple(1, 3, 4));
  CHECK(pi_action(3, 4, g) == CyclicTriple(1, 2, 4));
  CHECK(pi_action(1, 4, g) == CyclicTriple(2, 3, 4));
  CHECK(pi_action(2, 4, g) == CyclicTriple(3, 1, 4));
}

TEST_CASE("generators reverse exactly the subsets containing their pair") {
  for (const CyclicTriple& g : CyclicTriple::all_classes()) {
    for (const auto& [a, b] : kPairs) {
      const CyclicTriple moved = pi_action(a, b, g);
      for (const auto& t : kTriples) {
        const bool holds_pair =
            (t[0] == a || t[1] == a || t[2] == a) &&
            (t[0] == b || t[1] == b || t[2] == b);
        const CyclicTriple before = orientation_of(g, t);
        const CyclicTriple after = orientation_of(moved, t);
        if (holds_pair)
          CHECK(after == before.reversed());
        else
          CHECK(after == before);
      }
    }
  }
}

TEST_CASE("generators are commuting involutions with a transitive orbit") {
  for (const CyclicTriple& g : CyclicTriple::all_classes()) {
    for (const auto& [a, b] : kPairs) {
      CHECK(pi_action(a, b, pi_action(a, b, g)) == g);
      for (const auto& [c, d] : kPairs)
        CHECK(pi_action(c, d, pi_action(a, b, g)) ==
              pi_action(a, b, pi_action(c, d, g)));
    }
  }
  // Breadth-first orbit of (123) under the six generators.
  std::set<int> orbit{CyclicTriple(1, 2, 3).class_index()};
  std::vector<CyclicTriple> frontier{CyclicTriple(1, 2, 3)};
  while (!frontier.empty()) {
    const CyclicTriple cur = frontier.back();
    frontier.pop_back();
    for (const auto& [a, b] : kPairs) {
      const CyclicTriple next = pi_action(a, b, cur);
      if (orbit.insert(next.class_index()).second) frontier.push_back(next);
    }
  }
  CHECK(orbit.size() == 8);
}

TEST_CASE("bit-encoded group elements reproduce the pair action") {
  for (const auto& [a, b] : kPairs) {
    const GroupElement gen = group_generator(a, b);
    // The generator flips exactly the two 3-subsets containing both axes,
    // i.e. the bits of the two axes outside the pair.
    unsigned expect = 0;
    for (int m = 1; m <= 4; ++m)
      if (m != a && m != b) expect |= 1u << (m - 1);
    CHECK(gen.bits == expect);
    for (const CyclicTriple& g : CyclicTriple::all_classes())
      CHECK(apply_group(gen, g) == pi_action(a, b, g));
  }
  const GroupElement e;
  CHECK(e.is_identity());
  for (const CyclicTriple& g : CyclicTriple::all_classes())
    CHECK(apply_group(e, g) == g);
  // Composition is bitwise, and signatures transform by XOR.
  const GroupElement g12 = group_generator(1, 2);
  const GroupElement g34 = group_generator(3, 4);
  CHECK(g12.compose(g12).is_identity());
  for (const CyclicTriple& g : CyclicTriple::all_classes()) {
    CHECK(apply_group(g12.compose(g34), g) ==
          pi_action(3, 4, pi_action(1, 2, g)));
    CHECK(orientation_signature(apply_group(g12, g)) ==
          (orientation_signature(g) ^ g12.bits));
    CHECK(class_from_signature(orientation_signature(g)) == g);
  }
}

TEST_CASE("the exhaustive structural audit passes") {
  const GroupCheckReport rep = group_properties_check();
  for (const std::string& f : rep.failures) MESSAGE(f);
  CHECK(rep.ok);
  CHECK(rep.failures.empty());
}
