// Flip detection against an exact geometric oracle, flip application
// mechanics (involution, midpoints, the uniqueness property), and the
// breadth-first flip graph with its JSON-lines persistence.

#include <doctest.h>

#include <algorithm>
#include <array>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "omw/construction.hpp"
#include "omw/core_ops.hpp"
#include "omw/errors.hpp"
#include "omw/flips.hpp"
#include "omw/geometry.hpp"
#include "omw/instance.hpp"
#include "omw/linalg.hpp"

using namespace omw;

namespace {

// Five affine planes with generic integer data: x = 0, y = 0, z = 0,
// x + y + z = 1, x + 2y + 4z = 3 in chart coordinates.  Every normal triple
// is independent and no four planes meet, checked by the tests themselves.
AffineArrangement five_planes() {
  AffineArrangement arr;
  arr.ground = make_ground({"a", "b", "c", "d", "e"});
  const std::array<std::array<int, 3>, 5> rows{
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, 2, 4}}};
  const std::array<int, 5> offs{0, 0, 0, 1, 3};
  for (std::size_t e = 0; e < 5; ++e) {
    arr.normals.push_back(
        TropicalPoint::from_chart(rows[e][0], rows[e][1], rows[e][2]));
    arr.offsets.push_back(offs[e]);
  }
  return arr;
}

// Geometric criterion for a flippable 4-set: the four planes bound a
// tetrahedron cell (vertices = their triple intersections), and the set
// flips exactly when the remaining plane misses that cell, i.e. leaves all
// four vertices strictly on one side.
std::set<FlipSupport> tetrahedron_supports(const AffineArrangement& arr) {
  std::set<FlipSupport> out;
  for (int skip = 0; skip < 5; ++skip) {
    std::array<int, 4> d{};
    int pos = 0;
    for (int e = 0; e < 5; ++e)
      if (e != skip) d[static_cast<std::size_t>(pos++)] = e;

    bool one_side = true;
    int side = 0;
    for (int omit = 0; omit < 4 && one_side; ++omit) {
      QMat a;
      QVec b;
      for (int t = 0; t < 4; ++t) {
        if (t == omit) continue;
        const std::size_t e = static_cast<std::size_t>(
            d[static_cast<std::size_t>(t)]);
        const QVec n = arr.normals[e].sum_zero();
        a.push_back({n[0], n[1], n[2]});
        b.push_back(arr.offsets[e]);
      }
      const auto sol = q_solve(a, b);
      REQUIRE(sol.has_value());
      const TropicalPoint vertex =
          TropicalPoint::from_chart((*sol)[0], (*sol)[1], (*sol)[2]);
      const int s = sgn(arr.margin(skip, vertex));
      REQUIRE(s != 0);
      if (side == 0) side = s;
      if (s != side) one_side = false;
    }
    if (one_side) out.insert(FlipSupport{d});
  }
  return out;
}

void check_witness_shape(const LiftingOM& m, const FlipWitness& w) {
  const int f = m.lift_index();
  const auto& d = w.support.elements;
  CHECK(std::is_sorted(d.begin(), d.end()));
  CHECK_FALSE(w.support.contains(f));
  for (int i = 0; i < 4; ++i) {
    const SignVector& x = w.cocircuits[static_cast<std::size_t>(i)];
    // Vanishes exactly on the other three support elements...
    for (int j = 0; j < 4; ++j)
      CHECK((x.at(d[static_cast<std::size_t>(j)]) == Sign::zero) == (j != i));
    CHECK(x.support_size() == m.matroid.elements() - 3);
    // ...and points up at the lift element.
    CHECK(x.at(f) == Sign::plus);
    CHECK(m.matroid.contains_cocircuit(x));
  }
  // The four agree everywhere away from the support.
  for (int e = 0; e < m.matroid.elements(); ++e) {
    if (w.support.contains(e)) continue;
    for (int i = 1; i < 4; ++i)
      CHECK(w.cocircuits[static_cast<std::size_t>(i)].at(e) ==
            w.cocircuits[0].at(e));
  }
}

// The uniqueness property behind flip blocking: no signed cocircuit other
// than the four witnesses matches them (zero allowed) at all four support
// elements.
void check_uniqueness_brute(const LiftingOM& m, const FlipWitness& w) {
  for (int s = 0; s < m.matroid.signed_count(); ++s) {
    const SignVector y = m.matroid.signed_cocircuit(s);
    bool is_witness = false;
    for (const SignVector& x : w.cocircuits)
      if (y == x) is_witness = true;
    if (is_witness) continue;
    bool conforms = true;
    for (int i = 0; i < 4; ++i) {
      const int e = w.support.elements[static_cast<std::size_t>(i)];
      const Sign want =
          w.cocircuits[static_cast<std::size_t>(i)].at(e);
      if (y.at(e) != want && y.at(e) != Sign::zero) conforms = false;
    }
    CHECK_FALSE(conforms);
  }
}

}  // namespace

TEST_CASE("flip supports of five planes are the uncut tetrahedron cells") {
  const AffineArrangement arr = five_planes();
  CHECK(arr.vertex_concurrence_max() == 3);
  const OrientedMatroid base = om_of_config(arr.normal_config());
  CHECK(profile(base).uniform);
  const LiftingOM lifting = lifting_from_affine(arr, base);
  lifting.check_lifting();
  CHECK(profile(lifting.matroid).uniform);

  const std::vector<FlipWitness> found = find_flip_supports(lifting);
  std::set<FlipSupport> found_set;
  for (const FlipWitness& w : found) {
    found_set.insert(w.support);
    check_witness_shape(lifting, w);
    check_uniqueness_brute(lifting, w);
  }
  CHECK(found_set.size() == found.size());
  CHECK(found_set == tetrahedron_supports(arr));
  // Worked out by hand for these planes: dropping plane b or c leaves a
  // tetrahedron the remaining plane misses, the other three cells are cut.
  CHECK(found_set.size() == 2);
}

TEST_CASE("applying a flip negates the witness pairs and nothing else") {
  const ConstructionInstance inst = sample_instance(0, 6);
  const LiftingOM m = build_entangled_lifting(inst);
  const std::vector<FlipWitness> witnesses = find_flip_supports(m);
  REQUIRE(!witnesses.empty());

  for (const FlipWitness& w : witnesses) {
    check_witness_shape(m, w);
    check_uniqueness_brute(m, w);

    const LiftingOM flipped = apply_flip(m, w.support);
    CHECK(canonical_key(flipped) != canonical_key(m));
    CHECK(flipped.matroid.pair_count() == m.matroid.pair_count());
    CHECK(flipped.base == m.base);
    flipped.check_lifting();

    // The four witness cocircuits reappear negated on the support.
    for (const SignVector& x : w.cocircuits) {
      SignVector mutated = x;
      for (const int e : w.support.elements)
        mutated.set(e, opposite(x.at(e)));
      CHECK(flipped.matroid.contains_cocircuit(mutated));
      CHECK_FALSE(flipped.matroid.contains_cocircuit(x));
    }

    // Flipping back restores the original matroid, and the support is
    // offered again by the fresh scan.
    const LiftingOM back = apply_flip(flipped, w.support);
    CHECK(canonical_key(back) == canonical_key(m));
    const std::vector<FlipWitness> rescan = find_flip_supports(flipped);
    bool reoffered = false;
    for (const FlipWitness& r : rescan)
      if (r.support == w.support) reoffered = true;
    CHECK(reoffered);
  }
}

TEST_CASE("the midpoint sits weakly above both endpoints of a flip") {
  const ConstructionInstance inst = sample_instance(0, 6);
  const LiftingOM m = build_entangled_lifting(inst);
  const std::vector<FlipWitness> witnesses = find_flip_supports(m);
  REQUIRE(!witnesses.empty());
  const FlipWitness& w = witnesses.front();

  const OrientedMatroid mid = flip_midpoint(m, w.support);
  CHECK(mid.pair_count() == m.matroid.pair_count() - 3);
  CHECK_FALSE(profile(mid).uniform);

  // The collapsed cocircuit vanishes on the whole support and follows the
  // witnesses elsewhere.
  SignVector collapsed = w.cocircuits[0];
  for (const int e : w.support.elements) collapsed.set(e, Sign::zero);
  CHECK(mid.contains_cocircuit(collapsed));

  const LiftingOM flipped = apply_flip(m, w.support);
  CHECK(weak_map_leq(m.matroid, mid));
  CHECK(weak_map_leq(flipped.matroid, mid));
  CHECK_FALSE(weak_map_leq(mid, m.matroid));
  CHECK_FALSE(weak_map_leq(mid, flipped.matroid));
}

TEST_CASE("flip supports round-trip through tokens and reject bad input") {
  const ConstructionInstance inst = sample_instance(0, 6);
  const LiftingOM m = build_entangled_lifting(inst);
  const std::vector<FlipWitness> witnesses = find_flip_supports(m);
  REQUIRE(!witnesses.empty());
  const GroundPtr ground = m.matroid.ground();

  std::set<FlipSupport> offered;
  for (const FlipWitness& w : witnesses) {
    offered.insert(w.support);
    const std::vector<std::string> toks = w.support.tokens(ground);
    CHECK(toks.size() == 4);
    CHECK(FlipSupport::from_tokens(ground, toks) == w.support);
  }
  CHECK_THROWS_AS(FlipSupport::from_tokens(ground, {"(1,2,0)"}), usage_error);
  CHECK_THROWS_AS(FlipSupport::from_tokens(
                      ground, {"(1,2,0)", "(1,2,0)", "(1,3,0)", "(1,4,0)"}),
                  usage_error);

  // Some 4-set is always left unoffered at this size; applying it must be
  // rejected rather than producing a broken matroid.
  std::array<int, 4> pick{};
  bool have = false;
  for (int a = 0; a < 6 && !have; ++a)
    for (int b = a + 1; b < 6 && !have; ++b)
      for (int c = b + 1; c < 6 && !have; ++c)
        for (int d = c + 1; d < 6 && !have; ++d) {
          pick = {a, b, c, d};
          if (!offered.count(FlipSupport{pick})) have = true;
        }
  REQUIRE(have);
  CHECK_THROWS_AS(apply_flip(m, FlipSupport{pick}), usage_error);
}

TEST_CASE("breadth-first flip exploration is exhaustive, deterministic and "
          "resumable") {
  const ConstructionInstance inst = sample_instance(0, 6);
  const LiftingOM seed = build_entangled_lifting(inst);

  std::ostringstream log1;
  const FlipGraph g1 = flip_graph_bfs(
      seed, {}, [&](const nlohmann::json& rec) { log1 << rec.dump() << "\n"; });
  CHECK(g1.complete);
  CHECK(g1.seed_key == canonical_key(seed));
  REQUIRE(!g1.vertices.empty());
  CHECK(g1.vertices.front().key == g1.seed_key);
  CHECK(g1.expanded_count() == g1.vertices.size());
  MESSAGE("scale-zero flip graph: ", g1.vertices.size(), " vertices, ",
          g1.edges.size(), " edges");

  std::set<std::string> keys;
  std::size_t support_total = 0;
  for (const FlipGraph::Vertex& v : g1.vertices) {
    CHECK(keys.insert(v.key).second);
    CHECK(v.expanded);
    support_total += v.supports.size();
  }
  std::set<std::pair<std::string, std::string>> edge_set;
  for (const FlipGraph::Edge& e : g1.edges) {
    CHECK(e.a < e.b);
    CHECK(keys.count(e.a));
    CHECK(keys.count(e.b));
    CHECK(e.support.size() == 4);
    CHECK(edge_set.insert({e.a, e.b}).second);
  }
  // In a fully explored component every listed support is one edge end.
  CHECK(support_total == 2 * g1.edges.size());

  // Determinism: the streamed JSON lines are byte-identical across runs.
  std::ostringstream log2;
  flip_graph_bfs(seed, {},
                 [&](const nlohmann::json& rec) { log2 << rec.dump() << "\n"; });
  CHECK(log1.str() == log2.str());

  // A budget-stopped prefix resumes to the same component.
  BfsBudget tiny;
  tiny.max_vertices = 2;
  const FlipGraph partial = flip_graph_bfs(seed, tiny);
  CHECK_FALSE(partial.complete);
  CHECK(partial.expanded_count() <= 2);
  const FlipGraph resumed = flip_graph_bfs(seed, {}, {}, &partial);
  CHECK(resumed.complete);
  std::set<std::string> resumed_keys;
  for (const FlipGraph::Vertex& v : resumed.vertices)
    resumed_keys.insert(v.key);
  std::set<std::pair<std::string, std::string>> resumed_edges;
  for (const FlipGraph::Edge& e : resumed.edges)
    resumed_edges.insert({e.a, e.b});
  CHECK(resumed_keys == keys);
  CHECK(resumed_edges == edge_set);

  // The stream reloads into the same graph.
  std::istringstream in(log1.str());
  const FlipGraph loaded = load_flip_graph_jsonl(in);
  CHECK(loaded.seed_key == g1.seed_key);
  REQUIRE(loaded.vertices.size() == g1.vertices.size());
  for (std::size_t i = 0; i < loaded.vertices.size(); ++i) {
    CHECK(loaded.vertices[i].key == g1.vertices[i].key);
    CHECK(loaded.vertices[i].supports == g1.vertices[i].supports);
    CHECK(loaded.vertices[i].expanded == g1.vertices[i].expanded);
  }
  REQUIRE(loaded.edges.size() == g1.edges.size());
  for (std::size_t i = 0; i < loaded.edges.size(); ++i) {
    CHECK(loaded.edges[i].a == g1.edges[i].a);
    CHECK(loaded.edges[i].b == g1.edges[i].b);
    CHECK(loaded.edges[i].support == g1.edges[i].support);
  }
}
