#pragma once

#include <json.hpp>

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "omw/geometry.hpp"
#include "omw/matroid.hpp"
#include "omw/sign_vector.hpp"

namespace omw {

// ---------------------------------------------------------------------------
// Flip supports and witnesses
// ---------------------------------------------------------------------------

// A mutation locus: four base elements, never the lift element.
struct FlipSupport {
  std::array<int, 4> elements;  // strictly increasing ground indices

  bool operator==(const FlipSupport& o) const = default;
  bool operator<(const FlipSupport& o) const { return elements < o.elements; }
  bool contains(int e) const;

  std::vector<std::string> tokens(const GroundPtr& ground) const;
  static FlipSupport from_tokens(const GroundPtr& ground,
                                 const std::vector<std::string>& toks);
};

// The certificate that a support flips: X_i vanishes exactly on D ∖ {e_i},
// carries + at the lift element, and all four agree outside D.
struct FlipWitness {
  FlipSupport support;
  std::array<SignVector, 4> cocircuits;  // X_i nonzero at support.elements[i]
};

// Deterministic identity of a lifting: fingerprint of the sorted cocircuit
// serialization (negation pairs normalized), so equal liftings always agree.
std::string canonical_key(const LiftingOM& m);

// Every 4-subset of the base elements whose four zero-set cocircuits,
// oriented + at the lift element, agree away from the subset.  Asserts the
// uniqueness property at each witness: no signed cocircuit other than the
// four conforms to their supports' signs (zero allowed) on the subset.
std::vector<FlipWitness> find_flip_supports(const LiftingOM& m);

// The lifting with the four witness pairs negated exactly on the support;
// validated (cocircuit audit, uniform, same-base lifting) before return.
LiftingOM apply_flip(const LiftingOM& m, const FlipSupport& support);

// The degenerate matroid between a lifting and its flip: the four witness
// pairs collapse to the single pair vanishing on the whole support and
// matching them elsewhere.
OrientedMatroid flip_midpoint(const LiftingOM& m, const FlipSupport& support);

// ---------------------------------------------------------------------------
// Flip graph exploration
// ---------------------------------------------------------------------------

struct BfsBudget {
  long long max_vertices = -1;  // expanded-vertex cap; negative = unlimited
  long long max_edges = -1;     // stored-edge cap; negative = unlimited
  double max_seconds = -1;      // wall-clock cap; negative = unlimited
};

// The explored component: vertices are canonical keys, edges carry the
// support joining their endpoints.  Supports are stored as element tokens so
// graph files stay readable independently of index conventions.
struct FlipGraph {
  struct Vertex {
    std::string key;
    std::string parent;                       // discovery parent; empty at seed
    std::vector<std::string> parent_support;  // flip from parent; empty at seed
    std::vector<std::vector<std::string>> supports;  // filled at expansion
    bool expanded = false;
  };
  struct Edge {
    std::string a, b;                  // a < b lexicographically
    std::vector<std::string> support;
  };

  std::string seed_key;
  std::vector<Vertex> vertices;  // discovery order, seed first
  std::vector<Edge> edges;
  bool complete = true;  // frontier exhausted without tripping the budget

  const Vertex* find(const std::string& key) const;
  std::size_t expanded_count() const;
};

// Breadth-first closure of apply_flip over find_flip_supports.  Each record
// streamed to `sink` (when set) is one JSON-lines line: per expanded vertex
// { "key", "cocircuits-ref", "supports" } — the reference names the seed or
// the parent flip that reproduces the vertex — and per discovered edge
// { "a", "b", "support" }.  Passing `prior` resumes an earlier run: its
// matroids are replayed from the seed along the recorded parent flips and
// only unexpanded vertices are put back on the frontier.
FlipGraph flip_graph_bfs(
    const LiftingOM& seed, const BfsBudget& budget = {},
    const std::function<void(const nlohmann::json&)>& sink = {},
    const FlipGraph* prior = nullptr);

// Parses the JSON-lines stream written through the sink.  Vertices that only
// appear as edge endpoints load as unexpanded frontier entries.
FlipGraph load_flip_graph_jsonl(std::istream& in);

}  // namespace omw
