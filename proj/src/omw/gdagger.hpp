#pragma once

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omw/construction.hpp"
#include "omw/flips.hpp"
#include "omw/geometry.hpp"
#include "omw/instance.hpp"
#include "omw/lattice.hpp"

namespace omw {

// ---------------------------------------------------------------------------
// Membership checker
// ---------------------------------------------------------------------------

// Tallies from evaluating the three cocircuit-pattern conditions over the
// special set: (a) the three-cocircuit family per point, rotation,
// distinguished axis and qualifying offset; (b) the blocking cocircuit per
// point and clause; (c) the onward-set condition per point, rotation and
// qualifying offset.  Failures carry the quantifier point for reproduction.
struct GDaggerReport {
  bool member = true;
  bool vacuous = false;  // empty special set: membership holds by default
  bool small_n = false;  // N < 2 makes the run-length thresholds trivial
  std::size_t omega_points = 0;
  std::size_t checks_a = 0;
  std::size_t checks_b = 0;
  std::size_t checks_c = 0;
  std::size_t vacuous_c = 0;  // (point, rotation) slots with an empty S set
  std::vector<std::string> failures;

  std::string summary() const;
};

// Evaluates every quantifier instance literally against the lifting's
// cocircuit set (zero-set lookups; no covector span).  Requires `m` to be a
// uniform lifting of the instance's picture at infinity.
GDaggerReport gdagger_check(const LiftingOM& m,
                            const ConstructionInstance& inst);

// The condition-(a) zero-pattern 4-sets of the instance, sorted element
// quadruples.  A flip on any of them would contradict the uniqueness of the
// witness cocircuits, so member liftings never offer them as supports.
std::vector<std::array<int, 4>> gdagger_blocking_family(
    const ConstructionInstance& inst);

// Asserts no scanned support lies in the blocking family; returns how many
// supports were tested.
std::size_t assert_blocking_disjoint(
    const std::vector<FlipWitness>& witnesses,
    const std::vector<std::array<int, 4>>& family, const GroundPtr& ground);

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

struct ClosureNodeResult {
  std::string key;
  int depth = 0;
  bool member = false;
  bool vacuous = false;
  std::size_t support_count = 0;  // zero for unexpanded depth-limit leaves
  bool expanded = false;
};

// One reproducible run: membership of the built lifting and of every flip
// neighbor to the requested depth, with the blocking assertions on all
// scanned supports.
struct ExperimentRecord {
  std::string instance_hash;  // fingerprint of the instance serialization
  int N = 0;
  std::uint64_t seed = 0;
  int build_attempts = 1;
  std::size_t omega_size = 0;
  bool omega_nonempty = false;
  bool s_sets_all_nonempty = false;
  bool hypotheses_hold = false;  // both of the above
  GDaggerReport root;
  std::vector<ClosureNodeResult> nodes;  // discovery order, root first
  bool closure_holds = false;  // every checked vertex is a member
  bool complete = true;        // depth fully explored within budget
  std::size_t root_flip_count = 0;
  std::size_t blocking_checked = 0;
  double seconds = 0;

  nlohmann::json to_json() const;
};

// Builds the entangled lifting (bounded degeneracy recovery), checks
// membership, explores flip neighbors breadth-first to `depth`, and checks
// each visited vertex.  Budget exhaustion is reported via `complete`, never
// thrown.
ExperimentRecord flip_closure_experiment(const ConstructionInstance& inst,
                                         int depth,
                                         const BfsBudget& budget = {});

// ---------------------------------------------------------------------------
// Non-member search
// ---------------------------------------------------------------------------

struct NonMemberSearchReport {
  bool found = false;
  std::size_t attempts = 0;
  std::string witness_key;
  std::optional<ConstructionInstance> witness_instance;  // rebuilt coin flips
  std::optional<LiftingOM> witness;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;  // metadata only, not the matroid
};

// Searches for a uniform lifting of the same picture failing the membership
// check: rebuilds with freshly drawn coin flips (same tilt data, so the same
// picture at infinity), then falls back to single-coin modifications.
// Requires a nonempty special set.
NonMemberSearchReport find_non_member(const ConstructionInstance& inst,
                                      std::size_t budget);

}  // namespace omw
