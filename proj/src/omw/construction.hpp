#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "omw/core_ops.hpp"
#include "omw/geometry.hpp"
#include "omw/instance.hpp"
#include "omw/lattice.hpp"
#include "omw/matroid.hpp"

namespace omw {

// ---------------------------------------------------------------------------
// Perturbed normals
// ---------------------------------------------------------------------------

// The raw tilt formula ṽ_e = e_ij + δ·u_e + ε_e in chart coordinates, with no
// genericity audit.  Useful for probing degenerate parameter choices.
RationalVectorConfig wall_normal_config(const ConstructionInstance& inst);

// Same formula, audited: the matroid of the tilted normals must be uniform of
// rank 3 and a weak-map predecessor of the untilted (repeated-normal)
// picture.  Throws degeneracy_error with a resample suggestion otherwise.
RationalVectorConfig perturbed_config(const ConstructionInstance& inst);

// ---------------------------------------------------------------------------
// The per-subset cocircuit oracle
// ---------------------------------------------------------------------------

// Immutable tables shared by every oracle call on one instance: the audited
// perturbed normals (sum-zero form), the matroid at infinity, the local-model
// scale, the separation sphere, and the per-class wall-shift table.
struct OracleContext {
  explicit OracleContext(const ConstructionInstance& instance);

  const ConstructionInstance* inst;
  GroundPtr ground;                   // walls in index order, then the lift
  int n;                              // wall count + 1
  int f_index;
  std::vector<ElementRef> refs;       // wall readings (i, j, r), i < j
  std::vector<int> pair_of;           // wall -> axis-pair index
  std::vector<QVec> normals_sz;       // sum-zero tilted normals
  std::vector<mpq_class> offsets;     // wall offsets as exact rationals
  OrientedMatroid base;               // picture at infinity, uniform rank 3
  mpq_class lambda;                   // local model scale, 1/100
  mpq_class sphere2;                  // squared separation radius (100·max(N,1))²
  // Per orientation class, per axis pair: the local-model shift of that
  // pair's wall (+1 forward cycle edge, −1 backward, 0 through the missing
  // axis).
  std::array<std::array<long long, 6>, 8> shift_of;
};

// The ± cocircuit pair of the entangled lifting vanishing exactly on the
// 3-subset T, returned as the representative with nonnegative lift entry.
// Case split on the axis-pair multigraph of T:
//   · lift element in T: the at-infinity cocircuit through the other two;
//   · three distinct pairs, acyclic: the walls meet at an integer point of Q;
//     signs come from the scaled local model there and the far-sign rule;
//   · repeated pair or pair-triangle: exact far plane solve outside the
//     separation sphere (triangle walls with zero offset sum get their
//     local-model shifts first, which is what pushes the vertex far out).
SignVector cocircuit_oracle(const OracleContext& ctx,
                            const std::array<int, 3>& T);
// Convenience form building a one-shot context.
SignVector cocircuit_oracle(const ConstructionInstance& inst,
                            const std::array<int, 3>& T);

// ---------------------------------------------------------------------------
// Existence queries over signed cocircuits
// ---------------------------------------------------------------------------

// Per (element, sign) occurrence bitsets over the 2·pair_count signed
// cocircuits, for fast "is there a cocircuit carrying all of these signs"
// queries.
class SignedCocircuitIndex {
public:
  explicit SignedCocircuitIndex(const OrientedMatroid& m);

  bool exists_with(
      const std::vector<std::pair<int, Sign>>& required_signs) const;

  // Sorted signed indices (2·pair for representatives, 2·pair + 1 for their
  // negations) of the cocircuits carrying none of the given occurrences.
  std::vector<int> avoiding_all(
      const std::vector<std::pair<int, Sign>>& forbidden_signs) const;

private:
  std::size_t total_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> pos_;
  std::vector<std::vector<std::uint64_t>> neg_;
};

// ---------------------------------------------------------------------------
// Assembled-lifting validation
// ---------------------------------------------------------------------------

struct PatternCheckReport {
  bool ok = true;
  std::size_t points = 0;
  std::size_t lookups = 0;
  std::size_t sign_checks = 0;
  std::vector<std::string> failures;
};

// Local-vertex cocircuit patterns at every x ∈ Q★, for every rotation of the
// class writing: the three-cocircuit family (per choice of through-pair
// offset r and per axis p), and the full vertex cocircuit on the three
// through-axis walls including its far signs.
PatternCheckReport local_pattern_check(const LiftingOM& lifting,
                                       const ConstructionInstance& inst);

struct BetaConsistencyReport {
  bool ok = true;
  std::size_t triples_scanned = 0;
  std::size_t hypotheses_found = 0;
  std::size_t sign_checks = 0;
  std::vector<std::string> failures;
};

// For every oriented pair-triangle of walls whose crossing-pattern cocircuit
// exists (positive lift entry and the three reversed-order signs), the far
// cocircuit vanishing on the triangle must carry α_lp·β on every wall through
// the remaining axis.
BetaConsistencyReport beta_consistency_check(const LiftingOM& lifting,
                                             const ConstructionInstance& inst);

// Sampled regression of local-model well-definedness: two points of Q
// differing only along one axis share their triangle orientation, so the
// models they induce on a shared wall triple agree.
bool gluing_regression(const ConstructionInstance& inst,
                       std::size_t samples = 256);

struct BuildReport {
  ValidationReport validation;
  PatternCheckReport patterns;
  BetaConsistencyReport beta;
  bool count_ok = false;
  bool lifting_ok = false;
  bool gluing_ok = false;
  int attempts = 1;
  std::string delta_used;

  bool ok() const;
  std::string summary() const;
};

// Assembles the oracle over all 3-subsets of the ground set, then audits:
// cocircuit count 2·C(n,3), uniform profile, cocircuit elimination (full for
// small instances, sampled above), the lifting property over the picture at
// infinity, the local-vertex patterns, β-consistency, and the gluing
// regression.  Any failure throws verification_error after filling `report`.
LiftingOM build_entangled_lifting(const ConstructionInstance& inst,
                                  BuildReport* report = nullptr);

// Retry driver: on degeneracy it resamples the jitter (new attempt stream) or
// halves δ as suggested, up to `max_attempts` total builds, mutating `inst`
// to the parameters that finally built.  Exhaustion rethrows the last
// degeneracy error.
LiftingOM build_with_recovery(ConstructionInstance& inst, int max_attempts = 16,
                              BuildReport* report = nullptr);

}  // namespace omw
