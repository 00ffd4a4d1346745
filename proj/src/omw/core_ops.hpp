#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "omw/matroid.hpp"

namespace omw {

// ---------------------------------------------------------------------------
// Covector span
// ---------------------------------------------------------------------------

// Closure of {0} ∪ cocircuits under composition — the full covector set for a
// valid matroid.  `limit` caps the output size; exceeding it throws
// usage_error so callers can fall back to cocircuit-level checks.
std::vector<SignVector> covector_span(const OrientedMatroid& m,
                                      std::size_t limit = 2'000'000);

// ---------------------------------------------------------------------------
// Rank, loops, coloops, uniformity
// ---------------------------------------------------------------------------

// A set is independent when each of its elements carries a cocircuit that is
// nonzero there and zero on the rest of the set.
bool is_independent(const OrientedMatroid& m, const std::vector<int>& subset);

struct MatroidProfile {
  int rank = 0;               // size of a greedily grown independent set
  std::vector<int> loops;     // zero in every cocircuit
  std::vector<int> coloops;   // carry a singleton-support cocircuit
  bool uniform = false;       // every (rank-1)-subset is exactly one zero set
};

MatroidProfile profile(const OrientedMatroid& m);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ValidateMode { cocircuit_only, sampled, full };
enum class UniformExpectation { automatic, required, skip };

struct ValidateOptions {
  ValidateMode mode = ValidateMode::cocircuit_only;
  UniformExpectation uniform = UniformExpectation::automatic;
  // sampled mode: how many (pair, orientation) draws, and the stream seed.
  std::size_t sample_pairs = 100'000;
  std::uint64_t seed = 0;
  bool check_rank = true;
  std::size_t span_limit = 2'000'000;  // full mode only
  bool parallel = true;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> failures;  // capped, sorted for determinism
  std::size_t pairs_checked = 0;
  bool sampled = false;
  std::size_t covectors = 0;  // full mode: |L|
  std::string summary() const;
};

// Structural checks (minimality, declared rank, uniform zero-set profile)
// always run.  cocircuit_only adds cocircuit elimination over all
// representative pairs; sampled draws `sample_pairs` seeded pairs instead;
// full additionally spans the covector set (≤ 25 elements) and checks the
// covector axioms on it.
ValidationReport validate(const OrientedMatroid& m,
                          const ValidateOptions& opt = {});

// Validates a literal cocircuit list before representative deduplication:
// rejects zero vectors, duplicates, and missing negation partners with a
// named witness, then runs `validate` on the surviving structure.  This is
// the entry point for externally supplied lists, where symmetry cannot be
// assumed.
ValidationReport validate_raw(GroundPtr ground, int declared_rank,
                              const std::vector<SignVector>& cocircuits,
                              const ValidateOptions& opt = {});

// ---------------------------------------------------------------------------
// Duality, restriction, weak maps
// ---------------------------------------------------------------------------

// Orthogonal-complement dual via exhaustive sign-vector enumeration (3^n
// candidates), gated to small ground sets.
OrientedMatroid dual(const OrientedMatroid& m, int max_elements = 12);

// Restriction to a subset of element indices: covectors restricted, minimal
// nonzero ones kept as cocircuits.
OrientedMatroid restriction(const OrientedMatroid& m, std::vector<int> subset,
                            std::size_t span_limit = 2'000'000);

// Weak-map order M1 ⇝ M2 at cocircuit level: every cocircuit of M2 lies
// below some covector of M1.  The witness search runs per support element
// over M1's cocircuits (composing conformal witnesses instead of
// materializing the span), with a zero-set-indexed fast path when M1 is
// uniform.
bool weak_map_leq(const OrientedMatroid& m1, const OrientedMatroid& m2);

}  // namespace omw
