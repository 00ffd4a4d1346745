#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "omw/sign_vector.hpp"

namespace omw {

// ---------------------------------------------------------------------------
// Oriented matroid by cocircuits
// ---------------------------------------------------------------------------

// Stores one canonical representative per {X, -X} cocircuit pair, sorted by
// the fixed sign-vector order.  Files carry representatives only; loading
// restores the negation partners implicitly.
class OrientedMatroid {
public:
  OrientedMatroid(GroundPtr ground, int rank,
                  std::vector<SignVector> cocircuits);

  const GroundPtr& ground() const { return ground_; }
  int elements() const { return ground_->size(); }
  int rank() const { return rank_; }

  // Canonical representatives, sorted.
  const std::vector<SignVector>& cocircuits() const { return cocircuits_; }
  int pair_count() const { return static_cast<int>(cocircuits_.size()); }
  // Count including negation partners.
  int signed_count() const { return 2 * pair_count(); }

  // Signed cocircuit access: indices [0, 2k) map to representative i = s/2,
  // negated when s is odd.
  SignVector signed_cocircuit(int s) const;

  bool contains_cocircuit(const SignVector& x) const;
  // Index of the representative of {x, -x}, or nullopt.
  std::optional<int> find_pair(const SignVector& x) const;

  nlohmann::json to_json() const;
  static OrientedMatroid from_json(const nlohmann::json& j);

  bool operator==(const OrientedMatroid& other) const;

private:
  GroundPtr ground_;
  int rank_;
  std::vector<SignVector> cocircuits_;
};

// One JSON text per matroid, with sorted object keys and sorted cocircuit
// strings: equal matroids always serialize to identical bytes.
std::string canonical_serialization(const OrientedMatroid& m);

// 128-bit hex fingerprint of the canonical serialization.
std::string canonical_key(const OrientedMatroid& m);

// File helpers (two-space indented JSON with trailing newline).
void save_matroid(const OrientedMatroid& m, const std::string& path);
OrientedMatroid load_matroid(const std::string& path);

// ---------------------------------------------------------------------------
// Zero-set index
// ---------------------------------------------------------------------------

// Perfect index from (rank-1)-subsets of the ground set to cocircuit pairs,
// valid when every such subset is the zero set of exactly one pair (the
// uniform case).  Lookup is a colex rank into a flat table, so flip scans and
// pattern checks run at array speed.
class ZeroSetIndex {
public:
  explicit ZeroSetIndex(const OrientedMatroid& m);

  int subset_size() const { return k_; }

  // Representative index for the pair with the given zero set, or -1.
  // The subset must be strictly increasing.
  int pair_with_zero_set(const std::vector<int>& sorted_subset) const;

  // Colex rank of a strictly increasing subset (positions fixed by k).
  long long colex_rank(const std::vector<int>& sorted_subset) const;

private:
  int n_ = 0;
  int k_ = 0;
  std::vector<std::int32_t> table_;
};

}  // namespace omw
