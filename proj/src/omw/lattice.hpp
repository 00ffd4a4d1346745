#pragma once

#include <json.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "omw/group_action.hpp"
#include "omw/instance.hpp"
#include "omw/sign_vector.hpp"

namespace omw {

// ---------------------------------------------------------------------------
// Integer points modulo translation
// ---------------------------------------------------------------------------

// An integer 4-tuple representing a tropical point; two tuples differing by a
// constant shift describe the same point.  canonicalized() subtracts the
// minimum so comparisons and hashing see one representative.
struct LatticePoint {
  std::array<long long, 4> x{0, 0, 0, 0};

  LatticePoint canonicalized() const;
  long long coord(int axis) const;  // 1-based
  long long diff(int a, int b) const { return coord(a) - coord(b); }

  bool operator==(const LatticePoint& o) const { return x == o.x; }
  bool operator!=(const LatticePoint& o) const { return !(*this == o); }
  std::string to_string() const;
  nlohmann::json to_json() const;  // canonical coordinates as an array
};

// Sorted consecutive gaps all at most N (membership is shift-invariant).
bool in_Q(const LatticePoint& p, int N);
// All pairwise differences at most N in absolute value, within Q.
bool in_Qstar(const LatticePoint& p, int N);

// Canonical representatives of Q★ in lexicographic coordinate order.
std::vector<LatticePoint> enumerate_Qstar(int N);

// Size of the run {x + k·dir·e_axis ∈ Q★ : k ≥ 1}; x must be in Q★.
long long r_size(const LatticePoint& p, int axis, Sign dir, int N);
// The members of that run, canonicalized, nearest first.
std::vector<LatticePoint> r_members(const LatticePoint& p, int axis, Sign dir,
                                    int N);

// ---------------------------------------------------------------------------
// Entangled orientation data
// ---------------------------------------------------------------------------

// The orientation class attached to a point: the product of the coin-flip
// group elements of the six walls through it, applied to (123).  Walls whose
// offset falls outside [−N, N] (possible in Q∖Q★) contribute the identity.
CyclicTriple gamma_of_point(const ConstructionInstance& inst,
                            const LatticePoint& p);

// Sign of α_ij·u^l + α_jk·u^l + α_ki·u^l over the walls (i,j,r), (j,k,s),
// (k,i,t), where l is the remaining axis.  The sum of three odd terms is
// never zero.
Sign beta(int i, int j, int k, long long r, long long s, long long t,
          const ConstructionInstance& inst);

// β_l(x): the beta value of the triple orienting [4]∖{l} under γ(x), at the
// offsets of x.
Sign beta_axis(const ConstructionInstance& inst, const LatticePoint& p, int l);

// ---------------------------------------------------------------------------
// The special subset Ω
// ---------------------------------------------------------------------------

// Everything recorded about one member x ∈ Ω: its class γ(x) = (ijk), the
// per-axis beta values, run sizes both ways per axis, the six sign-condition
// booleans (paired per through-axis wall), and the three onward sets S whose
// nonemptiness the density argument needs.
struct OmegaCertificate {
  LatticePoint x;
  CyclicTriple gamma{1, 2, 3};
  std::array<Sign, 4> beta_by_axis{};       // index axis−1
  std::array<long long, 4> r_plus{};        // |R_{axis,+}|
  std::array<long long, 4> r_minus{};       // |R_{axis,−}|
  std::array<bool, 6> sign_conditions{};
  // S sets for the triple's axes in representative order (i, j, k): members
  // of the beta-direction run that land in Ω with the rotated class.
  std::array<std::vector<LatticePoint>, 3> s_sets;

  nlohmann::json to_json() const;
};

// Scans Q★ and returns certificates for the members of Ω: run sizes at the
// beta directions all at least N/2, and the six wall-sign conditions.
std::vector<OmegaCertificate> omega_set(const ConstructionInstance& inst);

// Membership test for a single point (no S sets computed).
bool omega_member(const ConstructionInstance& inst, const LatticePoint& p);

}  // namespace omw
