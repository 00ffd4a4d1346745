#pragma once

#include <gmpxx.h>
#include <json.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "omw/geometry.hpp"
#include "omw/group_action.hpp"
#include "omw/sign_vector.hpp"

namespace omw {

// ---------------------------------------------------------------------------
// Canonical elements (i,j,r)
// ---------------------------------------------------------------------------

// Axis pairs in the fixed lexicographic order; elements are stored with
// i < j, and the reversed reading (j,i,−r) is the same wall with the
// opposite orientation.
struct PairIJ {
  int i;
  int j;
};
const std::array<PairIJ, 6>& axis_pairs();
int pair_index(int i, int j);  // requires i < j

// Orientation sign of the ordered pair (p,q): + when p < q.
Sign alpha_sign(int p, int q);

// The six tilt directions: ±(e_a + e_b − e_c − e_d) over the three ways to
// split the axes, in the fixed order [e1+e2−e3−e4, e1+e3−e2−e4,
// e1+e4−e2−e3, then their negations].
int delta_coord(int u, int axis);  // coordinate of direction u at axis, ±1
TropicalPoint delta_direction(int u);

// Tokens "(i,j,r)" for the walls and "f" for the lift element.
std::string element_token(int i, int j, long long r);
int base_element_count(int N);       // 6(2N+1)
GroundPtr construction_ground(int N);  // walls in index order, then "f"
int element_index(int N, int i, int j, long long r);

struct ElementRef {
  int i;
  int j;
  long long r;
};
ElementRef element_ref(int N, int index);

// ---------------------------------------------------------------------------
// Sampled construction data
// ---------------------------------------------------------------------------

// Everything random about one construction run: the coin flips entangling
// walls with the group action, the tilt choice per wall, and the exact
// rational jitter.  An instance file fully determines every later artifact.
struct ConstructionInstance {
  int N = 0;
  std::uint64_t seed = 0;
  mpq_class delta;                             // tilt magnitude
  std::vector<int> g;                          // 0 identity, 1 pair generator
  std::vector<int> u;                          // index into the tilt table
  std::vector<std::array<mpq_class, 3>> eps;   // jitter, chart coordinates

  GroundPtr ground() const { return construction_ground(N); }
  // The group element attached to wall e: identity or the generator of the
  // wall's own axis pair.
  GroupElement g_element(int e) const;

  nlohmann::json to_json() const;
  static ConstructionInstance from_json(const nlohmann::json& j);
};

// Deterministic function of (N, seed): fair coin per wall, uniform tilt
// choice, jitter numerators uniform in [−2²⁰, 2²⁰] scaled to δ²/2⁴⁰.
// Default δ = 1/(2²⁰·max(N,1)).
ConstructionInstance sample_instance(int N, std::uint64_t seed);
ConstructionInstance sample_instance(int N, std::uint64_t seed,
                                     const mpq_class& delta);

// Redraws the jitter from the retry stream for the given attempt at the
// instance's current δ.  Attempt 0 reproduces the sampled values.
void resample_eps(ConstructionInstance& inst, int attempt);

void save_instance(const ConstructionInstance& inst, const std::string& path);
ConstructionInstance load_instance(const std::string& path);

}  // namespace omw
