#pragma once

#include <gmpxx.h>
#include <json.hpp>

#include <array>
#include <string>
#include <vector>

#include "omw/group_action.hpp"
#include "omw/linalg.hpp"
#include "omw/matroid.hpp"
#include "omw/sign_vector.hpp"

namespace omw {

// ---------------------------------------------------------------------------
// Points of the tropical projective 3-torus
// ---------------------------------------------------------------------------

// A 4-tuple of exact rationals modulo adding a constant to every coordinate.
// Stored in the chart with fourth coordinate 0; inner products go through the
// sum-zero representative, where the plain dot product is the invariant
// pairing (constants are orthogonal to sum-zero vectors).
class TropicalPoint {
public:
  TropicalPoint();  // origin
  explicit TropicalPoint(const std::array<mpq_class, 4>& coords);
  static TropicalPoint from_chart(const mpq_class& a, const mpq_class& b,
                                  const mpq_class& c);
  static TropicalPoint axis(int i);                 // e_i
  static TropicalPoint pair_difference(int i, int j);  // e_i − e_j

  // Chart coordinates (x1−x4, x2−x4, x3−x4).
  std::array<mpq_class, 3> chart() const;
  // The representative with coordinate sum zero, as a plain 4-vector.
  QVec sum_zero() const;

  TropicalPoint operator+(const TropicalPoint& o) const;
  TropicalPoint operator-(const TropicalPoint& o) const;
  TropicalPoint scaled(const mpq_class& c) const;
  bool operator==(const TropicalPoint& o) const;
  bool is_origin() const;

  std::string to_string() const;

private:
  std::array<mpq_class, 4> c_;  // canonical: c_[3] == 0
};

// Invariant pairing of tropical vectors: dot of sum-zero representatives.
mpq_class tp_inner(const TropicalPoint& a, const TropicalPoint& b);

// ---------------------------------------------------------------------------
// Rational vector configurations
// ---------------------------------------------------------------------------

struct RationalVectorConfig {
  GroundPtr ground;
  std::vector<QVec> vectors;  // one per element, uniform dimension

  int dimension() const;
  nlohmann::json to_json() const;
  static RationalVectorConfig from_json(const nlohmann::json& j);
};

// Determinant-sign cache over sorted d-subsets of a configuration.  Vectors
// must be d-dimensional up to trailing zero coordinates (which are dropped).
class Chirotope {
public:
  Chirotope(GroundPtr ground, int d, std::vector<Sign> by_colex_rank);

  int rank() const { return d_; }
  const GroundPtr& ground() const { return ground_; }

  Sign sign_sorted(const std::vector<int>& sorted_subset) const;
  // Arbitrary order; adjusts by the permutation parity.
  Sign sign_ordered(const std::vector<int>& subset) const;
  bool is_uniform() const;  // no zero signs

private:
  GroundPtr ground_;
  int d_;
  std::vector<Sign> signs_;  // indexed by colex rank of the sorted subset
};

Chirotope chirotope_of(const RationalVectorConfig& config, int d);

// The oriented matroid realized by a configuration: one cocircuit pair per
// coatom direction, signs by exact inner products.  Rank is the matrix rank.
OrientedMatroid om_of_config(const RationalVectorConfig& config);
// Slow cross-check: raw kernel solves in ambient coordinates, serial.
OrientedMatroid om_of_config_reference(const RationalVectorConfig& config);

// ---------------------------------------------------------------------------
// Affine arrangements and liftings
// ---------------------------------------------------------------------------

// Oriented affine hyperplanes ⟨x, normal⟩ = offset in tropical 3-space, with
// positive side ⟨x, normal⟩ > offset.
struct AffineArrangement {
  GroundPtr ground;
  std::vector<TropicalPoint> normals;
  std::vector<mpq_class> offsets;

  // Configuration of the normals alone (the picture at infinity).
  RationalVectorConfig normal_config() const;
  // Homogenized configuration: element e ↦ (normal_e, −offset_e), plus the
  // extra element mapping to (0,…,0,1).
  RationalVectorConfig homogenized_config(const std::string& lift_token) const;

  // Evaluates ⟨x, normal_e⟩ − offset_e.
  mpq_class margin(int element, const TropicalPoint& x) const;

  // Largest number of hyperplanes through any single intersection point.
  int vertex_concurrence_max() const;
};

// A single-element lifting: a matroid together with the distinguished lift
// element whose contraction recovers the base.
struct LiftingOM {
  OrientedMatroid matroid;
  std::string lift_element;
  OrientedMatroid base;

  int lift_index() const;  // index of lift_element in the ground set
  nlohmann::json to_json() const;
  // Rebuilds the base from the cocircuits vanishing at the lift element.
  static LiftingOM from_json(const nlohmann::json& j);

  // Verifies: lift element is not a loop, and the cocircuits vanishing at it
  // restrict exactly onto the base's cocircuit set.
  void check_lifting() const;
};

// Builds the lifting realized by an affine arrangement via homogenization.
// Throws when the arrangement's picture at infinity is not `base` or when
// the lifting condition fails.
LiftingOM lifting_from_affine(const AffineArrangement& arr,
                              const OrientedMatroid& base,
                              const std::string& lift_token = "f");

// ---------------------------------------------------------------------------
// The braid family
// ---------------------------------------------------------------------------

// Ground set {(i,j) : 1 ≤ i < j ≤ 4} in lexicographic order.
GroundPtr braid_ground();
// The six difference directions e_i − e_j as a central configuration.
RationalVectorConfig braid_config();
// The shifted copy attached to an orientation class: offset +1 on the pairs
// the cycle traverses forward, −1 traversed backward, 0 on pairs through the
// missing axis.
AffineArrangement braid_model(const CyclicTriple& gamma);

}  // namespace omw
