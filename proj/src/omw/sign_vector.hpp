#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "omw/errors.hpp"

namespace omw {

// ---------------------------------------------------------------------------
// Signs
// ---------------------------------------------------------------------------

enum class Sign : std::int8_t { minus = -1, zero = 0, plus = 1 };

inline char to_char(Sign s) {
  switch (s) {
    case Sign::plus: return '+';
    case Sign::minus: return '-';
    default: return '0';
  }
}

inline Sign sign_from_char(char c) {
  switch (c) {
    case '+': return Sign::plus;
    case '-': return Sign::minus;
    case '0': return Sign::zero;
    default: throw usage_error(std::string("invalid sign character '") + c + "'");
  }
}

inline Sign opposite(Sign s) {
  return static_cast<Sign>(-static_cast<std::int8_t>(s));
}

inline Sign sign_of_int(long long v) {
  return v > 0 ? Sign::plus : (v < 0 ? Sign::minus : Sign::zero);
}

// ---------------------------------------------------------------------------
// Ground set
// ---------------------------------------------------------------------------

// An ordered list of element tokens.  The order is part of the identity: sign
// vectors serialize positionally against it.
class GroundSet {
public:
  static constexpr int kMaxElements = 256;

  explicit GroundSet(std::vector<std::string> tokens);

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string& token(int i) const { return tokens_.at(i); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool has(const std::string& token) const {
    return index_.find(token) != index_.end();
  }
  int index_of(const std::string& token) const;

  bool operator==(const GroundSet& other) const {
    return tokens_ == other.tokens_;
  }
  bool operator!=(const GroundSet& other) const { return !(*this == other); }

private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

using GroundPtr = std::shared_ptr<const GroundSet>;

GroundPtr make_ground(std::vector<std::string> tokens);

// Throws unless the two grounds are the same object or token-equal.
void require_same_ground(const GroundPtr& a, const GroundPtr& b);

// ---------------------------------------------------------------------------
// Sign vectors
// ---------------------------------------------------------------------------

// A sign vector over a ground set, stored as two bitmasks (plus set, minus
// set).  Capacity is fixed at 256 elements, enough for every configuration
// this project builds, and keeps all sign operations branch-free word ops.
class SignVector {
public:
  static constexpr int kWords = GroundSet::kMaxElements / 64;
  using Words = std::array<std::uint64_t, kWords>;

  explicit SignVector(GroundPtr ground);
  SignVector(GroundPtr ground, const std::string& chars);

  const GroundPtr& ground() const { return ground_; }
  int size() const { return size_; }

  Sign at(int i) const {
    check_index(i);
    const std::uint64_t bit = 1ULL << (i & 63);
    if (plus_[i >> 6] & bit) return Sign::plus;
    if (minus_[i >> 6] & bit) return Sign::minus;
    return Sign::zero;
  }

  void set(int i, Sign s) {
    check_index(i);
    const std::uint64_t bit = 1ULL << (i & 63);
    plus_[i >> 6] &= ~bit;
    minus_[i >> 6] &= ~bit;
    if (s == Sign::plus) plus_[i >> 6] |= bit;
    if (s == Sign::minus) minus_[i >> 6] |= bit;
  }

  bool is_zero() const;
  int support_size() const;
  std::vector<int> support() const;
  std::vector<int> zero_set() const;

  SignVector operator-() const;
  bool operator==(const SignVector& other) const {
    return plus_ == other.plus_ && minus_ == other.minus_;
  }
  bool operator!=(const SignVector& other) const { return !(*this == other); }

  // Composition X∘Y: takes X where X is nonzero, otherwise Y.
  SignVector compose(const SignVector& y) const;

  // Sign-vector orthogonality: the set where the product is + and the set
  // where it is - are either both empty or both nonempty.
  bool orthogonal(const SignVector& y) const;

  // X conforms to Y when X(e) ∈ {0, Y(e)} for every e, i.e. X ≤ Y in the
  // conformal order used by weak maps.
  bool conforms_to(const SignVector& y) const;

  // True when {X(e), Y(e)} = {+, -}.
  bool separates_at(const SignVector& y, int e) const;
  // Bitmask of all separating elements.
  Words separator_mask(const SignVector& y) const;

  // Support inclusion supp(this) ⊆ supp(other).
  bool support_subset_of(const SignVector& other) const;

  std::string to_string() const;

  // Canonical representative of {X, -X}: the first nonzero entry is +.
  SignVector canonical() const;
  bool is_canonical() const;

  // An arbitrary but fixed total order (word-lexicographic), used to keep
  // container contents deterministic.  Not the serialization order; files
  // sort the serialized strings instead.
  static int compare(const SignVector& a, const SignVector& b);

  const Words& plus_words() const { return plus_; }
  const Words& minus_words() const { return minus_; }
  Words zero_words() const;  // complement of the support within size()

  std::size_t hash() const;

private:
  void check_index(int i) const {
    if (i < 0 || i >= size_) throw usage_error("sign vector index out of range");
  }

  GroundPtr ground_;
  int size_;
  Words plus_{};
  Words minus_{};
};

struct SignVectorHash {
  std::size_t operator()(const SignVector& v) const { return v.hash(); }
};

struct SignVectorLess {
  bool operator()(const SignVector& a, const SignVector& b) const {
    return SignVector::compare(a, b) < 0;
  }
};

}  // namespace omw
