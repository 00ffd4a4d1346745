#include "omw/sign_vector.hpp"

#include <bit>

namespace omw {

// ---------------------------------------------------------------------------
// GroundSet
// ---------------------------------------------------------------------------

GroundSet::GroundSet(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {
  if (static_cast<int>(tokens_.size()) > kMaxElements)
    throw usage_error("ground set exceeds the " +
                      std::to_string(kMaxElements) + " element capacity");
  for (int i = 0; i < static_cast<int>(tokens_.size()); ++i) {
    if (tokens_[i].empty()) throw usage_error("empty element token");
    if (!index_.emplace(tokens_[i], i).second)
      throw usage_error("duplicate element token: " + tokens_[i]);
  }
}

int GroundSet::index_of(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) throw usage_error("unknown element token: " + token);
  return it->second;
}

GroundPtr make_ground(std::vector<std::string> tokens) {
  return std::make_shared<const GroundSet>(std::move(tokens));
}

void require_same_ground(const GroundPtr& a, const GroundPtr& b) {
  if (a == b) return;
  if (a && b && *a == *b) return;
  throw usage_error("ground set mismatch between sign vectors");
}

// ---------------------------------------------------------------------------
// SignVector
// ---------------------------------------------------------------------------

SignVector::SignVector(GroundPtr ground)
    : ground_(std::move(ground)), size_(ground_ ? ground_->size() : 0) {
  if (!ground_) throw usage_error("sign vector needs a ground set");
}

SignVector::SignVector(GroundPtr ground, const std::string& chars)
    : SignVector(std::move(ground)) {
  if (static_cast<int>(chars.size()) != size_)
    throw usage_error("sign string length " + std::to_string(chars.size()) +
                      " does not match ground set size " +
                      std::to_string(size_));
  for (int i = 0; i < size_; ++i) set(i, sign_from_char(chars[i]));
}

bool SignVector::is_zero() const {
  for (int w = 0; w < kWords; ++w)
    if (plus_[w] | minus_[w]) return false;
  return true;
}

int SignVector::support_size() const {
  int n = 0;
  for (int w = 0; w < kWords; ++w)
    n += std::popcount(plus_[w] | minus_[w]);
  return n;
}

std::vector<int> SignVector::support() const {
  std::vector<int> out;
  for (int i = 0; i < size_; ++i)
    if (at(i) != Sign::zero) out.push_back(i);
  return out;
}

std::vector<int> SignVector::zero_set() const {
  std::vector<int> out;
  for (int i = 0; i < size_; ++i)
    if (at(i) == Sign::zero) out.push_back(i);
  return out;
}

SignVector SignVector::operator-() const {
  SignVector out(ground_);
  out.plus_ = minus_;
  out.minus_ = plus_;
  return out;
}

SignVector SignVector::compose(const SignVector& y) const {
  require_same_ground(ground_, y.ground_);
  SignVector out(ground_);
  for (int w = 0; w < kWords; ++w) {
    const std::uint64_t free = ~(plus_[w] | minus_[w]);
    out.plus_[w] = plus_[w] | (y.plus_[w] & free);
    out.minus_[w] = minus_[w] | (y.minus_[w] & free);
  }
  return out;
}

bool SignVector::orthogonal(const SignVector& y) const {
  require_same_ground(ground_, y.ground_);
  bool agree = false, clash = false;
  for (int w = 0; w < kWords; ++w) {
    agree = agree || ((plus_[w] & y.plus_[w]) | (minus_[w] & y.minus_[w]));
    clash = clash || ((plus_[w] & y.minus_[w]) | (minus_[w] & y.plus_[w]));
  }
  return agree == clash;
}

bool SignVector::conforms_to(const SignVector& y) const {
  require_same_ground(ground_, y.ground_);
  for (int w = 0; w < kWords; ++w) {
    if (plus_[w] & ~y.plus_[w]) return false;
    if (minus_[w] & ~y.minus_[w]) return false;
  }
  return true;
}

bool SignVector::separates_at(const SignVector& y, int e) const {
  require_same_ground(ground_, y.ground_);
  const Sign a = at(e), b = y.at(e);
  return (a == Sign::plus && b == Sign::minus) ||
         (a == Sign::minus && b == Sign::plus);
}

SignVector::Words SignVector::separator_mask(const SignVector& y) const {
  require_same_ground(ground_, y.ground_);
  Words out{};
  for (int w = 0; w < kWords; ++w)
    out[w] = (plus_[w] & y.minus_[w]) | (minus_[w] & y.plus_[w]);
  return out;
}

bool SignVector::support_subset_of(const SignVector& other) const {
  require_same_ground(ground_, other.ground_);
  for (int w = 0; w < kWords; ++w) {
    const std::uint64_t mine = plus_[w] | minus_[w];
    const std::uint64_t theirs = other.plus_[w] | other.minus_[w];
    if (mine & ~theirs) return false;
  }
  return true;
}

std::string SignVector::to_string() const {
  std::string out(static_cast<std::size_t>(size_), '0');
  for (int i = 0; i < size_; ++i) out[static_cast<std::size_t>(i)] = to_char(at(i));
  return out;
}

SignVector SignVector::canonical() const {
  for (int w = 0; w < kWords; ++w) {
    const std::uint64_t any = plus_[w] | minus_[w];
    if (!any) continue;
    const int bit = std::countr_zero(any);
    return (minus_[w] >> bit) & 1ULL ? -*this : *this;
  }
  return *this;  // zero vector
}

bool SignVector::is_canonical() const {
  for (int w = 0; w < kWords; ++w) {
    const std::uint64_t any = plus_[w] | minus_[w];
    if (!any) continue;
    const int bit = std::countr_zero(any);
    return ((plus_[w] >> bit) & 1ULL) != 0;
  }
  return true;
}

int SignVector::compare(const SignVector& a, const SignVector& b) {
  for (int w = 0; w < kWords; ++w) {
    if (a.plus_[w] != b.plus_[w]) return a.plus_[w] < b.plus_[w] ? -1 : 1;
    if (a.minus_[w] != b.minus_[w]) return a.minus_[w] < b.minus_[w] ? -1 : 1;
  }
  return 0;
}

SignVector::Words SignVector::zero_words() const {
  Words out{};
  for (int i = 0; i < size_; ++i) {
    if (at(i) == Sign::zero) out[i >> 6] |= 1ULL << (i & 63);
  }
  return out;
}

std::size_t SignVector::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  };
  for (int w = 0; w < kWords; ++w) {
    mix(plus_[w]);
    mix(minus_[w]);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace omw
