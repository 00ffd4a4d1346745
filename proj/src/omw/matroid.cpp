#include "omw/matroid.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "omw/errors.hpp"

namespace omw {

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

OrientedMatroid::OrientedMatroid(GroundPtr ground, int rank,
                                 std::vector<SignVector> cocircuits)
    : ground_(std::move(ground)), rank_(rank) {
  if (!ground_) throw usage_error("matroid needs a ground set");
  if (rank_ < 0 || rank_ > ground_->size())
    throw usage_error("matroid rank out of range");
  cocircuits_.reserve(cocircuits.size());
  for (const SignVector& x : cocircuits) {
    require_same_ground(ground_, x.ground());
    if (x.is_zero())
      throw verification_error("zero vector listed as a cocircuit");
    cocircuits_.push_back(x.canonical());
  }
  std::sort(cocircuits_.begin(), cocircuits_.end(), SignVectorLess{});
  cocircuits_.erase(std::unique(cocircuits_.begin(), cocircuits_.end()),
                    cocircuits_.end());
}

SignVector OrientedMatroid::signed_cocircuit(int s) const {
  const SignVector& rep = cocircuits_.at(static_cast<std::size_t>(s / 2));
  return (s & 1) ? -rep : rep;
}

std::optional<int> OrientedMatroid::find_pair(const SignVector& x) const {
  const SignVector c = x.canonical();
  auto it = std::lower_bound(cocircuits_.begin(), cocircuits_.end(), c,
                             SignVectorLess{});
  if (it != cocircuits_.end() && *it == c)
    return static_cast<int>(it - cocircuits_.begin());
  return std::nullopt;
}

bool OrientedMatroid::contains_cocircuit(const SignVector& x) const {
  return find_pair(x).has_value();
}

bool OrientedMatroid::operator==(const OrientedMatroid& other) const {
  return *ground_ == *other.ground_ && rank_ == other.rank_ &&
         cocircuits_ == other.cocircuits_;
}

nlohmann::json OrientedMatroid::to_json() const {
  std::vector<std::string> reps;
  reps.reserve(cocircuits_.size());
  for (const SignVector& x : cocircuits_) reps.push_back(x.to_string());
  std::sort(reps.begin(), reps.end());
  nlohmann::json j;
  j["elements"] = ground_->tokens();
  j["rank"] = rank_;
  j["cocircuits"] = reps;
  return j;
}

OrientedMatroid OrientedMatroid::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw usage_error("matroid JSON must be an object");
  for (const char* key : {"elements", "rank", "cocircuits"})
    if (!j.contains(key))
      throw usage_error(std::string("matroid JSON missing key: ") + key);
  std::vector<std::string> tokens;
  for (const auto& t : j.at("elements")) {
    if (!t.is_string())
      throw usage_error("matroid element tokens must be strings");
    tokens.push_back(t.get<std::string>());
  }
  GroundPtr ground = make_ground(std::move(tokens));
  if (!j.at("rank").is_number_integer())
    throw usage_error("matroid rank must be an integer");
  const int rank = j.at("rank").get<int>();
  std::vector<SignVector> cocircuits;
  for (const auto& s : j.at("cocircuits")) {
    if (!s.is_string())
      throw usage_error("matroid cocircuits must be sign strings");
    cocircuits.emplace_back(ground, s.get<std::string>());
  }
  return OrientedMatroid(ground, rank, std::move(cocircuits));
}

std::string canonical_serialization(const OrientedMatroid& m) {
  return m.to_json().dump(2) + "\n";
}

std::string canonical_key(const OrientedMatroid& m) {
  const std::string text = canonical_serialization(m);
  auto fnv = [&text](std::uint64_t salt) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ salt;
    for (unsigned char c : text) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  };
  const std::uint64_t a = fnv(0);
  const std::uint64_t b = fnv(0x9e3779b97f4a7c15ULL);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx",
                static_cast<unsigned long long>(a),
                static_cast<unsigned long long>(b));
  return std::string(buf);
}

void save_matroid(const OrientedMatroid& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw usage_error("cannot open for writing: " + path);
  out << canonical_serialization(m);
  if (!out) throw usage_error("write failed: " + path);
}

OrientedMatroid load_matroid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw usage_error("bad JSON in " + path + ": " + e.what());
  }
  return OrientedMatroid::from_json(j);
}

// ---------------------------------------------------------------------------
// ZeroSetIndex
// ---------------------------------------------------------------------------

ZeroSetIndex::ZeroSetIndex(const OrientedMatroid& m) {
  n_ = m.elements();
  k_ = m.rank() - 1;
  if (k_ < 0) throw usage_error("zero-set index needs rank >= 1");
  const long long slots = binom(n_, k_);
  if (slots > 20'000'000)
    throw usage_error("zero-set index too large for this ground set");
  table_.assign(static_cast<std::size_t>(slots), -1);
  for (int i = 0; i < m.pair_count(); ++i) {
    const std::vector<int> z = m.cocircuits()[static_cast<std::size_t>(i)].zero_set();
    if (static_cast<int>(z.size()) != k_)
      throw verification_error(
          "zero-set index requires every cocircuit zero set to have size " +
          std::to_string(k_));
    const long long r = colex_rank(z);
    if (table_[static_cast<std::size_t>(r)] != -1)
      throw verification_error("two cocircuit pairs share a zero set");
    table_[static_cast<std::size_t>(r)] = i;
  }
}

long long ZeroSetIndex::colex_rank(const std::vector<int>& subset) const {
  if (static_cast<int>(subset.size()) != k_)
    throw usage_error("zero-set lookup with wrong subset size");
  long long r = 0;
  for (int p = 0; p < k_; ++p) {
    const int a = subset[static_cast<std::size_t>(p)];
    if (a < 0 || a >= n_ || (p > 0 && a <= subset[static_cast<std::size_t>(p - 1)]))
      throw usage_error("zero-set lookup subset must be increasing and in range");
    r += binom(a, p + 1);
  }
  return r;
}

int ZeroSetIndex::pair_with_zero_set(const std::vector<int>& subset) const {
  return table_[static_cast<std::size_t>(colex_rank(subset))];
}

}  // namespace omw
