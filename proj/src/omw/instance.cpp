#include "omw/instance.hpp"

#include <fstream>
#include <sstream>

#include "omw/errors.hpp"
#include "omw/exactq.hpp"
#include "omw/prng.hpp"

namespace omw {

const std::array<PairIJ, 6>& axis_pairs() {
  static const std::array<PairIJ, 6> pairs = {
      {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};
  return pairs;
}

int pair_index(int i, int j) {
  const auto& pairs = axis_pairs();
  for (int p = 0; p < 6; ++p)
    if (pairs[static_cast<std::size_t>(p)].i == i &&
        pairs[static_cast<std::size_t>(p)].j == j)
      return p;
  throw usage_error("axis pair must have 1 <= i < j <= 4");
}

Sign alpha_sign(int p, int q) {
  if (p < 1 || p > 4 || q < 1 || q > 4 || p == q)
    throw usage_error("orientation sign needs two distinct axes");
  return p < q ? Sign::plus : Sign::minus;
}

namespace {

// Coordinates of the six tilt directions at the four axes.
constexpr int kDeltaTable[6][4] = {
    {+1, +1, -1, -1}, {+1, -1, +1, -1}, {+1, -1, -1, +1},
    {-1, -1, +1, +1}, {-1, +1, -1, +1}, {-1, +1, +1, -1},
};

}  // namespace

int delta_coord(int u, int axis) {
  if (u < 0 || u > 5) throw usage_error("tilt index out of range 0..5");
  if (axis < 1 || axis > 4) throw usage_error("axis out of range 1..4");
  return kDeltaTable[u][axis - 1];
}

TropicalPoint delta_direction(int u) {
  if (u < 0 || u > 5) throw usage_error("tilt index out of range 0..5");
  std::array<mpq_class, 4> c;
  for (int a = 0; a < 4; ++a) c[static_cast<std::size_t>(a)] = kDeltaTable[u][a];
  return TropicalPoint(c);
}

std::string element_token(int i, int j, long long r) {
  if (i > j) {  // accept the reversed reading of the same wall
    std::swap(i, j);
    r = -r;
  }
  if (i == j) throw usage_error("element token needs two distinct axes");
  pair_index(i, j);  // validates the pair
  std::ostringstream os;
  os << "(" << i << "," << j << "," << r << ")";
  return os.str();
}

int base_element_count(int N) {
  if (N < 0) throw usage_error("N must be nonnegative");
  return 6 * (2 * N + 1);
}

GroundPtr construction_ground(int N) {
  const int m = base_element_count(N);
  if (m + 1 > GroundSet::kMaxElements)
    throw usage_error("N too large for the fixed sign-vector capacity");
  std::vector<std::string> tokens;
  tokens.reserve(static_cast<std::size_t>(m) + 1);
  for (const PairIJ& p : axis_pairs())
    for (long long r = -N; r <= N; ++r)
      tokens.push_back(element_token(p.i, p.j, r));
  tokens.emplace_back("f");
  return make_ground(std::move(tokens));
}

int element_index(int N, int i, int j, long long r) {
  if (N < 0) throw usage_error("N must be nonnegative");
  long long rr = r;
  int ii = i, jj = j;
  if (ii > jj) {  // accept the reversed reading of the same wall
    std::swap(ii, jj);
    rr = -rr;
  }
  if (rr < -N || rr > N)
    throw usage_error("wall offset out of range for this N");
  return pair_index(ii, jj) * (2 * N + 1) + static_cast<int>(rr + N);
}

ElementRef element_ref(int N, int index) {
  const int m = base_element_count(N);
  if (index < 0 || index >= m)
    throw usage_error("element index out of range");
  const int per = 2 * N + 1;
  const PairIJ& p = axis_pairs()[static_cast<std::size_t>(index / per)];
  return ElementRef{p.i, p.j, static_cast<long long>(index % per) - N};
}

// ---------------------------------------------------------------------------
// ConstructionInstance
// ---------------------------------------------------------------------------

GroupElement ConstructionInstance::g_element(int e) const {
  if (e < 0 || e >= static_cast<int>(g.size()))
    throw usage_error("wall index out of range");
  if (!g[static_cast<std::size_t>(e)]) return GroupElement{};
  const ElementRef ref = element_ref(N, e);
  return group_generator(ref.i, ref.j);
}

nlohmann::json ConstructionInstance::to_json() const {
  nlohmann::json j;
  j["N"] = N;
  j["seed"] = seed;
  j["delta"] = format_rational(delta);
  nlohmann::json jg = nlohmann::json::object();
  nlohmann::json ju = nlohmann::json::object();
  nlohmann::json je = nlohmann::json::object();
  const int m = base_element_count(N);
  for (int e = 0; e < m; ++e) {
    const ElementRef ref = element_ref(N, e);
    const std::string tok = element_token(ref.i, ref.j, ref.r);
    jg[tok] = g[static_cast<std::size_t>(e)];
    ju[tok] = u[static_cast<std::size_t>(e)];
    nlohmann::json comp = nlohmann::json::array();
    for (int c = 0; c < 3; ++c)
      comp.push_back(
          format_rational(eps[static_cast<std::size_t>(e)]
                             [static_cast<std::size_t>(c)]));
    je[tok] = std::move(comp);
  }
  j["g"] = std::move(jg);
  j["u"] = std::move(ju);
  j["eps"] = std::move(je);
  return j;
}

ConstructionInstance ConstructionInstance::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw usage_error("instance JSON must be an object");
  for (const auto& item : j.items())
    if (item.key() != "N" && item.key() != "seed" && item.key() != "delta" &&
        item.key() != "g" && item.key() != "u" && item.key() != "eps")
      throw usage_error("unknown instance key '" + item.key() + "'");
  for (const char* key : {"N", "seed", "delta", "g", "u", "eps"})
    if (!j.contains(key))
      throw usage_error(std::string("instance JSON missing '") + key + "'");
  ConstructionInstance inst;
  if (!j["N"].is_number_integer() || j["N"].get<long long>() < 0)
    throw usage_error("instance N must be a nonnegative integer");
  inst.N = j["N"].get<int>();
  if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
    throw usage_error("instance seed must be an integer");
  inst.seed = j["seed"].get<std::uint64_t>();
  if (!j["delta"].is_string())
    throw usage_error("instance delta must be a rational string");
  inst.delta = parse_rational(j["delta"].get<std::string>());
  if (sgn(inst.delta) <= 0) throw usage_error("delta must be positive");

  const int m = base_element_count(inst.N);
  construction_ground(inst.N);  // enforces the capacity limit
  inst.g.assign(static_cast<std::size_t>(m), 0);
  inst.u.assign(static_cast<std::size_t>(m), 0);
  inst.eps.assign(static_cast<std::size_t>(m), {mpq_class(0), 0, 0});
  const auto& jg = j["g"];
  const auto& ju = j["u"];
  const auto& je = j["eps"];
  if (!jg.is_object() || !ju.is_object() || !je.is_object())
    throw usage_error("instance g/u/eps must be objects keyed by element");
  if (static_cast<int>(jg.size()) != m || static_cast<int>(ju.size()) != m ||
      static_cast<int>(je.size()) != m)
    throw usage_error("instance g/u/eps must cover every wall exactly once");
  for (int e = 0; e < m; ++e) {
    const ElementRef ref = element_ref(inst.N, e);
    const std::string tok = element_token(ref.i, ref.j, ref.r);
    if (!jg.contains(tok) || !ju.contains(tok) || !je.contains(tok))
      throw usage_error("instance missing data for element " + tok);
    const auto& gv = jg[tok];
    if (!gv.is_number_integer() || (gv.get<int>() != 0 && gv.get<int>() != 1))
      throw usage_error("instance g values must be 0 or 1");
    inst.g[static_cast<std::size_t>(e)] = gv.get<int>();
    const auto& uv = ju[tok];
    if (!uv.is_number_integer() || uv.get<int>() < 0 || uv.get<int>() > 5)
      throw usage_error("instance u values must lie in 0..5");
    inst.u[static_cast<std::size_t>(e)] = uv.get<int>();
    const auto& ev = je[tok];
    if (!ev.is_array() || ev.size() != 3)
      throw usage_error("instance eps values must be 3-vectors");
    for (int c = 0; c < 3; ++c) {
      if (!ev[static_cast<std::size_t>(c)].is_string())
        throw usage_error("instance eps entries must be rational strings");
      inst.eps[static_cast<std::size_t>(e)][static_cast<std::size_t>(c)] =
          parse_rational(ev[static_cast<std::size_t>(c)].get<std::string>());
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace {

mpq_class default_delta(int N) {
  const long scale = std::max(N, 1);
  mpq_class d(1, 1048576);  // 1/2²⁰
  d /= scale;
  return d;
}

}  // namespace

void resample_eps(ConstructionInstance& inst, int attempt) {
  const int m = base_element_count(inst.N);
  SplitMix64 rng = derive_stream(inst.seed, stream::kEps,
                                 static_cast<std::uint64_t>(attempt));
  // Magnitude schedule: numerator in [−2²⁰, 2²⁰] over 2⁴⁰, times δ².
  mpq_class unit = inst.delta * inst.delta;
  unit /= mpz_class(1) << 40;
  inst.eps.assign(static_cast<std::size_t>(m), {mpq_class(0), 0, 0});
  for (int e = 0; e < m; ++e)
    for (int c = 0; c < 3; ++c) {
      const long k = static_cast<long>(rng.range(-(1 << 20), 1 << 20));
      inst.eps[static_cast<std::size_t>(e)][static_cast<std::size_t>(c)] =
          k * unit;
    }
}

ConstructionInstance sample_instance(int N, std::uint64_t seed,
                                     const mpq_class& delta) {
  if (sgn(delta) <= 0) throw usage_error("delta must be positive");
  const int m = base_element_count(N);
  construction_ground(N);  // enforces the capacity limit
  ConstructionInstance inst;
  inst.N = N;
  inst.seed = seed;
  inst.delta = delta;
  SplitMix64 coins = derive_stream(seed, stream::kGBits, 0);
  inst.g.resize(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e)
    inst.g[static_cast<std::size_t>(e)] = static_cast<int>(coins.next() & 1);
  SplitMix64 tilts = derive_stream(seed, stream::kUChoice, 0);
  inst.u.resize(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e)
    inst.u[static_cast<std::size_t>(e)] = static_cast<int>(tilts.below(6));
  resample_eps(inst, 0);
  return inst;
}

ConstructionInstance sample_instance(int N, std::uint64_t seed) {
  return sample_instance(N, seed, default_delta(N));
}

void save_instance(const ConstructionInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw usage_error("cannot open '" + path + "' for writing");
  out << inst.to_json().dump(2) << "\n";
  if (!out) throw usage_error("failed writing '" + path + "'");
}

ConstructionInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw usage_error("invalid JSON in '" + path + "': " + e.what());
  }
  return ConstructionInstance::from_json(j);
}

}  // namespace omw
