#include "omw/geometry.hpp"

#include <algorithm>
#include <utility>

#include "omw/combinatorics.hpp"
#include "omw/errors.hpp"
#include "omw/exactq.hpp"

namespace omw {

// ---------------------------------------------------------------------------
// TropicalPoint
// ---------------------------------------------------------------------------

TropicalPoint::TropicalPoint() : c_{0, 0, 0, 0} {}

TropicalPoint::TropicalPoint(const std::array<mpq_class, 4>& coords) {
  for (int i = 0; i < 4; ++i) c_[i] = coords[i] - coords[3];
}

TropicalPoint TropicalPoint::from_chart(const mpq_class& a, const mpq_class& b,
                                        const mpq_class& c) {
  TropicalPoint p;
  p.c_ = {a, b, c, 0};
  return p;
}

TropicalPoint TropicalPoint::axis(int i) {
  if (i < 1 || i > 4) throw usage_error("axis out of range 1..4");
  std::array<mpq_class, 4> c = {0, 0, 0, 0};
  c[i - 1] = 1;
  return TropicalPoint(c);
}

TropicalPoint TropicalPoint::pair_difference(int i, int j) {
  return axis(i) - axis(j);
}

std::array<mpq_class, 3> TropicalPoint::chart() const {
  return {c_[0], c_[1], c_[2]};
}

QVec TropicalPoint::sum_zero() const {
  const mpq_class s = (c_[0] + c_[1] + c_[2] + c_[3]) / 4;
  return {c_[0] - s, c_[1] - s, c_[2] - s, c_[3] - s};
}

TropicalPoint TropicalPoint::operator+(const TropicalPoint& o) const {
  TropicalPoint r;
  for (int i = 0; i < 4; ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;  // both fourth coordinates are 0, so the sum is canonical
}

TropicalPoint TropicalPoint::operator-(const TropicalPoint& o) const {
  TropicalPoint r;
  for (int i = 0; i < 4; ++i) r.c_[i] = c_[i] - o.c_[i];
  return r;
}

TropicalPoint TropicalPoint::scaled(const mpq_class& c) const {
  TropicalPoint r;
  for (int i = 0; i < 4; ++i) r.c_[i] = c_[i] * c;
  return r;
}

bool TropicalPoint::operator==(const TropicalPoint& o) const {
  return c_ == o.c_;
}

bool TropicalPoint::is_origin() const {
  for (const auto& v : c_)
    if (sgn(v) != 0) return false;
  return true;
}

std::string TropicalPoint::to_string() const {
  return "(" + format_rational(c_[0]) + ", " + format_rational(c_[1]) + ", " +
         format_rational(c_[2]) + ")";
}

mpq_class tp_inner(const TropicalPoint& a, const TropicalPoint& b) {
  return dot(a.sum_zero(), b.sum_zero());
}

// ---------------------------------------------------------------------------
// RationalVectorConfig
// ---------------------------------------------------------------------------

int RationalVectorConfig::dimension() const {
  return vectors.empty() ? 0 : static_cast<int>(vectors.front().size());
}

nlohmann::json RationalVectorConfig::to_json() const {
  nlohmann::json j;
  j["chart"] = "x4=0";
  j["elements"] = ground->tokens();
  nlohmann::json vecs = nlohmann::json::array();
  for (const QVec& v : vectors) {
    nlohmann::json row = nlohmann::json::array();
    for (const mpq_class& q : v) row.push_back(format_rational(q));
    vecs.push_back(std::move(row));
  }
  j["vectors"] = std::move(vecs);
  return j;
}

RationalVectorConfig RationalVectorConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw usage_error("configuration JSON must be an object");
  for (const auto& item : j.items())
    if (item.key() != "chart" && item.key() != "elements" &&
        item.key() != "vectors")
      throw usage_error("unknown configuration key '" + item.key() + "'");
  if (!j.contains("chart") || !j.contains("elements") || !j.contains("vectors"))
    throw usage_error("configuration JSON needs chart, elements, vectors");
  if (!j["chart"].is_string() || j["chart"].get<std::string>() != "x4=0")
    throw usage_error("unsupported chart (only \"x4=0\")");
  if (!j["elements"].is_array() || !j["vectors"].is_array())
    throw usage_error("configuration elements/vectors must be arrays");
  std::vector<std::string> tokens;
  for (const auto& t : j["elements"]) {
    if (!t.is_string()) throw usage_error("element tokens must be strings");
    tokens.push_back(t.get<std::string>());
  }
  RationalVectorConfig cfg;
  cfg.ground = make_ground(tokens);
  if (j["vectors"].size() != tokens.size())
    throw usage_error("vector count does not match element count");
  std::size_t dim = 0;
  for (const auto& row : j["vectors"]) {
    if (!row.is_array() || row.empty())
      throw usage_error("each vector must be a nonempty array");
    if (cfg.vectors.empty())
      dim = row.size();
    else if (row.size() != dim)
      throw usage_error("inconsistent vector dimensions");
    QVec v;
    for (const auto& entry : row) {
      if (!entry.is_string())
        throw usage_error("vector entries must be rational strings");
      v.push_back(parse_rational(entry.get<std::string>()));
    }
    cfg.vectors.push_back(std::move(v));
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Chirotope
// ---------------------------------------------------------------------------

Chirotope::Chirotope(GroundPtr ground, int d, std::vector<Sign> by_colex_rank)
    : ground_(std::move(ground)), d_(d), signs_(std::move(by_colex_rank)) {
  if (d_ < 1) throw usage_error("chirotope rank must be positive");
  const std::uint64_t want = binom_u64(ground_->size(), d_);
  if (signs_.size() != want)
    throw usage_error("chirotope table size does not match C(n, d)");
}

Sign Chirotope::sign_sorted(const std::vector<int>& sorted_subset) const {
  if (static_cast<int>(sorted_subset.size()) != d_)
    throw usage_error("chirotope query must have exactly rank elements");
  for (std::size_t i = 0; i < sorted_subset.size(); ++i) {
    if (sorted_subset[i] < 0 || sorted_subset[i] >= ground_->size())
      throw usage_error("chirotope query element out of range");
    if (i > 0 && sorted_subset[i] <= sorted_subset[i - 1])
      throw usage_error("chirotope query must be strictly increasing");
  }
  return signs_[colex_rank(sorted_subset)];
}

Sign Chirotope::sign_ordered(const std::vector<int>& subset) const {
  std::vector<int> s = subset;
  // Insertion sort, counting transpositions for the permutation parity.
  int swaps = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    for (std::size_t k = i; k > 0 && s[k] < s[k - 1]; --k) {
      std::swap(s[k], s[k - 1]);
      ++swaps;
    }
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] == s[i - 1]) return Sign::zero;  // repeated element
  Sign base = sign_sorted(s);
  return (swaps % 2 == 0) ? base : opposite(base);
}

bool Chirotope::is_uniform() const {
  for (Sign s : signs_)
    if (s == Sign::zero) return false;
  return true;
}

Chirotope chirotope_of(const RationalVectorConfig& config, int d) {
  const int n = config.ground->size();
  if (static_cast<int>(config.vectors.size()) != n)
    throw usage_error("configuration vector count mismatch");
  const int dim = config.dimension();
  if (d < 1 || d > dim)
    throw usage_error("chirotope rank out of range for the configuration");
  // Coordinates beyond the first d must vanish: the canonical chart stores
  // points with trailing zeros, and a genuinely (d+1)-dimensional
  // configuration has no d×d determinants.
  for (const QVec& v : config.vectors)
    for (int c = d; c < dim; ++c)
      if (sgn(v[static_cast<std::size_t>(c)]) != 0)
        throw usage_error(
            "nonzero coordinate beyond the declared chirotope rank");
  const std::uint64_t count = binom_u64(n, d);
  if (count > 5'000'000ULL)
    throw usage_error("chirotope table too large; this cache is for small "
                      "configurations");
  const std::vector<int> flat = subsets_colex_flat(n, d);
  std::vector<Sign> signs(static_cast<std::size_t>(count), Sign::zero);
  for (std::uint64_t s = 0; s < count; ++s) {
    QMat m;
    for (int t = 0; t < d; ++t) {
      const int e = flat[static_cast<std::size_t>(s) * d + t];
      const QVec& v = config.vectors[static_cast<std::size_t>(e)];
      m.emplace_back(v.begin(), v.begin() + d);
    }
    signs[s] = sign_of_int(sign_of(q_det(std::move(m))));
  }
  return Chirotope(config.ground, d, std::move(signs));
}

// ---------------------------------------------------------------------------
// Oriented matroid of a configuration
// ---------------------------------------------------------------------------

namespace {

// Greedily picks element indices whose vectors are independent and span the
// configuration.
std::vector<int> greedy_vector_basis(const std::vector<QVec>& vectors,
                                     int rank) {
  std::vector<int> basis;
  QMat rows;
  for (std::size_t e = 0; e < vectors.size() &&
                          static_cast<int>(basis.size()) < rank;
       ++e) {
    rows.push_back(vectors[e]);
    if (q_rank(rows) == static_cast<int>(rows.size()))
      basis.push_back(static_cast<int>(e));
    else
      rows.pop_back();
  }
  return basis;
}

std::vector<SignVector> dedup_sorted(std::vector<SignVector> v) {
  std::sort(v.begin(), v.end(), SignVectorLess());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

OrientedMatroid om_of_config(const RationalVectorConfig& config) {
  const int n = config.ground->size();
  if (static_cast<int>(config.vectors.size()) != n)
    throw usage_error("configuration vector count mismatch");
  if (n == 0) throw usage_error("empty configuration");
  QMat all(config.vectors.begin(), config.vectors.end());
  const int r = q_rank(all);
  if (r == 0) throw usage_error("configuration has no nonzero vector");

  const std::vector<int> basis = greedy_vector_basis(config.vectors, r);
  // Coordinates of every element against the basis under the plain dot
  // product: cocircuit directions live in the span, so signs only need these
  // pairings.
  std::vector<QVec> gram(static_cast<std::size_t>(n));
  for (int e = 0; e < n; ++e) {
    QVec& row = gram[static_cast<std::size_t>(e)];
    row.reserve(static_cast<std::size_t>(r));
    for (int b : basis)
      row.push_back(dot(config.vectors[static_cast<std::size_t>(e)],
                        config.vectors[static_cast<std::size_t>(b)]));
  }

  std::vector<SignVector> found;
  if (r == 1) {
    SignVector x(config.ground);
    for (int e = 0; e < n; ++e)
      x.set(e, sign_of_int(sign_of(gram[static_cast<std::size_t>(e)][0])));
    found.push_back(x.canonical());
    return OrientedMatroid(config.ground, 1, dedup_sorted(std::move(found)));
  }

  const int k = r - 1;
  const std::vector<int> flat = subsets_colex_flat(n, k);
  const long long count = static_cast<long long>(flat.size()) / k;
#pragma omp parallel
  {
    std::vector<SignVector> local;
#pragma omp for schedule(dynamic, 64) nowait
    for (long long s = 0; s < count; ++s) {
      QMat a;
      a.reserve(static_cast<std::size_t>(k));
      for (int t = 0; t < k; ++t)
        a.push_back(gram[static_cast<std::size_t>(
            flat[static_cast<std::size_t>(s) * k + t])]);
      const std::vector<QVec> kernel = q_kernel(std::move(a));
      if (kernel.size() != 1) continue;  // dependent subset, no coatom here
      const QVec& c = kernel.front();
      SignVector x(config.ground);
      for (int e = 0; e < n; ++e)
        x.set(e, sign_of_int(
                     sign_of(dot(c, gram[static_cast<std::size_t>(e)]))));
      local.push_back(x.canonical());
    }
#pragma omp critical
    found.insert(found.end(), local.begin(), local.end());
  }
  return OrientedMatroid(config.ground, r, dedup_sorted(std::move(found)));
}

OrientedMatroid om_of_config_reference(const RationalVectorConfig& config) {
  const int n = config.ground->size();
  if (static_cast<int>(config.vectors.size()) != n)
    throw usage_error("configuration vector count mismatch");
  if (n == 0) throw usage_error("empty configuration");
  QMat all(config.vectors.begin(), config.vectors.end());
  const int r = q_rank(all);
  if (r == 0) throw usage_error("configuration has no nonzero vector");
  // Basis of the orthogonal complement of the span: candidate directions are
  // constrained to the span by requiring orthogonality to these rows.
  const std::vector<QVec> complement = q_kernel(all);

  const int k = r - 1;
  const std::vector<int> flat = subsets_colex_flat(n, k);
  const long long count = k == 0 ? 1 : static_cast<long long>(flat.size()) / k;
  std::vector<SignVector> found;
  for (long long s = 0; s < count; ++s) {
    QMat a;
    for (int t = 0; t < k; ++t)
      a.push_back(config.vectors[static_cast<std::size_t>(
          flat[static_cast<std::size_t>(s) * k + t])]);
    for (const QVec& w : complement) a.push_back(w);
    if (a.empty()) a.push_back(QVec(config.vectors.front().size(), 0));
    const std::vector<QVec> kernel = q_kernel(std::move(a));
    if (kernel.size() != 1) continue;
    const QVec& y = kernel.front();
    SignVector x(config.ground);
    for (int e = 0; e < n; ++e)
      x.set(e, sign_of_int(sign_of(
                   dot(y, config.vectors[static_cast<std::size_t>(e)]))));
    if (x.is_zero()) continue;
    found.push_back(x.canonical());
  }
  return OrientedMatroid(config.ground, r, dedup_sorted(std::move(found)));
}

// ---------------------------------------------------------------------------
// AffineArrangement
// ---------------------------------------------------------------------------

RationalVectorConfig AffineArrangement::normal_config() const {
  RationalVectorConfig cfg;
  cfg.ground = ground;
  for (const TropicalPoint& nrm : normals) cfg.vectors.push_back(nrm.sum_zero());
  return cfg;
}

RationalVectorConfig AffineArrangement::homogenized_config(
    const std::string& lift_token) const {
  std::vector<std::string> tokens = ground->tokens();
  tokens.push_back(lift_token);
  RationalVectorConfig cfg;
  cfg.ground = make_ground(std::move(tokens));
  for (std::size_t e = 0; e < normals.size(); ++e) {
    QVec v = normals[e].sum_zero();
    v.push_back(-offsets[e]);
    cfg.vectors.push_back(std::move(v));
  }
  QVec f(5, 0);
  f[4] = 1;
  cfg.vectors.push_back(std::move(f));
  return cfg;
}

mpq_class AffineArrangement::margin(int element, const TropicalPoint& x) const {
  if (element < 0 || element >= static_cast<int>(normals.size()))
    throw usage_error("arrangement element out of range");
  return tp_inner(x, normals[static_cast<std::size_t>(element)]) -
         offsets[static_cast<std::size_t>(element)];
}

int AffineArrangement::vertex_concurrence_max() const {
  const int n = static_cast<int>(normals.size());
  std::vector<QVec> sz;
  for (const TropicalPoint& nrm : normals) sz.push_back(nrm.sum_zero());
  int best = 0;
  const std::vector<int> flat = subsets_colex_flat(n, 3);
  const long long count = static_cast<long long>(flat.size()) / 3;
  for (long long s = 0; s < count; ++s) {
    QMat a;
    QVec b;
    for (int t = 0; t < 3; ++t) {
      const int e = flat[static_cast<std::size_t>(s) * 3 + t];
      a.push_back(sz[static_cast<std::size_t>(e)]);
      b.push_back(offsets[static_cast<std::size_t>(e)]);
    }
    a.push_back(QVec(4, 1));  // pin the sum-zero representative
    b.push_back(0);
    if (q_rank(a) != 4) continue;  // no single intersection point
    const auto x = q_solve(a, b);
    if (!x) continue;
    int through = 0;
    for (int e = 0; e < n; ++e)
      if (sgn(dot(*x, sz[static_cast<std::size_t>(e)]) -
              offsets[static_cast<std::size_t>(e)]) == 0)
        ++through;
    best = std::max(best, through);
  }
  return best;
}

// ---------------------------------------------------------------------------
// LiftingOM
// ---------------------------------------------------------------------------

namespace {

// Ground set with one token removed, order preserved.
GroundPtr ground_without(const GroundPtr& g, int drop) {
  std::vector<std::string> tokens;
  for (int i = 0; i < g->size(); ++i)
    if (i != drop) tokens.push_back(g->token(i));
  return make_ground(std::move(tokens));
}

// Restrictions to the base ground of the cocircuits vanishing at `fi`.
std::vector<SignVector> contraction_reps(const OrientedMatroid& m, int fi,
                                         const GroundPtr& base_ground) {
  std::vector<SignVector> out;
  for (const SignVector& x : m.cocircuits()) {
    if (x.at(fi) != Sign::zero) continue;
    SignVector r(base_ground);
    int k = 0;
    for (int e = 0; e < m.elements(); ++e) {
      if (e == fi) continue;
      r.set(k++, x.at(e));
    }
    out.push_back(r.canonical());
  }
  std::sort(out.begin(), out.end(), SignVectorLess());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

int LiftingOM::lift_index() const {
  return matroid.ground()->index_of(lift_element);
}

nlohmann::json LiftingOM::to_json() const {
  nlohmann::json j = matroid.to_json();
  j["lift_element"] = lift_element;
  return j;
}

LiftingOM LiftingOM::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("lift_element") ||
      !j["lift_element"].is_string())
    throw usage_error("lifting JSON needs a lift_element string");
  nlohmann::json rest = j;
  rest.erase("lift_element");
  OrientedMatroid m = OrientedMatroid::from_json(rest);
  const std::string token = j["lift_element"].get<std::string>();
  const int fi = m.ground()->index_of(token);
  GroundPtr base_ground = ground_without(m.ground(), fi);
  std::vector<SignVector> reps = contraction_reps(m, fi, base_ground);
  if (reps.empty())
    throw verification_error("no cocircuit vanishes at the lift element");
  OrientedMatroid base(base_ground, m.rank() - 1, std::move(reps));
  LiftingOM out{std::move(m), token, std::move(base)};
  out.check_lifting();
  return out;
}

void LiftingOM::check_lifting() const {
  const int fi = lift_index();  // throws when the token is missing
  GroundPtr expect_ground = ground_without(matroid.ground(), fi);
  require_same_ground(expect_ground, base.ground());
  if (base.rank() != matroid.rank() - 1)
    throw verification_error("base rank must be one below the lifting rank");
  bool lift_used = false;
  for (const SignVector& x : matroid.cocircuits())
    if (x.at(fi) != Sign::zero) {
      lift_used = true;
      break;
    }
  if (!lift_used) throw verification_error("lift element is a loop");
  const std::vector<SignVector> reps =
      contraction_reps(matroid, fi, base.ground());
  if (reps != base.cocircuits())
    throw verification_error(
        "cocircuits vanishing at the lift element do not restrict onto the "
        "base cocircuit set");
}

LiftingOM lifting_from_affine(const AffineArrangement& arr,
                              const OrientedMatroid& base,
                              const std::string& lift_token) {
  OrientedMatroid at_infinity = om_of_config(arr.normal_config());
  if (!(at_infinity == base))
    throw verification_error(
        "arrangement normals do not realize the declared base matroid");
  OrientedMatroid lifted = om_of_config(arr.homogenized_config(lift_token));
  LiftingOM out{std::move(lifted), lift_token, base};
  out.check_lifting();
  return out;
}

// ---------------------------------------------------------------------------
// Braid family
// ---------------------------------------------------------------------------

GroundPtr braid_ground() {
  static const GroundPtr g = make_ground(
      {"(1,2)", "(1,3)", "(1,4)", "(2,3)", "(2,4)", "(3,4)"});
  return g;
}

RationalVectorConfig braid_config() {
  RationalVectorConfig cfg;
  cfg.ground = braid_ground();
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j)
      cfg.vectors.push_back(TropicalPoint::pair_difference(i, j).sum_zero());
  return cfg;
}

AffineArrangement braid_model(const CyclicTriple& gamma) {
  AffineArrangement arr;
  arr.ground = braid_ground();
  const int l = gamma.missing();
  const auto& t = gamma.rep();
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      arr.normals.push_back(TropicalPoint::pair_difference(i, j));
      if (i == l || j == l) {
        arr.offsets.emplace_back(0);
        continue;
      }
      bool forward = false;  // does the cycle traverse i → j?
      for (int r = 0; r < 3; ++r)
        if (t[r] == i && t[(r + 1) % 3] == j) forward = true;
      arr.offsets.emplace_back(forward ? 1 : -1);
    }
  return arr;
}

}  // namespace omw
