#include "omw/flips.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "omw/construction.hpp"
#include "omw/core_ops.hpp"
#include "omw/errors.hpp"

namespace omw {

// ---------------------------------------------------------------------------
// Supports
// ---------------------------------------------------------------------------

bool FlipSupport::contains(int e) const {
  return std::find(elements.begin(), elements.end(), e) != elements.end();
}

std::vector<std::string> FlipSupport::tokens(const GroundPtr& ground) const {
  std::vector<std::string> out;
  out.reserve(4);
  for (const int e : elements) out.push_back(ground->token(e));
  return out;
}

FlipSupport FlipSupport::from_tokens(const GroundPtr& ground,
                                     const std::vector<std::string>& toks) {
  if (toks.size() != 4)
    throw usage_error("a flip support names exactly four elements");
  FlipSupport s{};
  for (int i = 0; i < 4; ++i)
    s.elements[static_cast<std::size_t>(i)] =
        ground->index_of(toks[static_cast<std::size_t>(i)]);
  std::sort(s.elements.begin(), s.elements.end());
  if (std::adjacent_find(s.elements.begin(), s.elements.end()) !=
      s.elements.end())
    throw usage_error("flip support elements must be distinct");
  return s;
}

std::string canonical_key(const LiftingOM& m) {
  return canonical_key(m.matroid);
}

// ---------------------------------------------------------------------------
// Support matching
// ---------------------------------------------------------------------------

namespace {

using Words = SignVector::Words;

Words support_mask(const std::array<int, 4>& D) {
  Words mask{};
  for (const int e : D)
    mask[static_cast<std::size_t>(e >> 6)] |= 1ULL << (e & 63);
  return mask;
}

struct SupportMatch {
  std::array<int, 4> pair_idx;  // representative index per omitted element
  std::array<bool, 4> negate;   // orient to + at the lift element
};

// The four pairs vanishing on the sub-3-sets of D, oriented + at the lift,
// agree outside D — the flip criterion.  `scratch` avoids re-allocating the
// lookup subset in the scan's hot loop.
bool match_support(const OrientedMatroid& M, const ZeroSetIndex& zx, int f,
                   const std::array<int, 4>& D, std::vector<int>& scratch,
                   SupportMatch* out) {
  const std::vector<SignVector>& reps = M.cocircuits();
  SupportMatch sm{};
  std::array<const Words*, 4> pw{}, mw{};
  for (int i = 0; i < 4; ++i) {
    scratch.clear();
    for (int j = 0; j < 4; ++j)
      if (j != i) scratch.push_back(D[static_cast<std::size_t>(j)]);
    const int idx = zx.pair_with_zero_set(scratch);
    if (idx < 0) return false;
    const SignVector& rep = reps[static_cast<std::size_t>(idx)];
    const Sign at_f = rep.at(f);
    if (at_f == Sign::zero) return false;
    sm.pair_idx[static_cast<std::size_t>(i)] = idx;
    const bool neg = at_f == Sign::minus;
    sm.negate[static_cast<std::size_t>(i)] = neg;
    pw[static_cast<std::size_t>(i)] = neg ? &rep.minus_words() : &rep.plus_words();
    mw[static_cast<std::size_t>(i)] = neg ? &rep.plus_words() : &rep.minus_words();
  }
  const Words mask = support_mask(D);
  for (int i = 1; i < 4; ++i) {
    for (int w = 0; w < SignVector::kWords; ++w) {
      const std::uint64_t outside = ~mask[static_cast<std::size_t>(w)];
      if ((((*pw[0])[static_cast<std::size_t>(w)] ^
            (*pw[static_cast<std::size_t>(i)])[static_cast<std::size_t>(w)]) &
           outside) ||
          (((*mw[0])[static_cast<std::size_t>(w)] ^
            (*mw[static_cast<std::size_t>(i)])[static_cast<std::size_t>(w)]) &
           outside))
        return false;
    }
  }
  if (out) *out = sm;
  return true;
}

FlipWitness materialize_witness(const OrientedMatroid& M,
                                const std::array<int, 4>& D,
                                const SupportMatch& sm) {
  auto oriented = [&](int i) {
    SignVector x = M.cocircuits()[static_cast<std::size_t>(
        sm.pair_idx[static_cast<std::size_t>(i)])];
    if (sm.negate[static_cast<std::size_t>(i)]) x = -x;
    return x;
  };
  return FlipWitness{FlipSupport{D},
                     {oriented(0), oriented(1), oriented(2), oriented(3)}};
}

// The uniqueness property behind flip blocking: the only signed cocircuits
// whose support entries all lie in {X_i's sign, 0} are the four witnesses
// themselves.  A fifth conformer would mean the support cannot currently
// flip, contradicting the witness just found.
void assert_witness_unique(const SignedCocircuitIndex& sx,
                           const GroundPtr& ground, const FlipWitness& w,
                           const SupportMatch& sm) {
  std::vector<std::pair<int, Sign>> forbidden;
  forbidden.reserve(4);
  for (int i = 0; i < 4; ++i) {
    const int e = w.support.elements[static_cast<std::size_t>(i)];
    forbidden.emplace_back(
        e, opposite(w.cocircuits[static_cast<std::size_t>(i)].at(e)));
  }
  std::vector<int> expect;
  expect.reserve(4);
  for (int i = 0; i < 4; ++i)
    expect.push_back(2 * sm.pair_idx[static_cast<std::size_t>(i)] +
                     (sm.negate[static_cast<std::size_t>(i)] ? 1 : 0));
  std::sort(expect.begin(), expect.end());
  if (sx.avoiding_all(forbidden) != expect) {
    std::ostringstream os;
    os << "a cocircuit beyond the four witnesses conforms on support {";
    for (int i = 0; i < 4; ++i)
      os << (i ? ", " : "")
         << ground->token(w.support.elements[static_cast<std::size_t>(i)]);
    os << "}";
    throw verification_error(os.str());
  }
}

void require_uniform_rank4(const OrientedMatroid& M) {
  if (M.rank() != 4)
    throw usage_error("flip operations need a rank-4 lifting, got rank " +
                      std::to_string(M.rank()));
  const MatroidProfile prof = profile(M);
  if (!prof.uniform)
    throw usage_error("flip operations need a uniform lifting");
}

}  // namespace

// ---------------------------------------------------------------------------
// Scan, apply, midpoint
// ---------------------------------------------------------------------------

std::vector<FlipWitness> find_flip_supports(const LiftingOM& m) {
  const OrientedMatroid& M = m.matroid;
  require_uniform_rank4(M);
  const int f = m.lift_index();
  const ZeroSetIndex zx(M);

  std::vector<int> base_idx;
  base_idx.reserve(static_cast<std::size_t>(M.elements()) - 1);
  for (int e = 0; e < M.elements(); ++e)
    if (e != f) base_idx.push_back(e);
  const int B = static_cast<int>(base_idx.size());

  // scan 4-subsets grouped by their top element so the loop parallelizes and
  // merges back in a fixed order
  std::vector<std::vector<std::array<int, 4>>> per_top(
      static_cast<std::size_t>(std::max(B, 1)));
#pragma omp parallel
  {
    std::vector<int> scratch;
    scratch.reserve(3);
#pragma omp for schedule(dynamic)
    for (int ti = 3; ti < B; ++ti) {
      auto& local = per_top[static_cast<std::size_t>(ti)];
      for (int a = 0; a + 2 < ti; ++a) {
        for (int b = a + 1; b + 1 < ti; ++b) {
          for (int c = b + 1; c < ti; ++c) {
            const std::array<int, 4> D{
                base_idx[static_cast<std::size_t>(a)],
                base_idx[static_cast<std::size_t>(b)],
                base_idx[static_cast<std::size_t>(c)],
                base_idx[static_cast<std::size_t>(ti)]};
            if (match_support(M, zx, f, D, scratch, nullptr))
              local.push_back(D);
          }
        }
      }
    }
  }

  const SignedCocircuitIndex sx(M);
  std::vector<FlipWitness> out;
  std::vector<int> scratch;
  for (const auto& bucket : per_top) {
    for (const std::array<int, 4>& D : bucket) {
      SupportMatch sm{};
      match_support(M, zx, f, D, scratch, &sm);
      FlipWitness w = materialize_witness(M, D, sm);
      assert_witness_unique(sx, M.ground(), w, sm);
      out.push_back(std::move(w));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const FlipWitness& x, const FlipWitness& y) {
              return x.support < y.support;
            });
  return out;
}

LiftingOM apply_flip(const LiftingOM& m, const FlipSupport& support) {
  const OrientedMatroid& M = m.matroid;
  require_uniform_rank4(M);
  const int f = m.lift_index();
  for (const int e : support.elements)
    if (e < 0 || e >= M.elements() || e == f)
      throw usage_error("flip support must name base elements");

  const ZeroSetIndex zx(M);
  std::vector<int> scratch;
  SupportMatch sm{};
  if (!match_support(M, zx, f, support.elements, scratch, &sm)) {
    std::ostringstream os;
    os << "not a flip support of this lifting: {";
    for (int i = 0; i < 4; ++i)
      os << (i ? ", " : "")
         << M.ground()->token(support.elements[static_cast<std::size_t>(i)]);
    os << "}";
    throw usage_error(os.str());
  }

  std::vector<SignVector> list = M.cocircuits();
  for (int i = 0; i < 4; ++i) {
    SignVector& x =
        list[static_cast<std::size_t>(sm.pair_idx[static_cast<std::size_t>(i)])];
    for (const int e : support.elements) x.set(e, opposite(x.at(e)));
  }
  OrientedMatroid flipped(M.ground(), 4, std::move(list));

  ValidateOptions vo;
  vo.mode = ValidateMode::cocircuit_only;
  vo.uniform = UniformExpectation::required;
  const ValidationReport vr = validate(flipped, vo);
  if (!vr.ok)
    throw verification_error("flipped matroid failed validation: " +
                             vr.summary());
  LiftingOM out{std::move(flipped), m.lift_element, m.base};
  out.check_lifting();
  return out;
}

OrientedMatroid flip_midpoint(const LiftingOM& m, const FlipSupport& support) {
  const OrientedMatroid& M = m.matroid;
  require_uniform_rank4(M);
  const int f = m.lift_index();

  const ZeroSetIndex zx(M);
  std::vector<int> scratch;
  SupportMatch sm{};
  if (!match_support(M, zx, f, support.elements, scratch, &sm))
    throw usage_error("not a flip support of this lifting");

  // the degenerate cocircuit: the witnesses' common part, zero across D
  SignVector x0 = materialize_witness(M, support.elements, sm).cocircuits[0];
  for (const int e : support.elements) x0.set(e, Sign::zero);

  std::vector<SignVector> list;
  list.reserve(static_cast<std::size_t>(M.pair_count()) - 3);
  std::set<int> drop(sm.pair_idx.begin(), sm.pair_idx.end());
  for (int r = 0; r < M.pair_count(); ++r)
    if (!drop.count(r)) list.push_back(M.cocircuits()[static_cast<std::size_t>(r)]);
  list.push_back(std::move(x0));
  return OrientedMatroid(M.ground(), 4, std::move(list));
}

// ---------------------------------------------------------------------------
// Graph exploration
// ---------------------------------------------------------------------------

const FlipGraph::Vertex* FlipGraph::find(const std::string& key) const {
  for (const Vertex& v : vertices)
    if (v.key == key) return &v;
  return nullptr;
}

std::size_t FlipGraph::expanded_count() const {
  std::size_t c = 0;
  for (const Vertex& v : vertices)
    if (v.expanded) ++c;
  return c;
}

FlipGraph flip_graph_bfs(const LiftingOM& seed, const BfsBudget& budget,
                         const std::function<void(const nlohmann::json&)>& sink,
                         const FlipGraph* prior) {
  {
    ValidateOptions vo;
    vo.mode = ValidateMode::cocircuit_only;
    vo.uniform = UniformExpectation::required;
    const ValidationReport vr = validate(seed.matroid, vo);
    if (!vr.ok)
      throw verification_error("flip-graph seed failed validation: " +
                               vr.summary());
    seed.check_lifting();
  }
  const GroundPtr& ground = seed.matroid.ground();

  FlipGraph g;
  g.seed_key = canonical_key(seed);

  std::map<std::string, std::size_t> vid;
  std::set<std::pair<std::string, std::string>> seen;
  std::deque<std::pair<std::string, LiftingOM>> frontier;
  long long expanded = 0;

  if (prior) {
    if (prior->seed_key != g.seed_key)
      throw usage_error("resume graph was explored from a different seed");
    g.vertices = prior->vertices;
    g.edges = prior->edges;
    for (const FlipGraph::Edge& e : g.edges) seen.insert({e.a, e.b});
    // replay the recorded parent flips to recover every vertex's cocircuits
    std::map<std::string, LiftingOM> replay;
    replay.emplace(g.seed_key, seed);
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
      const FlipGraph::Vertex& v = g.vertices[i];
      if (!vid.emplace(v.key, i).second)
        throw usage_error("resume graph lists a vertex twice: " + v.key);
      if (v.key == g.seed_key) continue;
      auto pit = replay.find(v.parent);
      if (pit == replay.end())
        throw usage_error("resume graph lists vertex " + v.key +
                          " before its parent");
      LiftingOM child = apply_flip(
          pit->second, FlipSupport::from_tokens(ground, v.parent_support));
      if (canonical_key(child) != v.key)
        throw verification_error(
            "resume graph does not replay to its recorded key " + v.key);
      replay.emplace(v.key, std::move(child));
    }
    if (!vid.count(g.seed_key))
      throw usage_error("resume graph is missing its seed vertex");
    for (const FlipGraph::Vertex& v : g.vertices) {
      if (v.expanded)
        ++expanded;
      else
        frontier.emplace_back(v.key, replay.at(v.key));
    }
  } else {
    vid.emplace(g.seed_key, 0);
    g.vertices.push_back({g.seed_key, "", {}, {}, false});
    frontier.emplace_back(g.seed_key, seed);
  }

  auto vertex_record = [&g](const FlipGraph::Vertex& v) {
    nlohmann::json ref;
    if (v.key == g.seed_key)
      ref = nlohmann::json{{"seed", true}};
    else
      ref = nlohmann::json{{"parent", v.parent}, {"support", v.parent_support}};
    return nlohmann::json{
        {"key", v.key}, {"cocircuits-ref", ref}, {"supports", v.supports}};
  };
  auto edge_record = [](const FlipGraph::Edge& e) {
    return nlohmann::json{{"a", e.a}, {"b", e.b}, {"support", e.support}};
  };

  const auto t0 = std::chrono::steady_clock::now();
  auto seconds = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  while (!frontier.empty()) {
    if ((budget.max_vertices >= 0 && expanded >= budget.max_vertices) ||
        (budget.max_edges >= 0 &&
         static_cast<long long>(g.edges.size()) >= budget.max_edges) ||
        (budget.max_seconds >= 0 && seconds() >= budget.max_seconds)) {
      g.complete = false;
      return g;
    }
    std::pair<std::string, LiftingOM> cur = std::move(frontier.front());
    frontier.pop_front();
    const std::string& key = cur.first;
    const LiftingOM& lift = cur.second;

    const std::vector<FlipWitness> witnesses = find_flip_supports(lift);
    {
      FlipGraph::Vertex& v = g.vertices[vid.at(key)];
      v.expanded = true;
      v.supports.clear();
      v.supports.reserve(witnesses.size());
      for (const FlipWitness& w : witnesses)
        v.supports.push_back(w.support.tokens(ground));
      ++expanded;
      if (sink) sink(vertex_record(v));
    }

    for (const FlipWitness& w : witnesses) {
      LiftingOM nb = apply_flip(lift, w.support);
      std::string nkey = canonical_key(nb);
      const std::string& lo = std::min(key, nkey);
      const std::string& hi = std::max(key, nkey);
      if (seen.insert({lo, hi}).second) {
        g.edges.push_back({lo, hi, w.support.tokens(ground)});
        if (sink) sink(edge_record(g.edges.back()));
      }
      if (!vid.count(nkey)) {
        vid.emplace(nkey, g.vertices.size());
        g.vertices.push_back(
            {nkey, key, w.support.tokens(ground), {}, false});
        frontier.emplace_back(std::move(nkey), std::move(nb));
      }
    }
  }
  return g;
}

FlipGraph load_flip_graph_jsonl(std::istream& in) {
  FlipGraph g;
  std::map<std::string, std::size_t> vid;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw usage_error("graph stream line " + std::to_string(lineno) +
                        " is not valid JSON: " + e.what());
    }
    try {
      if (j.contains("key")) {
        FlipGraph::Vertex v;
        v.key = j.at("key").get<std::string>();
        const nlohmann::json& ref = j.at("cocircuits-ref");
        if (ref.contains("seed")) {
          if (!g.seed_key.empty() && g.seed_key != v.key)
            throw usage_error("graph stream has two seed records");
          g.seed_key = v.key;
        } else {
          v.parent = ref.at("parent").get<std::string>();
          v.parent_support = ref.at("support").get<std::vector<std::string>>();
        }
        v.supports =
            j.at("supports").get<std::vector<std::vector<std::string>>>();
        v.expanded = true;
        auto it = vid.find(v.key);
        if (it == vid.end()) {
          vid.emplace(v.key, g.vertices.size());
          g.vertices.push_back(std::move(v));
        } else {
          FlipGraph::Vertex& old = g.vertices[it->second];
          old.supports = std::move(v.supports);
          old.expanded = true;
          if (!v.parent.empty()) {
            old.parent = v.parent;
            old.parent_support = v.parent_support;
          }
        }
      } else if (j.contains("a")) {
        FlipGraph::Edge e;
        e.a = j.at("a").get<std::string>();
        e.b = j.at("b").get<std::string>();
        e.support = j.at("support").get<std::vector<std::string>>();
        const bool ka = vid.count(e.a) > 0;
        const bool kb = vid.count(e.b) > 0;
        if (!ka && !kb)
          throw usage_error("graph stream edge references unknown vertices");
        if (!ka || !kb) {
          // discovered but never expanded: reachable from the known endpoint
          // by this edge's flip
          const std::string& known = ka ? e.a : e.b;
          const std::string& unknown = ka ? e.b : e.a;
          vid.emplace(unknown, g.vertices.size());
          g.vertices.push_back({unknown, known, e.support, {}, false});
        }
        g.edges.push_back(std::move(e));
      } else {
        throw usage_error("graph stream line " + std::to_string(lineno) +
                          " is neither a vertex nor an edge record");
      }
    } catch (const nlohmann::json::exception& e) {
      throw usage_error("graph stream line " + std::to_string(lineno) +
                        " is malformed: " + e.what());
    }
  }
  if (g.seed_key.empty())
    throw usage_error("graph stream has no seed record");
  g.complete = true;
  for (const FlipGraph::Vertex& v : g.vertices)
    if (!v.expanded) {
      g.complete = false;
      break;
    }
  return g;
}

}  // namespace omw
