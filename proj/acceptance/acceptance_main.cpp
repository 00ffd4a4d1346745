// Acceptance gate: ten timed end-to-end checks over the whole workbench, one
// verdict line each on stdout.  Diagnostics for failed checks go to stderr,
// and any failure makes the process exit nonzero.
//
// The checks deliberately recompute expectations from scratch (brute-force
// direction enumeration, hand-coded sign patterns, independent breadth-first
// search) instead of trusting the library paths they exercise.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "omw/construction.hpp"
#include "omw/core_ops.hpp"
#include "omw/errors.hpp"
#include "omw/exactq.hpp"
#include "omw/flips.hpp"
#include "omw/gdagger.hpp"
#include "omw/geometry.hpp"
#include "omw/group_action.hpp"
#include "omw/instance.hpp"
#include "omw/lattice.hpp"
#include "omw/linalg.hpp"
#include "omw/matroid.hpp"
#include "omw/prng.hpp"
#include "omw/probability.hpp"

using namespace omw;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Outcome bookkeeping
// ---------------------------------------------------------------------------

struct Outcome {
  std::vector<std::string> problems;
  std::string note;

  bool pass() const { return problems.empty(); }
  void fail(const std::string& msg) { problems.push_back(msg); }
  std::string detail() const {
    if (pass()) return note;
    std::string d = problems.front();
    if (problems.size() > 1)
      d += " (+" + std::to_string(problems.size() - 1) + " more)";
    return d;
  }
};

// Instances found by the membership sampling, reused by the closure check.
std::vector<ConstructionInstance> g_member_instances;

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

std::string pair_token(int p, int q) {
  return "(" + std::to_string(std::min(p, q)) + "," +
         std::to_string(std::max(p, q)) + ")";
}

bool has_positive_cocircuit(
    const LiftingOM& m, const std::vector<std::string>& zeros,
    const std::vector<std::pair<std::string, Sign>>& constraints) {
  const int f = m.lift_index();
  const GroundPtr g = m.matroid.ground();
  for (int s = 0; s < m.matroid.signed_count(); ++s) {
    const SignVector v = m.matroid.signed_cocircuit(s);
    if (v.at(f) != Sign::plus) continue;
    bool ok = true;
    for (const std::string& t : zeros)
      if (v.at(g->index_of(t)) != Sign::zero) ok = false;
    for (const auto& [t, want] : constraints)
      if (v.at(g->index_of(t)) != want) ok = false;
    if (ok) return true;
  }
  return false;
}

RationalVectorConfig random_config(int n, int d, SplitMix64& rng) {
  std::vector<std::string> tokens;
  for (int i = 0; i < n; ++i) tokens.push_back("p" + std::to_string(i));
  RationalVectorConfig cfg;
  cfg.ground = make_ground(tokens);
  for (int i = 0; i < n; ++i) {
    QVec v;
    for (int j = 0; j < d; ++j)
      v.emplace_back(rng.range(-4, 4), rng.range(1, 3));
    cfg.vectors.push_back(std::move(v));
  }
  return cfg;
}

// Advances a strictly increasing k-subset of [0, n); returns false after the
// last one.
bool next_combination(std::vector<int>& t, int n) {
  const int k = static_cast<int>(t.size());
  int pos = k - 1;
  while (pos >= 0 && t[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
  if (pos < 0) return false;
  ++t[static_cast<std::size_t>(pos)];
  for (int j = pos + 1; j < k; ++j)
    t[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

// Cocircuits of a vector configuration by brute-force direction enumeration:
// every (rank−1)-subset spanning a hyperplane of the span contributes the
// sign vector of a normal direction inside the span.
std::set<std::string> brute_cocircuit_strings(const RationalVectorConfig& cfg,
                                              int* rank_out) {
  const int n = static_cast<int>(cfg.vectors.size());
  QMat rows;
  for (const QVec& v : cfg.vectors) rows.push_back(v);
  const int r = q_rank(rows);
  *rank_out = r;
  std::set<std::string> out;
  if (r == 0) return out;
  // Directions inside the span are exactly those orthogonal to the span's
  // orthogonal complement.
  const std::vector<QVec> comp = q_kernel(rows);

  std::vector<int> t(static_cast<std::size_t>(r - 1));
  for (int i = 0; i < r - 1; ++i) t[static_cast<std::size_t>(i)] = i;
  while (true) {
    QMat sub;
    for (const int e : t) sub.push_back(cfg.vectors[static_cast<std::size_t>(e)]);
    if (q_rank(sub) == r - 1) {
      QMat sys = sub;
      for (const QVec& w : comp) sys.push_back(w);
      const std::vector<QVec> ker = q_kernel(sys);
      if (ker.size() == 1) {
        const QVec& y = ker.front();
        std::string s(static_cast<std::size_t>(n), '0');
        for (int i = 0; i < n; ++i) {
          mpq_class dot = 0;
          for (std::size_t j = 0; j < y.size(); ++j)
            dot += cfg.vectors[static_cast<std::size_t>(i)][j] * y[j];
          const int sg = sgn(dot);
          s[static_cast<std::size_t>(i)] = sg > 0 ? '+' : (sg < 0 ? '-' : '0');
        }
        // Canonical representative: first nonzero entry positive.
        for (char& c : s) {
          if (c == '0') continue;
          if (c == '-')
            for (char& d : s) d = (d == '+') ? '-' : (d == '-' ? '+' : d);
          break;
        }
        if (s.find_first_not_of('0') != std::string::npos) out.insert(s);
      }
    }
    if (t.empty() || !next_combination(t, n)) break;
  }
  return out;
}

// The uniqueness property behind flip blocking: no signed cocircuit other
// than the four witnesses matches their support signs (zero allowed) at all
// four support elements.
bool uniqueness_holds(const LiftingOM& m, const FlipWitness& w) {
  for (int s = 0; s < m.matroid.signed_count(); ++s) {
    const SignVector y = m.matroid.signed_cocircuit(s);
    bool is_witness = false;
    for (const SignVector& x : w.cocircuits)
      if (y == x) is_witness = true;
    if (is_witness) continue;
    bool conforms = true;
    for (int i = 0; i < 4; ++i) {
      const int e = w.support.elements[static_cast<std::size_t>(i)];
      const Sign want = w.cocircuits[static_cast<std::size_t>(i)].at(e);
      if (y.at(e) != want && y.at(e) != Sign::zero) conforms = false;
    }
    if (conforms) return false;
  }
  return true;
}

// All four per-flip properties: involution, pair-count preservation, the
// degenerate midpoint sitting weakly above both endpoints, and uniqueness of
// the witness cocircuits.  Returns the flipped lifting for walk continuation.
LiftingOM checked_flip(const LiftingOM& m, const FlipWitness& w, Outcome& out,
                       const std::string& where) {
  if (!uniqueness_holds(m, w)) out.fail(where + ": uniqueness violated");
  const LiftingOM flipped = apply_flip(m, w.support);
  if (flipped.matroid.pair_count() != m.matroid.pair_count())
    out.fail(where + ": cocircuit count changed");
  if (canonical_key(apply_flip(flipped, w.support)) != canonical_key(m))
    out.fail(where + ": flip is not an involution");
  const OrientedMatroid mid = flip_midpoint(m, w.support);
  if (!weak_map_leq(m.matroid, mid) || !weak_map_leq(flipped.matroid, mid))
    out.fail(where + ": midpoint not weakly above the endpoints");
  if (weak_map_leq(mid, m.matroid))
    out.fail(where + ": midpoint weakly below an endpoint");
  return flipped;
}

// ---------------------------------------------------------------------------
// 1. Core sign calculus
// ---------------------------------------------------------------------------

Outcome criterion_core_calculus() {
  Outcome out;
  SplitMix64 rng(20260801);
  int configs = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int n = static_cast<int>(rng.range(2, 8));
    const int d = static_cast<int>(rng.range(1, 3));
    const RationalVectorConfig cfg = random_config(n, d, rng);
    const OrientedMatroid m = om_of_config(cfg);

    int brute_rank = 0;
    const std::set<std::string> expect = brute_cocircuit_strings(cfg, &brute_rank);
    std::set<std::string> got;
    for (const SignVector& v : m.cocircuits()) got.insert(v.to_string());
    if (m.rank() != brute_rank)
      out.fail("configuration " + std::to_string(trial) + ": rank mismatch");
    if (got != expect)
      out.fail("configuration " + std::to_string(trial) +
               ": cocircuits differ from direction enumeration");

    if (!(dual(dual(m)) == m))
      out.fail("configuration " + std::to_string(trial) +
               ": double dual differs");
    ValidateOptions vo;
    vo.mode = ValidateMode::full;
    const ValidationReport vr = validate(m, vo);
    if (!vr.ok)
      out.fail("configuration " + std::to_string(trial) +
               ": axiom validation failed: " + vr.summary());
    ++configs;
  }
  out.note = std::to_string(configs) +
             " random configurations: direction-enumeration agreement, "
             "double dual, full axiom validation";
  return out;
}

// ---------------------------------------------------------------------------
// 2. Shifted difference-direction models
// ---------------------------------------------------------------------------

Outcome criterion_shifted_models() {
  Outcome out;
  const OrientedMatroid m0 = om_of_config(braid_config());
  std::set<std::string> keys;
  for (const CyclicTriple& gamma : CyclicTriple::all_classes()) {
    const std::string tag = "model " + gamma.to_string();
    const AffineArrangement model = braid_model(gamma);
    if (model.vertex_concurrence_max() != 3)
      out.fail(tag + ": vertex concurrence is not 3");
    const LiftingOM lift = lifting_from_affine(model, m0);
    lift.check_lifting();
    if (!(lift.base == m0)) out.fail(tag + ": base is not the central picture");
    ValidateOptions vo;
    vo.mode = ValidateMode::full;
    if (!validate(lift.matroid, vo).ok) out.fail(tag + ": validation failed");
    keys.insert(canonical_key(lift));

    const auto [i, j, k] = gamma.rep();
    const int l = gamma.missing();
    // Triangle-corner family: for each distinguished axis p, three cocircuits
    // each vanishing on two triangle walls and the (p,l) wall, with the
    // stated sign on the remaining triangle wall.
    for (const int p : {i, j, k}) {
      if (!has_positive_cocircuit(
              lift, {pair_token(k, i), pair_token(i, j), pair_token(p, l)},
              {{pair_token(j, k), alpha_sign(k, j)}}) ||
          !has_positive_cocircuit(
              lift, {pair_token(j, k), pair_token(i, j), pair_token(p, l)},
              {{pair_token(k, i), alpha_sign(i, k)}}) ||
          !has_positive_cocircuit(
              lift, {pair_token(j, k), pair_token(k, i), pair_token(p, l)},
              {{pair_token(i, j), alpha_sign(j, i)}}))
        out.fail(tag + ": corner cocircuit missing for axis " +
                 std::to_string(p));
    }
    // The central vertex: zero on the three through-l walls, the stated signs
    // on the triangle walls.
    if (!has_positive_cocircuit(
            lift, {pair_token(i, l), pair_token(j, l), pair_token(k, l)},
            {{pair_token(j, k), alpha_sign(k, j)},
             {pair_token(k, i), alpha_sign(i, k)},
             {pair_token(i, j), alpha_sign(j, i)}}))
      out.fail(tag + ": central vertex cocircuit missing");
  }
  if (keys.size() != 8) out.fail("the eight models are not pairwise distinct");
  out.note = "8 models: lifting checks, 9 corner + 1 vertex cocircuits each, "
             "concurrence 3";
  return out;
}

// ---------------------------------------------------------------------------
// 3. Group action
// ---------------------------------------------------------------------------

Outcome criterion_group_action() {
  Outcome out;
  const GroupCheckReport rep = group_properties_check();
  for (const std::string& f : rep.failures) out.fail(f);

  // Independent exhaustion on top of the library's own checker.
  const std::vector<CyclicTriple>& all = CyclicTriple::all_classes();
  if (all.size() != 8) out.fail("class count is not 8");
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) {
      if (a == b) continue;
      for (const CyclicTriple& t : all)
        if (pi_action(a, b, pi_action(a, b, t)) != t)
          out.fail("generator (" + std::to_string(a) + "," +
                   std::to_string(b) + ") is not an involution");
    }
  for (int a = 1; a <= 4; ++a)
    for (int b = a + 1; b <= 4; ++b)
      for (int c = 1; c <= 4; ++c)
        for (int d = c + 1; d <= 4; ++d)
          for (const CyclicTriple& t : all)
            if (pi_action(a, b, pi_action(c, d, t)) !=
                pi_action(c, d, pi_action(a, b, t)))
              out.fail("generators do not commute");

  // Orbit of (123) under all generators covers every class.
  std::set<int> orbit{CyclicTriple(1, 2, 3).class_index()};
  std::vector<CyclicTriple> frontier{CyclicTriple(1, 2, 3)};
  while (!frontier.empty()) {
    const CyclicTriple t = frontier.back();
    frontier.pop_back();
    for (int a = 1; a <= 4; ++a)
      for (int b = a + 1; b <= 4; ++b) {
        const CyclicTriple u = pi_action(a, b, t);
        if (orbit.insert(u.class_index()).second) frontier.push_back(u);
      }
  }
  if (orbit.size() != 8) out.fail("orbit of (123) does not cover the classes");

  // Each oriented triple's stabilizer set: size 4, orientation-consistent,
  // closed under the generators through the missing axis.
  for (const CyclicTriple& target : all) {
    const std::vector<CyclicTriple> refs = compatible_references(target);
    if (refs.size() != 4)
      out.fail("stabilizer set of " + target.to_string() + " is not size 4");
    const int l = target.missing();
    for (const CyclicTriple& c : refs) {
      if (orientation_of(c, target.rep()) != target)
        out.fail("stabilizer member misorients " + target.to_string());
      for (int p = 1; p <= 4; ++p) {
        if (p == l) continue;
        const CyclicTriple moved = pi_action(p, l, c);
        if (std::find(refs.begin(), refs.end(), moved) == refs.end())
          out.fail("stabilizer set of " + target.to_string() +
                   " is not closed under the through-axis generators");
      }
    }
  }
  out.note = "12 involutions, commutativity, transitive orbit, 8 stabilizer "
             "sets of size 4";
  return out;
}

// ---------------------------------------------------------------------------
// 4. Event probabilities
// ---------------------------------------------------------------------------

Outcome criterion_probabilities() {
  Outcome out;
  const mpq_class bound(1, 864);
  mpq_class least(1);
  int events = 0;
  for (const CyclicTriple& target : CyclicTriple::all_classes()) {
    for (unsigned mask = 0; mask < 8; ++mask) {
      std::array<Sign, 3> betas{};
      for (int m = 0; m < 3; ++m)
        betas[static_cast<std::size_t>(m)] =
            (mask >> m) & 1u ? Sign::plus : Sign::minus;
      const mpq_class p = prob_event_enumerate(target, betas);
      if (p < bound)
        out.fail("event " + target.to_string() + "/mask " +
                 std::to_string(mask) + " has probability " + p.get_str());
      least = std::min(least, p);
      ++events;
    }
  }
  if (events != 64) out.fail("event count is not 64");

  const MonteCarloReport mc = montecarlo_omega(100000, 1, 424242);
  if (!mc.frequencies_within_four_sigma)
    out.fail("Monte Carlo frequency off by " +
             std::to_string(mc.max_deviation_sigmas) + " sigmas");
  std::ostringstream note;
  note << "64 events >= 1/864 (least " << least.get_str() << "), 10^5 trials, "
       << "max deviation " << mc.max_deviation_sigmas << " sigmas";
  out.note = note.str();
  return out;
}

// ---------------------------------------------------------------------------
// 5. Density threshold
// ---------------------------------------------------------------------------

Outcome criterion_threshold() {
  Outcome out;
  const long long t = min_N_threshold();
  if (t < 10000 || t > 1000000)
    out.fail("threshold " + std::to_string(t) + " outside [10^4, 10^6]");
  if (!threshold_bound_below_one(t))
    out.fail("bound not below one at the returned scale");
  if (threshold_bound_below_one(t - 1))
    out.fail("bound already below one at the predecessor");
  out.note = "least scale " + std::to_string(t) +
             ", certified there and refuted at its predecessor";
  return out;
}

// ---------------------------------------------------------------------------
// 6. Entangled builds
// ---------------------------------------------------------------------------

Outcome criterion_builds() {
  Outcome out;
  int builds = 0;
  for (const int N : {1, 2, 3}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const std::string tag =
          "N=" + std::to_string(N) + " seed=" + std::to_string(seed);
      ConstructionInstance inst = sample_instance(N, seed);
      try {
        BuildReport rep;
        const LiftingOM m = build_with_recovery(inst, 16, &rep);
        if (!rep.ok()) out.fail(tag + ": build audit failed: " + rep.summary());

        ValidateOptions vo;
        vo.uniform = UniformExpectation::required;
        if (N == 1) {
          vo.mode = ValidateMode::cocircuit_only;  // every pair eliminated
        } else {
          vo.mode = ValidateMode::sampled;
          vo.sample_pairs = 100000;
          vo.seed = 97;
        }
        const ValidationReport vr = validate(m.matroid, vo);
        if (!vr.ok) out.fail(tag + ": validation failed: " + vr.summary());
        m.check_lifting();

        const PatternCheckReport pat = local_pattern_check(m, inst);
        if (!pat.ok)
          out.fail(tag + ": local pattern audit failed: " +
                   (pat.failures.empty() ? "" : pat.failures.front()));
        const BetaConsistencyReport bc = beta_consistency_check(m, inst);
        if (!bc.ok)
          out.fail(tag + ": far-sign consistency failed: " +
                   (bc.failures.empty() ? "" : bc.failures.front()));
        ++builds;
      } catch (const std::exception& e) {
        out.fail(tag + ": " + e.what());
      }
    }
  }
  out.note = std::to_string(builds) +
             " builds across scales 1-3, full audits clean";
  return out;
}

// ---------------------------------------------------------------------------
// 7. Membership sampling
// ---------------------------------------------------------------------------

Outcome criterion_membership() {
  Outcome out;
  g_member_instances.clear();
  constexpr int kBudget = 1000;
  constexpr int kPerScale = 142;  // 7 scales x 142 < 1000
  int draws = 0;
  std::vector<std::string> found_tags;
  std::ostringstream survey;
  for (int N = 2; N <= 8 && found_tags.size() < 3; ++N) {
    int nonempty_here = 0;
    int draws_here = 0;
    for (std::uint64_t s = 0;
         s < kPerScale && draws < kBudget && found_tags.size() < 3; ++s) {
      ConstructionInstance inst = sample_instance(N, 2000 + s);
      ++draws;
      ++draws_here;
      const std::vector<OmegaCertificate> omega = omega_set(inst);
      if (omega.empty()) continue;
      ++nonempty_here;
      const std::string tag = "N=" + std::to_string(N) +
                              " seed=" + std::to_string(2000 + s) +
                              " |special set|=" + std::to_string(omega.size());
      try {
        const LiftingOM m = build_with_recovery(inst, 16);
        const GDaggerReport rep = gdagger_check(m, inst);
        if (!rep.member) {
          out.fail(tag + ": membership check failed: " + rep.summary());
        } else if (rep.vacuous) {
          out.fail(tag + ": membership reported vacuous despite certificates");
        } else {
          g_member_instances.push_back(inst);
          found_tags.push_back(tag);
        }
      } catch (const std::exception& e) {
        out.fail(tag + ": " + e.what());
      }
    }
    survey << " N=" << N << ":" << draws_here << " draws/" << nonempty_here
           << " nonempty;";
  }
  if (found_tags.size() < 3)
    out.fail("only " + std::to_string(found_tags.size()) +
             " of 3 nonempty-special-set instances in " +
             std::to_string(draws) + " draws --" + survey.str());
  std::ostringstream note;
  note << found_tags.size() << " member instances in " << draws << " draws (";
  for (std::size_t i = 0; i < found_tags.size(); ++i)
    note << (i ? "; " : "") << found_tags[i];
  note << ")";
  out.note = note.str();
  return out;
}

// ---------------------------------------------------------------------------
// 8. Flip closure
// ---------------------------------------------------------------------------

Outcome criterion_closure() {
  Outcome out;
  if (g_member_instances.empty()) {
    out.fail("no member instances available from the membership sampling");
    return out;
  }
  std::size_t nodes_checked = 0;
  std::size_t blocking_checked = 0;
  int vacuous = 0;
  int deep_runs = 0;
  for (std::size_t i = 0; i < g_member_instances.size(); ++i) {
    const ConstructionInstance& inst = g_member_instances[i];
    const std::string tag =
        "instance " + std::to_string(i) + " (N=" + std::to_string(inst.N) + ")";
    BfsBudget budget;
    budget.max_seconds = 420;
    const ExperimentRecord rec = flip_closure_experiment(inst, 1, budget);
    nodes_checked += rec.nodes.size();
    blocking_checked += rec.blocking_checked;
    if (rec.hypotheses_hold) {
      if (!rec.closure_holds)
        out.fail(tag + ": a depth-1 flip neighbor fails membership");
    } else {
      ++vacuous;  // reported, not counted as a failure
    }
    if (!rec.complete) out.fail(tag + ": depth-1 scan tripped its budget");

    // Depth 2 where the budget plausibly allows it.
    if (inst.N <= 3 && rec.root_flip_count <= 24) {
      BfsBudget deep;
      deep.max_seconds = 300;
      deep.max_vertices = 80;
      const ExperimentRecord rec2 = flip_closure_experiment(inst, 2, deep);
      nodes_checked += rec2.nodes.size();
      blocking_checked += rec2.blocking_checked;
      if (rec2.hypotheses_hold && !rec2.closure_holds)
        out.fail(tag + ": a depth-2 flip neighbor fails membership");
      ++deep_runs;
    }
  }
  std::ostringstream note;
  note << g_member_instances.size() << " instances, " << nodes_checked
       << " vertices checked (" << deep_runs << " depth-2 runs), "
       << blocking_checked << " supports blocking-scanned, " << vacuous
       << " vacuous";
  out.note = note.str();
  return out;
}

// ---------------------------------------------------------------------------
// 9. Flip mechanics
// ---------------------------------------------------------------------------

Outcome criterion_flip_mechanics() {
  Outcome out;

  // Part one: independently re-explore the scale-zero component, checking
  // all four flip properties on every directed edge, then compare against
  // the library's breadth-first search.
  ConstructionInstance inst0 = sample_instance(0, 6);
  const LiftingOM seed = build_with_recovery(inst0);
  std::map<std::string, LiftingOM> by_key;
  std::vector<std::string> queue;
  const std::string seed_key = canonical_key(seed);
  by_key.emplace(seed_key, seed);
  queue.push_back(seed_key);
  std::set<std::pair<std::string, std::string>> my_edges;
  std::size_t directed_flips = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const LiftingOM m = by_key.at(queue[head]);
    const std::string key = queue[head];
    for (const FlipWitness& w : find_flip_supports(m)) {
      const LiftingOM flipped = checked_flip(m, w, out, "component edge");
      ++directed_flips;
      const std::string other = canonical_key(flipped);
      my_edges.insert({std::min(key, other), std::max(key, other)});
      if (!by_key.count(other)) {
        by_key.emplace(other, flipped);
        queue.push_back(other);
      }
    }
  }
  const FlipGraph g = flip_graph_bfs(seed);
  if (!g.complete) out.fail("library search reported an unfinished component");
  std::set<std::string> lib_keys;
  for (const FlipGraph::Vertex& v : g.vertices) lib_keys.insert(v.key);
  std::set<std::string> mine;
  for (const auto& [k, m] : by_key) mine.insert(k);
  if (mine != lib_keys)
    out.fail("library component vertices differ from the re-exploration");
  std::set<std::pair<std::string, std::string>> lib_edges;
  for (const FlipGraph::Edge& e : g.edges) lib_edges.insert({e.a, e.b});
  if (my_edges != lib_edges)
    out.fail("library component edges differ from the re-exploration");

  // Part two: seeded random walks on larger instances, every step fully
  // property-checked.
  std::size_t walk_flips = 0;
  SplitMix64 rng(777);
  const std::vector<std::pair<int, std::uint64_t>> walks{
      {1, 9}, {1, 10}, {2, 3}};
  const std::vector<int> steps{225, 225, 50};
  for (std::size_t wk = 0; wk < walks.size(); ++wk) {
    ConstructionInstance inst = sample_instance(walks[wk].first, walks[wk].second);
    std::optional<LiftingOM> cur(build_with_recovery(inst));
    for (int step = 0; step < steps[wk]; ++step) {
      const std::vector<FlipWitness> witnesses = find_flip_supports(*cur);
      if (witnesses.empty()) {
        out.fail("walk " + std::to_string(wk) + " ran out of flip supports");
        break;
      }
      const FlipWitness& w =
          witnesses[static_cast<std::size_t>(rng.below(witnesses.size()))];
      cur = checked_flip(*cur, w,  out,
                         "walk " + std::to_string(wk) + " step " +
                             std::to_string(step));
      ++walk_flips;
    }
  }
  if (walk_flips < 500)
    out.fail("only " + std::to_string(walk_flips) + " random flips checked");
  std::ostringstream note;
  note << "component of " << by_key.size() << " vertices re-explored ("
       << directed_flips << " directed flips), " << walk_flips
       << " random walk flips, all properties held";
  out.note = note.str();
  return out;
}

// ---------------------------------------------------------------------------
// 10. Reproducibility
// ---------------------------------------------------------------------------

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome criterion_reproducibility() {
  Outcome out;
  const fs::path dir =
      fs::temp_directory_path() / "omw-acceptance-reproducibility";
  fs::remove_all(dir);
  fs::create_directories(dir);

  // Independent double sampling.
  ConstructionInstance a = sample_instance(1, 7);
  ConstructionInstance b = sample_instance(1, 7);
  if (a.to_json().dump() != b.to_json().dump())
    out.fail("sampling the same scale and seed twice differs");

  // Loss-free file round trip.
  const fs::path ipath = dir / "instance.json";
  save_instance(a, ipath.string());
  ConstructionInstance loaded = load_instance(ipath.string());
  if (loaded.to_json().dump() != a.to_json().dump())
    out.fail("instance file round trip lost information");
  if (ConstructionInstance::from_json(a.to_json()).to_json() != a.to_json())
    out.fail("instance JSON round trip lost information");
  const fs::path ipath2 = dir / "instance2.json";
  save_instance(loaded, ipath2.string());
  if (file_bytes(ipath) != file_bytes(ipath2))
    out.fail("instance files differ across two writes");

  // Identical instances produce byte-identical matroid files and verdicts.
  const LiftingOM m1 = build_with_recovery(a);
  const LiftingOM m2 = build_with_recovery(loaded);
  if (canonical_serialization(m1.matroid) != canonical_serialization(m2.matroid))
    out.fail("two builds from the same instance serialize differently");
  const fs::path mpath1 = dir / "m1.json";
  const fs::path mpath2 = dir / "m2.json";
  save_matroid(m1.matroid, mpath1.string());
  save_matroid(m2.matroid, mpath2.string());
  if (file_bytes(mpath1) != file_bytes(mpath2))
    out.fail("matroid files differ across two builds");

  ValidateOptions vo;
  vo.uniform = UniformExpectation::required;
  auto verdict = [&](const OrientedMatroid& m) {
    const ValidationReport vr = validate(m, vo);
    return nlohmann::json{{"ok", vr.ok},
                          {"pairs-checked", vr.pairs_checked},
                          {"summary", vr.summary()}}
        .dump();
  };
  if (verdict(m1.matroid) != verdict(m2.matroid))
    out.fail("verdicts differ across two runs");

  fs::remove_all(dir);
  out.note = "instance, matroid and verdict bytes stable across independent "
             "runs; file round trips loss-free";
  return out;
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    Outcome (*fn)();
  };
  const std::vector<Entry> entries{
      {"core sign calculus", criterion_core_calculus},
      {"shifted models", criterion_shifted_models},
      {"group action", criterion_group_action},
      {"event probabilities", criterion_probabilities},
      {"density threshold", criterion_threshold},
      {"entangled builds", criterion_builds},
      {"membership sampling", criterion_membership},
      {"flip closure", criterion_closure},
      {"flip mechanics", criterion_flip_mechanics},
      {"reproducibility", criterion_reproducibility},
  };

  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = entries[i].fn();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("criterion %2zu (%s): %s — %s (%.1fs)\n", i + 1,
                entries[i].label, out.pass() ? "PASS" : "FAIL",
                out.detail().c_str(), secs);
    std::fflush(stdout);
    if (!out.pass()) {
      ++failures;
      const std::size_t show = std::min<std::size_t>(out.problems.size(), 5);
      for (std::size_t p = 0; p < show; ++p)
        std::fprintf(stderr, "  problem: %s\n", out.problems[p].c_str());
      if (out.problems.size() > show)
        std::fprintf(stderr, "  ... %zu further problems\n",
                     out.problems.size() - show);
    }
  }
  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", entries.size());
    return 0;
  }
  std::printf("acceptance: %d of %zu criteria failed\n", failures,
              entries.size());
  return 1;
}
