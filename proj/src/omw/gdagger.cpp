#include "omw/gdagger.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "omw/core_ops.hpp"
#include "omw/errors.hpp"
#include "omw/prng.hpp"

namespace omw {

namespace {

Sign sign_product(Sign a, Sign b) {
  return static_cast<Sign>(static_cast<int>(a) * static_cast<int>(b));
}

std::string instance_fingerprint(const ConstructionInstance& inst) {
  const std::string s = inst.to_json().dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  for (int shift = 60; shift >= 0; shift -= 4) os << ((h >> shift) & 0xF);
  return os.str();
}

// Distinct difference values y_a − y_b over the special set, sorted, per
// ordered axis pair (1-based indices).
using DiffTable = std::array<std::array<std::vector<long long>, 5>, 5>;

DiffTable diff_table(const std::vector<OmegaCertificate>& omega) {
  DiffTable t{};
  for (const OmegaCertificate& c : omega)
    for (int a = 1; a <= 4; ++a)
      for (int b = 1; b <= 4; ++b)
        if (a != b)
          t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].push_back(
              c.x.diff(a, b));
  for (int a = 1; a <= 4; ++a) {
    for (int b = 1; b <= 4; ++b) {
      auto& v = t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }
  return t;
}

void require_instance_lifting(const LiftingOM& m,
                              const ConstructionInstance& inst) {
  const GroundPtr ground = inst.ground();
  require_same_ground(m.matroid.ground(), ground);
  if (m.matroid.rank() != 4)
    throw usage_error("membership is defined for rank-4 liftings, got rank " +
                      std::to_string(m.matroid.rank()));
  const OrientedMatroid expect = om_of_config(perturbed_config(inst));
  if (!(m.base == expect))
    throw usage_error(
        "the lifting's picture at infinity is not this instance's");
  m.check_lifting();
  if (!profile(m.matroid).uniform)
    throw usage_error("membership is defined for uniform liftings");
}

}  // namespace

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

std::string GDaggerReport::summary() const {
  std::ostringstream os;
  os << (member ? "member" : "NON-MEMBER");
  if (vacuous) os << " (vacuous: special set empty)";
  if (small_n) os << " [N < 2: thresholds trivial]";
  os << "; points " << omega_points << "; checks a/b/c " << checks_a << "/"
     << checks_b << "/" << checks_c << "; vacuous-c slots " << vacuous_c;
  for (const std::string& f : failures) os << "\n  " << f;
  return os.str();
}

GDaggerReport gdagger_check(const LiftingOM& m,
                            const ConstructionInstance& inst) {
  GDaggerReport rep;
  const int N = inst.N;
  rep.small_n = N < 2;
  require_instance_lifting(m, inst);

  const std::vector<OmegaCertificate> omega = omega_set(inst);
  rep.omega_points = omega.size();
  if (omega.empty()) {
    rep.vacuous = true;
    return rep;
  }

  const int f = m.lift_index();
  const ZeroSetIndex zx(m.matroid);
  const std::vector<SignVector>& reps = m.matroid.cocircuits();
  const DiffTable values = diff_table(omega);

  struct Local {
    std::size_t a = 0, b = 0, c = 0, vc = 0;
    std::vector<std::string> fails;
  };
  std::vector<Local> locals(omega.size());
  const long long total = static_cast<long long>(omega.size());

#pragma omp parallel
  {
    std::vector<int> scratch(3);
#pragma omp for schedule(dynamic)
    for (long long oi = 0; oi < total; ++oi) {
      Local& L = locals[static_cast<std::size_t>(oi)];
      const OmegaCertificate& cert = omega[static_cast<std::size_t>(oi)];
      const LatticePoint& x = cert.x;
      const auto rep3 = cert.gamma.rep();
      const int l = cert.gamma.missing();

      auto fail = [&L](std::string s) {
        if (L.fails.size() < 16) L.fails.push_back(std::move(s));
      };
      auto oriented = [&](int za, int zb,
                          int zc) -> std::optional<SignVector> {
        scratch[0] = za;
        scratch[1] = zb;
        scratch[2] = zc;
        std::sort(scratch.begin(), scratch.end());
        const int idx = zx.pair_with_zero_set(scratch);
        if (idx < 0) return std::nullopt;
        SignVector v = reps[static_cast<std::size_t>(idx)];
        if (v.at(f) == Sign::zero) return std::nullopt;
        if (v.at(f) == Sign::minus) v = -v;
        return v;
      };
      auto qualifying_begin = [&values](int a, int b, long long lo) {
        const auto& v =
            values[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        return std::lower_bound(v.begin(), v.end(), lo);
      };
      auto qualifying_end = [&values](int a, int b) {
        return values[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
            .end();
      };

      // (b): the blocking cocircuit, once per point (the condition set is
      // invariant under rotating the writing)
      {
        const int i = rep3[0], j = rep3[1], k = rep3[2];
        const auto X = oriented(element_index(N, i, l, x.diff(i, l)),
                                element_index(N, j, l, x.diff(j, l)),
                                element_index(N, k, l, x.diff(k, l)));
        if (!X) {
          fail("(b) blocking cocircuit missing at " + x.to_string());
        } else {
          const std::array<std::array<int, 2>, 3> clause{
              std::array<int, 2>{j, k}, std::array<int, 2>{k, i},
              std::array<int, 2>{i, j}};
          const std::array<Sign, 3> want{alpha_sign(k, j), alpha_sign(i, k),
                                         alpha_sign(j, i)};
          for (int ci = 0; ci < 3; ++ci) {
            const int a = clause[static_cast<std::size_t>(ci)][0];
            const int b = clause[static_cast<std::size_t>(ci)][1];
            for (auto it = qualifying_begin(a, b, x.diff(a, b));
                 it != qualifying_end(a, b); ++it) {
              ++L.b;
              if (X->at(element_index(N, a, b, *it)) !=
                  want[static_cast<std::size_t>(ci)]) {
                fail("(b) sign failure at " + x.to_string() + " wall " +
                     element_token(a, b, *it));
                break;
              }
            }
          }
        }
      }

      for (const auto& rot : cert.gamma.rotations()) {
        const int i = rot[0], j = rot[1], k = rot[2];
        const int e_ki = element_index(N, k, i, x.diff(k, i));
        const int e_ij = element_index(N, i, j, x.diff(i, j));
        const auto d_begin = qualifying_begin(j, k, x.diff(j, k));
        const auto d_end = qualifying_end(j, k);

        // (a): the three-cocircuit family per distinguished axis
        for (const int p : rot) {
          const int e_pl = element_index(N, p, l, x.diff(p, l));
          const auto X1 = oriented(e_ki, e_ij, e_pl);
          if (!X1) {
            fail("(a) first cocircuit missing at " + x.to_string() +
                 " axis " + std::to_string(p));
          } else {
            for (auto it = d_begin; it != d_end; ++it) {
              if (X1->at(element_index(N, j, k, *it)) != alpha_sign(k, j)) {
                fail("(a) first-cocircuit sign failure at " + x.to_string() +
                     " axis " + std::to_string(p) + " wall " +
                     element_token(j, k, *it));
                break;
              }
            }
          }
          for (auto it = d_begin; it != d_end; ++it) {
            ++L.a;
            const int e_jk = element_index(N, j, k, *it);
            const auto X2 = oriented(e_jk, e_ij, e_pl);
            if (!X2 || X2->at(e_ki) != alpha_sign(i, k))
              fail("(a) second-cocircuit failure at " + x.to_string() +
                   " axis " + std::to_string(p) + " offset " +
                   std::to_string(*it));
            const auto X3 = oriented(e_jk, e_ki, e_pl);
            if (!X3 || X3->at(e_ij) != alpha_sign(j, i))
              fail("(a) third-cocircuit failure at " + x.to_string() +
                   " axis " + std::to_string(p) + " offset " +
                   std::to_string(*it));
          }
        }

        // (c): onward-set condition for this rotation's distinguished axis
        {
          int pos = 0;
          while (rep3[static_cast<std::size_t>(pos)] != i) ++pos;
          const auto& S = cert.s_sets[static_cast<std::size_t>(pos)];
          const Sign beta_i =
              cert.beta_by_axis[static_cast<std::size_t>(i - 1)];
          if (S.empty()) ++L.vc;
          const int e_kl = element_index(N, k, l, x.diff(k, l));
          const int e_jl = element_index(N, j, l, x.diff(j, l));
          for (auto it = d_begin; it != d_end; ++it) {
            ++L.c;
            const auto X =
                oriented(element_index(N, j, k, *it), e_kl, e_jl);
            if (!X) {
              fail("(c) cocircuit missing at " + x.to_string() + " offset " +
                   std::to_string(*it));
              continue;
            }
            for (const LatticePoint& z : S) {
              for (const int p : {j, k, l}) {
                if (X->at(element_index(N, i, p, z.diff(i, p))) !=
                    sign_product(alpha_sign(i, p), beta_i)) {
                  fail("(c) sign failure at " + x.to_string() + " onward " +
                       z.to_string() + " wall " +
                       element_token(i, p, z.diff(i, p)));
                }
              }
            }
          }
        }
      }
    }
  }

  for (const Local& L : locals) {
    rep.checks_a += L.a;
    rep.checks_b += L.b;
    rep.checks_c += L.c;
    rep.vacuous_c += L.vc;
    for (const std::string& s : L.fails)
      if (rep.failures.size() < 64) rep.failures.push_back(s);
  }
  rep.member = rep.failures.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Blocking family
// ---------------------------------------------------------------------------

std::vector<std::array<int, 4>> gdagger_blocking_family(
    const ConstructionInstance& inst) {
  const int N = inst.N;
  const std::vector<OmegaCertificate> omega = omega_set(inst);
  const DiffTable values = diff_table(omega);
  std::set<std::array<int, 4>> fam;
  for (const OmegaCertificate& cert : omega) {
    const LatticePoint& x = cert.x;
    const int l = cert.gamma.missing();
    for (const auto& rot : cert.gamma.rotations()) {
      const int i = rot[0], j = rot[1], k = rot[2];
      const int e_ki = element_index(N, k, i, x.diff(k, i));
      const int e_ij = element_index(N, i, j, x.diff(i, j));
      const auto& vjk =
          values[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      for (const int p : rot) {
        const int e_pl = element_index(N, p, l, x.diff(p, l));
        for (auto it = std::lower_bound(vjk.begin(), vjk.end(), x.diff(j, k));
             it != vjk.end(); ++it) {
          std::array<int, 4> D{element_index(N, j, k, *it), e_ki, e_ij, e_pl};
          std::sort(D.begin(), D.end());
          fam.insert(D);
        }
      }
    }
  }
  return std::vector<std::array<int, 4>>(fam.begin(), fam.end());
}

std::size_t assert_blocking_disjoint(
    const std::vector<FlipWitness>& witnesses,
    const std::vector<std::array<int, 4>>& family, const GroundPtr& ground) {
  for (const FlipWitness& w : witnesses) {
    if (std::binary_search(family.begin(), family.end(), w.support.elements)) {
      std::ostringstream os;
      os << "flip support matches a first-condition zero pattern: {";
      for (int i = 0; i < 4; ++i)
        os << (i ? ", " : "")
           << ground->token(w.support.elements[static_cast<std::size_t>(i)]);
      os << "}";
      throw verification_error(os.str());
    }
  }
  return witnesses.size();
}

// ---------------------------------------------------------------------------
// Closure experiment
// ---------------------------------------------------------------------------

nlohmann::json ExperimentRecord::to_json() const {
  nlohmann::json nodes_j = nlohmann::json::array();
  for (const ClosureNodeResult& n : nodes)
    nodes_j.push_back({{"key", n.key},
                       {"depth", n.depth},
                       {"member", n.member},
                       {"vacuous", n.vacuous},
                       {"supports", n.support_count},
                       {"expanded", n.expanded}});
  return nlohmann::json{{"instance-hash", instance_hash},
                        {"n", N},
                        {"seed", seed},
                        {"build-attempts", build_attempts},
                        {"omega-size", omega_size},
                        {"omega-nonempty", omega_nonempty},
                        {"s-sets-all-nonempty", s_sets_all_nonempty},
                        {"hypotheses-hold", hypotheses_hold},
                        {"root-membership", root.member},
                        {"root-summary", root.summary()},
                        {"nodes", nodes_j},
                        {"closure-holds", closure_holds},
                        {"complete", complete},
                        {"root-flip-count", root_flip_count},
                        {"blocking-checked", blocking_checked},
                        {"seconds", seconds}};
}

ExperimentRecord flip_closure_experiment(const ConstructionInstance& inst,
                                         int depth, const BfsBudget& budget) {
  if (depth < 1) throw usage_error("closure depth must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  auto seconds = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  ExperimentRecord rec;
  ConstructionInstance built = inst;
  BuildReport brep;
  LiftingOM root = build_with_recovery(built, 16, &brep);
  rec.N = built.N;
  rec.seed = built.seed;
  rec.build_attempts = brep.attempts;
  rec.instance_hash = instance_fingerprint(built);

  const std::vector<OmegaCertificate> omega = omega_set(built);
  rec.omega_size = omega.size();
  rec.omega_nonempty = !omega.empty();
  rec.s_sets_all_nonempty = rec.omega_nonempty;
  for (const OmegaCertificate& c : omega) {
    for (const auto& s : c.s_sets) {
      if (s.empty()) {
        rec.s_sets_all_nonempty = false;
        break;
      }
    }
    if (!rec.s_sets_all_nonempty) break;
  }
  rec.hypotheses_hold = rec.omega_nonempty && rec.s_sets_all_nonempty;

  const std::vector<std::array<int, 4>> family =
      gdagger_blocking_family(built);
  const GroundPtr ground = built.ground();

  rec.root = gdagger_check(root, built);

  struct Node {
    std::string key;
    LiftingOM lift;
    int depth;
  };
  std::deque<Node> queue;
  std::map<std::string, std::size_t> node_idx;
  const std::string root_key = canonical_key(root);
  node_idx.emplace(root_key, 0);
  rec.nodes.push_back(
      {root_key, 0, rec.root.member, rec.root.vacuous, 0, false});
  queue.push_back({root_key, root, 0});

  long long expanded = 0;
  while (!queue.empty()) {
    if ((budget.max_vertices >= 0 && expanded >= budget.max_vertices) ||
        (budget.max_seconds >= 0 && seconds() >= budget.max_seconds)) {
      rec.complete = false;
      break;
    }
    Node cur = std::move(queue.front());
    queue.pop_front();
    if (cur.depth >= depth) continue;  // depth-limit leaf, checked already

    const std::vector<FlipWitness> ws = find_flip_supports(cur.lift);
    rec.blocking_checked += assert_blocking_disjoint(ws, family, ground);
    {
      ClosureNodeResult& n = rec.nodes[node_idx.at(cur.key)];
      n.support_count = ws.size();
      n.expanded = true;
    }
    if (cur.depth == 0) rec.root_flip_count = ws.size();
    ++expanded;

    for (const FlipWitness& w : ws) {
      LiftingOM nb = apply_flip(cur.lift, w.support);
      std::string nkey = canonical_key(nb);
      if (node_idx.count(nkey)) continue;
      const GDaggerReport nrep = gdagger_check(nb, built);
      node_idx.emplace(nkey, rec.nodes.size());
      rec.nodes.push_back(
          {nkey, cur.depth + 1, nrep.member, nrep.vacuous, 0, false});
      queue.push_back({std::move(nkey), std::move(nb), cur.depth + 1});
    }
  }

  rec.closure_holds = true;
  for (const ClosureNodeResult& n : rec.nodes)
    if (!n.member) rec.closure_holds = false;
  rec.seconds = seconds();
  return rec;
}

// ---------------------------------------------------------------------------
// Non-member search
// ---------------------------------------------------------------------------

nlohmann::json NonMemberSearchReport::to_json() const {
  nlohmann::json j{{"found", found},
                   {"attempts", attempts},
                   {"notes", notes}};
  if (found) {
    j["witness-key"] = witness_key;
    if (witness_instance) j["witness-instance"] = witness_instance->to_json();
  }
  return j;
}

NonMemberSearchReport find_non_member(const ConstructionInstance& inst,
                                      std::size_t budget) {
  if (budget == 0) throw usage_error("non-member search needs a positive budget");
  const std::vector<OmegaCertificate> omega = omega_set(inst);
  if (omega.empty())
    throw usage_error(
        "non-member search needs a nonempty special set; this instance's is "
        "empty");

  NonMemberSearchReport rep;
  const int E = base_element_count(inst.N);
  const std::size_t resample_phase = std::max<std::size_t>(budget / 2, 1);

  auto try_candidate = [&](ConstructionInstance& cand,
                           const std::string& what) -> bool {
    ++rep.attempts;
    try {
      LiftingOM lift = build_entangled_lifting(cand);
      const GDaggerReport g = gdagger_check(lift, inst);
      if (!g.member) {
        rep.found = true;
        rep.witness_key = canonical_key(lift);
        rep.witness_instance = cand;
        rep.witness = std::move(lift);
        rep.notes.push_back(what + ": non-member found (" +
                            std::to_string(g.failures.size()) +
                            " recorded failures)");
        return true;
      }
      rep.notes.push_back(what + ": member, continuing");
    } catch (const degeneracy_error& e) {
      // jitter is pinned (the picture must stay the same), so a degenerate
      // draw just costs the attempt
      rep.notes.push_back(what + ": degenerate (" + std::string(e.what()) +
                          ")");
    }
    return false;
  };

  std::size_t spent = 0;
  for (std::size_t a = 0; a < resample_phase && spent < budget; ++a, ++spent) {
    ConstructionInstance cand = inst;
    SplitMix64 rng = derive_stream(inst.seed, stream::kSearch, a);
    bool same = true;
    for (int e = 0; e < E; ++e) {
      const int bit = static_cast<int>(rng.below(2));
      if (bit != cand.g[static_cast<std::size_t>(e)]) same = false;
      cand.g[static_cast<std::size_t>(e)] = bit;
    }
    if (same) {
      rep.notes.push_back("resample " + std::to_string(a) +
                          ": identical coin flips, skipped");
      ++rep.attempts;
      continue;
    }
    if (try_candidate(cand, "resample " + std::to_string(a))) return rep;
  }
  for (std::size_t a = 0; spent < budget; ++a, ++spent) {
    ConstructionInstance cand = inst;
    const int e = static_cast<int>(a % static_cast<std::size_t>(E));
    cand.g[static_cast<std::size_t>(e)] ^= 1;
    if (try_candidate(cand, "single-coin flip at " + cand.ground()->token(e)))
      return rep;
  }
  rep.notes.push_back("budget exhausted without a witness");
  return rep;
}

}  // namespace omw
