#include "omw/construction.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <optional>
#include <sstream>

#include "omw/combinatorics.hpp"
#include "omw/errors.hpp"
#include "omw/prng.hpp"

namespace omw {

namespace {

int sgn_int(Sign s) { return static_cast<int>(s); }

Sign sign_product(Sign a, Sign b) {
  return static_cast<Sign>(sgn_int(a) * sgn_int(b));
}

GroundPtr walls_ground(int N) {
  const GroundPtr full = construction_ground(N);
  std::vector<std::string> toks;
  const int E = base_element_count(N);
  toks.reserve(static_cast<std::size_t>(E));
  for (int e = 0; e < E; ++e) toks.push_back(full->token(e));
  return make_ground(std::move(toks));
}

std::string subset_string(const GroundPtr& ground, const std::array<int, 3>& T) {
  return "{" + ground->token(T[0]) + ", " + ground->token(T[1]) + ", " +
         ground->token(T[2]) + "}";
}

}  // namespace

RationalVectorConfig wall_normal_config(const ConstructionInstance& inst) {
  RationalVectorConfig cfg;
  cfg.ground = walls_ground(inst.N);
  const int E = base_element_count(inst.N);
  cfg.vectors.reserve(static_cast<std::size_t>(E));
  for (int e = 0; e < E; ++e) {
    const ElementRef er = element_ref(inst.N, e);
    const auto& eps = inst.eps[static_cast<std::size_t>(e)];
    const TropicalPoint v =
        TropicalPoint::pair_difference(er.i, er.j) +
        delta_direction(inst.u[static_cast<std::size_t>(e)]).scaled(inst.delta) +
        TropicalPoint::from_chart(eps[0], eps[1], eps[2]);
    const auto chart = v.chart();
    cfg.vectors.push_back(QVec{chart[0], chart[1], chart[2]});
  }
  return cfg;
}

RationalVectorConfig perturbed_config(const ConstructionInstance& inst) {
  RationalVectorConfig cfg = wall_normal_config(inst);
  const OrientedMatroid at_infinity = om_of_config(cfg);
  if (at_infinity.rank() != 3)
    throw degeneracy_error(degeneracy_error::remedy::resample_eps,
                           "tilted normals span rank " +
                               std::to_string(at_infinity.rank()) +
                               " instead of 3");
  const MatroidProfile prof = profile(at_infinity);
  if (!prof.uniform)
    throw degeneracy_error(degeneracy_error::remedy::resample_eps,
                           "tilted normals are not generic: picture at "
                           "infinity is not uniform");
  // untilted picture: every wall repeats its pair's difference direction
  RationalVectorConfig flat;
  flat.ground = cfg.ground;
  flat.vectors.reserve(cfg.vectors.size());
  const int E = base_element_count(inst.N);
  for (int e = 0; e < E; ++e) {
    const ElementRef er = element_ref(inst.N, e);
    const auto chart = TropicalPoint::pair_difference(er.i, er.j).chart();
    flat.vectors.push_back(QVec{chart[0], chart[1], chart[2]});
  }
  if (!weak_map_leq(at_infinity, om_of_config(flat)))
    throw degeneracy_error(degeneracy_error::remedy::resample_eps,
                           "tilted picture at infinity is not a weak-map "
                           "predecessor of the untilted one");
  return cfg;
}

// ---------------------------------------------------------------------------
// Oracle context
// ---------------------------------------------------------------------------

OracleContext::OracleContext(const ConstructionInstance& instance)
    : inst(&instance),
      ground(construction_ground(instance.N)),
      n(ground->size()),
      f_index(n - 1),
      base(om_of_config(perturbed_config(instance))) {
  const int E = n - 1;
  refs.reserve(static_cast<std::size_t>(E));
  pair_of.reserve(static_cast<std::size_t>(E));
  normals_sz.reserve(static_cast<std::size_t>(E));
  offsets.reserve(static_cast<std::size_t>(E));
  const RationalVectorConfig cfg = wall_normal_config(instance);
  for (int e = 0; e < E; ++e) {
    const ElementRef er = element_ref(instance.N, e);
    refs.push_back(er);
    pair_of.push_back(pair_index(er.i, er.j));
    const QVec& c = cfg.vectors[static_cast<std::size_t>(e)];
    normals_sz.push_back(
        TropicalPoint::from_chart(c[0], c[1], c[2]).sum_zero());
    offsets.push_back(mpq_class(static_cast<long>(er.r)));
  }
  lambda = mpq_class(1, 100);
  const long radius = 100L * std::max(instance.N, 1);
  sphere2 = mpq_class(radius) * mpq_class(radius);
  for (const CyclicTriple& c : CyclicTriple::all_classes()) {
    const AffineArrangement model = braid_model(c);
    for (int p = 0; p < 6; ++p)
      shift_of[static_cast<std::size_t>(c.class_index())]
              [static_cast<std::size_t>(p)] =
          static_cast<long long>(sgn(model.offsets[static_cast<std::size_t>(p)]));
  }
}

namespace {

// Integer solve of x_i − x_j = weight(e) over an acyclic triple of distinct
// axis pairs; three edges on four axes are always a spanning tree, so the
// solution is unique up to the fixed root value.
std::array<long long, 4> solve_tree(const std::array<ElementRef, 3>& es,
                                    const std::array<long long, 3>& weight) {
  std::array<long long, 4> x{0, 0, 0, 0};
  std::array<bool, 4> known{false, false, false, false};
  known[static_cast<std::size_t>(es[0].i - 1)] = true;
  for (int pass = 0; pass < 3; ++pass) {
    for (int m = 0; m < 3; ++m) {
      const std::size_t a = static_cast<std::size_t>(es[m].i - 1);
      const std::size_t b = static_cast<std::size_t>(es[m].j - 1);
      if (known[a] && !known[b]) {
        x[b] = x[a] - weight[static_cast<std::size_t>(m)];
        known[b] = true;
      } else if (known[b] && !known[a]) {
        x[a] = x[b] + weight[static_cast<std::size_t>(m)];
        known[a] = true;
      }
    }
  }
  if (!(known[0] && known[1] && known[2] && known[3]))
    throw verification_error("tree solve failed to reach every axis");
  return x;
}

QVec ones4() { return QVec{mpq_class(1), mpq_class(1), mpq_class(1), mpq_class(1)}; }

}  // namespace

SignVector cocircuit_oracle(const OracleContext& ctx,
                            const std::array<int, 3>& T_in) {
  std::array<int, 3> T = T_in;
  std::sort(T.begin(), T.end());
  if (T[0] < 0 || T[2] >= ctx.n || T[0] == T[1] || T[1] == T[2])
    throw usage_error("oracle needs three distinct element indices");
  const ConstructionInstance& inst = *ctx.inst;
  const int N = inst.N;
  SignVector out(ctx.ground);

  if (T[2] == ctx.f_index) {
    // at-infinity case: direction orthogonal to the other two tilted normals
    const int e1 = T[0], e2 = T[1];
    QMat A{ctx.normals_sz[static_cast<std::size_t>(e1)],
           ctx.normals_sz[static_cast<std::size_t>(e2)], ones4()};
    const std::vector<QVec> ker = q_kernel(A);
    if (ker.size() != 1)
      throw degeneracy_error(
          degeneracy_error::remedy::resample_eps,
          "at-infinity direction is not unique for " +
              subset_string(ctx.ground, T));
    const QVec& y = ker[0];
    for (int g = 0; g < ctx.f_index; ++g) {
      if (g == e1 || g == e2) continue;
      const int s = sign_of(dot(y, ctx.normals_sz[static_cast<std::size_t>(g)]));
      if (s == 0)
        throw verification_error(
            "picture at infinity is not uniform despite the audit, at " +
            subset_string(ctx.ground, T));
      out.set(g, static_cast<Sign>(s));
    }
    return out;
  }

  const std::array<ElementRef, 3> es{
      ctx.refs[static_cast<std::size_t>(T[0])],
      ctx.refs[static_cast<std::size_t>(T[1])],
      ctx.refs[static_cast<std::size_t>(T[2])]};
  const std::array<int, 3> ps{ctx.pair_of[static_cast<std::size_t>(T[0])],
                              ctx.pair_of[static_cast<std::size_t>(T[1])],
                              ctx.pair_of[static_cast<std::size_t>(T[2])]};
  const bool repeated = ps[0] == ps[1] || ps[1] == ps[2] || ps[0] == ps[2];

  bool cycle = false;
  std::array<int, 3> axes{};
  if (!repeated) {
    bool seen[5] = {false, false, false, false, false};
    for (const ElementRef& er : es) seen[er.i] = seen[er.j] = true;
    int cnt = 0;
    for (int a = 1; a <= 4; ++a)
      if (seen[a]) {
        if (cnt < 3) axes[static_cast<std::size_t>(cnt)] = a;
        ++cnt;
      }
    cycle = (cnt == 3);
  }

  if (!repeated && !cycle) {
    // tree case: the walls meet at an integer point of Q
    const std::array<long long, 3> rw{es[0].r, es[1].r, es[2].r};
    const std::array<long long, 4> xv = solve_tree(es, rw);
    LatticePoint lp;
    lp.x = xv;
    if (!in_Q(lp, N))
      throw verification_error("tree vertex " + lp.to_string() +
                               " escaped Q at " + subset_string(ctx.ground, T));
    const CyclicTriple gamma = gamma_of_point(inst, lp);
    const auto& shifts =
        ctx.shift_of[static_cast<std::size_t>(gamma.class_index())];
    const std::array<long long, 3> cw{shifts[static_cast<std::size_t>(ps[0])],
                                      shifts[static_cast<std::size_t>(ps[1])],
                                      shifts[static_cast<std::size_t>(ps[2])]};
    const std::array<long long, 4> w = solve_tree(es, cw);
    for (int g = 0; g < ctx.f_index; ++g) {
      if (g == T[0] || g == T[1] || g == T[2]) continue;
      const ElementRef& er = ctx.refs[static_cast<std::size_t>(g)];
      const long long d = xv[static_cast<std::size_t>(er.i - 1)] -
                          xv[static_cast<std::size_t>(er.j - 1)];
      if (d == er.r) {
        // wall through the vertex's Q point: read the scaled local model
        const long long lv =
            w[static_cast<std::size_t>(er.i - 1)] -
            w[static_cast<std::size_t>(er.j - 1)] -
            shifts[static_cast<std::size_t>(
                ctx.pair_of[static_cast<std::size_t>(g)])];
        if (lv == 0)
          throw verification_error(
              "fourth wall through a local vertex at " + lp.to_string());
        out.set(g, sign_of_int(lv));
      } else {
        out.set(g, sign_of_int(d - er.r));
      }
    }
    out.set(ctx.f_index, Sign::plus);
    return out;
  }

  // far case: exact plane solve outside the separation sphere
  std::array<mpq_class, 3> rhs{ctx.offsets[static_cast<std::size_t>(T[0])],
                               ctx.offsets[static_cast<std::size_t>(T[1])],
                               ctx.offsets[static_cast<std::size_t>(T[2])]};
  if (cycle) {
    // offset sum in a fixed traversal of the pair triangle
    long long sigma = 0;
    const std::array<std::array<int, 2>, 3> edges{
        std::array<int, 2>{axes[0], axes[1]}, std::array<int, 2>{axes[1], axes[2]},
        std::array<int, 2>{axes[2], axes[0]}};
    for (const auto& ed : edges) {
      for (int m = 0; m < 3; ++m) {
        const ElementRef& er = es[static_cast<std::size_t>(m)];
        if ((er.i == ed[0] && er.j == ed[1]) ||
            (er.i == ed[1] && er.j == ed[0])) {
          sigma += (er.i == ed[0]) ? er.r : -er.r;
          break;
        }
      }
    }
    if (sigma == 0) {
      // the untilted walls share a line; the pseudoplanes follow their
      // local-model shifts along its tube, which moves the common vertex far
      // out instead of leaving it near the line
      GroupElement acc;
      for (int m = 0; m < 3; ++m)
        acc = acc.compose(inst.g_element(T[m]));
      const CyclicTriple line_class =
          orientation_of(apply_group(acc, CyclicTriple(1, 2, 3)), axes);
      const auto& shifts =
          ctx.shift_of[static_cast<std::size_t>(line_class.class_index())];
      for (int m = 0; m < 3; ++m)
        rhs[static_cast<std::size_t>(m)] +=
            ctx.lambda *
            mpq_class(static_cast<long>(
                shifts[static_cast<std::size_t>(ps[static_cast<std::size_t>(m)])]));
    }
  }
  QMat A{ctx.normals_sz[static_cast<std::size_t>(T[0])],
         ctx.normals_sz[static_cast<std::size_t>(T[1])],
         ctx.normals_sz[static_cast<std::size_t>(T[2])], ones4()};
  if (sgn(q_det(A)) == 0)
    throw degeneracy_error(degeneracy_error::remedy::resample_eps,
                           "far solve singular at " +
                               subset_string(ctx.ground, T));
  QVec b{rhs[0], rhs[1], rhs[2], mpq_class(0)};
  const std::optional<QVec> sol = q_solve(A, b);
  if (!sol)
    throw degeneracy_error(degeneracy_error::remedy::resample_eps,
                           "far solve inconsistent at " +
                               subset_string(ctx.ground, T));
  if (dot(*sol, *sol) <= ctx.sphere2)
    throw degeneracy_error(degeneracy_error::remedy::shrink_delta,
                           "far vertex inside the separation sphere at " +
                               subset_string(ctx.ground, T));
  for (int g = 0; g < ctx.f_index; ++g) {
    if (g == T[0] || g == T[1] || g == T[2]) continue;
    const int s = sign_of(dot(*sol, ctx.normals_sz[static_cast<std::size_t>(g)]) -
                          ctx.offsets[static_cast<std::size_t>(g)]);
    if (s == 0)
      throw degeneracy_error(degeneracy_error::remedy::resample_eps,
                             "far vertex lies on an extra wall at " +
                                 subset_string(ctx.ground, T));
    out.set(g, static_cast<Sign>(s));
  }
  out.set(ctx.f_index, Sign::plus);
  return out;
}

SignVector cocircuit_oracle(const ConstructionInstance& inst,
                            const std::array<int, 3>& T) {
  const OracleContext ctx(inst);
  return cocircuit_oracle(ctx, T);
}

// ---------------------------------------------------------------------------
// Signed cocircuit index
// ---------------------------------------------------------------------------

SignedCocircuitIndex::SignedCocircuitIndex(const OrientedMatroid& m) {
  const int n = m.elements();
  total_ = static_cast<std::size_t>(m.signed_count());
  const std::size_t total = total_;
  words_ = (total + 63) / 64;
  pos_.assign(static_cast<std::size_t>(n),
              std::vector<std::uint64_t>(words_, 0));
  neg_.assign(static_cast<std::size_t>(n),
              std::vector<std::uint64_t>(words_, 0));
  for (int r = 0; r < m.pair_count(); ++r) {
    const SignVector& x = m.cocircuits()[static_cast<std::size_t>(r)];
    const std::size_t even = static_cast<std::size_t>(2 * r);
    const std::size_t odd = even + 1;
    auto mark = [&](std::vector<std::vector<std::uint64_t>>& same,
                    std::vector<std::vector<std::uint64_t>>& opp, int e) {
      same[static_cast<std::size_t>(e)][even >> 6] |= 1ULL << (even & 63);
      opp[static_cast<std::size_t>(e)][odd >> 6] |= 1ULL << (odd & 63);
    };
    for (int w = 0; w < SignVector::kWords; ++w) {
      std::uint64_t pw = x.plus_words()[static_cast<std::size_t>(w)];
      while (pw) {
        mark(pos_, neg_, w * 64 + std::countr_zero(pw));
        pw &= pw - 1;
      }
      std::uint64_t mw = x.minus_words()[static_cast<std::size_t>(w)];
      while (mw) {
        mark(neg_, pos_, w * 64 + std::countr_zero(mw));
        mw &= mw - 1;
      }
    }
  }
}

bool SignedCocircuitIndex::exists_with(
    const std::vector<std::pair<int, Sign>>& required_signs) const {
  if (required_signs.empty()) return true;
  for (const auto& [e, s] : required_signs)
    if (s == Sign::zero)
      throw usage_error("sign-occurrence queries take nonzero signs only");
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t acc = ~0ULL;
    for (const auto& [e, s] : required_signs) {
      const auto& table = (s == Sign::plus) ? pos_ : neg_;
      acc &= table[static_cast<std::size_t>(e)][w];
      if (!acc) break;
    }
    if (acc) return true;
  }
  return false;
}

std::vector<int> SignedCocircuitIndex::avoiding_all(
    const std::vector<std::pair<int, Sign>>& forbidden_signs) const {
  for (const auto& [e, s] : forbidden_signs)
    if (s == Sign::zero)
      throw usage_error("sign-occurrence queries take nonzero signs only");
  std::vector<int> out;
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t bad = 0;
    for (const auto& [e, s] : forbidden_signs) {
      const auto& table = (s == Sign::plus) ? pos_ : neg_;
      bad |= table[static_cast<std::size_t>(e)][w];
    }
    std::uint64_t good = ~bad;
    if (w == words_ - 1 && (total_ & 63) != 0)
      good &= (1ULL << (total_ & 63)) - 1;
    while (good) {
      out.push_back(static_cast<int>(w * 64 +
                                     static_cast<std::size_t>(
                                         std::countr_zero(good))));
      good &= good - 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pattern checks
// ---------------------------------------------------------------------------

PatternCheckReport local_pattern_check(const LiftingOM& lifting,
                                       const ConstructionInstance& inst) {
  PatternCheckReport rep;
  const OrientedMatroid& M = lifting.matroid;
  const int N = inst.N;
  const int f = lifting.lift_index();
  const ZeroSetIndex zx(M);

  auto fail = [&rep](std::string msg) {
    rep.ok = false;
    if (rep.failures.size() < 64) rep.failures.push_back(std::move(msg));
  };
  auto oriented = [&](std::vector<int> zeros) -> std::optional<SignVector> {
    std::sort(zeros.begin(), zeros.end());
    ++rep.lookups;
    const int idx = zx.pair_with_zero_set(zeros);
    if (idx < 0) return std::nullopt;
    SignVector x = M.cocircuits()[static_cast<std::size_t>(idx)];
    if (x.at(f) == Sign::minus) x = -x;
    return x;
  };
  auto eidx = [&](int a, int b, long long d) {
    return element_index(N, a, b, d);
  };

  for (const LatticePoint& x : enumerate_Qstar(N)) {
    ++rep.points;
    const CyclicTriple gamma = gamma_of_point(inst, x);
    const int l = gamma.missing();

    // full vertex cocircuit on the three through-axis walls
    {
      const auto r3 = gamma.rep();
      const int i = r3[0], j = r3[1], k = r3[2];
      const auto X = oriented({eidx(i, l, x.diff(i, l)), eidx(j, l, x.diff(j, l)),
                               eidx(k, l, x.diff(k, l))});
      if (!X) {
        fail("missing vertex cocircuit at " + x.to_string());
      } else {
        SignVector want(M.ground());
        for (int g = 0; g < M.elements(); ++g) {
          if (g == f) {
            want.set(g, Sign::plus);
            continue;
          }
          const ElementRef er = element_ref(N, g);
          const long long d = x.diff(er.i, er.j);
          Sign s;
          if (d == er.r) {
            if (er.i == l || er.j == l) {
              s = Sign::zero;
            } else if ((er.i == j && er.j == k) || (er.i == k && er.j == j)) {
              s = alpha_sign(k, j);
            } else if ((er.i == k && er.j == i) || (er.i == i && er.j == k)) {
              s = alpha_sign(i, k);
            } else {
              s = alpha_sign(j, i);
            }
          } else {
            s = sign_of_int(d - er.r);
          }
          want.set(g, s);
        }
        rep.sign_checks += static_cast<std::size_t>(M.elements());
        if (!(*X == want))
          fail("vertex cocircuit mismatch at " + x.to_string() + ": got " +
               X->to_string() + " want " + want.to_string());
      }
    }

    // the three-cocircuit family, for every rotation of the writing and every
    // axis p of the triple
    for (const auto& rot : gamma.rotations()) {
      const int i = rot[0], j = rot[1], k = rot[2];
      const long long dki = x.diff(k, i);
      const long long dij = x.diff(i, j);
      const long long djk = x.diff(j, k);
      for (const int p : rot) {
        const int e_ki = eidx(k, i, dki);
        const int e_ij = eidx(i, j, dij);
        const int e_pl = eidx(p, l, x.diff(p, l));
        const auto X1 = oriented({e_ki, e_ij, e_pl});
        if (!X1) {
          fail("missing first-family cocircuit at " + x.to_string());
        } else {
          for (long long r = djk; r <= N; ++r) {
            ++rep.sign_checks;
            if (X1->at(eidx(j, k, r)) != alpha_sign(k, j)) {
              fail("first-family sign failure at " + x.to_string() +
                   " wall " + element_token(j, k, r));
              break;
            }
          }
        }
        for (long long r = djk; r <= N; ++r) {
          const int e_jk = eidx(j, k, r);
          const auto X2 = oriented({e_jk, e_ij, e_pl});
          ++rep.sign_checks;
          if (!X2 || X2->at(e_ki) != alpha_sign(i, k))
            fail("second-family failure at " + x.to_string() + " r=" +
                 std::to_string(r));
          const auto X3 = oriented({e_jk, e_ki, e_pl});
          ++rep.sign_checks;
          if (!X3 || X3->at(e_ij) != alpha_sign(j, i))
            fail("third-family failure at " + x.to_string() + " r=" +
                 std::to_string(r));
        }
      }
    }
  }
  return rep;
}

BetaConsistencyReport beta_consistency_check(const LiftingOM& lifting,
                                             const ConstructionInstance& inst) {
  BetaConsistencyReport rep;
  const OrientedMatroid& M = lifting.matroid;
  const int N = inst.N;
  const int f = lifting.lift_index();
  const ZeroSetIndex zx(M);
  const SignedCocircuitIndex sx(M);

  // the eight oriented pair-triangles: each 3-subset of axes, both cycles
  std::vector<std::array<int, 3>> writings;
  for (int l = 4; l >= 1; --l) {
    std::array<int, 3> tri{};
    int c = 0;
    for (int a = 1; a <= 4; ++a)
      if (a != l) tri[static_cast<std::size_t>(c++)] = a;
    writings.push_back(tri);
    writings.push_back({tri[0], tri[2], tri[1]});
  }

  std::vector<BetaConsistencyReport> locals(writings.size());
  const long long n_writings = static_cast<long long>(writings.size());
#pragma omp parallel for schedule(dynamic)
  for (long long wi = 0; wi < n_writings; ++wi) {
    BetaConsistencyReport& lrep = locals[static_cast<std::size_t>(wi)];
    const int i = writings[static_cast<std::size_t>(wi)][0],
              j = writings[static_cast<std::size_t>(wi)][1],
              k = writings[static_cast<std::size_t>(wi)][2];
    const int l = 10 - i - j - k;
    for (long long r = -N; r <= N; ++r) {
      for (long long s = -N; s <= N; ++s) {
        for (long long t = -N; t <= N; ++t) {
          ++lrep.triples_scanned;
          // Only the cyclic reading of a wall triple carries the crossing
          // statement: its three inner half-spaces must share a region.
          // Straightened, that needs a positive offset sum; walls sharing a
          // line (sum zero) defer to the line's local-model orientation.
          // The reversed reading's sign pattern can still show up on stray
          // far vertices of other triples, so it must not arm the check.
          if (r + s + t < 0) continue;
          const int e_ij = element_index(N, i, j, r);
          const int e_jk = element_index(N, j, k, s);
          const int e_ki = element_index(N, k, i, t);
          if (r + s + t == 0) {
            GroupElement acc;
            for (const int e : {e_ij, e_jk, e_ki})
              acc = acc.compose(inst.g_element(e));
            const CyclicTriple line_class = orientation_of(
                apply_group(acc, CyclicTriple(1, 2, 3)), {i, j, k});
            if (line_class.class_index() !=
                CyclicTriple(i, j, k).class_index())
              continue;
          }
          if (!sx.exists_with({{f, Sign::plus},
                               {e_ij, alpha_sign(j, i)},
                               {e_jk, alpha_sign(k, j)},
                               {e_ki, alpha_sign(i, k)}}))
            continue;
          ++lrep.hypotheses_found;
          const Sign beta_v = beta(i, j, k, r, s, t, inst);
          std::vector<int> zeros{e_ij, e_jk, e_ki};
          std::sort(zeros.begin(), zeros.end());
          const int idx = zx.pair_with_zero_set(zeros);
          if (idx < 0) {
            lrep.ok = false;
            lrep.failures.push_back("missing far cocircuit for triangle " +
                                    element_token(i, j, r) + element_token(j, k, s) +
                                    element_token(k, i, t));
            continue;
          }
          SignVector X = M.cocircuits()[static_cast<std::size_t>(idx)];
          if (X.at(f) == Sign::minus) X = -X;
          for (const int p : writings[wi]) {
            const Sign want = sign_product(alpha_sign(l, p), beta_v);
            for (long long u = -N; u <= N; ++u) {
              ++lrep.sign_checks;
              if (X.at(element_index(N, l, p, u)) != want) {
                lrep.ok = false;
                if (lrep.failures.size() < 32)
                  lrep.failures.push_back(
                      "through-axis sign failure for triangle (" +
                      std::to_string(i) + std::to_string(j) +
                      std::to_string(k) + ") offsets " + std::to_string(r) +
                      "," + std::to_string(s) + "," + std::to_string(t) +
                      " at " + element_token(l, p, u));
              }
            }
          }
        }
      }
    }
  }
  for (const BetaConsistencyReport& lrep : locals) {
    rep.triples_scanned += lrep.triples_scanned;
    rep.hypotheses_found += lrep.hypotheses_found;
    rep.sign_checks += lrep.sign_checks;
    if (!lrep.ok) rep.ok = false;
    for (const std::string& m : lrep.failures)
      if (rep.failures.size() < 32) rep.failures.push_back(m);
  }
  return rep;
}

bool gluing_regression(const ConstructionInstance& inst, std::size_t samples) {
  const int N = inst.N;
  SplitMix64 rng = derive_stream(inst.seed, stream::kValidatePairs, 7);
  for (std::size_t s = 0; s < samples; ++s) {
    LatticePoint x;
    for (int m = 0; m < 4; ++m)
      x.x[static_cast<std::size_t>(m)] =
          static_cast<long long>(rng.below(static_cast<std::uint64_t>(N) + 1));
    const int l = 1 + static_cast<int>(rng.below(4));
    const long long shift =
        -N + static_cast<long long>(rng.below(2 * static_cast<std::uint64_t>(N) + 1));
    LatticePoint y = x;
    y.x[static_cast<std::size_t>(l - 1)] += shift;
    if (!in_Q(y, N)) continue;
    std::array<int, 3> tri{};
    int c = 0;
    for (int a = 1; a <= 4; ++a)
      if (a != l) tri[static_cast<std::size_t>(c++)] = a;
    if (orientation_of(gamma_of_point(inst, x), tri) !=
        orientation_of(gamma_of_point(inst, y), tri))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

bool BuildReport::ok() const {
  return count_ok && lifting_ok && gluing_ok && validation.ok && patterns.ok &&
         beta.ok;
}

std::string BuildReport::summary() const {
  std::ostringstream os;
  os << (ok() ? "build ok" : "build FAILED") << "; attempts " << attempts
     << "; delta " << delta_used << "\n  count " << (count_ok ? "ok" : "BAD")
     << ", lifting " << (lifting_ok ? "ok" : "BAD") << ", gluing "
     << (gluing_ok ? "ok" : "BAD") << "\n  validation: " << validation.summary()
     << "\n  patterns: " << (patterns.ok ? "ok" : "BAD") << " ("
     << patterns.points << " points, " << patterns.lookups << " lookups, "
     << patterns.sign_checks << " sign checks)"
     << "\n  crossing consistency: " << (beta.ok ? "ok" : "BAD") << " ("
     << beta.triples_scanned << " triangles, " << beta.hypotheses_found
     << " hypotheses, " << beta.sign_checks << " sign checks)";
  for (const std::string& m : patterns.failures) os << "\n  " << m;
  for (const std::string& m : beta.failures) os << "\n  " << m;
  return os.str();
}

LiftingOM build_entangled_lifting(const ConstructionInstance& inst,
                                  BuildReport* report) {
  BuildReport scratch;
  BuildReport& rep = report ? *report : scratch;
  rep = BuildReport{};
  rep.delta_used = format_rational(inst.delta);

  const OracleContext ctx(inst);
  const std::uint64_t total64 = binom_u64(static_cast<unsigned>(ctx.n), 3);
  const long long total = static_cast<long long>(total64);
  const std::vector<int> flat = subsets_colex_flat(ctx.n, 3);

  std::vector<SignVector> found(static_cast<std::size_t>(total),
                                SignVector(ctx.ground));
  std::exception_ptr first_error = nullptr;
  std::atomic<bool> bail{false};
#pragma omp parallel for schedule(dynamic, 64)
  for (long long s = 0; s < total; ++s) {
    if (bail.load(std::memory_order_relaxed)) continue;
    try {
      const std::size_t o = static_cast<std::size_t>(3 * s);
      found[static_cast<std::size_t>(s)] =
          cocircuit_oracle(ctx, {flat[o], flat[o + 1], flat[o + 2]});
    } catch (...) {
#pragma omp critical
      {
        if (!first_error) first_error = std::current_exception();
      }
      bail.store(true, std::memory_order_relaxed);
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  LiftingOM lift{OrientedMatroid(ctx.ground, 4, std::move(found)), "f",
                 ctx.base};
  rep.count_ok = lift.matroid.pair_count() == static_cast<int>(total);
  if (!rep.count_ok)
    throw verification_error(
        "assembled cocircuit count " +
        std::to_string(lift.matroid.pair_count()) + " differs from " +
        std::to_string(total));

  ValidateOptions vo;
  vo.uniform = UniformExpectation::required;
  if (inst.N <= 1) {
    vo.mode = ValidateMode::cocircuit_only;
  } else {
    vo.mode = ValidateMode::sampled;
    vo.sample_pairs = 100'000;
    vo.seed = derive_stream(inst.seed, stream::kValidatePairs, 0).next();
  }
  rep.validation = validate(lift.matroid, vo);
  if (!rep.validation.ok)
    throw verification_error("assembled lifting failed validation: " +
                             rep.validation.summary());

  lift.check_lifting();
  rep.lifting_ok = true;

  rep.patterns = local_pattern_check(lift, inst);
  if (!rep.patterns.ok)
    throw verification_error("local pattern check failed: " +
                             rep.patterns.failures.front());

  rep.beta = beta_consistency_check(lift, inst);
  if (!rep.beta.ok)
    throw verification_error("crossing-consistency check failed: " +
                             rep.beta.failures.front());

  rep.gluing_ok = gluing_regression(inst);
  if (!rep.gluing_ok)
    throw verification_error(
        "two Q points sharing a wall triple disagreed on its orientation");

  return lift;
}

LiftingOM build_with_recovery(ConstructionInstance& inst, int max_attempts,
                              BuildReport* report) {
  if (max_attempts < 1) throw usage_error("retry budget must be positive");
  int resample_counter = 0;
  for (int attempt = 1;; ++attempt) {
    try {
      LiftingOM out = build_entangled_lifting(inst, report);
      if (report) report->attempts = attempt;
      return out;
    } catch (const degeneracy_error& e) {
      if (attempt >= max_attempts) throw;
      if (e.suggested == degeneracy_error::remedy::shrink_delta)
        inst.delta /= 2;
      resample_eps(inst, ++resample_counter);
    }
  }
}

}  // namespace omw
