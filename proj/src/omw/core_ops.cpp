#include "omw/core_ops.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "omw/errors.hpp"
#include "omw/prng.hpp"

namespace omw {

namespace {

constexpr int kW = SignVector::kWords;
using Words = SignVector::Words;

long long binom_ll(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline bool words_empty(const Words& w) {
  for (int i = 0; i < kW; ++i)
    if (w[i]) return false;
  return true;
}

inline Words words_or(const Words& a, const Words& b) {
  Words r{};
  for (int i = 0; i < kW; ++i) r[i] = a[i] | b[i];
  return r;
}

inline bool words_subset(const Words& a, const Words& b) {  // a ⊆ b
  for (int i = 0; i < kW; ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

template <class F>
void for_each_bit(const Words& w, F&& f) {
  for (int i = 0; i < kW; ++i) {
    std::uint64_t v = w[i];
    while (v) {
      f(i * 64 + std::countr_zero(v));
      v &= v - 1;
    }
  }
}

// Flat mask tables for one matroid's representatives.
struct MaskTable {
  std::vector<Words> plus, minus, supp;
  std::vector<int> supp_size;

  explicit MaskTable(const OrientedMatroid& m) {
    const auto& reps = m.cocircuits();
    plus.reserve(reps.size());
    minus.reserve(reps.size());
    supp.reserve(reps.size());
    supp_size.reserve(reps.size());
    for (const SignVector& x : reps) {
      plus.push_back(x.plus_words());
      minus.push_back(x.minus_words());
      supp.push_back(words_or(x.plus_words(), x.minus_words()));
      supp_size.push_back(x.support_size());
    }
  }
};

// Sorted failure messages with a cap keep reports deterministic regardless of
// thread interleaving.
void finish_report(ValidationReport& rep) {
  std::sort(rep.failures.begin(), rep.failures.end());
  if (rep.failures.size() > 32) rep.failures.resize(32);
}

void add_failure(ValidationReport& rep, std::string msg) {
  rep.ok = false;
  if (rep.failures.size() < 256) rep.failures.push_back(std::move(msg));
}

int greedy_rank(const OrientedMatroid& m, const MaskTable& t) {
  const int n = m.elements();
  Words amask{};
  std::vector<int> chosen;
  for (int e = 0; e < n; ++e) {
    const std::uint64_t bit = 1ULL << (e & 63);
    Words trial = amask;
    trial[e >> 6] |= bit;
    // every member of trial must have a cocircuit hitting it alone
    bool independent = true;
    std::vector<int> members = chosen;
    members.push_back(e);
    for (int a : members) {
      Words want{};
      want[a >> 6] |= 1ULL << (a & 63);
      bool found = false;
      for (std::size_t r = 0; r < t.supp.size() && !found; ++r) {
        bool eq = true;
        for (int w = 0; w < kW; ++w)
          if ((t.supp[r][w] & trial[w]) != want[w]) {
            eq = false;
            break;
          }
        found = eq;
      }
      if (!found) {
        independent = false;
        break;
      }
    }
    if (independent) {
      amask = trial;
      chosen.push_back(e);
    }
  }
  return static_cast<int>(chosen.size());
}

// True when every cocircuit zero set has size rank-1, all are distinct, and
// every (rank-1)-subset is covered.
bool uniform_profile(const OrientedMatroid& m, std::string* why) {
  const int k = m.rank() - 1;
  if (k < 0) {
    if (why) *why = "rank 0 cannot be uniform";
    return false;
  }
  std::vector<long long> ranks;
  ranks.reserve(m.cocircuits().size());
  // colex rank of the zero set, computed locally to avoid the big index table
  for (const SignVector& x : m.cocircuits()) {
    const std::vector<int> z = x.zero_set();
    if (static_cast<int>(z.size()) != k) {
      if (why)
        *why = "cocircuit " + x.to_string() + " has zero set of size " +
               std::to_string(z.size()) + ", expected " + std::to_string(k);
      return false;
    }
    long long r = 0;
    for (int p = 0; p < k; ++p) r += binom_ll(z[static_cast<std::size_t>(p)], p + 1);
    ranks.push_back(r);
  }
  std::sort(ranks.begin(), ranks.end());
  if (std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end()) {
    if (why) *why = "two cocircuit pairs share a zero set";
    return false;
  }
  const long long expect = binom_ll(m.elements(), k);
  if (static_cast<long long>(ranks.size()) != expect) {
    if (why)
      *why = "cocircuit pair count " + std::to_string(ranks.size()) +
             " differs from C(n, rank-1) = " + std::to_string(expect);
    return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// Cocircuit elimination
// --------------------------------------------------------------------------

// For X, Y with X ≠ ±Y and X(e) = -Y(e) ≠ 0, some cocircuit Z has Z(e) = 0
// and Z(g) ≤ (X∘Y)(g) wherever {X(g), Y(g)} ≠ {+, -}.
struct EliminationContext {
  const MaskTable& t;
  std::vector<std::vector<int>> zero_at;  // element → representative indices

  EliminationContext(const OrientedMatroid& m, const MaskTable& table)
      : t(table) {
    zero_at.assign(static_cast<std::size_t>(m.elements()), {});
    for (std::size_t r = 0; r < t.supp.size(); ++r) {
      for (int e = 0; e < m.elements(); ++e) {
        if (!((t.supp[r][e >> 6] >> (e & 63)) & 1ULL))
          zero_at[static_cast<std::size_t>(e)].push_back(static_cast<int>(r));
      }
    }
  }

  // Returns the first separator element without an eliminator, or -1.
  int check(int i, int j, int orient) const {
    const Words& xp = t.plus[static_cast<std::size_t>(i)];
    const Words& xm = t.minus[static_cast<std::size_t>(i)];
    const Words& yp = orient ? t.minus[static_cast<std::size_t>(j)]
                             : t.plus[static_cast<std::size_t>(j)];
    const Words& ym = orient ? t.plus[static_cast<std::size_t>(j)]
                             : t.minus[static_cast<std::size_t>(j)];
    Words sep{}, allow_p{}, allow_m{};
    bool any_sep = false;
    for (int w = 0; w < kW; ++w) {
      sep[w] = (xp[w] & ym[w]) | (xm[w] & yp[w]);
      any_sep = any_sep || sep[w];
      const std::uint64_t free = ~(xp[w] | xm[w]);
      // conformality is only demanded off the separator set
      allow_p[w] = (xp[w] | (yp[w] & free)) | sep[w];
      allow_m[w] = (xm[w] | (ym[w] & free)) | sep[w];
    }
    if (!any_sep) return -1;
    int missing = -1;
    for_each_bit(sep, [&](int e) {
      if (missing >= 0) return;
      bool found = false;
      for (int r : zero_at[static_cast<std::size_t>(e)]) {
        const Words& zp = t.plus[static_cast<std::size_t>(r)];
        const Words& zm = t.minus[static_cast<std::size_t>(r)];
        bool ok_pos = true, ok_neg = true;
        for (int w = 0; w < kW; ++w) {
          if ((zp[w] & ~allow_p[w]) | (zm[w] & ~allow_m[w])) ok_pos = false;
          if ((zm[w] & ~allow_p[w]) | (zp[w] & ~allow_m[w])) ok_neg = false;
          if (!ok_pos && !ok_neg) break;
        }
        if (ok_pos || ok_neg) {
          found = true;
          break;
        }
      }
      if (!found) missing = e;
    });
    return missing;
  }
};

void run_elimination(const OrientedMatroid& m, const MaskTable& t,
                     const ValidateOptions& opt, ValidationReport& rep) {
  const int R = m.pair_count();
  if (R < 2) return;
  EliminationContext ctx(m, t);

  auto describe = [&](int i, int j, int orient, int e) {
    std::ostringstream os;
    os << "elimination: no eliminator at element " << m.ground()->token(e)
       << " for pair (" << m.cocircuits()[static_cast<std::size_t>(i)].to_string()
       << ", "
       << (orient ? (-m.cocircuits()[static_cast<std::size_t>(j)]).to_string()
                  : m.cocircuits()[static_cast<std::size_t>(j)].to_string())
       << ")";
    return os.str();
  };

  const long long all_pairs = 2LL * R * (R - 1) / 2;
  const bool sample = opt.mode == ValidateMode::sampled &&
                      static_cast<long long>(opt.sample_pairs) < all_pairs;

  std::vector<std::string> fails;
  if (sample) {
    // draw the pair list up front so the checked set is seed-deterministic
    SplitMix64 rng = derive_stream(opt.seed, stream::kValidatePairs, 0);
    std::vector<std::array<int, 3>> picks;
    picks.reserve(opt.sample_pairs);
    for (std::size_t s = 0; s < opt.sample_pairs; ++s) {
      int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(R)));
      int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(R)));
      while (j == i) j = static_cast<int>(rng.below(static_cast<std::uint64_t>(R)));
      picks.push_back({i, j, static_cast<int>(rng.below(2))});
    }
    rep.sampled = true;
    rep.pairs_checked = picks.size();
#pragma omp parallel for schedule(dynamic, 256) if (opt.parallel)
    for (long long s = 0; s < static_cast<long long>(picks.size()); ++s) {
      const auto& p = picks[static_cast<std::size_t>(s)];
      const int e = ctx.check(p[0], p[1], p[2]);
      if (e >= 0) {
#pragma omp critical(omw_validate_fail)
        fails.push_back(describe(p[0], p[1], p[2], e));
      }
    }
  } else {
    rep.pairs_checked = static_cast<std::size_t>(all_pairs);
#pragma omp parallel for schedule(dynamic, 4) if (opt.parallel)
    for (int i = 0; i < R; ++i) {
      for (int j = i + 1; j < R; ++j) {
        for (int orient = 0; orient < 2; ++orient) {
          const int e = ctx.check(i, j, orient);
          if (e >= 0) {
#pragma omp critical(omw_validate_fail)
            fails.push_back(describe(i, j, orient, e));
          }
        }
      }
    }
  }
  for (auto& f : fails) add_failure(rep, std::move(f));
}

// --------------------------------------------------------------------------
// Full-mode covector axioms
// --------------------------------------------------------------------------

void run_full_axioms(const OrientedMatroid& m, const ValidateOptions& opt,
                     ValidationReport& rep) {
  if (m.elements() > 25) {
    add_failure(rep, "full validation is gated to ground sets of <= 25 "
                     "elements; use cocircuit-only or sampled mode");
    return;
  }
  std::vector<SignVector> span = covector_span(m, opt.span_limit);
  rep.covectors = span.size();
  std::unordered_set<SignVector, SignVectorHash> in_span(span.begin(),
                                                         span.end());
  // negation closure
  for (const SignVector& x : span) {
    if (!in_span.count(-x)) {
      add_failure(rep, "span not closed under negation at " + x.to_string());
      break;
    }
  }
  const long long L = static_cast<long long>(span.size());

  // composition closure, exhaustive when feasible, seeded sample otherwise
  const long long comp_budget = 40'000'000;
  std::vector<std::string> fails;
  if (L * L <= comp_budget) {
#pragma omp parallel for schedule(dynamic, 8) if (opt.parallel)
    for (long long i = 0; i < L; ++i) {
      for (long long j = 0; j < L; ++j) {
        SignVector z = span[static_cast<std::size_t>(i)].compose(
            span[static_cast<std::size_t>(j)]);
        if (!in_span.count(z)) {
#pragma omp critical(omw_full_fail)
          fails.push_back("span not closed under composition: " +
                          span[static_cast<std::size_t>(i)].to_string() + " ∘ " +
                          span[static_cast<std::size_t>(j)].to_string());
        }
      }
    }
  } else {
    SplitMix64 rng = derive_stream(opt.seed, stream::kValidatePairs, 1);
    for (long long s = 0; s < 1'000'000; ++s) {
      const auto& x = span[rng.below(static_cast<std::uint64_t>(L))];
      const auto& y = span[rng.below(static_cast<std::uint64_t>(L))];
      if (!in_span.count(x.compose(y))) {
        fails.push_back("span not closed under composition: " + x.to_string() +
                        " ∘ " + y.to_string());
        break;
      }
    }
  }

  // covector elimination in the equality form: Z(e) = 0 and Z = X∘Y off the
  // separator set of the pair
  const long long elim_budget = 1500;
  std::vector<std::vector<int>> zero_at(
      static_cast<std::size_t>(m.elements()));
  for (int v = 0; v < static_cast<int>(span.size()); ++v)
    for (int e = 0; e < m.elements(); ++e)
      if (span[static_cast<std::size_t>(v)].at(e) == Sign::zero)
        zero_at[static_cast<std::size_t>(e)].push_back(v);

  auto eliminate_pair = [&](const SignVector& x, const SignVector& y,
                            std::vector<std::string>& out) {
    const Words sep = x.separator_mask(y);
    if (words_empty(sep)) return;
    const SignVector comp = x.compose(y);
    const Words& cp = comp.plus_words();
    const Words& cm = comp.minus_words();
    for_each_bit(sep, [&](int e) {
      for (int v : zero_at[static_cast<std::size_t>(e)]) {
        const SignVector& z = span[static_cast<std::size_t>(v)];
        bool match = true;
        for (int w = 0; w < kW && match; ++w) {
          if (((z.plus_words()[w] ^ cp[w]) & ~sep[w]) |
              ((z.minus_words()[w] ^ cm[w]) & ~sep[w]))
            match = false;
        }
        if (match) return;
      }
      out.push_back("covector elimination fails at element " +
                    m.ground()->token(e) + " for (" + x.to_string() + ", " +
                    y.to_string() + ")");
    });
  };

  if (L <= elim_budget) {
#pragma omp parallel for schedule(dynamic, 4) if (opt.parallel)
    for (long long i = 0; i < L; ++i) {
      std::vector<std::string> local;
      for (long long j = i + 1; j < L; ++j)
        eliminate_pair(span[static_cast<std::size_t>(i)],
                       span[static_cast<std::size_t>(j)], local);
      if (!local.empty()) {
#pragma omp critical(omw_full_fail)
        fails.insert(fails.end(), local.begin(), local.end());
      }
    }
  } else {
    SplitMix64 rng = derive_stream(opt.seed, stream::kValidatePairs, 2);
    std::vector<std::string> local;
    for (long long s = 0; s < 200'000 && local.empty(); ++s) {
      const auto& x = span[rng.below(static_cast<std::uint64_t>(L))];
      const auto& y = span[rng.below(static_cast<std::uint64_t>(L))];
      eliminate_pair(x, y, local);
    }
    fails.insert(fails.end(), local.begin(), local.end());
  }
  for (auto& f : fails) add_failure(rep, std::move(f));
}

}  // namespace

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

std::vector<SignVector> covector_span(const OrientedMatroid& m,
                                      std::size_t limit) {
  std::vector<SignVector> gens;
  gens.reserve(static_cast<std::size_t>(m.signed_count()));
  for (int s = 0; s < m.signed_count(); ++s)
    gens.push_back(m.signed_cocircuit(s));

  std::unordered_set<SignVector, SignVectorHash> seen;
  std::vector<SignVector> out;
  SignVector zero(m.ground());
  seen.insert(zero);
  out.push_back(zero);
  for (std::size_t qi = 0; qi < out.size(); ++qi) {
    const SignVector x = out[qi];  // copy: out may reallocate
    for (const SignVector& c : gens) {
      SignVector z = x.compose(c);
      if (seen.insert(z).second) {
        if (seen.size() > limit)
          throw usage_error("covector span limit exceeded");
        out.push_back(std::move(z));
      }
    }
  }
  std::sort(out.begin(), out.end(), SignVectorLess{});
  return out;
}

bool is_independent(const OrientedMatroid& m, const std::vector<int>& subset) {
  Words amask{};
  for (int e : subset) {
    if (e < 0 || e >= m.elements())
      throw usage_error("independence test: element index out of range");
    const std::uint64_t bit = 1ULL << (e & 63);
    if (amask[e >> 6] & bit)
      throw usage_error("independence test: repeated element");
    amask[e >> 6] |= bit;
  }
  MaskTable t(m);
  for (int a : subset) {
    Words want{};
    want[a >> 6] |= 1ULL << (a & 63);
    bool found = false;
    for (std::size_t r = 0; r < t.supp.size() && !found; ++r) {
      bool eq = true;
      for (int w = 0; w < kW; ++w)
        if ((t.supp[r][w] & amask[w]) != want[w]) {
          eq = false;
          break;
        }
      found = eq;
    }
    if (!found) return false;
  }
  return true;
}

MatroidProfile profile(const OrientedMatroid& m) {
  MaskTable t(m);
  MatroidProfile p;
  p.rank = greedy_rank(m, t);

  Words covered{};
  for (const Words& s : t.supp)
    for (int w = 0; w < kW; ++w) covered[w] |= s[w];
  for (int e = 0; e < m.elements(); ++e)
    if (!((covered[e >> 6] >> (e & 63)) & 1ULL)) p.loops.push_back(e);

  for (std::size_t r = 0; r < t.supp.size(); ++r) {
    if (t.supp_size[r] == 1) {
      for_each_bit(t.supp[r], [&](int e) { p.coloops.push_back(e); });
    }
  }
  std::sort(p.coloops.begin(), p.coloops.end());
  p.coloops.erase(std::unique(p.coloops.begin(), p.coloops.end()),
                  p.coloops.end());

  p.uniform = uniform_profile(m, nullptr) && p.rank == m.rank();
  return p;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << (ok ? "valid" : "INVALID") << "; pairs checked " << pairs_checked
     << (sampled ? " (sampled)" : "");
  if (covectors) os << "; covectors " << covectors;
  for (const std::string& f : failures) os << "\n  " << f;
  return os.str();
}

ValidationReport validate(const OrientedMatroid& m,
                          const ValidateOptions& opt) {
  ValidationReport rep;
  MaskTable t(m);
  const int R = m.pair_count();

  // minimality: no cocircuit (either orientation) strictly below another
  {
    std::map<int, std::vector<int>> by_size;
    for (int r = 0; r < R; ++r) by_size[t.supp_size[static_cast<std::size_t>(r)]].push_back(r);
    for (auto small = by_size.begin(); small != by_size.end(); ++small) {
      for (auto big = std::next(small); big != by_size.end(); ++big) {
        for (int i : small->second) {
          for (int j : big->second) {
            if (!words_subset(t.supp[static_cast<std::size_t>(i)],
                              t.supp[static_cast<std::size_t>(j)]))
              continue;
            const SignVector& xi = m.cocircuits()[static_cast<std::size_t>(i)];
            const SignVector& xj = m.cocircuits()[static_cast<std::size_t>(j)];
            if (xi.conforms_to(xj) || (-xi).conforms_to(xj))
              add_failure(rep, "cocircuit " + xj.to_string() +
                                   " is not minimal: strictly above " +
                                   xi.to_string());
          }
        }
      }
    }
  }

  if (opt.check_rank) {
    const int r = greedy_rank(m, t);
    if (r != m.rank())
      add_failure(rep, "declared rank " + std::to_string(m.rank()) +
                           " but independence certificates give " +
                           std::to_string(r));
  }

  {
    std::string why;
    switch (opt.uniform) {
      case UniformExpectation::required:
        if (!uniform_profile(m, &why))
          add_failure(rep, "uniform profile required: " + why);
        break;
      case UniformExpectation::automatic: {
        // if every zero set has size rank-1, insist the profile is complete
        const int k = m.rank() - 1;
        bool all_k = k >= 0;
        for (const SignVector& x : m.cocircuits())
          if (m.elements() - x.support_size() != k) {
            all_k = false;
            break;
          }
        if (all_k && R > 0 && !uniform_profile(m, &why))
          add_failure(rep, "uniform-shaped zero sets but profile broken: " + why);
        break;
      }
      case UniformExpectation::skip:
        break;
    }
  }

  run_elimination(m, t, opt, rep);
  if (opt.mode == ValidateMode::full) run_full_axioms(m, opt, rep);

  finish_report(rep);
  return rep;
}

ValidationReport validate_raw(GroundPtr ground, int declared_rank,
                              const std::vector<SignVector>& cocircuits,
                              const ValidateOptions& opt) {
  // Symmetry and listing hygiene are checked on the literal list, because
  // OrientedMatroid's constructor silently restores negation partners and
  // drops duplicates — a hand-built list must not get that free pass.
  ValidationReport rep;
  std::map<SignVector, int, SignVectorLess> count;
  for (const SignVector& x : cocircuits) {
    if (x.support_size() == 0) {
      add_failure(rep, "zero vector listed as a cocircuit");
      continue;
    }
    ++count[x];
  }
  for (const auto& [x, c] : count) {
    if (c > 1) add_failure(rep, "cocircuit listed twice: " + x.to_string());
    if (count.find(-x) == count.end())
      add_failure(rep,
                  "negation partner missing for cocircuit " + x.to_string());
  }
  if (!rep.ok) {
    finish_report(rep);
    return rep;
  }
  return validate(OrientedMatroid(std::move(ground), declared_rank, cocircuits),
                  opt);
}

OrientedMatroid dual(const OrientedMatroid& m, int max_elements) {
  const int n = m.elements();
  if (n > max_elements || n > 12)
    throw usage_error("dual is gated to <= " +
                      std::to_string(std::min(max_elements, 12)) +
                      " elements (exhaustive 3^n enumeration)");
  MaskTable t(m);
  std::vector<SignVector> ortho;
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= 3;

#pragma omp parallel
  {
    std::vector<SignVector> local;
#pragma omp for schedule(static)
    for (long long code = 1; code < total; ++code) {
      SignVector v(m.ground());
      long long c = code;
      for (int e = 0; e < n; ++e) {
        const int d = static_cast<int>(c % 3);
        c /= 3;
        if (d == 1) v.set(e, Sign::plus);
        if (d == 2) v.set(e, Sign::minus);
      }
      bool ok = true;
      for (int r = 0; r < m.pair_count() && ok; ++r) {
        // orthogonality against the representative covers its negation
        bool agree = false, clash = false;
        for (int w = 0; w < kW; ++w) {
          agree = agree || ((v.plus_words()[w] & t.plus[static_cast<std::size_t>(r)][w]) |
                            (v.minus_words()[w] & t.minus[static_cast<std::size_t>(r)][w]));
          clash = clash || ((v.plus_words()[w] & t.minus[static_cast<std::size_t>(r)][w]) |
                            (v.minus_words()[w] & t.plus[static_cast<std::size_t>(r)][w]));
        }
        ok = (agree == clash);
      }
      if (ok) local.push_back(std::move(v));
    }
#pragma omp critical(omw_dual_merge)
    ortho.insert(ortho.end(), local.begin(), local.end());
  }

  // minimal nonzero orthogonal vectors are the dual cocircuits
  std::sort(ortho.begin(), ortho.end(),
            [](const SignVector& a, const SignVector& b) {
              const int sa = a.support_size(), sb = b.support_size();
              if (sa != sb) return sa < sb;
              return SignVector::compare(a, b) < 0;
            });
  std::vector<SignVector> minimal;
  std::vector<Words> kept;
  std::vector<int> kept_size;
  for (const SignVector& v : ortho) {
    const Words s = words_or(v.plus_words(), v.minus_words());
    const int sz = v.support_size();
    bool dominated = false;
    for (std::size_t i = 0; i < kept.size() && !dominated; ++i)
      dominated = kept_size[i] < sz && words_subset(kept[i], s);
    if (!dominated) {
      minimal.push_back(v);
      kept.push_back(s);
      kept_size.push_back(sz);
    }
  }
  return OrientedMatroid(m.ground(), n - m.rank(), std::move(minimal));
}

OrientedMatroid restriction(const OrientedMatroid& m, std::vector<int> subset,
                            std::size_t span_limit) {
  std::sort(subset.begin(), subset.end());
  if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
    throw usage_error("restriction subset has repeated elements");
  std::vector<std::string> tokens;
  for (int e : subset) {
    if (e < 0 || e >= m.elements())
      throw usage_error("restriction subset out of range");
    tokens.push_back(m.ground()->token(e));
  }
  GroundPtr sub = make_ground(std::move(tokens));

  const std::vector<SignVector> span = covector_span(m, span_limit);
  std::unordered_set<SignVector, SignVectorHash> seen;
  std::vector<SignVector> restricted;
  for (const SignVector& x : span) {
    SignVector y(sub);
    for (int i = 0; i < static_cast<int>(subset.size()); ++i)
      y.set(i, x.at(subset[static_cast<std::size_t>(i)]));
    if (y.is_zero()) continue;
    if (seen.insert(y).second) restricted.push_back(std::move(y));
  }

  std::sort(restricted.begin(), restricted.end(),
            [](const SignVector& a, const SignVector& b) {
              const int sa = a.support_size(), sb = b.support_size();
              if (sa != sb) return sa < sb;
              return SignVector::compare(a, b) < 0;
            });
  std::vector<SignVector> minimal;
  std::vector<Words> kept;
  std::vector<int> kept_size;
  for (const SignVector& v : restricted) {
    const Words s = words_or(v.plus_words(), v.minus_words());
    const int sz = v.support_size();
    bool dominated = false;
    for (std::size_t i = 0; i < kept.size() && !dominated; ++i)
      dominated = kept_size[i] < sz && words_subset(kept[i], s);
    if (!dominated) {
      minimal.push_back(v);
      kept.push_back(s);
      kept_size.push_back(sz);
    }
  }

  // rank of the subset inside the parent
  std::vector<int> indep;
  for (int e : subset) {
    indep.push_back(e);
    if (!is_independent(m, indep)) indep.pop_back();
  }
  return OrientedMatroid(sub, static_cast<int>(indep.size()),
                         std::move(minimal));
}

bool weak_map_leq(const OrientedMatroid& m1, const OrientedMatroid& m2) {
  require_same_ground(m1.ground(), m2.ground());
  MaskTable t1(m1);
  const int k1 = m1.rank() - 1;

  std::optional<ZeroSetIndex> index;
  try {
    index.emplace(m1);
  } catch (const std::exception&) {
    // not uniform-indexable: the exhaustive fallback below still decides
  }

  for (const SignVector& x2 : m2.cocircuits()) {
    const Words& ap = x2.plus_words();
    const Words& am = x2.minus_words();
    const Words amask = words_or(ap, am);
    Words cover{};

    auto absorb = [&](const Words& cp, const Words& cm) {
      for (int w = 0; w < kW; ++w)
        if ((cp[w] & am[w]) | (cm[w] & ap[w])) return;  // clashes on supp(x2)
      for (int w = 0; w < kW; ++w)
        cover[w] |= (cp[w] & ap[w]) | (cm[w] & am[w]);
    };
    auto covered = [&]() {
      for (int w = 0; w < kW; ++w)
        if (amask[w] & ~cover[w]) return false;
      return true;
    };

    if (index && k1 >= 0) {
      // candidate witnesses live on zero sets inside zero(x2)
      const std::vector<int> z2 = x2.zero_set();
      const int zn = static_cast<int>(z2.size());
      if (k1 <= zn && binom_ll(zn, k1) <= 100'000) {
        std::vector<int> pick(static_cast<std::size_t>(k1));
        std::vector<int> sel(static_cast<std::size_t>(k1));
        // iterate k1-subsets of z2
        for (int i = 0; i < k1; ++i) pick[static_cast<std::size_t>(i)] = i;
        bool more = k1 >= 0;
        if (k1 == 0) {
          const int r = index->pair_with_zero_set({});
          if (r >= 0) {
            absorb(t1.plus[static_cast<std::size_t>(r)], t1.minus[static_cast<std::size_t>(r)]);
            absorb(t1.minus[static_cast<std::size_t>(r)], t1.plus[static_cast<std::size_t>(r)]);
          }
          more = false;
        }
        while (more) {
          for (int i = 0; i < k1; ++i)
            sel[static_cast<std::size_t>(i)] = z2[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
          const int r = index->pair_with_zero_set(sel);
          if (r >= 0) {
            absorb(t1.plus[static_cast<std::size_t>(r)], t1.minus[static_cast<std::size_t>(r)]);
            absorb(t1.minus[static_cast<std::size_t>(r)], t1.plus[static_cast<std::size_t>(r)]);
          }
          // next combination
          int i = k1 - 1;
          while (i >= 0 && pick[static_cast<std::size_t>(i)] == zn - k1 + i) --i;
          if (i < 0) break;
          ++pick[static_cast<std::size_t>(i)];
          for (int q = i + 1; q < k1; ++q)
            pick[static_cast<std::size_t>(q)] = pick[static_cast<std::size_t>(q - 1)] + 1;
        }
      }
    }

    if (!covered()) {
      for (std::size_t r = 0; r < t1.plus.size() && !covered(); ++r) {
        absorb(t1.plus[r], t1.minus[r]);
        absorb(t1.minus[r], t1.plus[r]);
      }
    }
    if (!covered()) return false;
  }
  return true;
}

}  // namespace omw
