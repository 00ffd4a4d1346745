#include "omw/probability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "omw/errors.hpp"
#include "omw/instance.hpp"
#include "omw/prng.hpp"

namespace omw {

namespace {

int sgn_int(Sign s) { return static_cast<int>(s); }

// The two sign conditions riding on the wall {p, l} under direction choice
// u: the successor coordinate read with pair orientation (p,l), and the
// remaining coordinate read with the reversed orientation (l,p).
bool wall_pair_hit(int p, int l, int u, int coord_first, Sign want_first,
                   int coord_second, Sign want_second) {
  const int apl = sgn_int(alpha_sign(p, l));
  if (apl * delta_coord(u, coord_first) != sgn_int(want_first)) return false;
  if (-apl * delta_coord(u, coord_second) != sgn_int(want_second)) return false;
  return true;
}

}  // namespace

std::vector<CyclicTriple> compatible_references(const CyclicTriple& target) {
  std::vector<CyclicTriple> out;
  for (const CyclicTriple& c : CyclicTriple::all_classes())
    if (orientation_of(c, target.rep()) == target) out.push_back(c);
  if (out.size() != 4)
    throw verification_error("expected exactly 4 compatible references for " +
                             target.to_string());
  return out;
}

mpq_class prob_event_enumerate_ref(const CyclicTriple& target,
                                   const std::array<Sign, 3>& beta_targets,
                                   const CyclicTriple& ref) {
  const auto rep = target.rep();
  const int i = rep[0], j = rep[1], k = rep[2];
  const int l = target.missing();
  if (orientation_of(ref, rep) != target)
    throw usage_error("reference class " + ref.to_string() +
                      " does not orient the triple of " + target.to_string());
  for (Sign b : beta_targets)
    if (b == Sign::zero) throw usage_error("beta targets must be nonzero");

  const GroupElement gi = group_generator(i, l);
  const GroupElement gj = group_generator(j, l);
  const GroupElement gk = group_generator(k, l);

  long count = 0;
  for (int gm = 0; gm < 8; ++gm) {
    GroupElement acc;
    if (gm & 1) acc = acc.compose(gi);
    if (gm & 2) acc = acc.compose(gj);
    if (gm & 4) acc = acc.compose(gk);
    if (apply_group(acc, ref) != target) continue;
    for (int ui = 0; ui < 6; ++ui) {
      if (!wall_pair_hit(i, l, ui, j, beta_targets[1], k, beta_targets[2]))
        continue;
      for (int uj = 0; uj < 6; ++uj) {
        if (!wall_pair_hit(j, l, uj, k, beta_targets[2], i, beta_targets[0]))
          continue;
        for (int uk = 0; uk < 6; ++uk)
          if (wall_pair_hit(k, l, uk, i, beta_targets[0], j, beta_targets[1]))
            ++count;
      }
    }
  }
  mpq_class out(count, 1728);
  out.canonicalize();
  return out;
}

mpq_class prob_event_enumerate(const CyclicTriple& target,
                               const std::array<Sign, 3>& beta_targets) {
  const std::vector<CyclicTriple> refs = compatible_references(target);
  mpq_class first = prob_event_enumerate_ref(target, beta_targets, refs[0]);
  for (std::size_t r = 1; r < refs.size(); ++r)
    if (prob_event_enumerate_ref(target, beta_targets, refs[r]) != first)
      throw verification_error(
          "event probability depends on the conditioning reference at " +
          target.to_string());
  return first;
}

mpq_class prob_class_marginal(const CyclicTriple& target,
                              const CyclicTriple& ref) {
  const auto rep = target.rep();
  const int l = target.missing();
  if (orientation_of(ref, rep) != target)
    throw usage_error("reference class " + ref.to_string() +
                      " does not orient the triple of " + target.to_string());
  const GroupElement gi = group_generator(rep[0], l);
  const GroupElement gj = group_generator(rep[1], l);
  const GroupElement gk = group_generator(rep[2], l);
  long count = 0;
  for (int gm = 0; gm < 8; ++gm) {
    GroupElement acc;
    if (gm & 1) acc = acc.compose(gi);
    if (gm & 2) acc = acc.compose(gj);
    if (gm & 4) acc = acc.compose(gk);
    if (apply_group(acc, ref) == target) ++count;
  }
  mpq_class out(count, 8);
  out.canonicalize();
  return out;
}

mpq_class prob_pair_condition_marginal(int p, int l, int coord_first,
                                       int coord_second, Sign want_first,
                                       Sign want_second) {
  long count = 0;
  for (int u = 0; u < 6; ++u)
    if (wall_pair_hit(p, l, u, coord_first, want_first, coord_second,
                      want_second))
      ++count;
  mpq_class out(count, 6);
  out.canonicalize();
  return out;
}

mpq_class exact_omega_probability(const LatticePoint& x, int N) {
  mpq_class total = 0;
  for (const CyclicTriple& c : CyclicTriple::all_classes()) {
    const auto rep = c.rep();
    for (int bm = 0; bm < 8; ++bm) {
      const std::array<Sign, 3> betas{(bm & 1) ? Sign::plus : Sign::minus,
                                      (bm & 2) ? Sign::plus : Sign::minus,
                                      (bm & 4) ? Sign::plus : Sign::minus};
      bool feasible = true;
      for (int m = 0; m < 3 && feasible; ++m)
        feasible = 2 * r_size(x, rep[m], betas[m], N) >= N;
      if (!feasible) continue;
      // the conditions pin the beta values, so the (class, betas) events are
      // disjoint and the membership probability is their plain sum
      total += prob_event_enumerate(c, betas) / 2;
    }
  }
  return total;
}

namespace {

// Wall bits and direction choices only — the jitter never enters the Ω
// computation, so the Monte Carlo loop skips sampling it.
ConstructionInstance mc_instance(int N, std::uint64_t sub_seed) {
  ConstructionInstance inst;
  inst.N = N;
  inst.seed = sub_seed;
  inst.delta = mpq_class(1);
  const int E = base_element_count(N);
  inst.g.resize(static_cast<std::size_t>(E));
  inst.u.resize(static_cast<std::size_t>(E));
  inst.eps.assign(static_cast<std::size_t>(E),
                  {mpq_class(0), mpq_class(0), mpq_class(0)});
  SplitMix64 gs = derive_stream(sub_seed, stream::kGBits, 0);
  for (int e = 0; e < E; ++e)
    inst.g[static_cast<std::size_t>(e)] = static_cast<int>(gs.next() & 1u);
  SplitMix64 us = derive_stream(sub_seed, stream::kUChoice, 0);
  for (int e = 0; e < E; ++e)
    inst.u[static_cast<std::size_t>(e)] = static_cast<int>(us.below(6));
  return inst;
}

}  // namespace

MonteCarloReport montecarlo_omega(std::uint64_t trials, int N,
                                  std::uint64_t seed) {
  if (trials == 0) throw usage_error("monte carlo needs at least one trial");
  if (N < 1) throw usage_error("monte carlo needs N >= 1");

  MonteCarloReport rep;
  rep.N = N;
  rep.trials = trials;
  for (long long t = -N; t <= N; ++t) {
    LatticePoint p;
    p.x = {0, 0, 0, t};
    rep.points.push_back(p.canonicalized());
  }
  const std::size_t P = rep.points.size();
  rep.exact.reserve(P);
  for (const LatticePoint& p : rep.points)
    rep.exact.push_back(exact_omega_probability(p, N));
  rep.hits.assign(P, 0);

  std::vector<std::vector<std::uint64_t>> both(
      P, std::vector<std::uint64_t>(P, 0));
  std::vector<char> bit(P, 0);
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    SplitMix64 s = derive_stream(seed, stream::kMonteCarlo, trial);
    const ConstructionInstance inst = mc_instance(N, s.next());
    for (std::size_t a = 0; a < P; ++a)
      bit[a] = omega_member(inst, rep.points[a]) ? 1 : 0;
    for (std::size_t a = 0; a < P; ++a) {
      if (!bit[a]) continue;
      ++rep.hits[a];
      for (std::size_t b = a + 1; b < P; ++b)
        if (bit[b]) ++both[a][b];
    }
  }

  const double T = static_cast<double>(trials);
  rep.correlation_bound = 4.0 / std::sqrt(T);
  rep.frequencies_within_four_sigma = true;
  rep.above_lower_bound = true;
  const double floor_val = 1.0 / 864.0;
  for (std::size_t a = 0; a < P; ++a) {
    const double p = rep.exact[a].get_d();
    const double freq = static_cast<double>(rep.hits[a]) / T;
    const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-300) / T);
    const double dev = std::abs(freq - p) / sigma;
    rep.deviation_sigmas.push_back(dev);
    rep.max_deviation_sigmas = std::max(rep.max_deviation_sigmas, dev);
    if (dev > 4.0) rep.frequencies_within_four_sigma = false;
    if (freq < floor_val - 4.0 * sigma) rep.above_lower_bound = false;
  }
  rep.correlations_null = true;
  for (std::size_t a = 0; a < P; ++a) {
    for (std::size_t b = a + 1; b < P; ++b) {
      const double na = static_cast<double>(rep.hits[a]);
      const double nb = static_cast<double>(rep.hits[b]);
      const double nab = static_cast<double>(both[a][b]);
      const double da = std::sqrt(na * (T - na));
      const double db = std::sqrt(nb * (T - nb));
      const double corr = (da > 0.0 && db > 0.0)
                              ? (T * nab - na * nb) / (da * db)
                              : 0.0;
      rep.max_abs_correlation =
          std::max(rep.max_abs_correlation, std::abs(corr));
    }
  }
  if (rep.max_abs_correlation > rep.correlation_bound)
    rep.correlations_null = false;
  rep.pass = rep.frequencies_within_four_sigma && rep.above_lower_bound &&
             rep.correlations_null;
  return rep;
}

std::string MonteCarloReport::summary() const {
  std::ostringstream os;
  os << "monte carlo N=" << N << " trials=" << trials << "\n";
  const double T = static_cast<double>(trials);
  for (std::size_t a = 0; a < points.size(); ++a) {
    os << "  " << points[a].to_string() << " freq "
       << static_cast<double>(hits[a]) / T << " exact "
       << exact[a].get_str() << " (" << exact[a].get_d() << ", deviation "
       << deviation_sigmas[a] << " sigma)\n";
  }
  os << "  max deviation " << max_deviation_sigmas << " sigma; max |corr| "
     << max_abs_correlation << " (bound " << correlation_bound << "); "
     << (pass ? "pass" : "FAIL");
  return os.str();
}

bool threshold_bound_below_one(long long N) {
  if (N < 1) throw usage_error("threshold bound needs N >= 1");
  const unsigned long n = static_cast<unsigned long>(N);
  mpz_class qn_num, qn_den;
  mpz_ui_pow_ui(qn_num.get_mpz_t(), 863, n);
  mpz_ui_pow_ui(qn_den.get_mpz_t(), 864, n);
  // 863 is prime and does not divide 864, so these fractions are already in
  // lowest terms and canonicalize() (a giant gcd) can be skipped
  const mpq_class qn(qn_num, qn_den);
  const mpq_class one(1);
  const mpz_class B = 2 * mpz_class(static_cast<long>(N)) + 1;
  const mpz_class B3 = B * B * B;
  if (N % 2 == 0) {
    mpz_class h_num, h_den;
    mpz_ui_pow_ui(h_num.get_mpz_t(), 863, n / 2);
    mpz_ui_pow_ui(h_den.get_mpz_t(), 864, n / 2);
    const mpq_class half_power(h_num, h_den);
    return mpq_class(3 * B3) * half_power + qn < one;
  }
  // odd N: 3B³·q^{N/2} + q^N < 1  ⟺  9B⁶·q^N < (1 − q^N)², both sides
  // positive whenever the right side is — squaring keeps it rational
  const mpq_class rhs = one - qn;
  if (rhs <= 0) return false;
  return mpq_class(9 * B3 * B3) * qn < rhs * rhs;
}

long long min_N_threshold() {
  const double lnq = std::log(863.0 / 864.0);
  const double ln3 = std::log(3.0);
  long long candidate = -1;
  for (long long N = 1; N <= 2'000'000; ++N) {
    const double l1 =
        ln3 + 3.0 * std::log(static_cast<double>(2 * N + 1)) +
        0.5 * static_cast<double>(N) * lnq;
    const double l2 = static_cast<double>(N) * lnq;
    const double hi = std::max(l1, l2);
    const double lo = std::min(l1, l2);
    if (hi + std::log1p(std::exp(lo - hi)) < 0.0) {
      candidate = N;
      break;
    }
  }
  if (candidate < 0)
    throw verification_error("no threshold candidate found below 2e6");
  // the float scan can be off by a step near the boundary; settle it exactly
  while (!threshold_bound_below_one(candidate)) ++candidate;
  while (candidate > 1 && threshold_bound_below_one(candidate - 1))
    --candidate;
  if (!threshold_bound_below_one(candidate) ||
      (candidate > 1 && threshold_bound_below_one(candidate - 1)))
    throw verification_error("threshold certification failed at N = " +
                             std::to_string(candidate));
  return candidate;
}

}  // namespace omw
