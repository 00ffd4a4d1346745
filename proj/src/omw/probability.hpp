#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "omw/exactq.hpp"
#include "omw/group_action.hpp"
#include "omw/lattice.hpp"

namespace omw {

// ---------------------------------------------------------------------------
// Exact event enumeration
// ---------------------------------------------------------------------------

// The four classes that orient `target`'s own triple the way `target` does.
// These are exactly the admissible conditioning states of the triangle walls:
// the through-axis walls cannot change that one orientation bit.
std::vector<CyclicTriple> compatible_references(const CyclicTriple& target);

// Probability, conditioned on the triangle walls leaving the reference class
// `ref`, that the three walls through the missing axis turn `ref` into
// `target` AND the six wall-sign conditions come out as `beta_targets`.
// Exhaustive enumeration of the 8 × 6³ = 1728 joint values of the three wall
// bits and three direction choices; the denominator is exactly 1728.
// `beta_targets` is indexed by the positions of target.rep().
mpq_class prob_event_enumerate_ref(const CyclicTriple& target,
                                   const std::array<Sign, 3>& beta_targets,
                                   const CyclicTriple& ref);

// Same, but evaluated against every compatible reference, with the results
// checked for agreement (the conditioning state never matters).
mpq_class prob_event_enumerate(const CyclicTriple& target,
                               const std::array<Sign, 3>& beta_targets);

// Marginal of the class part alone: the fraction of the 8 wall-bit
// combinations turning `ref` into `target`.  Equals 1/4 for every target and
// compatible reference.
mpq_class prob_class_marginal(const CyclicTriple& target,
                              const CyclicTriple& ref);

// Marginal of the two sign conditions riding on the wall {p, through-axis}:
// the condition pair reads sign(α_{p,l}·u^a) and sign(α_{l,p}·u^b) against
// the two wanted signs.  Out of the 6 direction choices at least one hits
// any wanted pair, so this is always ≥ 1/6.
mpq_class prob_pair_condition_marginal(int p, int l, int coord_first,
                                       int coord_second, Sign want_first,
                                       Sign want_second);

// Unconditional probability that a fixed point x ∈ Q★ lands in Ω when the
// wall bits and directions are drawn uniformly: sum over the 8 classes and 8
// beta assignments of ½ · (run-size feasibility) · event probability.  The ½
// is the chance the triangle walls orient the class's own triple correctly.
mpq_class exact_omega_probability(const LatticePoint& x, int N);

// ---------------------------------------------------------------------------
// Monte Carlo cross-check
// ---------------------------------------------------------------------------

struct MonteCarloReport {
  int N = 0;
  std::uint64_t trials = 0;
  std::vector<LatticePoint> points;     // the sampled axis-4 line, t = −N..N
  std::vector<mpq_class> exact;         // per-point membership probability
  std::vector<std::uint64_t> hits;      // per-point membership tallies
  std::vector<double> deviation_sigmas; // |freq − exact| in binomial sigmas
  double max_deviation_sigmas = 0.0;
  double max_abs_correlation = 0.0;
  double correlation_bound = 0.0;       // 4 / sqrt(trials)
  bool frequencies_within_four_sigma = false;
  bool above_lower_bound = false;       // freq ≥ 1/864 − 4σ everywhere
  bool correlations_null = false;       // pairwise |corr| within the bound
  bool pass = false;
  std::string summary() const;
};

// Draws `trials` fresh wall-bit/direction samples and tallies Ω membership
// of the 2N+1 points on the axis-4 line through the origin (their triangle
// offsets are all zero, so the per-point events ride on disjoint wall
// variables and should be uncorrelated).  Compares per-point frequencies
// against exact_omega_probability at four binomial sigmas.
MonteCarloReport montecarlo_omega(std::uint64_t trials, int N,
                                  std::uint64_t seed);

// ---------------------------------------------------------------------------
// Density threshold
// ---------------------------------------------------------------------------

// Exact test of 3(2N+1)³·(863/864)^{N/2} + (863/864)^N < 1.  For odd N the
// half power is certified by squaring both sides of the rearranged
// inequality, keeping everything rational.
bool threshold_bound_below_one(long long N);

// Least N making the bound drop below one.  A floating-point scan in the log
// domain locates the candidate; the returned value and its predecessor are
// then certified with threshold_bound_below_one.
long long min_N_threshold();

}  // namespace omw
