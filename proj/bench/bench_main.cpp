// Microbenchmarks for the parallel kernels against their serial
// counterparts: the configuration-matroid scan versus the raw serial
// reference, the elimination audit with its parallel switch off and on, and
// the thread-scaling of the oracle assembly and the flip-support scan.
// Each timing is the best of a few repeats; agreement checks run alongside
// so a speedup never comes from computing something different.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "omw/construction.hpp"
#include "omw/core_ops.hpp"
#include "omw/flips.hpp"
#include "omw/geometry.hpp"
#include "omw/instance.hpp"
#include "omw/matroid.hpp"

using namespace omw;

namespace {

double time_best(int repeats, const std::function<void()>& fn) {
  double best = -1;
  for (int r = 0; r < repeats; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (best < 0 || secs < best) best = secs;
  }
  return best;
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void report(const char* name, const char* detail, double serial,
            double parallel, bool agree) {
  std::printf("%-24s %-28s serial %8.1f ms | parallel %8.1f ms | "
              "speedup %4.1fx | agree: %s\n",
              name, detail, serial * 1e3, parallel * 1e3,
              parallel > 0 ? serial / parallel : 0.0, agree ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel benchmarks: serial references versus the OpenMP paths"};
  int N = 2;
  std::uint64_t seed = 5;
  int repeats = 3;
  app.add_option("--n", N, "instance scale (default 2)");
  app.add_option("--seed", seed, "instance seed (default 5)");
  app.add_option("--repeat", repeats, "repeats per timing, best kept");
  CLI11_PARSE(app, argc, argv);

  const int threads = max_threads();
  std::printf("threads available: %d%s\n", threads,
#ifdef _OPENMP
              ""
#else
              " (OpenMP disabled at build time)"
#endif
  );

  ConstructionInstance inst = sample_instance(N, seed);
  const LiftingOM lifting = build_with_recovery(inst);
  std::printf("instance: scale %d, seed %llu, %d elements, %d cocircuit "
              "pairs\n\n",
              inst.N, static_cast<unsigned long long>(inst.seed),
              lifting.matroid.elements(), lifting.matroid.pair_count());

  // 1. Configuration matroid: the parallel coatom scan against the raw
  //    serial kernel-solve reference.
  {
    const RationalVectorConfig cfg = perturbed_config(inst);
    OrientedMatroid fast = om_of_config(cfg);
    OrientedMatroid slow = om_of_config_reference(cfg);
    const bool agree = fast == slow;
    const double t_fast =
        time_best(repeats, [&] { fast = om_of_config(cfg); });
    const double t_slow =
        time_best(repeats, [&] { slow = om_of_config_reference(cfg); });
    const std::string detail =
        "(" + std::to_string(cfg.vectors.size()) + " tilted normals)";
    report("configuration matroid", detail.c_str(), t_slow, t_fast, agree);
  }

  // 2. Elimination audit: the same validation with the parallel switch off
  //    and on.
  {
    ValidateOptions serial_opt;
    serial_opt.mode = ValidateMode::cocircuit_only;
    serial_opt.uniform = UniformExpectation::required;
    serial_opt.parallel = false;
    ValidateOptions parallel_opt = serial_opt;
    parallel_opt.parallel = true;
    ValidationReport sr, pr;
    const double t_serial =
        time_best(repeats, [&] { sr = validate(lifting.matroid, serial_opt); });
    const double t_parallel = time_best(
        repeats, [&] { pr = validate(lifting.matroid, parallel_opt); });
    const std::string detail =
        "(" + std::to_string(lifting.matroid.pair_count()) + " pairs)";
    report("elimination audit", detail.c_str(), t_serial, t_parallel,
           sr.ok && pr.ok && sr.pairs_checked == pr.pairs_checked);
  }

  // 3. Oracle assembly: the per-subset cocircuit oracle on one thread versus
  //    all of them.
  {
    LiftingOM one = lifting;
    LiftingOM many = lifting;
    const double t_one = time_best(repeats, [&] {
      set_threads(1);
      ConstructionInstance copy = inst;
      one = build_entangled_lifting(copy);
    });
    const double t_many = time_best(repeats, [&] {
      set_threads(threads);
      ConstructionInstance copy = inst;
      many = build_entangled_lifting(copy);
    });
    set_threads(threads);
    const long long subsets =
        static_cast<long long>(lifting.matroid.pair_count());
    const std::string detail = "(" + std::to_string(subsets) + " subsets)";
    report("oracle assembly", detail.c_str(), t_one, t_many,
           canonical_key(one) == canonical_key(many));
  }

  // 4. Flip-support scan on one thread versus all of them.
  {
    std::vector<FlipWitness> one, many;
    const double t_one = time_best(repeats, [&] {
      set_threads(1);
      one = find_flip_supports(lifting);
    });
    const double t_many = time_best(repeats, [&] {
      set_threads(threads);
      many = find_flip_supports(lifting);
    });
    set_threads(threads);
    bool agree = one.size() == many.size();
    for (std::size_t i = 0; agree && i < one.size(); ++i)
      agree = one[i].support == many[i].support;
    const std::string detail =
        "(" + std::to_string(one.size()) + " supports found)";
    report("flip-support scan", detail.c_str(), t_one, t_many, agree);
  }

  return 0;
}
