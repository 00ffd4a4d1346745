// Command line front end: every library operation behind a subcommand, all
// I/O as JSON over files or stdin/stdout, so each artifact is reproducible
// from an instance file and a command line.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 degeneracy
// retry budget exhausted.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "omw/construction.hpp"
#include "omw/core_ops.hpp"
#include "omw/errors.hpp"
#include "omw/flips.hpp"
#include "omw/gdagger.hpp"
#include "omw/geometry.hpp"
#include "omw/instance.hpp"
#include "omw/lattice.hpp"
#include "omw/matroid.hpp"
#include "omw/probability.hpp"

namespace {

using namespace omw;

// Empty path (or "-") means the standard stream.
nlohmann::json read_json_input(const std::string& path) {
  std::string text;
  if (path.empty() || path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw usage_error("bad JSON in " + (path.empty() ? "stdin" : path) + ": " +
                      e.what());
  }
}

void write_text_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw usage_error("cannot write " + path);
  out << text;
}

void write_json_output(const std::string& path, const nlohmann::json& j) {
  write_text_output(path, j.dump(2) + "\n");
}

// Matroid files carry "elements"/"rank"/"cocircuits"; lifting files add
// "lift_element".  Loads either, reporting which it saw.
struct LoadedMatroid {
  OrientedMatroid matroid;
  std::optional<LiftingOM> lifting;
};

LoadedMatroid load_matroid_or_lifting(const std::string& path) {
  const nlohmann::json j = read_json_input(path);
  if (j.is_object() && j.contains("lift_element")) {
    LiftingOM m = LiftingOM::from_json(j);
    OrientedMatroid copy = m.matroid;
    return {std::move(copy), std::move(m)};
  }
  return {OrientedMatroid::from_json(j), std::nullopt};
}

LiftingOM require_lifting(const std::string& path, const char* who) {
  LoadedMatroid in = load_matroid_or_lifting(path);
  if (!in.lifting)
    throw usage_error(std::string(who) +
                      " needs a lifting file (with a lift_element key)");
  return std::move(*in.lifting);
}

ValidateMode parse_mode(const std::string& s) {
  if (s == "cocircuit-only") return ValidateMode::cocircuit_only;
  if (s == "sampled") return ValidateMode::sampled;
  if (s == "full") return ValidateMode::full;
  throw usage_error("unknown validation mode: " + s);
}

// ---------------------------------------------------------------------------
// Subcommand bodies (return the process exit code)
// ---------------------------------------------------------------------------

int run_construct(int n, std::uint64_t seed, std::optional<int> delta_exp,
                  const std::string& out) {
  ConstructionInstance inst;
  if (delta_exp) {
    if (*delta_exp < 1 || *delta_exp > 4096)
      throw usage_error("--delta-exp must be in [1, 4096]");
    const mpq_class delta(mpz_class(1), mpz_class(1) << *delta_exp);
    inst = sample_instance(n, seed, delta);
  } else {
    inst = sample_instance(n, seed);
  }
  write_json_output(out, inst.to_json());
  return 0;
}

int run_build(const std::string& instance_path, const std::string& out,
              const std::string& out_instance, const std::string& report_path,
              int max_attempts) {
  ConstructionInstance inst =
      ConstructionInstance::from_json(read_json_input(instance_path));
  BuildReport rep;
  const LiftingOM m = build_with_recovery(inst, max_attempts, &rep);
  if (rep.attempts > 1)
    std::cerr << "note: built after " << rep.attempts
              << " attempts; jitter differs from the instance file (use "
                 "--out-instance to keep the rebuilt parameters)\n";
  write_json_output(out, m.to_json());
  if (!out_instance.empty()) save_instance(inst, out_instance);
  if (!report_path.empty())
    write_json_output(report_path,
                      nlohmann::json{{"ok", rep.ok()},
                                     {"attempts", rep.attempts},
                                     {"delta", rep.delta_used},
                                     {"summary", rep.summary()}});
  return 0;
}

int run_validate(const std::string& matroid_path, const std::string& mode_str,
                 std::size_t sample_pairs, std::optional<std::uint64_t> seed,
                 bool require_uniform, const std::string& out) {
  LoadedMatroid in = load_matroid_or_lifting(matroid_path);
  ValidateOptions opt;
  opt.mode = parse_mode(mode_str);
  if (opt.mode == ValidateMode::sampled) {
    if (!seed) throw usage_error("sampled validation needs --seed");
    opt.seed = *seed;
    opt.sample_pairs = sample_pairs;
  }
  if (require_uniform) opt.uniform = UniformExpectation::required;
  const ValidationReport rep = validate(in.matroid, opt);
  bool lifting_ok = true;
  std::string lifting_note = "not a lifting file";
  if (in.lifting) {
    try {
      in.lifting->check_lifting();
      lifting_note = "lifting check passed";
    } catch (const verification_error& e) {
      lifting_ok = false;
      lifting_note = e.what();
    }
  }
  const MatroidProfile prof = profile(in.matroid);
  write_json_output(out,
                    nlohmann::json{{"ok", rep.ok && lifting_ok},
                                   {"elements", in.matroid.ground()->size()},
                                   {"rank", in.matroid.rank()},
                                   {"cocircuit-pairs", in.matroid.pair_count()},
                                   {"uniform", prof.uniform},
                                   {"mode", mode_str},
                                   {"pairs-checked", rep.pairs_checked},
                                   {"lifting", lifting_note},
                                   {"summary", rep.summary()}});
  if (!rep.ok || !lifting_ok) {
    for (const std::string& f : rep.failures)
      std::cerr << "validate: " << f << "\n";
    if (!lifting_ok) std::cerr << "validate: " << lifting_note << "\n";
    return 1;
  }
  return 0;
}

int run_flipgraph(const std::string& seed_path, long long budget_vertices,
                  long long budget_edges, double budget_seconds,
                  const std::string& out, const std::string& resume_path) {
  const LiftingOM seed = require_lifting(seed_path, "flipgraph");
  BfsBudget budget;
  budget.max_vertices = budget_vertices;
  budget.max_edges = budget_edges;
  budget.max_seconds = budget_seconds;

  std::optional<FlipGraph> prior;
  if (!resume_path.empty()) {
    std::ifstream in(resume_path);
    if (!in) throw usage_error("cannot open " + resume_path);
    prior = load_flip_graph_jsonl(in);
  }

  std::ofstream file_out;
  std::ostream* sink_stream = &std::cout;
  if (!out.empty() && out != "-") {
    file_out.open(out);
    if (!file_out) throw usage_error("cannot write " + out);
    sink_stream = &file_out;
  }
  auto sink = [sink_stream](const nlohmann::json& record) {
    (*sink_stream) << record.dump() << "\n";
  };

  const FlipGraph g =
      flip_graph_bfs(seed, budget, sink, prior ? &*prior : nullptr);
  std::cerr << "flipgraph: " << g.vertices.size() << " vertices ("
            << g.expanded_count() << " expanded), " << g.edges.size()
            << " edges, " << (g.complete ? "complete" : "budget hit") << "\n";
  return 0;
}

int run_omega(const std::string& instance_path, const std::string& out) {
  const ConstructionInstance inst =
      ConstructionInstance::from_json(read_json_input(instance_path));
  if (inst.N < 2)
    std::cerr << "note: run-length thresholds are trivial below N = 2; the "
                 "special set is computed literally\n";
  const std::vector<OmegaCertificate> omega = omega_set(inst);
  nlohmann::json points = nlohmann::json::array();
  for (const OmegaCertificate& c : omega) points.push_back(c.to_json());
  write_json_output(out, nlohmann::json{{"n", inst.N},
                                        {"seed", inst.seed},
                                        {"size", omega.size()},
                                        {"small-n", inst.N < 2},
                                        {"points", points}});
  return 0;
}

int run_gdagger(const std::string& instance_path,
                const std::string& lifting_path, bool search,
                std::size_t budget, const std::string& witness_lifting_out,
                const std::string& witness_instance_out,
                const std::string& report_path, const std::string& out) {
  const ConstructionInstance inst =
      ConstructionInstance::from_json(read_json_input(instance_path));
  if (search) {
    const NonMemberSearchReport rep = find_non_member(inst, budget);
    write_json_output(out, rep.to_json());
    if (!report_path.empty()) write_json_output(report_path, rep.to_json());
    if (rep.found) {
      if (!witness_lifting_out.empty())
        write_json_output(witness_lifting_out, rep.witness->to_json());
      if (!witness_instance_out.empty())
        save_instance(*rep.witness_instance, witness_instance_out);
    }
    return 0;  // absence of a witness is a reported outcome, not a failure
  }
  const LiftingOM m = require_lifting(lifting_path, "gdagger");
  const GDaggerReport rep = gdagger_check(m, inst);
  nlohmann::json j{{"member", rep.member},
                   {"vacuous", rep.vacuous},
                   {"small-n", rep.small_n},
                   {"points", rep.omega_points},
                   {"checks-a", rep.checks_a},
                   {"checks-b", rep.checks_b},
                   {"checks-c", rep.checks_c},
                   {"vacuous-c", rep.vacuous_c},
                   {"failures", rep.failures},
                   {"summary", rep.summary()}};
  write_json_output(out, j);
  if (!report_path.empty()) write_json_output(report_path, j);
  return rep.member ? 0 : 1;
}

int run_closure(const std::string& instance_path, int depth,
                long long budget_vertices, double budget_seconds,
                const std::string& report_path, const std::string& out) {
  const ConstructionInstance inst =
      ConstructionInstance::from_json(read_json_input(instance_path));
  BfsBudget budget;
  budget.max_vertices = budget_vertices;
  budget.max_seconds = budget_seconds;
  const ExperimentRecord rec = flip_closure_experiment(inst, depth, budget);
  write_json_output(out, rec.to_json());
  if (!report_path.empty()) write_json_output(report_path, rec.to_json());
  if (rec.hypotheses_hold && !rec.closure_holds) {
    std::cerr << "closure: a visited lifting failed the membership check "
                 "although the density hypotheses held\n";
    return 1;
  }
  return 0;
}

int run_prob_enum(int n, std::optional<std::uint64_t> mc_trials,
                  std::optional<std::uint64_t> seed, const std::string& out) {
  const mpq_class bound(1, 864);
  bool all_above = true;
  nlohmann::json rows = nlohmann::json::array();
  for (const CyclicTriple& target : CyclicTriple::all_classes()) {
    for (int mask = 0; mask < 8; ++mask) {
      std::array<Sign, 3> betas{};
      for (int i = 0; i < 3; ++i)
        betas[static_cast<std::size_t>(i)] =
            (mask >> i) & 1 ? Sign::plus : Sign::minus;
      const mpq_class p = prob_event_enumerate(target, betas);
      const bool above = p >= bound;
      all_above = all_above && above;
      std::string beta_str;
      for (const Sign b : betas) beta_str.push_back(to_char(b));
      rows.push_back(nlohmann::json{{"class", target.to_string()},
                                    {"betas", beta_str},
                                    {"probability", p.get_str()},
                                    {"at-least-1/864", above}});
    }
  }
  nlohmann::json j{{"targets", rows},
                   {"all-at-least-1/864", all_above},
                   {"n", n}};
  {
    LatticePoint origin;
    j["origin-membership-probability"] =
        exact_omega_probability(origin, n).get_str();
  }
  bool mc_ok = true;
  if (mc_trials) {
    if (!seed) throw usage_error("--mc-trials needs --seed");
    const MonteCarloReport mc = montecarlo_omega(*mc_trials, n, *seed);
    mc_ok = mc.pass;
    j["montecarlo"] =
        nlohmann::json{{"trials", mc.trials},
                       {"max-deviation-sigmas", mc.max_deviation_sigmas},
                       {"max-abs-correlation", mc.max_abs_correlation},
                       {"correlation-bound", mc.correlation_bound},
                       {"within-four-sigma", mc.frequencies_within_four_sigma},
                       {"above-lower-bound", mc.above_lower_bound},
                       {"correlations-null", mc.correlations_null},
                       {"pass", mc.pass},
                       {"summary", mc.summary()}};
  }
  write_json_output(out, j);
  return (all_above && mc_ok) ? 0 : 1;
}

int run_min_n(const std::string& out) {
  const long long m = min_N_threshold();
  write_json_output(out,
                    nlohmann::json{{"min-n", m},
                                   {"bound-below-one-at", m},
                                   {"holds", threshold_bound_below_one(m)},
                                   {"fails-at-predecessor",
                                    !threshold_bound_below_one(m - 1)}});
  return 0;
}

int run_om_dual(const std::string& matroid_path, const std::string& out) {
  const LoadedMatroid in = load_matroid_or_lifting(matroid_path);
  write_json_output(out, dual(in.matroid).to_json());
  return 0;
}

int run_om_restrict(const std::string& matroid_path,
                    const std::vector<std::string>& tokens,
                    const std::string& out) {
  const LoadedMatroid in = load_matroid_or_lifting(matroid_path);
  if (tokens.empty()) throw usage_error("restriction needs --elements");
  std::vector<int> subset;
  subset.reserve(tokens.size());
  for (const std::string& t : tokens)
    subset.push_back(in.matroid.ground()->index_of(t));
  write_json_output(out, restriction(in.matroid, std::move(subset)).to_json());
  return 0;
}

int run_om_check(const std::string& matroid_path, const std::string& out) {
  const LoadedMatroid in = load_matroid_or_lifting(matroid_path);
  ValidateOptions opt;
  opt.mode = in.matroid.ground()->size() <= 25 ? ValidateMode::full
                                               : ValidateMode::cocircuit_only;
  const ValidationReport rep = validate(in.matroid, opt);
  write_json_output(
      out, nlohmann::json{
               {"ok", rep.ok},
               {"mode", opt.mode == ValidateMode::full ? "full"
                                                       : "cocircuit-only"},
               {"covectors", rep.covectors},
               {"summary", rep.summary()}});
  if (!rep.ok) {
    for (const std::string& f : rep.failures)
      std::cerr << "check: " << f << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact oriented-matroid workbench: randomized wall arrangements, "
      "entangled liftings, flips, and the membership experiments"};
  app.require_subcommand(1);
  std::function<int()> action;

  // construct ---------------------------------------------------------------
  {
    auto* c = app.add_subcommand(
        "construct", "Sample a construction instance from (N, seed)");
    auto n = std::make_shared<int>(0);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto delta_exp = std::make_shared<int>(-1);
    auto out = std::make_shared<std::string>();
    c->add_option("--n", *n, "Lattice scale N")->required();
    c->add_option("--seed", *seed, "Master seed")->required();
    c->add_option("--delta-exp", *delta_exp,
                  "Tilt magnitude 2^-K instead of the default");
    c->add_option("--out", *out, "Instance file (default stdout)");
    c->callback([=, &action] {
      action = [=] {
        return run_construct(*n, *seed,
                             *delta_exp >= 0 ? std::optional<int>(*delta_exp)
                                             : std::nullopt,
                             *out);
      };
    });
  }

  // build -------------------------------------------------------------------
  {
    auto* c = app.add_subcommand(
        "build", "Assemble and audit the entangled lifting of an instance");
    auto instance = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto out_instance = std::make_shared<std::string>();
    auto report = std::make_shared<std::string>();
    auto attempts = std::make_shared<int>(16);
    c->add_option("--instance", *instance, "Instance file (default stdin)");
    c->add_option("--out", *out, "Lifting file (default stdout)");
    c->add_option("--out-instance", *out_instance,
                  "Write the instance that finally built (jitter may differ)");
    c->add_option("--report", *report, "Build report JSON");
    c->add_option("--max-attempts", *attempts, "Degeneracy retry budget");
    c->callback([=, &action] {
      action = [=] {
        return run_build(*instance, *out, *out_instance, *report, *attempts);
      };
    });
  }

  // validate ----------------------------------------------------------------
  {
    auto* c = app.add_subcommand(
        "validate", "Audit a matroid or lifting file against the axioms");
    auto matroid = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("cocircuit-only");
    auto pairs = std::make_shared<std::size_t>(100000);
    auto seed = std::make_shared<std::int64_t>(-1);
    auto uniform = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>();
    c->add_option("--matroid", *matroid, "Matroid file (default stdin)");
    c->add_option("--mode", *mode, "cocircuit-only | sampled | full");
    c->add_option("--sample-pairs", *pairs, "Sampled mode: pair draws");
    c->add_option("--seed", *seed, "Sampled mode: stream seed");
    c->add_flag("--require-uniform", *uniform,
                "Fail unless the zero-set profile is uniform");
    c->add_option("--out", *out, "Verdict JSON (default stdout)");
    c->callback([=, &action] {
      action = [=] {
        return run_validate(
            *matroid, *mode, *pairs,
            *seed >= 0
                ? std::optional<std::uint64_t>(static_cast<std::uint64_t>(*seed))
                : std::nullopt,
            *uniform, *out);
      };
    });
  }

  // flipgraph ---------------------------------------------------------------
  {
    auto* c = app.add_subcommand(
        "flipgraph", "Breadth-first flip exploration from a seed lifting");
    auto seed_file = std::make_shared<std::string>();
    auto bv = std::make_shared<long long>(-1);
    auto be = std::make_shared<long long>(-1);
    auto bs = std::make_shared<double>(-1);
    auto out = std::make_shared<std::string>();
    auto resume = std::make_shared<std::string>();
    c->add_option("--seed", *seed_file, "Seed lifting file")->required();
    c->add_option("--budget-vertices", *bv, "Expanded-vertex cap");
    c->add_option("--budget-edges", *be, "Stored-edge cap");
    c->add_option("--budget-seconds", *bs, "Wall-clock cap");
    c->add_option("--out", *out, "Graph JSON-lines file (default stdout)");
    c->add_option("--resume", *resume, "Resume from an earlier graph file");
    c->callback([=, &action] {
      action = [=] {
        return run_flipgraph(*seed_file, *bv, *be, *bs, *out, *resume);
      };
    });
  }

  // omega -------------------------------------------------------------------
  {
    auto* c = app.add_subcommand(
        "omega", "Enumerate the special subset with certificates");
    auto instance = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    c->add_option("--instance", *instance, "Instance file (default stdin)");
    c->add_option("--out", *out, "Certificate JSON (default stdout)");
    c->callback([=, &action] {
      action = [=] { return run_omega(*instance, *out); };
    });
  }

  // gdagger -----------------------------------------------------------------
  {
    auto* c = app.add_subcommand(
        "gdagger",
        "Check the three-condition membership of a lifting, or search for a "
        "non-member over fresh coin flips");
    auto instance = std::make_shared<std::string>();
    auto lifting = std::make_shared<std::string>();
    auto search = std::make_shared<bool>(false);
    auto budget = std::make_shared<std::size_t>(1000);
    auto wl = std::make_shared<std::string>();
    auto wi = std::make_shared<std::string>();
    auto report = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    c->add_option("--instance", *instance, "Instance file")->required();
    c->add_option("--lifting", *lifting, "Lifting file (default stdin)");
    c->add_flag("--search-non-member", *search,
                "Search resampled/modified coin flips for a failing lifting");
    c->add_option("--budget", *budget, "Search attempt budget");
    c->add_option("--witness-lifting", *wl, "Write a found witness lifting");
    c->add_option("--witness-instance", *wi, "Write the witness coin flips");
    c->add_option("--report", *report, "Also write the verdict JSON here");
    c->add_option("--out", *out, "Verdict JSON (default stdout)");
    c->callback([=, &action] {
      action = [=] {
        return run_gdagger(*instance, *lifting, *search, *budget, *wl, *wi,
                           *report, *out);
      };
    });
  }

  // closure -----------------------------------------------------------------
  {
    auto* c = app.add_subcommand(
        "closure",
        "Build, check membership, and verify it across flip neighbors to a "
        "depth");
    auto instance = std::make_shared<std::string>();
    auto depth = std::make_shared<int>(1);
    auto bv = std::make_shared<long long>(-1);
    auto bs = std::make_shared<double>(-1);
    auto report = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    c->add_option("--instance", *instance, "Instance file (default stdin)");
    c->add_option("--depth", *depth, "Neighborhood depth (≥ 1)");
    c->add_option("--budget-vertices", *bv, "Expanded-vertex cap");
    c->add_option("--budget-seconds", *bs, "Wall-clock cap");
    c->add_option("--report", *report, "Also write the record here");
    c->add_option("--out", *out, "Experiment record JSON (default stdout)");
    c->callback([=, &action] {
      action = [=] {
        return run_closure(*instance, *depth, *bv, *bs, *report, *out);
      };
    });
  }

  // prob-enum ---------------------------------------------------------------
  {
    auto* c = app.add_subcommand(
        "prob-enum",
        "Exact event probabilities (all classes × sign targets) and optional "
        "Monte Carlo cross-check");
    auto n = std::make_shared<int>(1);
    auto trials = std::make_shared<std::int64_t>(-1);
    auto seed = std::make_shared<std::int64_t>(-1);
    auto out = std::make_shared<std::string>();
    c->add_option("--n", *n, "Lattice scale for the membership probability");
    c->add_option("--mc-trials", *trials, "Monte Carlo trial count");
    c->add_option("--seed", *seed, "Monte Carlo stream seed");
    c->add_option("--out", *out, "Result JSON (default stdout)");
    c->callback([=, &action] {
      action = [=] {
        return run_prob_enum(
            *n,
            *trials >= 0
                ? std::optional<std::uint64_t>(static_cast<std::uint64_t>(*trials))
                : std::nullopt,
            *seed >= 0
                ? std::optional<std::uint64_t>(static_cast<std::uint64_t>(*seed))
                : std::nullopt,
            *out);
      };
    });
  }

  // min-n -------------------------------------------------------------------
  {
    auto* c = app.add_subcommand(
        "min-n", "Least N where the density bound drops below one");
    auto out = std::make_shared<std::string>();
    c->add_option("--out", *out, "Result JSON (default stdout)");
    c->callback([=, &action] {
      action = [=] { return run_min_n(*out); };
    });
  }

  // om ----------------------------------------------------------------------
  {
    auto* om = app.add_subcommand("om", "Generic matroid operations");
    om->require_subcommand(1);
    {
      auto* c = om->add_subcommand("dual", "Orthogonal-complement dual");
      auto matroid = std::make_shared<std::string>();
      auto out = std::make_shared<std::string>();
      c->add_option("--matroid", *matroid, "Matroid file (default stdin)");
      c->add_option("--out", *out, "Dual matroid JSON (default stdout)");
      c->callback([=, &action] {
        action = [=] { return run_om_dual(*matroid, *out); };
      });
    }
    {
      auto* c = om->add_subcommand("restrict", "Restriction to elements");
      auto matroid = std::make_shared<std::string>();
      auto tokens = std::make_shared<std::vector<std::string>>();
      auto out = std::make_shared<std::string>();
      c->add_option("--matroid", *matroid, "Matroid file (default stdin)");
      c->add_option("--elements", *tokens, "Element tokens to keep")
          ->expected(-1);
      c->add_option("--out", *out, "Restricted matroid JSON (default stdout)");
      c->callback([=, &action] {
        action = [=] { return run_om_restrict(*matroid, *tokens, *out); };
      });
    }
    {
      auto* c = om->add_subcommand(
          "check", "Axiom audit (full covector span on small ground sets)");
      auto matroid = std::make_shared<std::string>();
      auto out = std::make_shared<std::string>();
      c->add_option("--matroid", *matroid, "Matroid file (default stdin)");
      c->add_option("--out", *out, "Verdict JSON (default stdout)");
      c->callback([=, &action] {
        action = [=] { return run_om_check(*matroid, *out); };
      });
    }
  }

  try {
    app.parse(argc, argv);
    if (!action) throw usage_error("no subcommand selected");
    return action();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const degeneracy_error& e) {
    std::cerr << "degeneracy budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const verification_error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
