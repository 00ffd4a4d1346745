// End-to-end exercises of the command-line binary: exit-code contract,
// stdin/stdout piping, byte-determinism of emitted files, and smoke runs of
// every subcommand.  The binary path arrives in OMW_BIN.

#include <doctest.h>

#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string bin_path() {
  const char* b = std::getenv("OMW_BIN");
  REQUIRE_MESSAGE(b != nullptr, "OMW_BIN must point at the CLI binary");
  return std::string("\"") + b + "\"";
}

// A fresh scratch directory per test case, removed eagerly on reuse so
// repeated runs never see stale files.
fs::path work_dir(const std::string& label) {
  const fs::path p = fs::temp_directory_path() /
                     ("omw-cli-" + std::to_string(::getpid()) + "-" + label);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

int run(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: ", p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json jload(const fs::path& p) { return json::parse(slurp(p)); }

void jwrite(const fs::path& p, const json& j) {
  std::ofstream out(p);
  out << j.dump(2) << "\n";
}

// Vertex keys of a graph stream: the records carrying a cocircuit
// reference.
std::set<std::string> graph_keys(const fs::path& p) {
  std::set<std::string> keys;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json rec = json::parse(line);
    if (rec.contains("cocircuits-ref"))
      keys.insert(rec.at("key").get<std::string>());
  }
  return keys;
}

}  // namespace

TEST_CASE("the documented construct-build-validate pipeline exits clean") {
  const std::string B = bin_path();
  CHECK(run(B + " construct --n 1 --seed 7 | " + B + " build | " + B +
            " validate") == 0);
}

TEST_CASE("construct and build emit byte-identical files across runs") {
  const std::string B = bin_path();
  const fs::path dir = work_dir("determinism");
  const fs::path inst1 = dir / "inst1.json";
  const fs::path inst2 = dir / "inst2.json";
  REQUIRE(run(B + " construct --n 0 --seed 5 --out " + q(inst1)) == 0);
  REQUIRE(run(B + " construct --n 0 --seed 5 --out " + q(inst2)) == 0);
  CHECK(slurp(inst1) == slurp(inst2));

  const fs::path lift1 = dir / "lift1.json";
  const fs::path lift2 = dir / "lift2.json";
  REQUIRE(run(B + " build --instance " + q(inst1) + " --out " + q(lift1)) == 0);
  REQUIRE(run(B + " build --instance " + q(inst1) + " --out " + q(lift2)) == 0);
  CHECK(slurp(lift1) == slurp(lift2));

  const json lifting = jload(lift1);
  CHECK(lifting.contains("elements"));
  CHECK(lifting.contains("rank"));
  CHECK(lifting.contains("cocircuits"));
  CHECK(lifting.at("lift_element") == "f");

  // Verdicts are files too, and equally stable.
  const fs::path v1 = dir / "v1.json";
  const fs::path v2 = dir / "v2.json";
  REQUIRE(run(B + " validate --matroid " + q(lift1) + " --out " + q(v1)) == 0);
  REQUIRE(run(B + " validate --matroid " + q(lift1) + " --out " + q(v2)) == 0);
  CHECK(slurp(v1) == slurp(v2));
  CHECK(jload(v1).at("ok") == true);
  CHECK(jload(v1).at("lifting") == "lifting check passed");

  CHECK(run(B + " validate --mode sampled --seed 11 --matroid " + q(lift1)) ==
        0);
  CHECK(run(B + " validate --mode full --require-uniform --matroid " +
            q(lift1)) == 0);
}

TEST_CASE("usage problems exit 2, verification failures exit 1") {
  const std::string B = bin_path();
  const fs::path dir = work_dir("exitcodes");
  const fs::path inst = dir / "inst.json";
  const fs::path lift = dir / "lift.json";
  REQUIRE(run(B + " construct --n 0 --seed 5 --out " + q(inst)) == 0);
  REQUIRE(run(B + " build --instance " + q(inst) + " --out " + q(lift)) == 0);

  CHECK(run(B + " frobnicate") == 2);
  CHECK(run(B + " construct --n 0") == 2);               // missing --seed
  CHECK(run(B + " construct --n 0 --seed 1 --delta-exp 0") == 2);
  CHECK(run(B + " gdagger") == 2);                       // missing --instance
  CHECK(run(B + " validate --mode sampled --matroid " + q(lift)) == 2);
  CHECK(run(B + " validate --mode nonsense --matroid " + q(lift)) == 2);
  CHECK(run(B + " validate --matroid " + q(dir / "no-such-file.json")) == 2);

  // Deleting one cocircuit leaves a 3-subset with no vanishing cocircuit,
  // which the uniform requirement must flag as a verification failure.
  json broken = jload(lift);
  broken.erase("lift_element");
  auto& cocircuits = broken.at("cocircuits");
  REQUIRE(cocircuits.size() == 35);
  cocircuits.erase(cocircuits.size() - 1);
  const fs::path bad = dir / "bad.json";
  jwrite(bad, broken);
  CHECK(run(B + " validate --require-uniform --matroid " + q(bad)) == 1);
}

TEST_CASE("generic matroid operations work on a hand-written file") {
  const std::string B = bin_path();
  const fs::path dir = work_dir("omops");
  const fs::path two = dir / "two.json";
  jwrite(two, json{{"elements", {"a", "b"}},
                   {"rank", 1},
                   {"cocircuits", {"++"}}});

  const fs::path dual_out = dir / "dual.json";
  REQUIRE(run(B + " om dual --matroid " + q(two) + " --out " + q(dual_out)) ==
          0);
  const json d = jload(dual_out);
  CHECK(d.at("rank") == 1);
  CHECK(d.at("cocircuits") == json::array({"+-"}));

  const fs::path restr = dir / "restr.json";
  REQUIRE(run(B + " om restrict --matroid " + q(two) + " --elements a --out " +
              q(restr)) == 0);
  const json r = jload(restr);
  CHECK(r.at("elements") == json::array({"a"}));
  CHECK(r.at("cocircuits") == json::array({"+"}));

  CHECK(run(B + " om check --matroid " + q(two)) == 0);
  CHECK(run(B + " om restrict --matroid " + q(two) + " --elements zz") == 2);
}

TEST_CASE("the experiment subcommands run end to end at scale zero") {
  const std::string B = bin_path();
  const fs::path dir = work_dir("experiments");
  const fs::path inst = dir / "inst.json";
  const fs::path built_inst = dir / "built-inst.json";
  const fs::path lift = dir / "lift.json";
  const fs::path brep = dir / "brep.json";
  REQUIRE(run(B + " construct --n 0 --seed 6 --out " + q(inst)) == 0);
  REQUIRE(run(B + " build --instance " + q(inst) + " --out " + q(lift) +
              " --out-instance " + q(built_inst) + " --report " + q(brep)) ==
          0);
  CHECK(jload(brep).at("ok") == true);
  CHECK(jload(brep).at("attempts").get<int>() >= 1);

  const fs::path om_out = dir / "omega.json";
  REQUIRE(run(B + " omega --instance " + q(built_inst) + " --out " +
              q(om_out)) == 0);
  const json om = jload(om_out);
  CHECK(om.at("n") == 0);
  CHECK(om.at("small-n") == true);
  CHECK(om.at("size").get<std::size_t>() == om.at("points").size());

  const fs::path g_out = dir / "gdagger.json";
  REQUIRE(run(B + " gdagger --instance " + q(built_inst) + " --lifting " +
              q(lift) + " --out " + q(g_out)) == 0);
  const json g = jload(g_out);
  CHECK(g.at("member") == true);
  CHECK(g.at("small-n") == true);

  const fs::path c_out = dir / "closure.json";
  REQUIRE(run(B + " closure --instance " + q(built_inst) + " --depth 1 "
              "--out " + q(c_out)) == 0);
  const json c = jload(c_out);
  CHECK(c.at("closure-holds") == true);
  CHECK(c.at("complete") == true);
  CHECK(c.at("nodes").size() >= 1);
}

TEST_CASE("flip graph files stream, budget-stop and resume through the CLI") {
  const std::string B = bin_path();
  const fs::path dir = work_dir("flipgraph");
  const fs::path lift = dir / "lift.json";
  REQUIRE(run(B + " construct --n 0 --seed 6 | " + B + " build --out " +
              q(lift)) == 0);

  const fs::path full = dir / "full.jsonl";
  REQUIRE(run(B + " flipgraph --seed " + q(lift) + " --out " + q(full)) == 0);
  const std::set<std::string> full_keys = graph_keys(full);
  REQUIRE(full_keys.size() >= 3);

  const fs::path part = dir / "part.jsonl";
  const fs::path rest = dir / "rest.jsonl";
  REQUIRE(run(B + " flipgraph --seed " + q(lift) + " --budget-vertices 2 "
              "--out " + q(part)) == 0);
  REQUIRE(run(B + " flipgraph --seed " + q(lift) + " --resume " + q(part) +
              " --out " + q(rest)) == 0);
  std::set<std::string> joined = graph_keys(part);
  for (const std::string& k : graph_keys(rest)) joined.insert(k);
  CHECK(joined == full_keys);

  // Resuming from a stream of a different seed is rejected as usage.
  const fs::path other = dir / "other.json";
  REQUIRE(run(B + " construct --n 0 --seed 7 | " + B + " build --out " +
              q(other)) == 0);
  CHECK(run(B + " flipgraph --seed " + q(other) + " --resume " + q(part)) ==
        2);
}

TEST_CASE("probability and threshold subcommands report their numbers") {
  const std::string B = bin_path();
  const fs::path dir = work_dir("prob");
  const fs::path p_out = dir / "prob.json";
  REQUIRE(run(B + " prob-enum --n 0 --mc-trials 1500 --seed 3 --out " +
              q(p_out)) == 0);
  const json p = jload(p_out);
  CHECK(p.at("targets").size() == 64);
  CHECK(p.at("all-at-least-1/864") == true);
  CHECK(p.at("montecarlo").at("pass") == true);

  CHECK(run(B + " prob-enum --n 0 --mc-trials 100") == 2);  // needs --seed

  const fs::path m_out = dir / "minn.json";
  REQUIRE(run(B + " min-n --out " + q(m_out)) == 0);
  const json m = jload(m_out);
  const long long threshold = m.at("min-n").get<long long>();
  CHECK(threshold >= 10000);
  CHECK(threshold <= 1000000);
  CHECK(m.at("holds") == true);
  CHECK(m.at("fails-at-predecessor") == true);
}
