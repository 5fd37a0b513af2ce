// Copyright 2026 The HDE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hde/cli.hpp"
#include "hde/io.hpp"

using namespace hde;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hde_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("verify --example certifies every cycle scenario") {
  for (const std::string& name : builtin_names()) {
    INFO(name);
    const Result r = call({"verify", "--example", name});
    CHECK(r.code == kExitOk);
    CHECK_FALSE(r.out.empty());
  }
  const Result j = call({"verify", "--example", "mfhg_resent_ns", "--json"});
  CHECK(j.code == kExitOk);
  const Json doc = Json::parse(j.out);
  CHECK(doc.dump().find("pair_deltas") != std::string::npos);
}

TEST_CASE("verify fails with exit 1 on a broken scenario file") {
  Json sc = scenario_to_json(builtin("mfhg_resent_ns"));
  sc["model"] = model_to_json(PerceptionModel(PerceptionKind::kAppreciation));
  const std::string path = temp_path("broken.json");
  write_json_file(path, sc);
  const Result r = call({"verify", "--file", path});
  CHECK(r.code == kExitVerificationFailed);
  CHECK_FALSE(r.err.empty());
  std::remove(path.c_str());
}

TEST_CASE("usage errors exit 2 with distinct messages") {
  const Result unknown = call({"verify", "--example", "no_such_example"});
  CHECK(unknown.code == kExitUsage);
  CHECK(unknown.err.find("unknown example") != std::string::npos);

  const Result missing = call({"run", "--game", temp_path("absent.json"), "--stability", "ns"});
  CHECK(missing.code == kExitUsage);
  CHECK(missing.err.find("cannot read") != std::string::npos);

  const std::string bad = temp_path("malformed.json");
  std::ofstream(bad) << "[1, 2";
  const Result malformed = call({"run", "--game", bad, "--stability", "ns"});
  CHECK(malformed.code == kExitUsage);
  CHECK(malformed.err.find("malformed") != std::string::npos);
  std::remove(bad.c_str());

  CHECK(call({"frobnicate"}).code == kExitUsage);
  CHECK(call({"run", "--stability", "zz"}).code == kExitUsage);
  CHECK(call({}).code == kExitUsage);
}

TEST_CASE("run: conflicting filter flags are a usage error") {
  const std::string g = temp_path("g.json");
  write_json_file(g, game_to_json(builtin("run_and_chase").game));
  const Result r = call({"run", "--game", g, "--stability", "ns", "--ir", "--filter", "strict-singleton"});
  CHECK(r.code == kExitUsage);
  std::remove(g.c_str());
}

TEST_CASE("run prints the outcome and writes a trace") {
  const std::string g = temp_path("rc.json");
  const std::string trace = temp_path("rc.jsonl");
  write_json_file(g, game_to_json(builtin("run_and_chase").game));
  const Result r = call({"run", "--game", g, "--stability", "ns", "--model", "resent", "--ir", "--seed", "1",
                         "--max-steps", "100000", "--trace", trace});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("converged") != std::string::npos);
  const std::string lines = slurp(trace);
  CHECK(std::count(lines.begin(), lines.end(), '\n') == 3);

  const Result j = call({"run", "--game", g, "--stability", "ns", "--model", "none", "--max-steps", "7", "--json"});
  CHECK(j.code == kExitOk);
  // The last JSON line is the outcome record.
  const std::string body = j.out.substr(0, j.out.size() - 1);
  const Json doc = Json::parse(body.substr(body.rfind('\n') + 1));
  CHECK(doc["outcome"] == "step-limit");
  CHECK(doc["steps"] == 7);
  std::remove(g.c_str());
  std::remove(trace.c_str());
}

TEST_CASE("generate rx3c writes the game and reports k") {
  const std::string out = temp_path("cs.json");
  const Result r = call({"generate", "rx3c", "--t", "1", "--target", "cs", "--variant", "resentful", "--out", out});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("k=5") != std::string::npos);
  CHECK(r.out.find("agents=15") != std::string::npos);
  const Json doc = read_json_file(out);
  CHECK(doc["n"] == 15);
  CHECK(doc["k"] == 5);
  CHECK(game_from_json(doc).n() == 15);
  std::remove(out.c_str());

  CHECK(call({"generate", "rx3c", "--t", "0", "--target", "cs", "--out", out}).code == kExitUsage);
}

TEST_CASE("search finds the 2-step run-and-chase sequence") {
  const std::string g = temp_path("search.json");
  write_json_file(g, game_to_json(builtin("run_and_chase").game));
  const Result r = call({"search", "--game", g, "--stability", "ns", "--model", "resent", "--bound", "5", "--json"});
  CHECK(r.code == kExitOk);
  const Json doc = Json::parse(r.out);
  CHECK(doc["length"] == 2);
  std::remove(g.c_str());
}

TEST_CASE("axioms: violation is reported, not an error") {
  const Result r = call({"axioms", "--caf", "MF", "--axiom", "ATE", "--budget", "100", "--seed", "7", "--json"});
  CHECK(r.code == kExitOk);
  const Json doc = Json::parse(r.out);
  CHECK(doc["result"] == "counterexample");
  CHECK(doc["counterexample"]["lhs"] == -2);
  CHECK(call({"axioms", "--caf", "AS", "--axiom", "EM", "--budget", "100"}).code == kExitOk);
  CHECK(call({"axioms", "--caf", "FR", "--axiom", "EM"}).code == kExitUsage);
}

TEST_CASE("experiment output is byte-identical across runs and job counts") {
  const std::vector<std::string> base{"experiment", "--n", "8", "--games", "4", "--seed", "3", "--json"};
  const Result a = call(base);
  const Result b = call(base);
  auto with_jobs = base;
  with_jobs.insert(with_jobs.end(), {"--jobs", "3"});
  const Result c = call(with_jobs);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);

  const std::string csv1 = temp_path("e1.csv"), csv2 = temp_path("e2.csv");
  call({"experiment", "--n", "6", "--games", "3", "--seed", "9", "--out", csv1});
  call({"experiment", "--n", "6", "--games", "3", "--seed", "9", "--out", csv2});
  CHECK(slurp(csv1) == slurp(csv2));
  CHECK_FALSE(slurp(csv1).empty());
  std::remove(csv1.c_str());
  std::remove(csv2.c_str());
}

TEST_CASE("export writes a scenario that verify accepts") {
  const std::string out = temp_path("export.json");
  CHECK(call({"export", "--example", "core_apprec_3cycle", "--out", out}).code == kExitOk);
  CHECK(call({"verify", "--file", out}).code == kExitOk);
  const Result a = call({"verify", "--file", out, "--json"});
  const Result b = call({"verify", "--file", out, "--json"});
  CHECK(a.out == b.out);
  std::remove(out.c_str());
}

TEST_CASE("help lists every flag of every subcommand") {
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> expected = {
      {{"run"}, {"--game", "--stability", "--model", "--coefficient", "--ir", "--filter", "--initial", "--size-cap",
                 "--policy", "--seed", "--max-steps", "--trace", "--json"}},
      {{"verify"}, {"--example", "--file", "--cycles", "--json"}},
      {{"export"}, {"--example", "--file", "--out"}},
      {{"generate", "rx3c"}, {"--t", "--family", "--target", "--variant", "--out", "--witness"}},
      {{"search"}, {"--game", "--bound", "--max-states"}},
      {{"axioms"}, {"--caf", "--axiom", "--budget", "--seed", "--max-n"}},
      {{"experiment"}, {"--n", "--games", "--utilities", "--sigma", "--model", "--coefficient", "--stability",
                        "--seed", "--max-steps", "--jobs", "--out", "--json"}},
  };
  for (const auto& [cmd, flags] : expected) {
    auto args = cmd;
    args.push_back("--help");
    const Result r = call(args);
    INFO(cmd.front());
    CHECK(r.code == kExitOk);
    for (const auto& f : flags) CHECK_MESSAGE(r.out.find(f) != std::string::npos, f);
  }
  const Result top = call({"--help"});
  for (const char* sub : {"run", "verify", "export", "generate", "search", "axioms", "experiment"}) {
    CHECK(top.out.find(sub) != std::string::npos);
  }
}

TEST_CASE("HDE_SEED supplies the default seed") {
  const std::vector<std::string> args{"experiment", "--n", "6", "--games", "2", "--json"};
  setenv("HDE_SEED", "5", 1);
  const Result env = call(args);
  unsetenv("HDE_SEED");
  auto explicit_args = args;
  explicit_args.insert(explicit_args.end(), {"--seed", "5"});
  const Result expl = call(explicit_args);
  CHECK(env.code == kExitOk);
  CHECK(env.out == expl.out);
}
