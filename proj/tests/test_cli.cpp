#include <doctest.h>

#include <fstream>

#include "cli_harness.hpp"
#include "mg1/errors.hpp"
#include "mg1/sim.hpp"
#include "mg1/snapshot.hpp"
#include "mg1/text_format.hpp"

using namespace mg1;

TEST_CASE("snapshot text round trip") {
  const auto dp = DeltaDirichletPosterior(1.5, BasePmf::poisson(0.75)).update_with_marks(std::vector<Symbol>{0, 2, 1, 1, 0});
  const PosteriorSnapshot snap{GammaPosterior(5.5, 3.1), dp, "fnv1a64:0000000000000001"};
  const auto text = serialize(snap);
  CHECK(parse_snapshot(text) == snap);
  CHECK(serialize(parse_snapshot(text)) == text);

  const auto dir = fresh_dir("snapshot");
  save_snapshot(dir / "p.txt", snap);
  CHECK(load_snapshot(dir / "p.txt") == snap);
  CHECK_FALSE(std::filesystem::exists(dir / "p.txt.tmp"));
}

TEST_CASE("corrupt snapshots are rejected") {
  const PosteriorSnapshot snap{GammaPosterior(1, 1), DeltaDirichletPosterior(1, BasePmf::geometric(0.5)), "x"};
  auto text = serialize(snap);
  CHECK_THROWS_AS(parse_snapshot("garbage"), CorruptData);
  CHECK_THROWS_AS(parse_snapshot(text + "dp.count.0=5\n"), CorruptData);
  const auto pos = text.find("gamma.a=");
  CHECK_THROWS_AS(parse_snapshot(text.substr(0, pos)), CorruptData);
}

TEST_CASE("content digest is stable") {
  CHECK(content_digest("") == "fnv1a64:cbf29ce484222325");
  CHECK(content_digest("a") == "fnv1a64:af63dc4c8601ec8c");
}

TEST_CASE("simulate, infer and estimate through the command line") {
  const auto dir = fresh_dir("cli");
  const auto data = (dir / "d.csv").string();
  const auto post = (dir / "p.txt").string();
  auto r = run_tool({"simulate", "--lambda", "1", "--service", "erlang:2,4", "--n", "3000", "--seed", "3", "--out", data});
  REQUIRE(r.code == kExitOk);
  r = run_tool({"infer", "--data", data, "--out", post});
  REQUIRE(r.code == kExitOk);
  const auto snap = load_snapshot(post);
  CHECK(snap.source_digest == content_digest(read_file(data)));
  CHECK(snap.dp.n_obs() == 3000);
  CHECK(snap.gamma.shape() == 3000);

  r = run_tool({"estimate", "--posterior", post, "--transform", "g", "--grid", "0:4:5"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("# transform=g\n# posterior=fnv1a64:", 0) == 0);
  CHECK(r.out.find("arg,value\n0,1\n") != std::string::npos);

  r = run_tool({"estimate", "--posterior", post, "--transform", "rho"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("rho,0.") != std::string::npos);

  r = run_tool({"estimate", "--posterior", post, "--transform", "mb", "--grid", "0:1:3"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("\n1,\n") != std::string::npos);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("documented exit codes") {
  const auto dir = fresh_dir("exit");
  const auto data = (dir / "d.csv").string();
  auto r = run_tool({"simulate", "--lambda", "2", "--service", "exp:1", "--n", "10", "--out", data});
  CHECK(r.code == kExitInvalidParameters);
  CHECK(r.err.find("rho = 2") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(data));

  CHECK(run_tool({"simulate", "--lambda", "1"}).code == kExitInvalidParameters);
  CHECK(run_tool({"simulate", "--lambda", "1", "--service", "bogus:1", "--n", "5", "--out", data}).code ==
        kExitInvalidParameters);
  CHECK(run_tool({"nonsense"}).code == kExitInvalidParameters);

  std::ofstream(data) << "t,n\n1.0,0\n2.0,4\n3.0,1\n";
  r = run_tool({"infer", "--data", data, "--out", (dir / "p.txt").string()});
  CHECK(r.code == kExitCorruptData);
  std::ofstream(dir / "bad.txt") << "not a snapshot\n";
  CHECK(run_tool({"estimate", "--posterior", (dir / "bad.txt").string(), "--transform", "g", "--grid", "0:1:2"}).code ==
        kExitCorruptData);
  CHECK(run_tool({"validate", "oracles", "--service", "det:0.5"}).code == kExitOk);
  CHECK(run_tool({"validate", "tau-exhaustive", "--max-len", "4", "--max-state", "2"}).code == kExitOk);
  CHECK(run_tool({"--help"}).code == kExitOk);
}

TEST_CASE("validation reports are written as key=value files") {
  const auto dir = fresh_dir("report");
  const auto report = (dir / "r.txt").string();
  const auto r = run_tool({"validate", "oracles", "--report", report});
  CHECK(r.code == kExitOk);
  const auto text = read_file(report);
  CHECK(text.rfind("name=oracles\n", 0) == 0);
  CHECK(text.find("pass=true\n") != std::string::npos);
}
