// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "cli_harness.hpp"
#include "mg1/errors.hpp"
#include "mg1/snapshot.hpp"
#include "mg1/tau.hpp"
#include "mg1/text_format.hpp"
#include "mg1/transforms.hpp"
#include "mg1/validation.hpp"

using namespace mg1;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome tau_exhaustive() {
  const auto start = std::chrono::steady_clock::now();
  const auto rows = tau_exhaustive_check(7, 3);
  const double elapsed = seconds_since(start);
  std::uint64_t violations = 0, checked = 0;
  for (const auto& r : rows) {
    violations += r.violations;
    checked += r.checked;
  }
  std::ostringstream d;
  d << checked << " checks, " << violations << " violations, " << elapsed << " s";
  return {violations == 0 && elapsed < 60.0, d.str()};
}

Outcome reference_strings() {
  const std::vector<std::pair<char, const char*>> raw{{'a', "121211100"}, {'b', "102232101"}, {'c', "123332100"},
                                                      {'d', "100234543"}, {'e', "121002343"}, {'f', "102102323"},
                                                      {'g', "100234543"}, {'h', "100002345"}, {'i', "210101100"}};
  std::set<std::set<char>> classes;
  for (const auto& [x, sx] : raw) {
    std::set<char> cls;
    for (const auto& [y, sy] : raw) {
      if (tau_equiv(DssString::parse(sx), DssString::parse(sy))) cls.insert(y);
    }
    if (cls.size() > 1) classes.insert(cls);
  }
  const bool classes_ok = classes == std::set<std::set<char>>{{'a', 'b', 'c'}, {'d', 'e', 'f', 'g'}};
  const auto g = DssString::parse("100234543");
  const auto h = DssString::parse("100002345");
  const auto tail = DssString::parse("44");
  const bool tilde_ok = tau_tilde_equiv(g, h) && !tau_equiv(g, h);
  const bool concat_ok = !tau_tilde_equiv(g.concat(tail), h.concat(tail));
  std::ostringstream d;
  d << "classes " << (classes_ok ? "match" : "differ") << ", g~h under tilde only " << (tilde_ok ? "yes" : "no")
    << ", g44/h44 split " << (concat_ok ? "yes" : "no");
  return {classes_ok && tilde_ok && concat_ok, d.str()};
}

Outcome oracles() {
  const auto exp = oracle_agreement(ServiceDist::exponential(2.0), 1.0, 20);
  const auto det = oracle_agreement(ServiceDist::deterministic(0.5), 1.0, 20);
  std::ostringstream d;
  d << "exponential max diff " << exp.metric("max_abs_difference") << ", deterministic max diff "
    << det.metric("max_abs_difference");
  return {exp.pass && det.pass, d.str()};
}

Outcome exact_transforms() {
  const auto start = std::chrono::steady_clock::now();
  const auto ctx = EstimatorContext::exact(ServiceDist::exponential(2.0), 1.0);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double s = 0.05 * i;
    worst = std::max(worst, std::abs(g_hat(ctx, s) - 2.0 / (2.0 + s)));
    const double z = 0.01 * i;
    worst = std::max(worst, std::abs(pi_hat(ctx, z) - 0.5 / (1.0 - 0.5 * z)));
  }
  worst = std::max(worst, std::abs(busy_b(ctx, 1.0) - (2.0 - std::sqrt(2.0))));
  worst = std::max(worst, std::abs(served_mb(ctx, 0.5) - (3.0 - std::sqrt(5.0)) / 2.0));
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << "max error " << worst << ", " << elapsed << " s";
  return {worst <= 1e-8 && elapsed < 1.0, d.str()};
}

Outcome consistency() {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream d;
  bool pass = true;
  for (const auto& service : {ServiceDist::exponential(2.0), ServiceDist::erlang(2, 4.0)}) {
    ConsistencyConfig config;
    config.truth = SimConfig{1.0, service, 1, 1000, 42};
    const auto report = consistency_experiment(config);
    pass = pass && report.pass;
    d << service.to_string() << ": rate error " << format_double(report.metric("rate_error.n50000"))
      << ", lst sup error " << format_double(report.metric("lst_sup_error.n50000")) << ", monotone "
      << (report.metric("lst_error_monotone") > 0 ? "yes" : "no") << "; ";
  }
  const double elapsed = seconds_since(start);
  d << elapsed << " s";
  return {pass && elapsed < 30.0, d.str()};
}

Outcome dual_identity() {
  RandomStream rng(606);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto base =
        trial % 2 ? BasePmf::geometric(0.05 + 0.9 * rng.uniform()) : BasePmf::poisson(0.05 + 4.0 * rng.uniform());
    std::vector<Symbol> marks{static_cast<Symbol>(rng.uniform() * 5)};
    const auto len = static_cast<std::size_t>(rng.uniform() * 200);
    for (std::size_t j = 0; j < len; ++j) {
      const Symbol lo = marks.back() == 0 ? 0 : marks.back() - 1;
      marks.push_back(lo + static_cast<Symbol>(rng.uniform() * 3));
    }
    const auto dp = DeltaDirichletPosterior(0.05 + 10.0 * rng.uniform(), base).update_with_marks(marks);
    const GammaPosterior rate(0.5 + 100.0 * rng.uniform(), 0.5 + 100.0 * rng.uniform());
    const auto ctx = EstimatorContext::from_posteriors(rate, dp);
    worst = std::max(worst, std::abs(rho_hat_from_lst(ctx) - rho_hat(ctx)));
  }
  std::ostringstream d;
  d << "1000 posteriors, max gap " << worst;
  return {worst <= 1e-8, d.str()};
}

Outcome bvm() {
  const auto start = std::chrono::steady_clock::now();
  BvmConfig config;
  config.truth = SimConfig{1.0, ServiceDist::exponential(2.0), 1, 1000, 42};
  const auto report = bvm_experiment(config);
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << "cov rel err " << format_double(report.metric("cov_max_relative_error")) << ", rate rel err "
    << format_double(report.metric("rate_relative_error")) << ", normality "
    << format_double(report.metric("normality_distance_max")) << ", " << elapsed << " s";
  return {report.pass && elapsed < 60.0, d.str()};
}

Outcome pi_check() {
  const SimConfig sim{1.0, ServiceDist::exponential(2.0), 50000, 1000, 42};
  const auto path = simulate_path(sim);
  const auto rate = GammaPosterior(1.0, 1.0).update(interdeparture_times(path.records));
  const auto dp = DeltaDirichletPosterior(1.0, BasePmf::geometric(0.5)).update_with_marks(marks_of(path.records));
  const auto report = pi_empirical_check(path, EstimatorContext::from_posteriors(rate, dp));
  const double true_gap = std::abs(report.metric("pi_hat_at_0") - 0.5);
  std::ostringstream d;
  d << "sup gap " << format_double(report.metric("sup_gap")) << ", |pi(0) - (1 - rho)| " << format_double(true_gap);
  return {report.pass && true_gap <= 0.01, d.str()};
}

Outcome cli_round_trip() {
  const auto dir = fresh_dir("acceptance");
  const auto data = (dir / "departures.csv").string();
  const auto post = (dir / "posterior.txt").string();
  const auto est = (dir / "estimate_w.csv").string();
  const std::filesystem::path golden(MG1_GOLDEN_DIR);
  std::vector<std::string> problems;

  if (run_tool({"simulate", "--lambda", "1", "--service", "exp:2", "--n", "2000", "--seed", "2024", "--out", data}).code != 0 ||
      run_tool({"infer", "--data", data, "--out", post}).code != 0 ||
      run_tool({"estimate", "--posterior", post, "--transform", "w", "--grid", "0:3:31", "--out", est}).code != 0) {
    problems.push_back("pipeline failed");
  } else {
    if (read_file(post) != read_file(golden / "posterior.txt")) problems.push_back("posterior differs from golden");
    if (read_file(est) != read_file(golden / "estimate_w.csv")) problems.push_back("estimate differs from golden");
    const auto snap = load_snapshot(post);
    save_snapshot(dir / "copy.txt", snap);
    if (!(load_snapshot(dir / "copy.txt") == snap) || read_file(dir / "copy.txt") != read_file(post)) {
      problems.push_back("snapshot reload differs");
    }
  }
  std::ofstream(dir / "corrupt.csv") << "t,n\n1,5\n2,1\n";
  const std::vector<std::pair<int, std::vector<std::string>>> codes{
      {kExitInvalidParameters, {"simulate", "--lambda", "3", "--service", "exp:2", "--n", "5", "--out", data}},
      {kExitCorruptData, {"infer", "--data", (dir / "corrupt.csv").string(), "--out", post}},
      {kExitInvalidParameters, {"estimate", "--posterior", post, "--transform", "zeta", "--grid", "0:1:2"}},
  };
  for (const auto& [expected, args] : codes) {
    if (run_tool(args).code != expected) problems.push_back("exit code for '" + args.front() + "' not " + std::to_string(expected));
  }
  std::ostringstream d;
  if (problems.empty()) d << "golden files match, snapshot reload identical, exit codes 0/2/3 observed";
  for (const auto& p : problems) d << p << "; ";
  return {problems.empty(), d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, tau_exhaustive}, {2, reference_strings}, {3, oracles}, {4, exact_transforms}, {5, consistency},
      {6, dual_identity},  {7, bvm},               {8, pi_check}, {9, cli_round_trip}};
  int failures = 0;
  for (const auto& [id, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::cout << "criterion " << id << ": " << (outcome.pass ? "PASS" : "FAIL") << " (" << outcome.detail << ")"
              << std::endl;
  }
  std::cout << (9 - failures) << "/9 criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
