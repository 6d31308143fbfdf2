#include "mg1/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mg1/errors.hpp"
#include "mg1/sim.hpp"
#include "mg1/snapshot.hpp"
#include "mg1/tau.hpp"
#include "mg1/text_format.hpp"
#include "mg1/transforms.hpp"
#include "mg1/validation.hpp"

namespace mg1 {

namespace {

std::vector<double> parse_grid(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw InvalidArgument("grid must be <lo>:<hi>:<steps>");
  const double lo = parse_double(parts[0]);
  const double hi = parse_double(parts[1]);
  const auto steps = parse_uint(parts[2]);
  if (steps == 0) throw InvalidArgument("grid needs at least one step");
  if (steps == 1) return {lo};
  std::vector<double> grid;
  grid.reserve(steps);
  for (std::uint64_t i = 0; i < steps; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  return grid;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

std::vector<std::uint64_t> parse_uint_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  for (auto part : split(text, ',')) out.push_back(parse_uint(part));
  return out;
}

void emit(const std::string& out_path, const std::string& content, std::ostream& out) {
  if (out_path.empty() || out_path == "-") {
    out << content;
  } else {
    write_file_atomically(out_path, content);
  }
}

int finish_report(const ExperimentReport& report, const std::string& report_path, std::ostream& out) {
  report.print_table(out);
  if (!report_path.empty()) {
    std::ostringstream kv;
    report.write_key_values(kv);
    write_file_atomically(report_path, kv.str());
  }
  return report.pass ? kExitOk : kExitValidationFailed;
}

struct SimulateArgs {
  double lambda = 0.0;
  std::string service;
  std::uint64_t n = 0;
  std::uint64_t warmup = 1000;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  SimConfig config{args.lambda, ServiceDist::parse(args.service), args.n, args.warmup, args.seed};
  const auto path = simulate_path(config);
  std::ostringstream buf;
  write_departures(buf, path.records);
  emit(args.out, buf.str(), out);
  return kExitOk;
}

struct InferArgs {
  std::string data;
  double gamma_a = 1.0;
  double gamma_b = 1.0;
  double alpha = 1.0;
  std::string base = "geom:0.5";
  std::string out;
};

int cmd_infer(const InferArgs& args, std::ostream& out) {
  const GammaPosterior rate_prior(args.gamma_a, args.gamma_b);
  const DeltaDirichletPosterior dp_prior(args.alpha, BasePmf::parse(args.base));
  const auto bytes = read_file(args.data);
  std::istringstream in(bytes);
  const auto records = read_departures(in);
  PosteriorSnapshot snap{rate_prior.update(interdeparture_times(records)),
                         dp_prior.update_with_marks(marks_of(records)), content_digest(bytes)};
  emit(args.out, serialize(snap), out);
  return kExitOk;
}

struct EstimateArgs {
  std::string posterior;
  std::string transform;
  std::string grid;
  std::string out;
};

int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
  const auto text = read_file(args.posterior);
  const auto snap = parse_snapshot(text);
  const auto ctx = EstimatorContext::from_posteriors(snap.gamma, snap.dp);
  std::ostringstream csv;
  csv << "# transform=" << args.transform << '\n';
  csv << "# posterior=" << content_digest(text) << '\n';
  if (args.transform == "rho") {
    const double rho = rho_hat(ctx);
    csv << "# domain=none\n";
    csv << "arg,value\n";
    csv << "rho," << format_double(rho) << '\n';
    if (!(rho < 1.0)) err << "warning: estimated traffic intensity " << format_double(rho) << " >= 1\n";
    emit(args.out, csv.str(), out);
    return kExitOk;
  }
  const auto kind = parse_transform_kind(args.transform);
  if (args.grid.empty()) throw InvalidArgument("--grid is required for transform " + args.transform);
  const auto estimate = estimate_on_grid(ctx, kind, parse_grid(args.grid));
  csv << "# domain=" << estimate.domain_note << '\n';
  csv << "arg,value\n";
  std::size_t ok = 0;
  for (std::size_t i = 0; i < estimate.grid.size(); ++i) {
    csv << format_double(estimate.grid[i]) << ',';
    if (estimate.values[i]) {
      csv << format_double(*estimate.values[i]);
      ++ok;
    }
    csv << '\n';
  }
  for (const auto& w : estimate.warnings) err << "warning: " << w << '\n';
  if (ok == 0) {
    err << "error: no grid point could be evaluated\n";
    return kExitInvalidParameters;
  }
  emit(args.out, csv.str(), out);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian inference for M/G/1 queues from marked departure data", "mg1bayes"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate the marked departure process");
  simulate->add_option("--lambda", sim.lambda, "Arrival rate")->required();
  simulate->add_option("--service", sim.service, "exp:<mu> | erlang:<k>,<mu> | det:<d> | hyper:<w>,<mu>;...")
      ->required();
  simulate->add_option("--n", sim.n, "Departures to record")->required();
  simulate->add_option("--warmup", sim.warmup, "Departures discarded first")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output departure file ('-' for stdout)")->required();

  InferArgs inf;
  auto* infer = app.add_subcommand("infer", "Update both posteriors from a departure file");
  infer->add_option("--data", inf.data, "Departure file")->required();
  infer->add_option("--gamma-a", inf.gamma_a, "Gamma prior shape")->capture_default_str();
  infer->add_option("--gamma-b", inf.gamma_b, "Gamma prior rate")->capture_default_str();
  infer->add_option("--alpha", inf.alpha, "Dirichlet process concentration")->capture_default_str();
  infer->add_option("--base", inf.base, "geom:<p> | pois:<theta>")->capture_default_str();
  infer->add_option("--out", inf.out, "Output snapshot ('-' for stdout)")->required();

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Evaluate a plug-in transform estimate");
  estimate->add_option("--posterior", est.posterior, "Snapshot file")->required();
  estimate->add_option("--transform", est.transform, "g | w | q | m | pi | b | mb | rho")->required();
  estimate->add_option("--grid", est.grid, "<lo>:<hi>:<steps>");
  estimate->add_option("--out", est.out, "Output CSV (default stdout)");

  auto* validate = app.add_subcommand("validate", "Run a verification experiment");
  validate->require_subcommand(1);
  std::string report_path;

  std::size_t max_len = 7;
  std::uint64_t max_state = 3;
  auto* v_tau = validate->add_subcommand("tau-exhaustive", "Exhaustive checks of the tau statistic");
  v_tau->add_option("--max-len", max_len)->capture_default_str();
  v_tau->add_option("--max-state", max_state)->capture_default_str();
  v_tau->add_option("--report", report_path, "key=value report file");

  double lambda = 1.0;
  std::string service = "exp:2";
  std::uint64_t seed = 42;
  std::string n_list = "100,1000,10000,50000";
  double cons_alpha = 1.0;
  std::string cons_base = "pois:1";
  double lst_range = 5.0;
  auto* v_cons = validate->add_subcommand("consistency", "Posterior consistency along a simulated path");
  v_cons->add_option("--lambda", lambda)->capture_default_str();
  v_cons->add_option("--service", service)->capture_default_str();
  v_cons->add_option("--seed", seed)->capture_default_str();
  v_cons->add_option("--n-list", n_list)->capture_default_str();
  v_cons->add_option("--alpha", cons_alpha)->capture_default_str();
  v_cons->add_option("--base", cons_base)->capture_default_str();
  v_cons->add_option("--lst-range", lst_range)->capture_default_str();
  v_cons->add_option("--report", report_path, "key=value report file");

  std::uint64_t bvm_n = 10000;
  std::size_t draws = 2000;
  std::size_t truncation = 200;
  std::string z_grid = "0.2,0.5,0.8";
  auto* v_bvm = validate->add_subcommand("bvm", "Posterior normality experiment");
  v_bvm->add_option("--lambda", lambda)->capture_default_str();
  v_bvm->add_option("--service", service)->capture_default_str();
  v_bvm->add_option("--seed", seed)->capture_default_str();
  v_bvm->add_option("--n", bvm_n)->capture_default_str();
  v_bvm->add_option("--draws", draws)->capture_default_str();
  v_bvm->add_option("--truncation", truncation)->capture_default_str();
  v_bvm->add_option("--z-grid", z_grid)->capture_default_str();
  v_bvm->add_option("--report", report_path, "key=value report file");

  std::uint64_t k_max = 20;
  auto* v_oracles = validate->add_subcommand("oracles", "Quadrature oracle against closed forms");
  v_oracles->add_option("--lambda", lambda)->capture_default_str();
  v_oracles->add_option("--service", service)->capture_default_str();
  v_oracles->add_option("--k-max", k_max)->capture_default_str();
  v_oracles->add_option("--report", report_path, "key=value report file");

  std::uint64_t pi_n = 50000;
  std::string pi_data;
  auto* v_pi = validate->add_subcommand("pi-check", "Estimated stationary pgf against observed marks");
  v_pi->add_option("--lambda", lambda)->capture_default_str();
  v_pi->add_option("--service", service)->capture_default_str();
  v_pi->add_option("--seed", seed)->capture_default_str();
  v_pi->add_option("--n", pi_n)->capture_default_str();
  v_pi->add_option("--data", pi_data, "Use this departure file instead of simulating");
  v_pi->add_option("--report", report_path, "key=value report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidParameters;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (infer->parsed()) return cmd_infer(inf, out);
    if (estimate->parsed()) return cmd_estimate(est, out, err);
    if (v_tau->parsed()) {
      if (max_state > 0xFFFFFFFFULL) throw InvalidArgument("max-state too large");
      const auto rows = tau_exhaustive_check(max_len, static_cast<Symbol>(max_state));
      ExperimentReport report;
      report.name = "tau-exhaustive";
      report.add_parameter("max_len", std::to_string(max_len));
      report.add_parameter("max_state", std::to_string(max_state));
      out << std::left << std::setw(30) << "property" << std::setw(14) << "checked" << "violations\n";
      bool ok = true;
      for (const auto& row : rows) {
        out << std::left << std::setw(30) << row.property << std::setw(14) << row.checked << row.violations << '\n';
        std::string key = row.property;
        std::replace(key.begin(), key.end(), ' ', '_');
        report.add_metric(key + ".checked", static_cast<double>(row.checked));
        report.add_metric(key + ".violations", static_cast<double>(row.violations));
        if (row.witnesses) report.add_metric(key + ".arrival_count_differs", static_cast<double>(row.witnesses));
        ok = ok && row.violations == 0;
      }
      report.pass = ok;
      return finish_report(report, report_path, out);
    }
    if (v_cons->parsed()) {
      ConsistencyConfig config;
      config.truth = SimConfig{lambda, ServiceDist::parse(service), 1, 1000, seed};
      config.n_list = parse_uint_list(n_list);
      config.alpha = cons_alpha;
      config.base = BasePmf::parse(cons_base);
      config.lst_range = lst_range;
      return finish_report(consistency_experiment(config), report_path, out);
    }
    if (v_bvm->parsed()) {
      BvmConfig config;
      config.truth = SimConfig{lambda, ServiceDist::parse(service), 1, 1000, seed};
      config.n = bvm_n;
      config.draws = draws;
      config.truncation = truncation;
      config.z_grid = parse_double_list(z_grid);
      return finish_report(bvm_experiment(config), report_path, out);
    }
    if (v_oracles->parsed()) {
      return finish_report(oracle_agreement(ServiceDist::parse(service), lambda, k_max), report_path, out);
    }
    if (v_pi->parsed()) {
      SimConfig config{lambda, ServiceDist::parse(service), pi_n, 1000, seed};
      DeparturePath path;
      if (pi_data.empty()) {
        path = simulate_path(config);
      } else {
        std::ifstream in(pi_data);
        if (!in) throw InvalidArgument("cannot open '" + pi_data + "'");
        path = DeparturePath{read_departures(in), config};
      }
      const auto rate = GammaPosterior(1.0, 1.0).update(interdeparture_times(path.records));
      const auto dp = DeltaDirichletPosterior(1.0, BasePmf::geometric(0.5)).update_with_marks(marks_of(path.records));
      return finish_report(pi_empirical_check(path, EstimatorContext::from_posteriors(rate, dp)), report_path, out);
    }
  } catch (const CorruptData& e) {
    err << "error: corrupt data: " << e.what() << '\n';
    return kExitCorruptData;
  } catch (const StabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidParameters;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidParameters;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidParameters;
  }
  return kExitInvalidParameters;
}

}  // namespace mg1
