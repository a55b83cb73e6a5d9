// mecplace: MEC site selection and survivable VNF placement toolkit.
//
// Subcommands: select, gen, solve, verify, bench.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mecplace/centrality.hpp"
#include "mecplace/harness.hpp"
#include "mecplace/kernels.hpp"
#include "mecplace/model.hpp"
#include "mecplace/solvers.hpp"
#include "mecplace/survivability.hpp"
#include "mecplace/topology.hpp"

namespace {

using namespace mecplace;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

Config load_config(const std::string& path) {
  if (path.empty()) return Config{};
  return config_from_json(nlohmann::json::parse(read_text_file(path)));
}

Topology load_topology(const std::string& path, std::vector<std::string>* warnings = nullptr) {
  return parse_sndlib(read_text_file(path), warnings);
}

std::vector<int> load_sites(const std::string& path) {
  const auto j = nlohmann::json::parse(read_text_file(path));
  if (j.is_array()) return j.get<std::vector<int>>();
  return j.at("sites").get<std::vector<int>>();
}

nlohmann::json selection_to_json(const SiteSelection& sel, const std::string& method,
                                 const nlohmann::json& params) {
  return {{"sites", sel.sites},
          {"avg_delay_ms", sel.avg_delay_ms},
          {"max_delay_ms", sel.max_delay_ms},
          {"method", method},
          {"params", params}};
}

int cmd_select(const std::string& topology_path, double dmax, const std::string& method,
               const std::string& metric, int k, std::uint64_t seed, const std::string& out_path,
               const std::string& metrics_path, const std::string& dump_path) {
  std::vector<std::string> warnings;
  const Topology topo = load_topology(topology_path, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  const DelayMatrix delay = all_pairs_delay(topo);

  SiteSelection sel;
  nlohmann::json params;
  std::string metrics_csv;
  if (method == "cc") {
    const CcMetric m = cc_metric_from_string(metric);
    sel = select_sites_cc(topo, delay, dmax, m);
    params = {{"dmax_ms", dmax}, {"cc_metric", metric}};
    // per-k coverage of the establishment order
    std::ostringstream csv;
    csv << "k,avg_delay_ms,max_delay_ms,method\n";
    for (std::size_t i = 1; i <= sel.sites.size(); ++i) {
      const std::vector<int> prefix(sel.sites.begin(), sel.sites.begin() + i);
      const auto [avg, mx] = coverage_metrics(delay, prefix);
      csv << i << ',' << fmt6(avg) << ',' << fmt6(mx) << ",cc\n";
    }
    metrics_csv = csv.str();
  } else if (method == "random") {
    if (k < 1) {
      std::cerr << "error: --k is required for random selection\n";
      return 2;
    }
    sel = select_sites_random(delay, k, seed);
    params = {{"k", k}, {"seed", seed}, {"resampled_per_k", true}};
    std::ostringstream csv;
    csv << "k,avg_delay_ms,max_delay_ms,method\n";
    csv << k << ',' << fmt6(sel.avg_delay_ms) << ',' << fmt6(sel.max_delay_ms) << ",random\n";
    metrics_csv = csv.str();
  } else {
    std::cerr << "error: unknown method '" << method << "'\n";
    return 2;
  }

  const std::string payload = selection_to_json(sel, method, params).dump(2) + "\n";
  if (out_path.empty())
    std::cout << payload;
  else
    write_text_file(out_path, payload);
  if (!metrics_path.empty()) write_text_file(metrics_path, metrics_csv);
  if (!dump_path.empty()) {
    nlohmann::json dump = {{"topology", topology_to_json(topo)},
                           {"delay_matrix", delay_matrix_to_json(delay)}};
    write_text_file(dump_path, dump.dump(2) + "\n");
  }
  std::cerr << "selected " << sel.sites.size() << " site(s), max delay " << fmt6(sel.max_delay_ms)
            << " ms, avg " << fmt6(sel.avg_delay_ms) << " ms\n";
  return 0;
}

int cmd_solve(const std::string& solver, const std::string& topology_path,
              const std::string& requests_path, const std::string& config_path,
              const std::string& sites_path, std::uint64_t seed, const SaParams& sa_base,
              const std::string& out_path) {
  const Topology topo = load_topology(topology_path);
  const DelayMatrix delay = all_pairs_delay(topo);
  const Config config = load_config(config_path);
  const std::vector<ServiceRequest> requests =
      requests_from_json(nlohmann::json::parse(read_text_file(requests_path)));
  const PlacementInstance inst(config.service_types, requests, load_sites(sites_path), delay,
                               config.resources, config.cost, config.site_anti_affinity);

  const SolveReport rep = run_solver(solver, inst, sa_base, seed, ExactCaps{});
  const std::string payload = report_to_json(rep).dump(2) + "\n";
  if (out_path.empty())
    std::cout << payload;
  else
    write_text_file(out_path, payload);
  std::cerr << solver << ": total cost " << fmt6(rep.cost.total) << ", "
            << rep.solution.assignments.size() << " served, " << rep.rejected_requests.size()
            << " rejected, " << fmt6(rep.wall_time_s) << " s\n";
  return 0;
}

int cmd_verify(const std::string& solution_path, const std::string& topology_path,
               const std::string& requests_path, const std::string& config_path,
               const std::string& sites_path, const std::string& report_csv) {
  const Topology topo = load_topology(topology_path);
  const DelayMatrix delay = all_pairs_delay(topo);
  const Config config = load_config(config_path);
  const std::vector<ServiceRequest> requests =
      requests_from_json(nlohmann::json::parse(read_text_file(requests_path)));
  const PlacementInstance inst(config.service_types, requests, load_sites(sites_path), delay,
                               config.resources, config.cost, config.site_anti_affinity);

  const auto j = nlohmann::json::parse(read_text_file(solution_path));
  Solution solution;
  std::vector<int> rejected;
  if (j.contains("solution")) {
    const SolveReport rep = report_from_json(j);
    solution = rep.solution;
    rejected = rep.rejected_requests;
  } else {
    solution = solution_from_json(j);
  }

  std::vector<int> served;
  for (const ServiceRequest& r : requests)
    if (!std::binary_search(rejected.begin(), rejected.end(), r.id)) served.push_back(r.id);

  const FeasibilityReport feas = check_feasibility(solution, inst, served);
  for (const Violation& v : feas.violations)
    std::cerr << "violation [" << to_string(v.kind) << "] " << v.detail << "\n";

  const std::vector<FailureScenario> scenarios = enumerate_single_failures(solution);
  std::ostringstream csv;
  csv << "scenario,kind,target,affected,survivors,all_survive\n";
  bool all_survive = true;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto verdicts = survives(solution, scenarios[i], inst);
    int ok = 0;
    for (const auto& v : verdicts) ok += v.survives ? 1 : 0;
    const bool scenario_ok = ok == static_cast<int>(verdicts.size());
    all_survive &= scenario_ok;
    csv << i << ',' << (scenarios[i].kind == FailureScenario::Kind::Server ? "server" : "instance")
        << ',' << scenarios[i].describe() << ',' << verdicts.size() << ',' << ok << ','
        << (scenario_ok ? "yes" : "no") << '\n';
  }
  if (!report_csv.empty()) write_text_file(report_csv, csv.str());

  std::cerr << "feasibility: " << (feas.feasible ? "ok" : "VIOLATED") << "; " << scenarios.size()
            << " single-failure scenarios, " << (all_survive ? "all survive" : "SURVIVAL GAPS")
            << "\n";
  return feas.feasible && all_survive ? 0 : 1;
}

int cmd_gen(const std::string& topology_path, const std::string& config_path, int count,
            std::uint64_t seed, const std::string& out_path) {
  const Topology topo = load_topology(topology_path);
  const Config config = load_config(config_path);
  const std::vector<double> mix(config.service_types.size(),
                                1.0 / static_cast<double>(config.service_types.size()));
  const auto requests =
      generate_requests(count, mix, config.service_types, topo.node_count(), seed);
  const std::string payload = requests_to_json(requests).dump(2) + "\n";
  if (out_path.empty())
    std::cout << payload;
  else
    write_text_file(out_path, payload);
  return 0;
}

int cmd_bench(const std::string& plan_path, bool paper_scale, const std::string& fig2_out,
              int fig2_kmax, int fig2_seeds) {
  ExperimentPlan plan = plan_from_json(nlohmann::json::parse(read_text_file(plan_path)));
  if (paper_scale) apply_paper_scale(&plan);
  const ExperimentResult result = run_experiment(plan);
  std::cerr << "bench: " << result.raw.size() << " cells -> " << plan.output_dir << "\n";

  if (!fig2_out.empty()) {
    const Topology topo = load_topology(plan.topology_path);
    const DelayMatrix delay = all_pairs_delay(topo);
    const auto rows = emit_fig2_table(topo, delay, fig2_kmax, fig2_seeds, plan.cc_metric,
                                      plan.base_seed);
    write_text_file(fig2_out, fig2_csv(rows));
    std::cerr << "fig2 table -> " << fig2_out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MEC facility selection and survivable VNF placement toolkit"};
  app.require_subcommand(1);

  std::string kernels_backend = "auto";
  app.add_option("--kernels", kernels_backend, "Kernel backend: auto|scalar|avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  // select
  auto* select = app.add_subcommand("select", "Choose MEC facility locations");
  std::string sel_topo, sel_method = "cc", sel_metric = "hop", sel_out, sel_csv, sel_dump;
  double sel_dmax = 2.0;
  int sel_k = 0;
  std::uint64_t sel_seed = 1;
  select->add_option("--topology", sel_topo, "SNDlib topology file")->required();
  select->add_option("--dmax", sel_dmax, "Max allowed delay to a facility, ms");
  select->add_option("--method", sel_method, "cc|random")->check(CLI::IsMember({"cc", "random"}));
  select->add_option("--cc-metric", sel_metric, "Ranking metric for cc: hop|delay")
      ->check(CLI::IsMember({"hop", "delay"}));
  select->add_option("--k", sel_k, "Site count (random method only)");
  select->add_option("--seed", sel_seed, "Random selection seed");
  select->add_option("--out", sel_out, "SiteSelection JSON output (default stdout)");
  select->add_option("--metrics-csv", sel_csv, "Per-k coverage metrics CSV");
  select->add_option("--dump-topology", sel_dump, "Dump parsed topology + delay matrix JSON");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a service request batch");
  std::string gen_topo, gen_config, gen_out;
  int gen_count = 50;
  std::uint64_t gen_seed = 1;
  gen->add_option("--topology", gen_topo, "SNDlib topology file")->required();
  gen->add_option("--config", gen_config, "Config JSON (defaults when omitted)");
  gen->add_option("--count", gen_count, "Number of requests");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Requests JSON output (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Place primary+backup VNFs for a request batch");
  std::string so_solver, so_topo, so_requests, so_config, so_sites, so_out;
  std::uint64_t so_seed = 1;
  mecplace::SaParams sa_base;
  solve->add_option("--solver", so_solver, "exact|sa|greedy|baseline")
      ->required()
      ->check(CLI::IsMember({"exact", "sa", "greedy", "baseline"}));
  solve->add_option("--topology", so_topo, "SNDlib topology file")->required();
  solve->add_option("--requests", so_requests, "Requests JSON")->required();
  solve->add_option("--config", so_config, "Config JSON (defaults when omitted)");
  solve->add_option("--sites", so_sites, "SiteSelection JSON or bare id array")->required();
  solve->add_option("--seed", so_seed, "Solver seed (sa)");
  solve->add_option("--sa-t0", sa_base.t0, "SA initial temperature");
  solve->add_option("--sa-tmin", sa_base.t_min, "SA stop temperature");
  solve->add_option("--sa-alpha", sa_base.alpha, "SA cooling rate");
  solve->add_option("--sa-iters", sa_base.max_iterations, "SA inner-loop iterations");
  solve->add_option("--out", so_out, "SolveReport JSON output (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "Check feasibility and single-failure survival");
  std::string ve_solution, ve_topo, ve_requests, ve_config, ve_sites, ve_csv;
  verify->add_option("--solution", ve_solution, "Solution or SolveReport JSON")->required();
  verify->add_option("--topology", ve_topo, "SNDlib topology file")->required();
  verify->add_option("--requests", ve_requests, "Requests JSON")->required();
  verify->add_option("--config", ve_config, "Config JSON (defaults when omitted)");
  verify->add_option("--sites", ve_sites, "SiteSelection JSON or bare id array")->required();
  verify->add_option("--report-csv", ve_csv, "Per-scenario survival report CSV");

  // bench
  auto* bench = app.add_subcommand("bench", "Run an experiment plan");
  std::string be_plan, be_fig2;
  bool be_paper = false;
  int be_kmax = 10, be_seeds = 100;
  bench->add_option("--plan", be_plan, "ExperimentPlan JSON")->required();
  bench->add_flag("--paper-scale", be_paper, "Scale counts/seeds up to the reference scenario");
  bench->add_option("--fig2-csv", be_fig2, "Also emit the CC-vs-random site sweep CSV");
  bench->add_option("--fig2-kmax", be_kmax, "Sweep k = 1..kmax");
  bench->add_option("--fig2-seeds", be_seeds, "Random-selection seeds per k");

  CLI11_PARSE(app, argc, argv);

  try {
    if (kernels_backend == "scalar")
      mecplace::kernels::force_backend(mecplace::kernels::Backend::Scalar);
    else if (kernels_backend == "avx2")
      mecplace::kernels::force_backend(mecplace::kernels::Backend::Avx2);

    if (select->parsed())
      return cmd_select(sel_topo, sel_dmax, sel_method, sel_metric, sel_k, sel_seed, sel_out,
                        sel_csv, sel_dump);
    if (gen->parsed()) return cmd_gen(gen_topo, gen_config, gen_count, gen_seed, gen_out);
    if (solve->parsed())
      return cmd_solve(so_solver, so_topo, so_requests, so_config, so_sites, so_seed, sa_base,
                       so_out);
    if (verify->parsed())
      return cmd_verify(ve_solution, ve_topo, ve_requests, ve_config, ve_sites, ve_csv);
    if (bench->parsed()) return cmd_bench(be_plan, be_paper, be_fig2, be_kmax, be_seeds);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
