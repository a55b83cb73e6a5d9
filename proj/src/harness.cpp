#include "mecplace/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mecplace {

void ExperimentPlan::validate() const {
  if (topology_path.empty()) throw std::invalid_argument("plan: topology path missing");
  if (request_counts.empty()) throw std::invalid_argument("plan: request_counts empty");
  if (seeds_per_point < 1) throw std::invalid_argument("plan: seeds_per_point must be >= 1");
  if (solvers.empty()) throw std::invalid_argument("plan: solver list empty");
  if (dmax_ms <= 0.0) throw std::invalid_argument("plan: dmax must be positive");
  sa.validate();
}

nlohmann::json plan_to_json(const ExperimentPlan& p) {
  return {{"topology", p.topology_path},
          {"dmax_ms", p.dmax_ms},
          {"cc_metric", to_string(p.cc_metric)},
          {"request_counts", p.request_counts},
          {"seeds_per_point", p.seeds_per_point},
          {"base_seed", p.base_seed},
          {"solvers", p.solvers},
          {"config", config_to_json(p.config)},
          {"sa",
           {{"t0", p.sa.t0},
            {"t_min", p.sa.t_min},
            {"alpha", p.sa.alpha},
            {"max_iterations", p.sa.max_iterations}}},
          {"exact_caps",
           {{"max_requests", p.exact_caps.max_requests},
            {"max_sites", p.exact_caps.max_sites},
            {"max_servers_per_site", p.exact_caps.max_servers_per_site}}},
          {"output_dir", p.output_dir}};
}

ExperimentPlan plan_from_json(const nlohmann::json& j) {
  ExperimentPlan p;
  p.topology_path = j.at("topology").get<std::string>();
  p.dmax_ms = j.value("dmax_ms", p.dmax_ms);
  if (j.contains("cc_metric")) p.cc_metric = cc_metric_from_string(j.at("cc_metric"));
  if (j.contains("request_counts")) p.request_counts = j.at("request_counts").get<std::vector<int>>();
  p.seeds_per_point = j.value("seeds_per_point", p.seeds_per_point);
  p.base_seed = j.value("base_seed", p.base_seed);
  if (j.contains("solvers")) p.solvers = j.at("solvers").get<std::vector<std::string>>();
  if (j.contains("config")) p.config = config_from_json(j.at("config"));
  if (j.contains("sa")) {
    const auto& s = j.at("sa");
    p.sa.t0 = s.value("t0", p.sa.t0);
    p.sa.t_min = s.value("t_min", p.sa.t_min);
    p.sa.alpha = s.value("alpha", p.sa.alpha);
    p.sa.max_iterations = s.value("max_iterations", p.sa.max_iterations);
  }
  if (j.contains("exact_caps")) {
    const auto& c = j.at("exact_caps");
    p.exact_caps.max_requests = c.value("max_requests", p.exact_caps.max_requests);
    p.exact_caps.max_sites = c.value("max_sites", p.exact_caps.max_sites);
    p.exact_caps.max_servers_per_site =
        c.value("max_servers_per_site", p.exact_caps.max_servers_per_site);
  }
  p.output_dir = j.value("output_dir", p.output_dir);
  p.validate();
  return p;
}

void apply_paper_scale(ExperimentPlan* p) {
  p->request_counts = {50, 100, 150, 200};
  p->seeds_per_point = 20;
}

PlacementInstance make_instance(const Topology& t, const DelayMatrix& delay,
                                const std::vector<int>& sites, const Config& config,
                                int request_count, std::uint64_t seed) {
  const std::vector<double> mix(config.service_types.size(),
                                1.0 / static_cast<double>(config.service_types.size()));
  std::vector<ServiceRequest> requests =
      generate_requests(request_count, mix, config.service_types, t.node_count(), seed);
  return PlacementInstance(config.service_types, std::move(requests), sites, delay,
                           config.resources, config.cost, config.site_anti_affinity);
}

SolveReport run_solver(const std::string& name, const PlacementInstance& inst, const SaParams& sa,
                       std::uint64_t seed, const ExactCaps& caps) {
  if (name == "exact") {
    SolveReport r = solve_exact(inst, caps);
    r.seed = seed;
    return r;
  }
  if (name == "sa") {
    SaParams p = sa;
    p.seed = seed;
    return solve_sa(inst, p);
  }
  if (name == "greedy") {
    SolveReport r = solve_greedy(inst);
    r.seed = seed;
    return r;
  }
  if (name == "baseline") {
    SolveReport r = solve_baseline(inst);
    r.seed = seed;
    return r;
  }
  throw std::invalid_argument("unknown solver '" + name + "'");
}

namespace {

bool exact_within_caps(const PlacementInstance& inst, const ExactCaps& caps) {
  return static_cast<int>(inst.requests().size()) <= caps.max_requests &&
         static_cast<int>(inst.sites().size()) <= caps.max_sites &&
         inst.resources().servers_per_site <= caps.max_servers_per_site;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  const Topology topo = parse_sndlib(read_text_file(plan.topology_path));
  const DelayMatrix delay = all_pairs_delay(topo);
  const SiteSelection selection = select_sites_cc(topo, delay, plan.dmax_ms, plan.cc_metric);

  ExperimentResult result;
  result.sites = selection.sites;
  std::vector<int> sites_sorted = selection.sites;
  std::sort(sites_sorted.begin(), sites_sorted.end());

  for (const int count : plan.request_counts) {
    for (int si = 0; si < plan.seeds_per_point; ++si) {
      const std::uint64_t seed = plan.base_seed + static_cast<std::uint64_t>(si);
      const PlacementInstance inst =
          make_instance(topo, delay, sites_sorted, plan.config, count, seed);
      for (const std::string& solver : plan.solvers) {
        if (solver == "exact" && !exact_within_caps(inst, plan.exact_caps)) continue;  // absent
        SolveReport rep;
        try {
          rep = run_solver(solver, inst, plan.sa, seed, plan.exact_caps);
        } catch (const std::exception& e) {
          throw std::runtime_error("cell (count=" + std::to_string(count) +
                                   ", seed=" + std::to_string(seed) + ", solver=" + solver +
                                   ") failed: " + e.what());
        }
        const FeasibilityReport feas = check_feasibility(
            rep.solution, inst, [&] {
              std::vector<int> served;
              for (const ServiceRequest& r : inst.requests())
                if (!std::binary_search(rep.rejected_requests.begin(),
                                        rep.rejected_requests.end(), r.id))
                  served.push_back(r.id);
              return served;
            }());
        if (!feas.feasible)
          throw std::runtime_error("cell (count=" + std::to_string(count) +
                                   ", seed=" + std::to_string(seed) + ", solver=" + solver +
                                   ") produced an infeasible solution: " +
                                   feas.violations.front().detail);

        CellResult cell;
        cell.count = count;
        cell.seed = seed;
        cell.solver = solver;
        cell.cost = rep.cost;
        cell.active_servers = static_cast<int>(rep.solution.active_servers.size());
        for (const auto& [key, n] : rep.solution.vnf_instances) cell.vnf_instances += n;
        cell.rejected = static_cast<int>(rep.rejected_requests.size());
        cell.iterations = rep.iterations_evaluated;
        cell.wall_time_s = rep.wall_time_s;
        result.raw.push_back(std::move(cell));
      }
    }
  }

  // means per (count, solver), raw order preserved
  std::map<std::pair<int, std::string>, AggregateRow> agg;
  std::vector<std::pair<int, std::string>> agg_order;
  for (const CellResult& c : result.raw) {
    const auto key = std::make_pair(c.count, c.solver);
    if (!agg.count(key)) {
      agg_order.push_back(key);
      agg[key].count = c.count;
      agg[key].solver = c.solver;
    }
    AggregateRow& a = agg[key];
    a.cells += 1;
    a.mean_cost.total += c.cost.total;
    a.mean_cost.server += c.cost.server;
    a.mean_cost.vnf += c.cost.vnf;
    a.mean_cost.traffic += c.cost.traffic;
    a.mean_active_servers += c.active_servers;
    a.mean_vnf_instances += static_cast<double>(c.vnf_instances);
    a.mean_rejected += c.rejected;
  }
  for (const auto& key : agg_order) {
    AggregateRow a = agg.at(key);
    const double n = a.cells;
    a.mean_cost.total /= n;
    a.mean_cost.server /= n;
    a.mean_cost.vnf /= n;
    a.mean_cost.traffic /= n;
    a.mean_active_servers /= n;
    a.mean_vnf_instances /= n;
    a.mean_rejected /= n;
    result.aggregate.push_back(std::move(a));
  }

  if (!plan.output_dir.empty()) {
    std::filesystem::create_directories(plan.output_dir);
    const auto out = std::filesystem::path(plan.output_dir);
    write_text_file((out / "raw.csv").string(), raw_csv(result));
    write_text_file((out / "agg.csv").string(), agg_csv(result));
    write_text_file((out / "timings.csv").string(), timings_csv(result));

    nlohmann::json manifest;
    manifest["plan"] = plan_to_json(plan);
    manifest["config_hash"] = [&] {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%016llx",
                    static_cast<unsigned long long>(fnv1a(config_to_json(plan.config).dump())));
      return std::string(buf);
    }();
    std::vector<std::uint64_t> seeds;
    for (int si = 0; si < plan.seeds_per_point; ++si)
      seeds.push_back(plan.base_seed + static_cast<std::uint64_t>(si));
    manifest["seeds"] = seeds;
    manifest["sites"] = result.sites;
    manifest["site_selection"] = {{"dmax_ms", plan.dmax_ms},
                                  {"cc_metric", to_string(plan.cc_metric)},
                                  {"random_baseline", "independent sample per k"}};
    manifest["tool"] = "mecplace 0.1.0";
    write_text_file((out / "manifest.json").string(), manifest.dump(2) + "\n");
  }
  return result;
}

std::string raw_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << "count,seed,solver,total,server_cost,vnf_cost,traffic_cost,active_servers,"
         "vnf_instances,rejected,iterations\n";
  for (const CellResult& c : r.raw)
    out << c.count << ',' << c.seed << ',' << c.solver << ',' << fmt(c.cost.total) << ','
        << fmt(c.cost.server) << ',' << fmt(c.cost.vnf) << ',' << fmt(c.cost.traffic) << ','
        << c.active_servers << ',' << c.vnf_instances << ',' << c.rejected << ',' << c.iterations
        << '\n';
  return out.str();
}

std::string agg_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << "count,solver,cells,mean_total,mean_server_cost,mean_vnf_cost,mean_traffic_cost,"
         "mean_active_servers,mean_vnf_instances,mean_rejected\n";
  for (const AggregateRow& a : r.aggregate)
    out << a.count << ',' << a.solver << ',' << a.cells << ',' << fmt(a.mean_cost.total) << ','
        << fmt(a.mean_cost.server) << ',' << fmt(a.mean_cost.vnf) << ','
        << fmt(a.mean_cost.traffic) << ',' << fmt(a.mean_active_servers) << ','
        << fmt(a.mean_vnf_instances) << ',' << fmt(a.mean_rejected) << '\n';
  return out.str();
}

std::string timings_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << "count,seed,solver,wall_time_s\n";
  for (const CellResult& c : r.raw)
    out << c.count << ',' << c.seed << ',' << c.solver << ',' << fmt(c.wall_time_s) << '\n';
  return out.str();
}

std::vector<Fig2Row> emit_fig2_table(const Topology& t, const DelayMatrix& delay, int k_max,
                                     int seeds, CcMetric metric, std::uint64_t base_seed) {
  std::pair<int, int> bad;
  if (!delay.fully_connected(&bad))
    throw std::runtime_error("fig2 table requires a connected topology: node " +
                             std::to_string(bad.first) + " cannot reach node " +
                             std::to_string(bad.second));
  if (k_max < 1 || k_max > t.node_count())
    throw std::invalid_argument("fig2 table: k_max out of range");
  if (seeds < 1) throw std::invalid_argument("fig2 table: seeds must be >= 1");

  const std::vector<double> cc = metric == CcMetric::Hop
                                     ? closeness_centrality(all_pairs_hops(t))
                                     : closeness_centrality(delay);
  const std::vector<int> order = ranking_order(cc);

  std::vector<Fig2Row> rows;
  for (int k = 1; k <= k_max; ++k) {
    const std::vector<int> prefix(order.begin(), order.begin() + k);
    const auto [cc_avg, cc_max] = coverage_metrics(delay, prefix);
    rows.push_back({k, "cc", cc_avg, cc_max});

    double sum_avg = 0.0, sum_max = 0.0;
    for (int s = 0; s < seeds; ++s) {
      // fresh independent sample per (k, seed)
      const SiteSelection sel =
          select_sites_random(delay, k, base_seed + static_cast<std::uint64_t>(s));
      sum_avg += sel.avg_delay_ms;
      sum_max += sel.max_delay_ms;
    }
    rows.push_back({k, "random", sum_avg / seeds, sum_max / seeds});
  }
  return rows;
}

std::string fig2_csv(const std::vector<Fig2Row>& rows) {
  std::ostringstream out;
  out << "k,method,avg_delay_ms,max_delay_ms\n";
  for (const Fig2Row& r : rows)
    out << r.k << ',' << r.method << ',' << fmt(r.avg_delay_ms) << ',' << fmt(r.max_delay_ms)
        << '\n';
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

}  // namespace mecplace
