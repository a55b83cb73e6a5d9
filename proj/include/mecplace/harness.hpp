#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mecplace/centrality.hpp"
#include "mecplace/model.hpp"
#include "mecplace/solvers.hpp"
#include "mecplace/topology.hpp"

namespace mecplace {

// One experiment: sweep request counts x seeds x solvers on a topology with
// CC-selected sites, then aggregate.
struct ExperimentPlan {
  std::string topology_path;
  double dmax_ms = 2.0;
  CcMetric cc_metric = CcMetric::Hop;
  std::vector<int> request_counts{10, 20, 30, 40};
  int seeds_per_point = 3;
  std::uint64_t base_seed = 1;
  std::vector<std::string> solvers{"sa", "greedy", "baseline", "exact"};
  Config config;
  SaParams sa;
  ExactCaps exact_caps;
  std::string output_dir = "bench_out";

  void validate() const;
};

nlohmann::json plan_to_json(const ExperimentPlan& p);
ExperimentPlan plan_from_json(const nlohmann::json& j);

// Scales the plan up to the reference scenario: counts {50,100,150,200},
// 20 seeds per point.
void apply_paper_scale(ExperimentPlan* p);

struct CellResult {
  int count = 0;
  std::uint64_t seed = 0;
  std::string solver;
  CostBreakdown cost;
  int active_servers = 0;
  long long vnf_instances = 0;
  int rejected = 0;
  long long iterations = 0;
  double wall_time_s = 0.0;
};

struct AggregateRow {
  int count = 0;
  std::string solver;
  int cells = 0;
  CostBreakdown mean_cost;
  double mean_active_servers = 0.0;
  double mean_vnf_instances = 0.0;
  double mean_rejected = 0.0;
};

struct ExperimentResult {
  std::vector<int> sites;
  std::vector<CellResult> raw;
  std::vector<AggregateRow> aggregate;
};

// Runs the sweep and writes raw.csv, agg.csv, timings.csv, and manifest.json
// into plan.output_dir (created if missing). raw/agg are byte-reproducible
// under the same plan; timings.csv is not and carries all wall-clock data.
// A solver failure aborts with the (count, seed, solver) cell identified.
ExperimentResult run_experiment(const ExperimentPlan& plan);

// CSV renderings (fixed column order, %.6f numbers).
std::string raw_csv(const ExperimentResult& r);
std::string agg_csv(const ExperimentResult& r);
std::string timings_csv(const ExperimentResult& r);

struct Fig2Row {
  int k = 0;
  std::string method;  // "cc" | "random"
  double avg_delay_ms = 0.0;
  double max_delay_ms = 0.0;
};

// Site-count sweep comparing CC-ranked prefixes against random selection
// (random rows are means over `seeds` draws).
std::vector<Fig2Row> emit_fig2_table(const Topology& t, const DelayMatrix& delay, int k_max,
                                     int seeds, CcMetric metric = CcMetric::Hop,
                                     std::uint64_t base_seed = 1);

std::string fig2_csv(const std::vector<Fig2Row>& rows);

// Builds the instance a plan cell solves: CC sites at dmax + generated
// requests (equal type mix).
PlacementInstance make_instance(const Topology& t, const DelayMatrix& delay,
                                const std::vector<int>& sites, const Config& config,
                                int request_count, std::uint64_t seed);

// Dispatch by name: exact | sa | greedy | baseline.
SolveReport run_solver(const std::string& name, const PlacementInstance& inst, const SaParams& sa,
                       std::uint64_t seed, const ExactCaps& caps);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mecplace
