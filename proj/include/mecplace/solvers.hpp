#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mecplace/model.hpp"
#include "mecplace/rng.hpp"

namespace mecplace {

struct SaParams {
  double t0 = 100.0;
  double t_min = 0.1;
  double alpha = 0.9;
  int max_iterations = 50;
  std::uint64_t seed = 0;
  // Neighborhood move mix: reassign one request's slot / migrate one entry /
  // consolidate two entries.
  double p_reassign = 0.5;
  double p_migrate = 0.3;
  int max_retries = 20;

  void validate() const;
};

// Exhaustive search refuses instances above these bounds instead of hanging.
struct ExactCaps {
  int max_requests = 12;
  int max_sites = 5;
  int max_servers_per_site = 3;
};

struct InstanceCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveReport {
  std::string solver;
  std::uint64_t seed = 0;
  Solution solution;
  CostBreakdown cost;
  std::vector<int> rejected_requests;       // sorted request ids
  long long iterations_evaluated = 0;       // SA: neighbor evaluations; exact: search nodes
  long long outer_iterations = 0;           // SA cooling steps
  double wall_time_s = 0.0;                 // never serialized
};

// Requests with no delay-feasible site (hence no feasible primary/backup
// pair); rejected identically by every solver.
std::vector<int> unservable_requests(const PlacementInstance& inst);

// Depth-first branch-and-bound over requests in descending data-rate order;
// admissible bound from the unavoidable per-request traffic cost. Optimal
// over solutions serving every servable request; throws InstanceCapError
// above the caps and std::runtime_error if full service is impossible.
SolveReport solve_exact(const PlacementInstance& inst, const ExactCaps& caps = {});

// First-fit construction: requests by ascending delay bound, slots scanned
// site id asc / server index asc, reuse before new instances. Unplaceable
// requests go to `rejected`.
Solution sa_initial_solution(const PlacementInstance& inst, std::vector<int>* rejected = nullptr);

// One random neighborhood move (feasibility-preserving); returns the input
// solution unchanged when no move applies within max_retries.
Solution sa_neighbor(const Solution& s, const PlacementInstance& inst, Rng& rng,
                     const SaParams& p = {});

SolveReport solve_sa(const PlacementInstance& inst, const SaParams& p);

// Nearest-feasible-site placement, backup on the same site when a second
// server fits, else the next-nearest site.
SolveReport solve_greedy(const PlacementInstance& inst);

// First slot in plain scan order that satisfies the constraints; backup
// continues the same scan past the primary.
SolveReport solve_baseline(const PlacementInstance& inst);

// Report JSON (excludes wall time so output is byte-reproducible).
nlohmann::json report_to_json(const SolveReport& r);
SolveReport report_from_json(const nlohmann::json& j);

}  // namespace mecplace
