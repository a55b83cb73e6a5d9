#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mecplace/solvers.hpp"
#include "solver_state.hpp"

namespace mecplace::detail {

std::optional<std::pair<int, int>> first_fit_slot(const PlacementState& st,
                                                  const ServiceRequest& r, Role role,
                                                  std::span<const int> site_order);

std::vector<const ServiceRequest*> by_delay_bound(const PlacementInstance& inst);

SolveReport finish_report(std::string solver, const PlacementState& st, std::vector<int> rejected,
                          std::chrono::steady_clock::time_point start);

// One random feasibility-preserving move on the state; false when no move
// applied within p.max_retries attempts.
bool try_neighbor_move(PlacementState& st, Rng& rng, const SaParams& p);

}  // namespace mecplace::detail
