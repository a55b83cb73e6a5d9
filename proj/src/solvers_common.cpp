#include <algorithm>
#include <chrono>
#include <optional>

#include <nlohmann/json.hpp>

#include "mecplace/solvers.hpp"
#include "solver_internal.hpp"

namespace mecplace {

using detail::PlacementState;

void SaParams::validate() const {
  if (!(t0 > t_min && t_min > 0.0))
    throw std::invalid_argument("SA params require t0 > t_min > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("SA alpha must be in (0,1)");
  if (max_iterations < 1) throw std::invalid_argument("SA max_iterations must be >= 1");
  if (p_reassign < 0.0 || p_migrate < 0.0 || p_reassign + p_migrate > 1.0)
    throw std::invalid_argument("SA move probabilities must be non-negative and sum to <= 1");
  if (max_retries < 1) throw std::invalid_argument("SA max_retries must be >= 1");
}

std::vector<int> unservable_requests(const PlacementInstance& inst) {
  std::vector<int> out;
  for (const ServiceRequest& r : inst.requests()) {
    // A feasible primary/backup pair needs either one feasible site with two
    // servers or two feasible sites (site anti-affinity forces the latter).
    int feasible_sites = 0;
    for (const int site : inst.sites())
      if (inst.delay_ok(r, site)) ++feasible_sites;
    const bool ok = inst.site_anti_affinity()
                        ? feasible_sites >= 2
                        : (feasible_sites >= 2 ||
                           (feasible_sites == 1 && inst.resources().servers_per_site >= 2));
    if (!ok) out.push_back(r.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

// Shared first-fit helpers ---------------------------------------------------

// First resource-feasible slot over `site_order`, honoring delay and
// anti-affinity against the request's already-placed other role.
std::optional<std::pair<int, int>> first_fit_slot(const PlacementState& st,
                                                  const ServiceRequest& r, Role role,
                                                  std::span<const int> site_order) {
  const PlacementInstance& inst = st.instance();
  for (const int site : site_order) {
    if (!inst.delay_ok(r, site)) continue;
    for (int server = 0; server < inst.resources().servers_per_site; ++server) {
      if (!st.anti_affinity_ok(r.id, role, site, server)) continue;
      if (st.can_place(r, role, site, server)) return std::make_pair(site, server);
    }
  }
  return std::nullopt;
}

// Requests ordered by ascending delay bound (ties by id).
std::vector<const ServiceRequest*> by_delay_bound(const PlacementInstance& inst) {
  std::vector<const ServiceRequest*> order;
  order.reserve(inst.requests().size());
  for (const ServiceRequest& r : inst.requests()) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const ServiceRequest* a, const ServiceRequest* b) {
    if (a->max_delay_ms != b->max_delay_ms) return a->max_delay_ms < b->max_delay_ms;
    return a->id < b->id;
  });
  return order;
}

SolveReport finish_report(std::string solver, const PlacementState& st, std::vector<int> rejected,
                          std::chrono::steady_clock::time_point start) {
  SolveReport rep;
  rep.solver = std::move(solver);
  rep.solution = st.to_solution();
  rep.cost = evaluate_cost(rep.solution, st.instance());
  std::sort(rejected.begin(), rejected.end());
  rep.rejected_requests = std::move(rejected);
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace detail

Solution sa_initial_solution(const PlacementInstance& inst, std::vector<int>* rejected) {
  PlacementState st(inst);
  for (const ServiceRequest* r : detail::by_delay_bound(inst)) {
    const auto primary = detail::first_fit_slot(st, *r, Role::Primary, inst.sites());
    if (!primary) {
      if (rejected) rejected->push_back(r->id);
      continue;
    }
    st.place_first_mode(*r, Role::Primary, primary->first, primary->second);
    const auto backup = detail::first_fit_slot(st, *r, Role::Backup, inst.sites());
    if (!backup) {
      st.unplace_canonical(*r, Role::Primary);
      if (rejected) rejected->push_back(r->id);
      continue;
    }
    st.place_first_mode(*r, Role::Backup, backup->first, backup->second);
  }
  return st.to_solution();
}

SolveReport solve_greedy(const PlacementInstance& inst) {
  const auto start = std::chrono::steady_clock::now();
  PlacementState st(inst);
  std::vector<int> rejected;
  for (const ServiceRequest* r : detail::by_delay_bound(inst)) {
    // sites by distance from the attachment BS, ties by id
    std::vector<int> near(inst.sites().begin(), inst.sites().end());
    std::stable_sort(near.begin(), near.end(), [&](int a, int b) {
      const double da = inst.site_node_delay_ms(a, r->node);
      const double db = inst.site_node_delay_ms(b, r->node);
      if (da != db) return da < db;
      return a < b;
    });

    const auto primary = detail::first_fit_slot(st, *r, Role::Primary, near);
    if (!primary) {
      rejected.push_back(r->id);
      continue;
    }
    st.place_first_mode(*r, Role::Primary, primary->first, primary->second);

    // same site first (anti-affinity already excludes the primary server),
    // then the remaining sites in distance order
    std::vector<int> backup_order;
    if (!inst.site_anti_affinity()) backup_order.push_back(primary->first);
    for (const int site : near)
      if (site != primary->first) backup_order.push_back(site);
    const auto backup = detail::first_fit_slot(st, *r, Role::Backup, backup_order);
    if (!backup) {
      st.unplace_canonical(*r, Role::Primary);
      rejected.push_back(r->id);
      continue;
    }
    st.place_first_mode(*r, Role::Backup, backup->first, backup->second);
  }
  return detail::finish_report("greedy", st, std::move(rejected), start);
}

SolveReport solve_baseline(const PlacementInstance& inst) {
  const auto start = std::chrono::steady_clock::now();
  PlacementState st(inst);
  std::vector<int> rejected;
  const int servers = inst.resources().servers_per_site;
  for (const ServiceRequest& r : inst.requests()) {  // input order
    // one linear scan: primary takes the first feasible slot, backup the
    // next feasible position after it
    std::optional<std::pair<int, int>> primary, backup;
    for (std::size_t si = 0; si < inst.sites().size() && !backup; ++si) {
      const int site = inst.sites()[si];
      if (!inst.delay_ok(r, site)) continue;
      for (int server = 0; server < servers && !backup; ++server) {
        if (!primary) {
          if (st.can_place(r, Role::Primary, site, server)) {
            primary = {site, server};
            st.place_first_mode(r, Role::Primary, site, server);
          }
          continue;
        }
        if (!st.anti_affinity_ok(r.id, Role::Backup, site, server)) continue;
        if (st.can_place(r, Role::Backup, site, server)) {
          backup = {site, server};
          st.place_first_mode(r, Role::Backup, site, server);
        }
      }
    }
    if (!backup) {
      if (primary) st.unplace_canonical(r, Role::Primary);
      rejected.push_back(r.id);
    }
  }
  return detail::finish_report("baseline", st, std::move(rejected), start);
}

namespace {

nlohmann::json cost_to_json(const CostBreakdown& c) {
  return {{"total", c.total}, {"server", c.server}, {"vnf", c.vnf}, {"traffic", c.traffic}};
}

CostBreakdown cost_from_json(const nlohmann::json& j) {
  return {j.at("total").get<double>(), j.at("server").get<double>(), j.at("vnf").get<double>(),
          j.at("traffic").get<double>()};
}

}  // namespace

nlohmann::json report_to_json(const SolveReport& r) {
  return {{"solver", r.solver},
          {"seed", r.seed},
          {"cost", cost_to_json(r.cost)},
          {"rejected_requests", r.rejected_requests},
          {"iterations_evaluated", r.iterations_evaluated},
          {"outer_iterations", r.outer_iterations},
          {"solution", solution_to_json(r.solution)}};
}

SolveReport report_from_json(const nlohmann::json& j) {
  SolveReport r;
  r.solver = j.at("solver").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.cost = cost_from_json(j.at("cost"));
  r.rejected_requests = j.at("rejected_requests").get<std::vector<int>>();
  r.iterations_evaluated = j.at("iterations_evaluated").get<long long>();
  r.outer_iterations = j.at("outer_iterations").get<long long>();
  r.solution = solution_from_json(j.at("solution"));
  return r;
}

}  // namespace mecplace
