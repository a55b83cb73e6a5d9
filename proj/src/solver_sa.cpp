#include <algorithm>
#include <chrono>
#include <cmath>

#include "mecplace/solvers.hpp"
#include "solver_internal.hpp"

namespace mecplace {

using detail::PlacementState;

namespace detail {

namespace {

Role other(Role r) { return r == Role::Primary ? Role::Backup : Role::Primary; }

// (i) move one request's primary or backup to a different feasible slot
bool move_reassign(PlacementState& st, Rng& rng) {
  const std::vector<int> served = st.served_ids();
  if (served.empty()) return false;
  const int req_id = served[rng.bounded(served.size())];
  const Role role = rng.bounded(2) == 0 ? Role::Primary : Role::Backup;
  const ServiceRequest& r = st.instance().request(req_id);
  const SlotKey cur = *st.slot_of(req_id, role);

  std::vector<std::pair<int, int>> options;
  for (const int site : st.instance().sites()) {
    if (!st.instance().delay_ok(r, site)) continue;
    for (int server = 0; server < st.instance().resources().servers_per_site; ++server) {
      if (site == cur.site && server == cur.server) continue;
      if (!st.anti_affinity_ok(req_id, role, site, server)) continue;
      if (st.can_place(r, role, site, server)) options.emplace_back(site, server);
    }
  }
  if (options.empty()) return false;
  const auto [site, server] = options[rng.bounded(options.size())];
  st.unplace_canonical(r, role);
  st.place_first_mode(r, role, site, server);
  return true;
}

// (ii) move one instance entry (and every request on it) to another server
bool move_migrate(PlacementState& st, Rng& rng) {
  if (st.entries().empty()) return false;
  std::vector<SlotKey> keys;
  keys.reserve(st.entries().size());
  for (const auto& [key, e] : st.entries()) keys.push_back(key);
  const SlotKey src = keys[rng.bounded(keys.size())];
  const PlacementState::Entry& e = st.entries().at(src);
  const PlacementInstance& inst = st.instance();
  const int need_cores = inst.resources().vnf_cores * e.count;

  std::vector<std::pair<int, int>> options;
  for (const int site : inst.sites()) {
    bool delays_ok = true;
    for (const int id : e.requests)
      delays_ok &= inst.delay_ok(inst.request(id), site);
    if (!delays_ok) continue;
    for (int server = 0; server < inst.resources().servers_per_site; ++server) {
      if (site == src.site && server == src.server) continue;
      if (st.cores_taken(site, server) + need_cores > inst.resources().server_cores) continue;
      bool affinity_ok = true;
      for (const int id : e.requests) {
        const auto o = st.slot_of(id, other(src.role));
        if (!o) continue;
        if (inst.site_anti_affinity() ? o->site == site
                                      : (o->site == site && o->server == server)) {
          affinity_ok = false;
          break;
        }
      }
      if (affinity_ok) options.emplace_back(site, server);
    }
  }
  if (options.empty()) return false;
  const auto [site, server] = options[rng.bounded(options.size())];
  st.migrate_entry(src, site, server);
  return true;
}

// (iii) retarget all of one entry's requests onto a compatible entry with
// spare throughput, deleting the emptied entry
bool move_consolidate(PlacementState& st, Rng& rng) {
  if (st.entries().size() < 2) return false;
  std::vector<SlotKey> keys;
  keys.reserve(st.entries().size());
  for (const auto& [key, e] : st.entries()) keys.push_back(key);
  const SlotKey src = keys[rng.bounded(keys.size())];
  const PlacementState::Entry& se = st.entries().at(src);
  const PlacementInstance& inst = st.instance();

  std::vector<SlotKey> options;
  for (const auto& [dst, de] : st.entries()) {
    if (dst == src || dst.vnf_type != src.vnf_type || dst.role != src.role) continue;
    if (dst.site == src.site && dst.server == src.server) continue;
    const double spare = inst.resources().vnf_throughput_mbps * de.count - de.load_mbps;
    if (se.load_mbps > spare + 1e-9) continue;
    bool ok = true;
    for (const int id : se.requests) {
      const ServiceRequest& r = inst.request(id);
      if (!inst.delay_ok(r, dst.site)) {
        ok = false;
        break;
      }
      const auto o = st.slot_of(id, other(src.role));
      if (o && (inst.site_anti_affinity() ? o->site == dst.site
                                          : (o->site == dst.site && o->server == dst.server))) {
        ok = false;
        break;
      }
    }
    if (ok) options.push_back(dst);
  }
  if (options.empty()) return false;
  st.consolidate_entry(src, options[rng.bounded(options.size())]);
  return true;
}

}  // namespace

bool try_neighbor_move(PlacementState& st, Rng& rng, const SaParams& p) {
  for (int attempt = 0; attempt < p.max_retries; ++attempt) {
    const double u = rng.canonical();
    bool applied = false;
    if (u < p.p_reassign)
      applied = move_reassign(st, rng);
    else if (u < p.p_reassign + p.p_migrate)
      applied = move_migrate(st, rng);
    else
      applied = move_consolidate(st, rng);
    if (applied) return true;
  }
  return false;
}

}  // namespace detail

Solution sa_neighbor(const Solution& s, const PlacementInstance& inst, Rng& rng,
                     const SaParams& p) {
  p.validate();
  PlacementState st = PlacementState::from_solution(inst, s);
  detail::try_neighbor_move(st, rng, p);
  return st.to_solution();
}

SolveReport solve_sa(const PlacementInstance& inst, const SaParams& p) {
  p.validate();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(p.seed);

  std::vector<int> rejected;
  PlacementState current = PlacementState::from_solution(inst, sa_initial_solution(inst, &rejected));
  double current_cost = current.cost();

  PlacementState best = current;
  double best_cost = current_cost;

  long long evals = 0;
  long long outer = 0;
  for (double t = p.t0; t > p.t_min; t *= p.alpha) {
    ++outer;
    for (int i = 0; i < p.max_iterations; ++i) {
      PlacementState next = current;
      detail::try_neighbor_move(next, rng, p);
      ++evals;
      const double next_cost = next.cost();
      bool accept = next_cost <= current_cost;
      if (!accept) accept = rng.canonical() < std::exp((current_cost - next_cost) / t);
      if (accept) {
        current = std::move(next);
        current_cost = next_cost;
        if (current_cost < best_cost) {
          best = current;
          best_cost = current_cost;
        }
      }
    }
  }

  SolveReport rep = detail::finish_report("sa", best, std::move(rejected), start);
  rep.seed = p.seed;
  rep.iterations_evaluated = evals;
  rep.outer_iterations = outer;
  return rep;
}

}  // namespace mecplace
