#include <algorithm>
#include <chrono>
#include <limits>

#include "mecplace/solvers.hpp"
#include "solver_internal.hpp"

namespace mecplace {

using detail::PlacementState;
using Mode = PlacementState::Mode;

namespace {

struct Option {
  int site;
  int server;
  Mode mode;
  double delta;  // immediate cost increase of taking this option
};

class ExactSearch {
 public:
  ExactSearch(const PlacementInstance& inst, std::vector<const ServiceRequest*> order)
      : inst_(inst), order_(std::move(order)), state_(inst) {
    const CostModel& cm = inst.cost_model();
    // Admissible traffic-only bound: every still-unplaced request must pay
    // forwarding for primary and backup, each at least at its cheapest
    // feasible site.
    min_role_traffic_.reserve(order_.size());
    for (const ServiceRequest* r : order_) {
      double best = std::numeric_limits<double>::infinity();
      for (const int site : inst.sites()) {
        if (!inst.delay_ok(*r, site)) continue;
        const double units =
            cm.delay_weighted_traffic ? r->rate_mbps * inst.site_node_delay_ms(site, r->node)
                                      : r->rate_mbps;
        best = std::min(best, units);
      }
      min_role_traffic_.push_back(cm.weight_traffic * cm.traffic_cost_per_mbps * best);
    }
    lb_suffix_.assign(order_.size() + 1, 0.0);
    for (std::size_t i = order_.size(); i-- > 0;)
      lb_suffix_[i] = lb_suffix_[i + 1] + 2.0 * min_role_traffic_[i];
  }

  void run(double incumbent_cost, const Solution* incumbent) {
    best_cost_ = incumbent_cost;
    if (incumbent) {
      best_ = *incumbent;
      found_ = true;
    }
    dfs(0);
  }

  bool found() const { return found_; }
  const Solution& best() const { return best_; }
  long long nodes() const { return nodes_; }

 private:
  // Identical empty servers are interchangeable: allow the active ones plus
  // the single lowest-index empty server per site.
  void candidate_servers(int site, std::vector<int>* out) const {
    out->clear();
    bool empty_seen = false;
    for (int server = 0; server < inst_.resources().servers_per_site; ++server) {
      if (state_.server_active(site, server))
        out->push_back(server);
      else if (!empty_seen) {
        out->push_back(server);
        empty_seen = true;
      }
    }
  }

  std::vector<Option> options_for(const ServiceRequest& r, Role role) {
    const CostModel& cm = inst_.cost_model();
    std::vector<Option> opts;
    std::vector<int> servers;
    for (const int site : inst_.sites()) {
      if (!inst_.delay_ok(r, site)) continue;
      const double traffic_delta =
          cm.weight_traffic * cm.traffic_cost_per_mbps *
          (cm.delay_weighted_traffic ? r.rate_mbps * inst_.site_node_delay_ms(site, r.node)
                                     : r.rate_mbps);
      candidate_servers(site, &servers);
      for (const int server : servers) {
        if (!state_.anti_affinity_ok(r.id, role, site, server)) continue;
        const double activation =
            state_.server_active(site, server) ? 0.0 : cm.weight_server * cm.server_cost;
        if (state_.can_join(r, role, site, server))
          opts.push_back({site, server, Mode::Join, traffic_delta + activation});
        if (state_.can_new_instance(site, server))
          opts.push_back({site, server, Mode::NewInstance,
                          traffic_delta + activation + cm.weight_vnf * cm.vnf_cost});
      }
    }
    std::stable_sort(opts.begin(), opts.end(), [](const Option& a, const Option& b) {
      if (a.delta != b.delta) return a.delta < b.delta;
      if (a.site != b.site) return a.site < b.site;
      if (a.server != b.server) return a.server < b.server;
      return a.mode == Mode::Join && b.mode == Mode::NewInstance;
    });
    return opts;
  }

  void dfs(std::size_t depth) {
    ++nodes_;
    if (depth == order_.size()) {
      const double cost = state_.cost();
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_ = state_.to_solution();
        found_ = true;
      }
      return;
    }
    if (state_.cost() + lb_suffix_[depth] >= best_cost_) return;

    const ServiceRequest& r = *order_[depth];
    for (const Option& po : options_for(r, Role::Primary)) {
      if (state_.cost() + po.delta + min_role_traffic_[depth] + lb_suffix_[depth + 1] >=
          best_cost_)
        continue;
      state_.place(r, Role::Primary, po.site, po.server, po.mode);
      for (const Option& bo : options_for(r, Role::Backup)) {
        if (state_.cost() + bo.delta + lb_suffix_[depth + 1] >= best_cost_) continue;
        state_.place(r, Role::Backup, bo.site, bo.server, bo.mode);
        dfs(depth + 1);
        state_.unplace_exact(r, Role::Backup, bo.mode);
      }
      state_.unplace_exact(r, Role::Primary, po.mode);
    }
  }

  const PlacementInstance& inst_;
  std::vector<const ServiceRequest*> order_;
  PlacementState state_;
  std::vector<double> min_role_traffic_;
  std::vector<double> lb_suffix_;
  double best_cost_ = std::numeric_limits<double>::infinity();
  Solution best_;
  bool found_ = false;
  long long nodes_ = 0;
};

}  // namespace

SolveReport solve_exact(const PlacementInstance& inst, const ExactCaps& caps) {
  const auto start = std::chrono::steady_clock::now();
  if (static_cast<int>(inst.requests().size()) > caps.max_requests)
    throw InstanceCapError("exact solver cap exceeded: " +
                           std::to_string(inst.requests().size()) + " requests > " +
                           std::to_string(caps.max_requests));
  if (static_cast<int>(inst.sites().size()) > caps.max_sites)
    throw InstanceCapError("exact solver cap exceeded: " + std::to_string(inst.sites().size()) +
                           " sites > " + std::to_string(caps.max_sites));
  if (inst.resources().servers_per_site > caps.max_servers_per_site)
    throw InstanceCapError("exact solver cap exceeded: " +
                           std::to_string(inst.resources().servers_per_site) +
                           " servers/site > " + std::to_string(caps.max_servers_per_site));

  std::vector<int> rejected = unservable_requests(inst);

  // search over servable requests, descending data rate (ties: ascending id)
  std::vector<const ServiceRequest*> order;
  for (const ServiceRequest& r : inst.requests())
    if (!std::binary_search(rejected.begin(), rejected.end(), r.id)) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const ServiceRequest* a, const ServiceRequest* b) {
    if (a->rate_mbps != b->rate_mbps) return a->rate_mbps > b->rate_mbps;
    return a->id < b->id;
  });

  // first-fit incumbent when it already serves every servable request
  std::vector<int> ff_rejected;
  const Solution ff = sa_initial_solution(inst, &ff_rejected);
  std::sort(ff_rejected.begin(), ff_rejected.end());
  const bool ff_complete = ff_rejected == rejected;

  ExactSearch search(inst, std::move(order));
  search.run(ff_complete ? evaluate_cost(ff, inst).total : std::numeric_limits<double>::infinity(),
             ff_complete ? &ff : nullptr);
  if (!search.found())
    throw std::runtime_error("exact solver: no feasible assignment serves all servable requests");

  SolveReport rep;
  rep.solver = "exact";
  rep.solution = search.best();
  rep.cost = evaluate_cost(rep.solution, inst);
  rep.rejected_requests = std::move(rejected);
  rep.iterations_evaluated = search.nodes();
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace mecplace
