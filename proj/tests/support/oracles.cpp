#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

namespace oracle {

using namespace mecplace;

std::vector<std::vector<double>> dijkstra_all_pairs(const Topology& t, bool unit_weights) {
  const int n = t.node_count();
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const Link& l : t.links) {
    const double w = unit_weights ? 1.0 : l.delay_ms;
    adj[l.u].push_back({l.v, w});
    adj[l.v].push_back({l.u, w});
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, inf));
  for (int s = 0; s < n; ++s) {
    auto& d = dist[s];
    d[s] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, s});
    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (du > d[u]) continue;
      for (const auto& [v, w] : adj[u])
        if (du + w < d[v]) {
          d[v] = du + w;
          pq.push({d[v], v});
        }
    }
  }
  return dist;
}

std::vector<double> closeness_from_distances(const std::vector<std::vector<double>>& d) {
  std::vector<double> cc(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j)
      if (j != i) total += d[i][j];
    cc[i] = 1.0 / total;
  }
  return cc;
}

namespace {

// Self-contained bookkeeping; nothing shared with the library's solver state.
struct Book {
  const PlacementInstance* inst;
  std::map<std::pair<int, int>, int> cores;         // (site, server) -> cores used
  std::map<SlotKey, std::pair<int, double>> pools;  // key -> (count, load)
  std::map<int, Assignment> placed;
  double cost_servers = 0.0;
  double cost_instances = 0.0;
  double cost_traffic = 0.0;

  double total() const { return cost_servers + cost_instances + cost_traffic; }

  double traffic_of(const ServiceRequest& r, int site) const {
    const CostModel& cm = inst->cost_model();
    const double units = cm.delay_weighted_traffic
                             ? r.rate_mbps * inst->site_node_delay_ms(site, r.node)
                             : r.rate_mbps;
    return cm.weight_traffic * cm.traffic_cost_per_mbps * units;
  }
};

struct Placement {
  SlotKey key;
  bool new_instance;
  bool new_server;
};

void apply(Book& b, const ServiceRequest& r, const Placement& p) {
  const CostModel& cm = b.inst->cost_model();
  auto& [count, load] = b.pools[p.key];
  if (p.new_instance) {
    count += 1;
    b.cores[{p.key.site, p.key.server}] += b.inst->resources().vnf_cores;
    b.cost_instances += cm.weight_vnf * cm.vnf_cost;
    if (p.new_server) b.cost_servers += cm.weight_server * cm.server_cost;
  }
  load += r.rate_mbps;
  b.cost_traffic += b.traffic_of(r, p.key.site);
}

void undo(Book& b, const ServiceRequest& r, const Placement& p) {
  const CostModel& cm = b.inst->cost_model();
  auto it = b.pools.find(p.key);
  it->second.second -= r.rate_mbps;
  b.cost_traffic -= b.traffic_of(r, p.key.site);
  if (p.new_instance) {
    it->second.first -= 1;
    auto cit = b.cores.find({p.key.site, p.key.server});
    cit->second -= b.inst->resources().vnf_cores;
    if (cit->second == 0) b.cores.erase(cit);
    b.cost_instances -= cm.weight_vnf * cm.vnf_cost;
    if (p.new_server) b.cost_servers -= cm.weight_server * cm.server_cost;
  }
  if (it->second.first == 0) b.pools.erase(it);
}

std::vector<Placement> options(const Book& b, const ServiceRequest& r, Role role,
                               const SlotKey* avoid) {
  const PlacementInstance& inst = *b.inst;
  std::vector<Placement> out;
  for (const int site : inst.sites()) {
    if (!inst.delay_ok(r, site)) continue;
    bool fresh_seen = false;
    for (int server = 0; server < inst.resources().servers_per_site; ++server) {
      const auto cit = b.cores.find({site, server});
      const int used = cit == b.cores.end() ? 0 : cit->second;
      if (used == 0) {
        if (fresh_seen) continue;  // identical empty servers
        fresh_seen = true;
      }
      if (avoid) {
        if (inst.site_anti_affinity() ? avoid->site == site
                                      : (avoid->site == site && avoid->server == server))
          continue;
      }
      const SlotKey key{site, server, r.type, role};
      const auto pit = b.pools.find(key);
      if (pit != b.pools.end() &&
          pit->second.second + r.rate_mbps <=
              inst.resources().vnf_throughput_mbps * pit->second.first + 1e-9)
        out.push_back({key, false, false});
      if (used + inst.resources().vnf_cores <= inst.resources().server_cores)
        out.push_back({key, true, used == 0});
    }
  }
  return out;
}

struct Search {
  Book book;
  const std::vector<const ServiceRequest*>* order;
  long long budget;
  long long leaves = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  std::optional<Solution> best;
  bool out_of_budget = false;

  Solution snapshot() const {
    Solution s;
    for (const auto& [key, cl] : book.pools) {
      s.vnf_instances[key] = cl.first;
      s.active_servers.insert({key.site, key.server});
      s.sites_used.insert(key.site);
    }
    s.assignments = book.placed;
    return s;
  }

  void rec(std::size_t depth) {
    if (out_of_budget) return;
    if (--budget <= 0) {
      out_of_budget = true;
      return;
    }
    if (depth == order->size()) {
      ++leaves;
      if (book.total() < best_cost) {
        best_cost = book.total();
        best = snapshot();
      }
      return;
    }
    const ServiceRequest& r = *(*order)[depth];
    for (const Placement& pp : options(book, r, Role::Primary, nullptr)) {
      apply(book, r, pp);
      for (const Placement& pb : options(book, r, Role::Backup, &pp.key)) {
        apply(book, r, pb);
        book.placed[r.id] = {pp.key, pb.key};
        rec(depth + 1);
        book.placed.erase(r.id);
        undo(book, r, pb);
      }
      undo(book, r, pp);
    }
  }
};

}  // namespace

std::optional<ExhaustiveResult> exhaustive_min_cost(const PlacementInstance& inst,
                                                    long long node_budget) {
  std::vector<const ServiceRequest*> order;
  for (const ServiceRequest& r : inst.requests()) {
    int feasible = 0;
    for (const int site : inst.sites()) feasible += inst.delay_ok(r, site) ? 1 : 0;
    const bool servable =
        inst.site_anti_affinity()
            ? feasible >= 2
            : (feasible >= 2 || (feasible == 1 && inst.resources().servers_per_site >= 2));
    if (servable) order.push_back(&r);
  }

  Search s;
  s.book.inst = &inst;
  s.order = &order;
  s.budget = node_budget;
  s.rec(0);
  if (s.out_of_budget || !s.best) return std::nullopt;
  return ExhaustiveResult{s.best_cost, *s.best, s.leaves};
}

}  // namespace oracle
