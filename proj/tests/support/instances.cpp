#include "instances.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mecplace/harness.hpp"
#include "mecplace/kernels.hpp"
#include "mecplace/rng.hpp"

namespace fixtures {

using namespace mecplace;

std::string data_path(const std::string& name) {
  return std::string(MECPLACE_SOURCE_DIR) + "/data/" + name;
}

Topology load_germany50() { return parse_sndlib(read_text_file(data_path("germany50.txt"))); }

Topology random_topology(int nodes, std::uint64_t seed, double extra_link_frac) {
  if (nodes < 1) throw std::invalid_argument("random_topology: nodes must be >= 1");
  Rng rng(seed);
  Topology t;
  t.name = "random" + std::to_string(nodes) + "_" + std::to_string(seed);
  for (int i = 0; i < nodes; ++i) {
    Node n;
    n.id = i;
    n.label = "n" + std::to_string(i);
    n.latitude = 48.0 + 6.0 * rng.canonical();
    n.longitude = 6.0 + 8.0 * rng.canonical();
    t.nodes.push_back(std::move(n));
  }
  std::set<std::pair<int, int>> used;
  auto add_link = [&](int u, int v) {
    const auto key = std::minmax(u, v);
    if (u == v || used.count(key)) return false;
    used.insert(key);
    Link l;
    l.u = u;
    l.v = v;
    l.length_km = haversine_km(t.nodes[u].latitude, t.nodes[u].longitude, t.nodes[v].latitude,
                               t.nodes[v].longitude);
    l.delay_ms = l.length_km / kFiberKmPerMs;
    t.links.push_back(l);
    return true;
  };
  for (int i = 1; i < nodes; ++i)
    add_link(i, static_cast<int>(rng.bounded(static_cast<std::uint64_t>(i))));
  const int extra = static_cast<int>(extra_link_frac * nodes);
  for (int e = 0; e < extra && nodes > 2;) {
    const int u = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(nodes)));
    const int v = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(nodes)));
    e += add_link(u, v) ? 1 : 0;
  }
  return t;
}

TestInstance make_tiny(const TinySpec& spec) {
  Rng rng(spec.seed * 0x9e3779b97f4a7c15ULL + 1);
  Topology topo = random_topology(spec.nodes, rng.next_u64());
  DelayMatrix delay = all_pairs_delay(topo);

  // spread sites: random distinct nodes
  std::vector<int> pool(spec.nodes);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < spec.sites; ++i) {
    const auto j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(spec.nodes - i)));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> sites(pool.begin(), pool.begin() + spec.sites);
  std::sort(sites.begin(), sites.end());

  Config config;
  config.resources.servers_per_site = spec.servers_per_site;
  config.site_anti_affinity = spec.site_anti_affinity;
  config.cost.delay_weighted_traffic = spec.delay_weighted_traffic;
  if (spec.ample) {
    double diameter = 0.0;
    for (std::size_t i = 0; i < delay.size(); ++i)
      diameter = std::max(diameter, kernels::max(delay.row(i), delay.size()));
    // keep the Table-1 rate mix and delay ordering but lift every bound
    // above the diameter so no placement is delay-blocked
    for (ServiceType& t : config.service_types)
      t.max_delay_ms += diameter + config.resources.vnf_processing_delay_ms;
  }

  const std::vector<double> mix(config.service_types.size(),
                                1.0 / static_cast<double>(config.service_types.size()));
  std::vector<ServiceRequest> requests =
      generate_requests(spec.requests, mix, config.service_types, spec.nodes, rng.next_u64());

  PlacementInstance inst(config.service_types, requests, sites, delay, config.resources,
                         config.cost, config.site_anti_affinity);
  return {std::move(topo), std::move(delay), std::move(sites), std::move(config), std::move(inst)};
}

}  // namespace fixtures
