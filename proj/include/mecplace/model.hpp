#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mecplace/topology.hpp"

namespace mecplace {

struct ServiceType {
  int id = 0;
  std::string name;
  double rate_mbps = 0.0;
  double max_delay_ms = 0.0;
};

struct ServiceRequest {
  int id = 0;
  int type = 0;        // ServiceType id
  int node = 0;        // attachment base station
  double rate_mbps = 0.0;
  double max_delay_ms = 0.0;
};

struct ResourceSpec {
  int servers_per_site = 10;
  int server_cores = 16;
  int vnf_cores = 4;
  double vnf_throughput_mbps = 1000.0;
  double vnf_processing_delay_ms = 0.05;
};

struct CostModel {
  double server_cost = 100.0;
  double vnf_cost = 10.0;
  double traffic_cost_per_mbps = 1.0;
  double weight_server = 1.0;
  double weight_vnf = 1.0;
  double weight_traffic = 1.0;
  // Off by default: the forwarding cost is rate-only. When set, each served
  // role contributes rate * site-to-node delay instead of plain rate.
  bool delay_weighted_traffic = false;
};

enum class Role { Primary, Backup };

std::string to_string(Role r);
Role role_from_string(const std::string& s);

// Identifies one pooled group of identical VNF instances on a server.
struct SlotKey {
  int site = 0;      // node id of the MEC location
  int server = 0;    // server index within the site
  int vnf_type = 0;  // ServiceType id
  Role role = Role::Primary;

  auto operator<=>(const SlotKey&) const = default;
};

struct Assignment {
  SlotKey primary;
  SlotKey backup;

  bool operator==(const Assignment&) const = default;
};

// Canonical placement: which sites/servers are on, how many VNF instances
// of each kind sit where, and which slots every request maps to.
struct Solution {
  std::set<int> sites_used;
  std::set<std::pair<int, int>> active_servers;    // (site, server)
  std::map<SlotKey, int> vnf_instances;            // key -> instance count
  std::map<int, Assignment> assignments;           // request id -> slots

  bool operator==(const Solution&) const = default;
};

// Everything a solver needs: the requests, the candidate sites with their
// delay rows, resources, and the cost model.
class PlacementInstance {
 public:
  PlacementInstance() = default;
  PlacementInstance(std::vector<ServiceType> types, std::vector<ServiceRequest> requests,
                    std::vector<int> sites, const DelayMatrix& delays, ResourceSpec resources,
                    CostModel cost, bool site_anti_affinity = false);

  const std::vector<ServiceType>& service_types() const { return types_; }
  const std::vector<ServiceRequest>& requests() const { return requests_; }
  const std::vector<int>& sites() const { return sites_; }
  const ResourceSpec& resources() const { return resources_; }
  const CostModel& cost_model() const { return cost_; }
  bool site_anti_affinity() const { return site_anti_affinity_; }
  int node_count() const { return node_count_; }

  bool has_site(int site) const;
  // Propagation delay from MEC location `site` to base station `node`.
  double site_node_delay_ms(int site, int node) const;
  const ServiceRequest& request(int id) const;  // throws on unknown id
  bool has_request(int id) const;

  // Delay bound check for serving `r` from `site`, including the VNF
  // processing delay.
  bool delay_ok(const ServiceRequest& r, int site) const;

 private:
  std::vector<ServiceType> types_;
  std::vector<ServiceRequest> requests_;
  std::vector<int> sites_;
  ResourceSpec resources_;
  CostModel cost_;
  bool site_anti_affinity_ = false;
  int node_count_ = 0;
  std::vector<double> site_node_delay_;  // |sites| x node_count
  std::map<int, int> site_row_;
  std::map<int, int> request_index_;
};

// Weighted objective breakdown. Components already carry their gamma
// weights, so total == server + vnf + traffic exactly.
struct CostBreakdown {
  double total = 0.0;
  double server = 0.0;
  double vnf = 0.0;
  double traffic = 0.0;
};

CostBreakdown evaluate_cost(const Solution& s, const PlacementInstance& inst);

struct Violation {
  enum class Kind {
    ServerCapacity,      // core demand exceeds server capacity
    VnfThroughput,       // assigned traffic exceeds pooled instance capacity
    DelayBound,          // slot too far from the attachment BS
    PlacementCardinality,// request not served exactly once per role
    PlacementType,       // slot VNF type differs from the request's
    AntiAffinity,        // primary and backup share a server (or site)
    Activation,          // sites_used/active_servers/instances inconsistent
    StructuralReference, // assignment points at a missing instance entry
  };
  Kind kind;
  std::string detail;
};

std::string to_string(Violation::Kind k);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

// Checks the full constraint set against `inst`. `must_serve` lists the
// request ids the solution is required to serve; by default, all requests in
// the instance. Unresolvable references (unknown site/server/request ids)
// throw std::invalid_argument.
FeasibilityReport check_feasibility(const Solution& s, const PlacementInstance& inst);
FeasibilityReport check_feasibility(const Solution& s, const PlacementInstance& inst,
                                    std::span<const int> must_serve);

// `mix[i]` is the probability of service_types[i]; must sum to 1.
std::vector<ServiceRequest> generate_requests(int count, std::span<const double> mix,
                                              std::span<const ServiceType> types, int node_count,
                                              std::uint64_t seed);

// Table-driven defaults: AR/VR 200 Mbps / 2 ms, V2X 100 / 3, e-health
// 100 / 5, 8K TV & Gaming 200 / 10.
std::vector<ServiceType> default_service_types();

struct Config {
  CostModel cost;
  ResourceSpec resources;
  std::vector<ServiceType> service_types = default_service_types();
  bool site_anti_affinity = false;
};

nlohmann::json config_to_json(const Config& c);
Config config_from_json(const nlohmann::json& j);

nlohmann::json requests_to_json(std::span<const ServiceRequest> requests);
std::vector<ServiceRequest> requests_from_json(const nlohmann::json& j);

nlohmann::json solution_to_json(const Solution& s);
Solution solution_from_json(const nlohmann::json& j);

}  // namespace mecplace
