#include "mecplace/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mecplace/rng.hpp"

namespace mecplace {

std::string to_string(Role r) { return r == Role::Primary ? "primary" : "backup"; }

Role role_from_string(const std::string& s) {
  if (s == "primary") return Role::Primary;
  if (s == "backup") return Role::Backup;
  throw std::invalid_argument("unknown role '" + s + "'");
}

PlacementInstance::PlacementInstance(std::vector<ServiceType> types,
                                     std::vector<ServiceRequest> requests, std::vector<int> sites,
                                     const DelayMatrix& delays, ResourceSpec resources,
                                     CostModel cost, bool site_anti_affinity)
    : types_(std::move(types)),
      requests_(std::move(requests)),
      sites_(std::move(sites)),
      resources_(resources),
      cost_(cost),
      site_anti_affinity_(site_anti_affinity),
      node_count_(static_cast<int>(delays.size())) {
  std::sort(sites_.begin(), sites_.end());
  if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end())
    throw std::invalid_argument("duplicate site id");
  site_node_delay_.resize(sites_.size() * static_cast<std::size_t>(node_count_));
  for (std::size_t r = 0; r < sites_.size(); ++r) {
    const int site = sites_[r];
    if (site < 0 || site >= node_count_)
      throw std::invalid_argument("site id " + std::to_string(site) + " outside topology");
    site_row_.emplace(site, static_cast<int>(r));
    for (int j = 0; j < node_count_; ++j)
      site_node_delay_[r * static_cast<std::size_t>(node_count_) + j] =
          delays.at(static_cast<std::size_t>(site), static_cast<std::size_t>(j));
  }
  for (std::size_t i = 0; i < requests_.size(); ++i) {
    const ServiceRequest& r = requests_[i];
    if (!request_index_.emplace(r.id, static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate request id " + std::to_string(r.id));
    if (r.node < 0 || r.node >= node_count_)
      throw std::invalid_argument("request " + std::to_string(r.id) + " attached to unknown node");
  }
}

bool PlacementInstance::has_site(int site) const { return site_row_.count(site) != 0; }

double PlacementInstance::site_node_delay_ms(int site, int node) const {
  const auto it = site_row_.find(site);
  if (it == site_row_.end())
    throw std::invalid_argument("unknown site id " + std::to_string(site));
  if (node < 0 || node >= node_count_)
    throw std::invalid_argument("unknown node id " + std::to_string(node));
  return site_node_delay_[static_cast<std::size_t>(it->second) *
                              static_cast<std::size_t>(node_count_) +
                          static_cast<std::size_t>(node)];
}

const ServiceRequest& PlacementInstance::request(int id) const {
  const auto it = request_index_.find(id);
  if (it == request_index_.end())
    throw std::invalid_argument("unknown request id " + std::to_string(id));
  return requests_[static_cast<std::size_t>(it->second)];
}

bool PlacementInstance::has_request(int id) const { return request_index_.count(id) != 0; }

bool PlacementInstance::delay_ok(const ServiceRequest& r, int site) const {
  return site_node_delay_ms(site, r.node) + resources_.vnf_processing_delay_ms <= r.max_delay_ms;
}

CostBreakdown evaluate_cost(const Solution& s, const PlacementInstance& inst) {
  const CostModel& cm = inst.cost_model();
  CostBreakdown out;
  out.server = cm.weight_server * cm.server_cost * static_cast<double>(s.active_servers.size());

  long long instance_count = 0;
  for (const auto& [key, count] : s.vnf_instances) {
    if (count <= 0)
      throw std::invalid_argument("non-positive instance count in vnf_instances");
    instance_count += count;
  }
  out.vnf = cm.weight_vnf * cm.vnf_cost * static_cast<double>(instance_count);

  double traffic = 0.0;
  for (const auto& [req_id, asg] : s.assignments) {
    const ServiceRequest& r = inst.request(req_id);
    if (cm.delay_weighted_traffic) {
      traffic += r.rate_mbps * inst.site_node_delay_ms(asg.primary.site, r.node);
      traffic += r.rate_mbps * inst.site_node_delay_ms(asg.backup.site, r.node);
    } else {
      traffic += 2.0 * r.rate_mbps;
    }
  }
  out.traffic = cm.weight_traffic * cm.traffic_cost_per_mbps * traffic;
  out.total = out.server + out.vnf + out.traffic;
  return out;
}

std::string to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::ServerCapacity: return "server_capacity";
    case Violation::Kind::VnfThroughput: return "vnf_throughput";
    case Violation::Kind::DelayBound: return "delay_bound";
    case Violation::Kind::PlacementCardinality: return "placement_cardinality";
    case Violation::Kind::PlacementType: return "placement_type";
    case Violation::Kind::AntiAffinity: return "anti_affinity";
    case Violation::Kind::Activation: return "activation";
    case Violation::Kind::StructuralReference: return "structural_reference";
  }
  return "unknown";
}

namespace {

std::string slot_str(const SlotKey& k) {
  return "(site " + std::to_string(k.site) + ", server " + std::to_string(k.server) + ", type " +
         std::to_string(k.vnf_type) + ", " + to_string(k.role) + ")";
}

void validate_references(const Solution& s, const PlacementInstance& inst) {
  const int servers = inst.resources().servers_per_site;
  for (const int site : s.sites_used)
    if (!inst.has_site(site)) throw std::invalid_argument("unknown site id " + std::to_string(site));
  for (const auto& [site, server] : s.active_servers) {
    if (!inst.has_site(site)) throw std::invalid_argument("unknown site id " + std::to_string(site));
    if (server < 0 || server >= servers)
      throw std::invalid_argument("server index " + std::to_string(server) + " out of range");
  }
  for (const auto& [key, count] : s.vnf_instances) {
    if (!inst.has_site(key.site))
      throw std::invalid_argument("unknown site id " + std::to_string(key.site));
    if (key.server < 0 || key.server >= servers)
      throw std::invalid_argument("server index " + std::to_string(key.server) + " out of range");
    bool known_type = false;
    for (const ServiceType& t : inst.service_types()) known_type |= (t.id == key.vnf_type);
    if (!known_type)
      throw std::invalid_argument("unknown vnf type " + std::to_string(key.vnf_type));
  }
  for (const auto& [req_id, asg] : s.assignments) {
    if (!inst.has_request(req_id))
      throw std::invalid_argument("assignment for unknown request " + std::to_string(req_id));
    for (const SlotKey* k : {&asg.primary, &asg.backup}) {
      if (!inst.has_site(k->site))
        throw std::invalid_argument("unknown site id " + std::to_string(k->site));
      if (k->server < 0 || k->server >= servers)
        throw std::invalid_argument("server index " + std::to_string(k->server) + " out of range");
    }
  }
}

}  // namespace

FeasibilityReport check_feasibility(const Solution& s, const PlacementInstance& inst) {
  std::vector<int> all;
  all.reserve(inst.requests().size());
  for (const ServiceRequest& r : inst.requests()) all.push_back(r.id);
  return check_feasibility(s, inst, all);
}

FeasibilityReport check_feasibility(const Solution& s, const PlacementInstance& inst,
                                    std::span<const int> must_serve) {
  validate_references(s, inst);
  const ResourceSpec& rs = inst.resources();
  FeasibilityReport rep;
  auto violate = [&rep](Violation::Kind kind, std::string detail) {
    rep.feasible = false;
    rep.violations.push_back({kind, std::move(detail)});
  };

  // (a) Server core capacity: sum over instances on the server.
  std::map<std::pair<int, int>, int> cores_used;
  for (const auto& [key, count] : s.vnf_instances)
    cores_used[{key.site, key.server}] += rs.vnf_cores * count;
  for (const auto& [srv, cores] : cores_used)
    if (cores > rs.server_cores)
      violate(Violation::Kind::ServerCapacity,
              "site " + std::to_string(srv.first) + " server " + std::to_string(srv.second) +
                  ": " + std::to_string(cores) + " cores demanded, " +
                  std::to_string(rs.server_cores) + " available");

  // (b) Pooled instance throughput, per role.
  std::map<SlotKey, double> load;
  std::map<SlotKey, int> served_by;
  for (const auto& [req_id, asg] : s.assignments) {
    const ServiceRequest& r = inst.request(req_id);
    load[asg.primary] += r.rate_mbps;
    load[asg.backup] += r.rate_mbps;
    served_by[asg.primary] += 1;
    served_by[asg.backup] += 1;
  }
  for (const auto& [key, mbps] : load) {
    const auto it = s.vnf_instances.find(key);
    const int count = it == s.vnf_instances.end() ? 0 : it->second;
    if (count == 0) continue;  // reported as StructuralReference below
    if (mbps > rs.vnf_throughput_mbps * count + 1e-9)
      violate(Violation::Kind::VnfThroughput,
              "slot " + slot_str(key) + ": " + std::to_string(mbps) + " Mbps assigned, " +
                  std::to_string(rs.vnf_throughput_mbps * count) + " available");
  }

  // (c)-(e) per-request checks.
  std::set<int> wanted(must_serve.begin(), must_serve.end());
  for (const int id : wanted)
    if (!inst.has_request(id))
      throw std::invalid_argument("must_serve references unknown request " + std::to_string(id));
  for (const auto& [req_id, asg] : s.assignments) {
    const ServiceRequest& r = inst.request(req_id);
    if (!wanted.count(req_id))
      violate(Violation::Kind::PlacementCardinality,
              "request " + std::to_string(req_id) + " assigned but not in the served set");

    if (asg.primary.role != Role::Primary)
      violate(Violation::Kind::PlacementCardinality,
              "request " + std::to_string(req_id) + ": primary assignment has backup role");
    if (asg.backup.role != Role::Backup)
      violate(Violation::Kind::PlacementCardinality,
              "request " + std::to_string(req_id) + ": backup assignment has primary role");

    for (const SlotKey* k : {&asg.primary, &asg.backup}) {
      if (k->vnf_type != r.type)
        violate(Violation::Kind::PlacementType,
                "request " + std::to_string(req_id) + " of type " + std::to_string(r.type) +
                    " assigned to slot " + slot_str(*k));
      if (!inst.delay_ok(r, k->site))
        violate(Violation::Kind::DelayBound,
                "request " + std::to_string(req_id) + " via slot " + slot_str(*k) + ": " +
                    std::to_string(inst.site_node_delay_ms(k->site, r.node) +
                                   rs.vnf_processing_delay_ms) +
                    " ms > " + std::to_string(r.max_delay_ms) + " ms bound");
      if (!s.vnf_instances.count(*k))
        violate(Violation::Kind::StructuralReference,
                "request " + std::to_string(req_id) + " assigned to missing instance entry " +
                    slot_str(*k));
    }

    const bool same_server = asg.primary.site == asg.backup.site &&
                             asg.primary.server == asg.backup.server;
    if (same_server)
      violate(Violation::Kind::AntiAffinity,
              "request " + std::to_string(req_id) + ": primary and backup share server " +
                  slot_str(asg.primary));
    if (inst.site_anti_affinity() && asg.primary.site == asg.backup.site)
      violate(Violation::Kind::AntiAffinity,
              "request " + std::to_string(req_id) + ": primary and backup share site " +
                  std::to_string(asg.primary.site));
  }
  for (const int id : wanted)
    if (!s.assignments.count(id))
      violate(Violation::Kind::PlacementCardinality,
              "request " + std::to_string(id) + " has no assignment");

  // (f) Activation logic.
  std::set<int> sites_with_servers;
  for (const auto& [site, server] : s.active_servers) sites_with_servers.insert(site);
  if (sites_with_servers != s.sites_used)
    violate(Violation::Kind::Activation, "sites_used does not match sites owning active servers");

  std::set<std::pair<int, int>> servers_with_instances;
  for (const auto& [key, count] : s.vnf_instances)
    servers_with_instances.insert({key.site, key.server});
  if (servers_with_instances != s.active_servers)
    violate(Violation::Kind::Activation,
            "active_servers does not match servers hosting instances");

  for (const auto& [key, count] : s.vnf_instances)
    if (!served_by.count(key))
      violate(Violation::Kind::Activation, "orphan instance entry " + slot_str(key));

  return rep;
}

std::vector<ServiceRequest> generate_requests(int count, std::span<const double> mix,
                                              std::span<const ServiceType> types, int node_count,
                                              std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("negative request count");
  if (node_count <= 0) throw std::invalid_argument("empty node set");
  if (mix.size() != types.size())
    throw std::invalid_argument("mix size does not match service type count");
  double total = 0.0;
  for (const double p : mix) {
    if (p < 0.0) throw std::invalid_argument("negative probability in mix");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("mix probabilities sum to " + std::to_string(total) + ", not 1");

  Rng rng(seed);
  std::vector<ServiceRequest> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double u = rng.canonical();
    std::size_t pick = mix.size() - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < mix.size(); ++k) {
      acc += mix[k];
      if (u < acc) {
        pick = k;
        break;
      }
    }
    const ServiceType& t = types[pick];
    ServiceRequest r;
    r.id = i;
    r.type = t.id;
    r.node = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(node_count)));
    r.rate_mbps = t.rate_mbps;
    r.max_delay_ms = t.max_delay_ms;
    out.push_back(r);
  }
  return out;
}

std::vector<ServiceType> default_service_types() {
  return {
      {0, "AR/VR", 200.0, 2.0},
      {1, "V2X", 100.0, 3.0},
      {2, "e-health", 100.0, 5.0},
      {3, "8K TV and Gaming", 200.0, 10.0},
  };
}

nlohmann::json config_to_json(const Config& c) {
  nlohmann::json types = nlohmann::json::array();
  for (const ServiceType& t : c.service_types)
    types.push_back({{"id", t.id},
                     {"name", t.name},
                     {"rate_mbps", t.rate_mbps},
                     {"max_delay_ms", t.max_delay_ms}});
  return {{"cost_model",
           {{"server_cost", c.cost.server_cost},
            {"vnf_cost", c.cost.vnf_cost},
            {"traffic_cost_per_mbps", c.cost.traffic_cost_per_mbps},
            {"weights", {c.cost.weight_server, c.cost.weight_vnf, c.cost.weight_traffic}},
            {"delay_weighted_traffic", c.cost.delay_weighted_traffic}}},
          {"resources",
           {{"servers_per_site", c.resources.servers_per_site},
            {"server_cores", c.resources.server_cores},
            {"vnf_cores", c.resources.vnf_cores},
            {"vnf_throughput_mbps", c.resources.vnf_throughput_mbps},
            {"vnf_processing_delay_ms", c.resources.vnf_processing_delay_ms}}},
          {"service_types", types},
          {"site_anti_affinity", c.site_anti_affinity}};
}

Config config_from_json(const nlohmann::json& j) {
  Config c;
  if (j.contains("cost_model")) {
    const auto& cm = j.at("cost_model");
    c.cost.server_cost = cm.value("server_cost", c.cost.server_cost);
    c.cost.vnf_cost = cm.value("vnf_cost", c.cost.vnf_cost);
    c.cost.traffic_cost_per_mbps = cm.value("traffic_cost_per_mbps", c.cost.traffic_cost_per_mbps);
    if (cm.contains("weights")) {
      const auto& w = cm.at("weights");
      if (!w.is_array() || w.size() != 3)
        throw std::invalid_argument("cost_model.weights must be [g1, g2, g3]");
      c.cost.weight_server = w[0].get<double>();
      c.cost.weight_vnf = w[1].get<double>();
      c.cost.weight_traffic = w[2].get<double>();
    }
    c.cost.delay_weighted_traffic = cm.value("delay_weighted_traffic", false);
  }
  if (j.contains("resources")) {
    const auto& r = j.at("resources");
    c.resources.servers_per_site = r.value("servers_per_site", c.resources.servers_per_site);
    c.resources.server_cores = r.value("server_cores", c.resources.server_cores);
    c.resources.vnf_cores = r.value("vnf_cores", c.resources.vnf_cores);
    c.resources.vnf_throughput_mbps = r.value("vnf_throughput_mbps", c.resources.vnf_throughput_mbps);
    c.resources.vnf_processing_delay_ms =
        r.value("vnf_processing_delay_ms", c.resources.vnf_processing_delay_ms);
  }
  if (j.contains("service_types")) {
    c.service_types.clear();
    for (const auto& e : j.at("service_types"))
      c.service_types.push_back({e.at("id").get<int>(), e.value("name", std::string{}),
                                 e.at("rate_mbps").get<double>(),
                                 e.at("max_delay_ms").get<double>()});
  }
  c.site_anti_affinity = j.value("site_anti_affinity", false);
  if (c.resources.vnf_cores > c.resources.server_cores)
    throw std::invalid_argument("vnf_cores exceeds server_cores");
  for (const ServiceType& t : c.service_types)
    if (t.rate_mbps <= 0.0 || t.max_delay_ms <= 0.0)
      throw std::invalid_argument("service type " + std::to_string(t.id) +
                                  " must have positive rate and delay");
  return c;
}

nlohmann::json requests_to_json(std::span<const ServiceRequest> requests) {
  nlohmann::json out = nlohmann::json::array();
  for (const ServiceRequest& r : requests)
    out.push_back({{"id", r.id},
                   {"type", r.type},
                   {"node", r.node},
                   {"rate_mbps", r.rate_mbps},
                   {"max_delay_ms", r.max_delay_ms}});
  return out;
}

std::vector<ServiceRequest> requests_from_json(const nlohmann::json& j) {
  std::vector<ServiceRequest> out;
  for (const auto& e : j)
    out.push_back({e.at("id").get<int>(), e.at("type").get<int>(), e.at("node").get<int>(),
                   e.at("rate_mbps").get<double>(), e.at("max_delay_ms").get<double>()});
  return out;
}

namespace {

nlohmann::json slot_to_json(const SlotKey& k) {
  return {{"site", k.site}, {"server", k.server}, {"type", k.vnf_type}, {"role", to_string(k.role)}};
}

SlotKey slot_from_json(const nlohmann::json& j) {
  return {j.at("site").get<int>(), j.at("server").get<int>(), j.at("type").get<int>(),
          role_from_string(j.at("role").get<std::string>())};
}

}  // namespace

nlohmann::json solution_to_json(const Solution& s) {
  nlohmann::json servers = nlohmann::json::array();
  for (const auto& [site, server] : s.active_servers) servers.push_back({site, server});
  nlohmann::json instances = nlohmann::json::array();
  for (const auto& [key, count] : s.vnf_instances) {
    nlohmann::json e = slot_to_json(key);
    e["count"] = count;
    instances.push_back(std::move(e));
  }
  nlohmann::json assignments = nlohmann::json::array();
  for (const auto& [req, asg] : s.assignments)
    assignments.push_back({{"request", req},
                           {"primary", slot_to_json(asg.primary)},
                           {"backup", slot_to_json(asg.backup)}});
  return {{"sites_used", s.sites_used},
          {"active_servers", servers},
          {"vnf_instances", instances},
          {"assignments", assignments}};
}

Solution solution_from_json(const nlohmann::json& j) {
  Solution s;
  for (const auto& e : j.at("sites_used")) s.sites_used.insert(e.get<int>());
  for (const auto& e : j.at("active_servers"))
    s.active_servers.insert({e.at(0).get<int>(), e.at(1).get<int>()});
  for (const auto& e : j.at("vnf_instances"))
    s.vnf_instances[slot_from_json(e)] = e.at("count").get<int>();
  for (const auto& e : j.at("assignments"))
    s.assignments[e.at("request").get<int>()] = {slot_from_json(e.at("primary")),
                                                 slot_from_json(e.at("backup"))};
  return s;
}

}  // namespace mecplace
