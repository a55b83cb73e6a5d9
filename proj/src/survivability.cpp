#include "mecplace/survivability.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace mecplace {

namespace {

bool slot_hit(const SlotKey& slot, const FailureScenario& f) {
  if (f.kind == FailureScenario::Kind::Server)
    return slot.site == f.site && slot.server == f.server;
  return slot == f.instance;
}

bool slot_hit_any(const SlotKey& slot, std::span<const FailureScenario> faults) {
  return std::any_of(faults.begin(), faults.end(),
                     [&](const FailureScenario& f) { return slot_hit(slot, f); });
}

void validate_target(const Solution& s, const FailureScenario& f) {
  if (f.kind == FailureScenario::Kind::Server) {
    if (!s.active_servers.count({f.site, f.server}))
      throw std::invalid_argument("failure scenario targets inactive server (site " +
                                  std::to_string(f.site) + ", server " + std::to_string(f.server) +
                                  ")");
  } else if (!s.vnf_instances.count(f.instance)) {
    throw std::invalid_argument("failure scenario targets nonexistent VNF instance");
  }
}

}  // namespace

std::string FailureScenario::describe() const {
  if (kind == Kind::Server)
    return "server(site=" + std::to_string(site) + ",server=" + std::to_string(server) + ")";
  return "instance(site=" + std::to_string(instance.site) +
         ",server=" + std::to_string(instance.server) +
         ",type=" + std::to_string(instance.vnf_type) + "," + to_string(instance.role) + ")";
}

std::vector<FailureScenario> enumerate_single_failures(const Solution& s) {
  std::vector<FailureScenario> out;
  for (const auto& [site, server] : s.active_servers) {
    FailureScenario f;
    f.kind = FailureScenario::Kind::Server;
    f.site = site;
    f.server = server;
    out.push_back(std::move(f));
  }
  for (const auto& [key, count] : s.vnf_instances) {
    FailureScenario f;
    f.kind = FailureScenario::Kind::VnfInstance;
    f.site = key.site;
    f.server = key.server;
    f.instance = key;
    out.push_back(std::move(f));
  }
  for (FailureScenario& f : out)
    for (const auto& [req_id, asg] : s.assignments)
      if (slot_hit(asg.primary, f) || slot_hit(asg.backup, f))
        f.affected_requests.push_back(req_id);
  return out;
}

std::vector<SurvivalVerdict> survives(const Solution& s, std::span<const FailureScenario> faults,
                                      const PlacementInstance& inst) {
  for (const FailureScenario& f : faults) validate_target(s, f);

  // Surviving load per backup entry: requests whose backup remains in place.
  std::map<SlotKey, double> backup_load;
  for (const auto& [req_id, asg] : s.assignments)
    if (!slot_hit_any(asg.backup, faults))
      backup_load[asg.backup] += inst.request(req_id).rate_mbps;

  std::vector<SurvivalVerdict> verdicts;
  for (const auto& [req_id, asg] : s.assignments) {
    const bool primary_hit = slot_hit_any(asg.primary, faults);
    const bool backup_hit = slot_hit_any(asg.backup, faults);
    if (!primary_hit && !backup_hit) continue;

    SurvivalVerdict v;
    v.request = req_id;
    if (!primary_hit) {
      // backup lost, primary keeps serving
      v.survives = true;
    } else if (backup_hit) {
      v.survives = false;
      v.reason = "primary and backup both failed";
    } else {
      const ServiceRequest& r = inst.request(req_id);
      if (!inst.delay_ok(r, asg.backup.site)) {
        v.survives = false;
        v.reason = "backup violates the delay bound";
      } else {
        const int count = s.vnf_instances.at(asg.backup);
        if (backup_load.at(asg.backup) >
            inst.resources().vnf_throughput_mbps * static_cast<double>(count) + 1e-9) {
          v.survives = false;
          v.reason = "backup instance pool lacks throughput";
        }
      }
    }
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

std::vector<SurvivalVerdict> survives(const Solution& s, const FailureScenario& f,
                                      const PlacementInstance& inst) {
  return survives(s, std::span<const FailureScenario>(&f, 1), inst);
}

}  // namespace mecplace
