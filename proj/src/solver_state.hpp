#pragma once

#include <cassert>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "mecplace/model.hpp"

namespace mecplace::detail {

// Mutable placement bookkeeping shared by all solvers: pooled instance
// entries with their load and member requests, per-server core usage, and
// incrementally maintained cost counters. Kept value-semantic so SA can copy
// a state, mutate the copy, and accept or discard it.
class PlacementState {
 public:
  struct Entry {
    int count = 0;
    double load_mbps = 0.0;
    std::vector<int> requests;  // sorted request ids
  };

  enum class Mode { Join, NewInstance };

  explicit PlacementState(const PlacementInstance& inst) : inst_(&inst) {}

  static PlacementState from_solution(const PlacementInstance& inst, const Solution& s) {
    PlacementState st(inst);
    for (const auto& [key, count] : s.vnf_instances) {
      st.entries_[key].count = count;
      st.cores_taken_[{key.site, key.server}] += inst.resources().vnf_cores * count;
      st.instance_total_ += count;
    }
    for (const auto& [req_id, asg] : s.assignments) {
      const ServiceRequest& r = inst.request(req_id);
      for (const SlotKey* k : {&asg.primary, &asg.backup}) {
        Entry& e = st.entries_.at(*k);
        e.load_mbps += r.rate_mbps;
        e.requests.push_back(req_id);
        st.traffic_units_ += st.traffic_units_for(r, k->site);
      }
      st.slots_[req_id] = {asg.primary, asg.backup};
    }
    for (auto& [key, e] : st.entries_) std::sort(e.requests.begin(), e.requests.end());
    return st;
  }

  const PlacementInstance& instance() const { return *inst_; }
  const std::map<SlotKey, Entry>& entries() const { return entries_; }
  int active_server_count() const { return static_cast<int>(cores_taken_.size()); }
  long long instance_total() const { return instance_total_; }

  int cores_taken(int site, int server) const {
    const auto it = cores_taken_.find({site, server});
    return it == cores_taken_.end() ? 0 : it->second;
  }

  bool server_active(int site, int server) const { return cores_taken(site, server) > 0; }

  std::optional<SlotKey> slot_of(int req_id, Role role) const {
    const auto it = slots_.find(req_id);
    if (it == slots_.end()) return std::nullopt;
    return role == Role::Primary ? it->second.primary : it->second.backup;
  }

  bool serves(int req_id) const { return slots_.count(req_id) != 0; }
  std::size_t served_count() const { return slots_.size(); }

  std::vector<int> served_ids() const {
    std::vector<int> out;
    out.reserve(slots_.size());
    for (const auto& [id, p] : slots_) out.push_back(id);
    return out;
  }

  // Placement feasibility, resource side only (delay and anti-affinity are
  // the caller's to check separately).
  bool can_join(const ServiceRequest& r, Role role, int site, int server) const {
    const auto it = entries_.find(key_for(r, role, site, server));
    if (it == entries_.end()) return false;
    return it->second.load_mbps + r.rate_mbps <=
           inst_->resources().vnf_throughput_mbps * it->second.count + 1e-9;
  }

  bool can_new_instance(int site, int server) const {
    return cores_taken(site, server) + inst_->resources().vnf_cores <=
           inst_->resources().server_cores;
  }

  bool can_place(const ServiceRequest& r, Role role, int site, int server) const {
    return can_join(r, role, site, server) || can_new_instance(site, server);
  }

  // Anti-affinity of (site, server) against the request's other-role slot.
  bool anti_affinity_ok(int req_id, Role role, int site, int server) const {
    const auto other = slot_of(req_id, role == Role::Primary ? Role::Backup : Role::Primary);
    if (!other) return true;
    if (inst_->site_anti_affinity()) return other->site != site;
    return !(other->site == site && other->server == server);
  }

  // Adds the request to the slot. Mode must have been validated. Returns the
  // mode actually used so exact search can undo precisely.
  Mode place(const ServiceRequest& r, Role role, int site, int server, Mode mode) {
    const SlotKey key = key_for(r, role, site, server);
    Entry& e = entries_[key];
    if (mode == Mode::NewInstance) {
      assert(can_new_instance(site, server));
      e.count += 1;
      cores_taken_[{site, server}] += inst_->resources().vnf_cores;
      instance_total_ += 1;
    } else {
      assert(e.count > 0);
    }
    e.load_mbps += r.rate_mbps;
    e.requests.insert(std::lower_bound(e.requests.begin(), e.requests.end(), r.id), r.id);
    traffic_units_ += traffic_units_for(r, site);
    auto& slot_pair = slots_[r.id];
    (role == Role::Primary ? slot_pair.primary : slot_pair.backup) = key;
    return mode;
  }

  // Join if an entry with spare throughput exists, otherwise a new instance.
  Mode place_first_mode(const ServiceRequest& r, Role role, int site, int server) {
    return place(r, role, site, server,
                 can_join(r, role, site, server) ? Mode::Join : Mode::NewInstance);
  }

  // Exact inverse of place(): used by backtracking search (LIFO order).
  void unplace_exact(const ServiceRequest& r, Role role, Mode mode) {
    const SlotKey key = take_slot(r.id, role);
    Entry& e = entries_.at(key);
    remove_member(e, r);
    if (mode == Mode::NewInstance) drop_instances(key, e, 1);
    if (e.count == 0) entries_.erase(key);
  }

  // Removal with canonical shrink: instance count drops to the minimum that
  // carries the remaining load; empty entries disappear.
  void unplace_canonical(const ServiceRequest& r, Role role) {
    const SlotKey key = take_slot(r.id, role);
    Entry& e = entries_.at(key);
    remove_member(e, r);
    const int needed = needed_instances(e);
    if (needed < e.count) drop_instances(key, e, e.count - needed);
    if (e.count == 0) entries_.erase(key);
  }

  // Moves a whole entry (instances, load, members) onto another server,
  // merging with an existing same-key entry there if present. Caller
  // validates capacity, delay, and anti-affinity.
  void migrate_entry(const SlotKey& from, int to_site, int to_server) {
    Entry moved = entries_.at(from);
    SlotKey to = from;
    to.site = to_site;
    to.server = to_server;
    drop_instances(from, entries_.at(from), moved.count);
    entries_.erase(from);

    Entry& dst = entries_[to];
    dst.count += moved.count;
    cores_taken_[{to_site, to_server}] += inst_->resources().vnf_cores * moved.count;
    instance_total_ += moved.count;
    dst.load_mbps += moved.load_mbps;
    for (const int id : moved.requests) {
      dst.requests.insert(std::lower_bound(dst.requests.begin(), dst.requests.end(), id), id);
      auto& slot_pair = slots_.at(id);
      auto& slot = from.role == Role::Primary ? slot_pair.primary : slot_pair.backup;
      assert(slot && *slot == from);
      slot = to;
      const ServiceRequest& r = inst_->request(id);
      traffic_units_ += traffic_units_for(r, to_site) - traffic_units_for(r, from.site);
    }
  }

  // Retargets every member of `src` onto existing entry `dst` (same type and
  // role, spare throughput validated by caller), then deletes src entirely.
  void consolidate_entry(const SlotKey& src, const SlotKey& dst) {
    assert(src.vnf_type == dst.vnf_type && src.role == dst.role);
    Entry moved = entries_.at(src);
    drop_instances(src, entries_.at(src), moved.count);
    entries_.erase(src);

    Entry& target = entries_.at(dst);
    target.load_mbps += moved.load_mbps;
    for (const int id : moved.requests) {
      target.requests.insert(std::lower_bound(target.requests.begin(), target.requests.end(), id),
                             id);
      auto& slot_pair = slots_.at(id);
      auto& slot = src.role == Role::Primary ? slot_pair.primary : slot_pair.backup;
      assert(slot && *slot == src);
      slot = dst;
      const ServiceRequest& r = inst_->request(id);
      traffic_units_ += traffic_units_for(r, dst.site) - traffic_units_for(r, src.site);
    }
  }

  double cost() const {
    const CostModel& cm = inst_->cost_model();
    return cm.weight_server * cm.server_cost * active_server_count() +
           cm.weight_vnf * cm.vnf_cost * static_cast<double>(instance_total_) +
           cm.weight_traffic * cm.traffic_cost_per_mbps * traffic_units_;
  }

  Solution to_solution() const {
    Solution s;
    for (const auto& [key, e] : entries_) {
      assert(e.count > 0);
      s.vnf_instances[key] = e.count;
      s.active_servers.insert({key.site, key.server});
      s.sites_used.insert(key.site);
    }
    for (const auto& [id, p] : slots_) {
      assert(p.primary && p.backup);
      s.assignments[id] = {*p.primary, *p.backup};
    }
    return s;
  }

 private:
  struct SlotPair {
    std::optional<SlotKey> primary;
    std::optional<SlotKey> backup;
  };

  static SlotKey key_for(const ServiceRequest& r, Role role, int site, int server) {
    return {site, server, r.type, role};
  }

  double traffic_units_for(const ServiceRequest& r, int site) const {
    if (inst_->cost_model().delay_weighted_traffic)
      return r.rate_mbps * inst_->site_node_delay_ms(site, r.node);
    return r.rate_mbps;
  }

  int needed_instances(const Entry& e) const {
    if (e.requests.empty()) return 0;
    const double pc = inst_->resources().vnf_throughput_mbps;
    return std::max(1, static_cast<int>(std::ceil(e.load_mbps / pc - 1e-9)));
  }

  void remove_member(Entry& e, const ServiceRequest& r) {
    const auto it = std::lower_bound(e.requests.begin(), e.requests.end(), r.id);
    assert(it != e.requests.end() && *it == r.id);
    e.requests.erase(it);
    e.load_mbps -= r.rate_mbps;
    if (e.requests.empty()) e.load_mbps = 0.0;  // kill accumulated rounding
  }

  void drop_instances(const SlotKey& key, Entry& e, int n) {
    assert(e.count >= n);
    e.count -= n;
    auto it = cores_taken_.find({key.site, key.server});
    it->second -= inst_->resources().vnf_cores * n;
    assert(it->second >= 0);
    if (it->second == 0) cores_taken_.erase(it);
    instance_total_ -= n;
  }

  SlotKey take_slot(int req_id, Role role) {
    auto& slot_pair = slots_.at(req_id);
    auto& slot = role == Role::Primary ? slot_pair.primary : slot_pair.backup;
    assert(slot);
    const SlotKey key = *slot;
    slot.reset();
    traffic_units_ -= traffic_units_for(inst_->request(req_id), key.site);
    if (!slot_pair.primary && !slot_pair.backup) slots_.erase(req_id);
    return key;
  }

  const PlacementInstance* inst_;
  std::map<SlotKey, Entry> entries_;
  std::map<std::pair<int, int>, int> cores_taken_;
  std::map<int, SlotPair> slots_;
  long long instance_total_ = 0;
  double traffic_units_ = 0.0;
};

}  // namespace mecplace::detail
