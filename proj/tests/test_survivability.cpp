#include "mecplace/survivability.hpp"

#include <gtest/gtest.h>

#include "instances.hpp"
#include "mecplace/rng.hpp"
#include "mecplace/solvers.hpp"

namespace {

using namespace mecplace;

TEST(EnumerateFailures, EmptySolution) {
  EXPECT_TRUE(enumerate_single_failures(Solution{}).empty());
}

TEST(EnumerateFailures, TwoServersTwoInstancesGiveFourScenarios) {
  Solution s;
  s.sites_used = {0};
  s.active_servers = {{0, 0}, {0, 1}};
  const SlotKey p{0, 0, 1, Role::Primary};
  const SlotKey b{0, 1, 1, Role::Backup};
  s.vnf_instances[p] = 1;
  s.vnf_instances[b] = 1;
  s.assignments[0] = {p, b};
  const auto scenarios = enumerate_single_failures(s);
  EXPECT_EQ(scenarios.size(), 4u);
  int servers = 0, instances = 0;
  for (const auto& f : scenarios) {
    (f.kind == FailureScenario::Kind::Server ? servers : instances) += 1;
    EXPECT_EQ(f.affected_requests.size(), 1u);
  }
  EXPECT_EQ(servers, 2);
  EXPECT_EQ(instances, 2);
}

TEST(EnumerateFailures, CountEqualsServersPlusEntries) {
  Rng seeds(60);
  for (int rep = 0; rep < 5; ++rep) {
    const auto fx = fixtures::make_tiny({.requests = 8, .seed = seeds.next_u64()});
    const Solution s = solve_greedy(fx.inst).solution;
    const auto scenarios = enumerate_single_failures(s);
    EXPECT_EQ(scenarios.size(), s.active_servers.size() + s.vnf_instances.size());
  }
}

TEST(Survives, SolverOutputsSurviveEverySingleFailure) {
  Rng seeds(61);
  for (int rep = 0; rep < 6; ++rep) {
    const auto fx = fixtures::make_tiny({.nodes = 9,
                                         .sites = 3,
                                         .servers_per_site = 2,
                                         .requests = 8,
                                         .ample = rep % 2 == 0,
                                         .seed = seeds.next_u64()});
    SaParams p;
    p.seed = rep;
    for (const auto& rep_sol :
         {solve_greedy(fx.inst), solve_baseline(fx.inst), solve_sa(fx.inst, p)}) {
      for (const auto& scenario : enumerate_single_failures(rep_sol.solution)) {
        for (const auto& verdict : survives(rep_sol.solution, scenario, fx.inst))
          EXPECT_TRUE(verdict.survives)
              << rep_sol.solver << " request " << verdict.request << " lost on "
              << scenario.describe() << ": " << verdict.reason;
      }
    }
  }
}

TEST(Survives, DoubleFailureKillsTheRequest) {
  const auto fx = fixtures::make_tiny({.requests = 4, .seed = 7});
  const Solution s = solve_greedy(fx.inst).solution;
  ASSERT_FALSE(s.assignments.empty());
  const auto& [req_id, asg] = *s.assignments.begin();

  FailureScenario f1;
  f1.kind = FailureScenario::Kind::Server;
  f1.site = asg.primary.site;
  f1.server = asg.primary.server;
  FailureScenario f2;
  f2.kind = FailureScenario::Kind::Server;
  f2.site = asg.backup.site;
  f2.server = asg.backup.server;

  const std::vector<FailureScenario> both{f1, f2};
  bool victim_lost = false;
  for (const auto& v : survives(s, both, fx.inst))
    if (v.request == req_id) victim_lost = !v.survives;
  EXPECT_TRUE(victim_lost);
}

TEST(Survives, BackupOnlyServerLossIsHarmless) {
  // force every backup onto one dedicated site: site anti-affinity with two
  // sites makes primaries and backups use different sites
  Topology topo;
  topo.nodes.push_back({0, "a", 0.0, 0.0});
  topo.nodes.push_back({1, "b", 0.0, 0.3});
  topo.links.push_back({0, 1, 100.0, 0.5});
  const DelayMatrix delay = all_pairs_delay(topo);
  Config config;
  config.resources.servers_per_site = 2;
  config.site_anti_affinity = true;
  const PlacementInstance inst(config.service_types,
                               {{0, 2, 0, 100.0, 5.0}, {1, 2, 0, 100.0, 5.0}}, {0, 1}, delay,
                               config.resources, config.cost, true);
  const Solution s = solve_greedy(inst).solution;
  ASSERT_EQ(s.assignments.size(), 2u);

  // fail each server that hosts only backup instances
  for (const auto& [site, server] : s.active_servers) {
    bool only_backups = true;
    for (const auto& [key, n] : s.vnf_instances)
      if (key.site == site && key.server == server) only_backups &= key.role == Role::Backup;
    if (!only_backups) continue;
    FailureScenario f;
    f.kind = FailureScenario::Kind::Server;
    f.site = site;
    f.server = server;
    for (const auto& v : survives(s, f, inst)) EXPECT_TRUE(v.survives);
  }
}

TEST(Survives, InvalidTargetThrows) {
  const auto fx = fixtures::make_tiny({.requests = 3, .seed = 9});
  const Solution s = solve_greedy(fx.inst).solution;
  FailureScenario f;
  f.kind = FailureScenario::Kind::Server;
  f.site = fx.sites[0];
  f.server = 99;
  EXPECT_THROW(survives(s, f, fx.inst), std::invalid_argument);
}

}  // namespace
