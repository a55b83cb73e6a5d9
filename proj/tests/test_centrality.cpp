#include "mecplace/centrality.hpp"

#include <algorithm>
#include <string>

#include <gtest/gtest.h>

#include "instances.hpp"
#include "mecplace/rng.hpp"
#include "oracles.hpp"

namespace {

using namespace mecplace;

Topology unit_link(int n, const std::vector<std::pair<int, int>>& edges) {
  Topology t;
  for (int i = 0; i < n; ++i) t.nodes.push_back({i, "n" + std::to_string(i), 0.0, 0.0});
  for (const auto& [u, v] : edges) t.links.push_back({u, v, 200.0, 1.0});
  return t;
}

TEST(ClosenessCentrality, TwoNodeUnitLink) {
  const auto cc = closeness_centrality(all_pairs_delay(unit_link(2, {{0, 1}})));
  ASSERT_EQ(cc.size(), 2u);
  EXPECT_DOUBLE_EQ(cc[0], 1.0);
  EXPECT_DOUBLE_EQ(cc[1], 1.0);
}

TEST(ClosenessCentrality, StarGraphFourLeaves) {
  // center reaches each leaf in 1; a leaf reaches the others via the center
  const auto cc =
      closeness_centrality(all_pairs_delay(unit_link(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})));
  EXPECT_DOUBLE_EQ(cc[0], 1.0 / 4.0);
  for (int leaf = 1; leaf <= 4; ++leaf) EXPECT_DOUBLE_EQ(cc[leaf], 1.0 / 7.0);
}

TEST(ClosenessCentrality, DisconnectedNamesPair) {
  Topology t = unit_link(3, {{0, 1}});
  try {
    closeness_centrality(all_pairs_delay(t));
    FAIL() << "expected error";
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("2"), std::string::npos);
  }
}

TEST(ClosenessCentrality, Germany50RankingMatchesOracle) {
  const Topology t = fixtures::load_germany50();
  const auto cc = closeness_centrality(all_pairs_delay(t));
  const auto ref = oracle::closeness_from_distances(oracle::dijkstra_all_pairs(t));
  ASSERT_EQ(cc.size(), ref.size());
  for (std::size_t i = 0; i < cc.size(); ++i) ASSERT_NEAR(cc[i], ref[i], 1e-12);
  EXPECT_EQ(ranking_order(cc), ranking_order(ref));

  const auto cch = closeness_centrality(all_pairs_hops(t));
  const auto refh = oracle::closeness_from_distances(oracle::dijkstra_all_pairs(t, true));
  EXPECT_EQ(ranking_order(cch), ranking_order(refh));
}

TEST(ClosenessCentrality, ScaleInvariantRanking) {
  Rng rng(5);
  for (int rep = 0; rep < 6; ++rep) {
    Topology t = fixtures::random_topology(8 + rep, rng.next_u64());
    const auto cc1 = closeness_centrality(all_pairs_delay(t));
    for (Link& l : t.links) {
      l.length_km *= 3.0;
      l.delay_ms *= 3.0;
    }
    const auto cc3 = closeness_centrality(all_pairs_delay(t));
    EXPECT_EQ(ranking_order(cc1), ranking_order(cc3));
    for (std::size_t i = 0; i < cc1.size(); ++i) ASSERT_NEAR(cc3[i], cc1[i] / 3.0, 1e-12);
  }
}

TEST(SelectSitesCc, WideDmaxPicksSingleTopNode) {
  const Topology t = fixtures::load_germany50();
  const DelayMatrix d = all_pairs_delay(t);
  const SiteSelection sel = select_sites_cc(t, d, 1e9, CcMetric::Delay);
  ASSERT_EQ(sel.sites.size(), 1u);
  const auto cc = closeness_centrality(d);
  EXPECT_EQ(sel.sites[0], ranking_order(cc)[0]);
}

TEST(SelectSitesCc, ZeroDmaxSelectsAllNodes) {
  const Topology t = fixtures::random_topology(7, 11);
  const DelayMatrix d = all_pairs_delay(t);
  const SiteSelection sel = select_sites_cc(t, d, 0.0, CcMetric::Delay);
  EXPECT_EQ(sel.sites.size(), 7u);
  EXPECT_EQ(sel.max_delay_ms, 0.0);
}

TEST(SelectSitesCc, Germany50HopRankingGivesFiveSitesAtTwoMs) {
  const Topology t = fixtures::load_germany50();
  const DelayMatrix d = all_pairs_delay(t);
  const SiteSelection sel = select_sites_cc(t, d, 2.0, CcMetric::Hop);
  EXPECT_EQ(sel.sites.size(), 5u);
  EXPECT_LE(sel.max_delay_ms, 2.0);
  // the delay-ranked variant covers with more, geographically clustered sites
  const SiteSelection seld = select_sites_cc(t, d, 2.0, CcMetric::Delay);
  EXPECT_LE(seld.max_delay_ms, 2.0);
  EXPECT_GE(seld.sites.size(), sel.sites.size());
}

TEST(SelectSitesCc, MinimalPrefixProperty) {
  Rng rng(12);
  for (int rep = 0; rep < 8; ++rep) {
    const Topology t = fixtures::random_topology(6 + static_cast<int>(rng.bounded(12)),
                                                 rng.next_u64());
    const DelayMatrix d = all_pairs_delay(t);
    const double diameter = coverage_metrics(d, std::vector<int>{0}).second;
    const double dmax = diameter * (0.25 + 0.5 * rng.canonical());
    for (const CcMetric m : {CcMetric::Hop, CcMetric::Delay}) {
      const SiteSelection sel = select_sites_cc(t, d, dmax, m);
      EXPECT_LE(sel.max_delay_ms, dmax);
      if (sel.sites.size() > 1) {
        const std::vector<int> butlast(sel.sites.begin(), sel.sites.end() - 1);
        EXPECT_GT(coverage_metrics(d, butlast).second, dmax);
      }
    }
  }
}

TEST(SelectSitesRandom, FullSetZeroDelay) {
  const Topology t = fixtures::random_topology(9, 3);
  const DelayMatrix d = all_pairs_delay(t);
  const SiteSelection sel = select_sites_random(d, 9, 123);
  EXPECT_EQ(sel.sites.size(), 9u);
  EXPECT_EQ(sel.max_delay_ms, 0.0);
  EXPECT_EQ(sel.avg_delay_ms, 0.0);
}

TEST(SelectSitesRandom, DeterministicUnderSeedDistinctSites) {
  const Topology t = fixtures::random_topology(12, 4);
  const DelayMatrix d = all_pairs_delay(t);
  const SiteSelection a = select_sites_random(d, 5, 42);
  const SiteSelection b = select_sites_random(d, 5, 42);
  EXPECT_EQ(a.sites, b.sites);
  auto sorted = a.sites;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  const SiteSelection c = select_sites_random(d, 5, 43);
  EXPECT_NE(a.sites, c.sites);  // astronomically unlikely to collide
}

TEST(SelectSitesRandom, KOutOfRangeThrows) {
  const DelayMatrix d = all_pairs_delay(fixtures::random_topology(4, 5));
  EXPECT_THROW(select_sites_random(d, 0, 1), std::invalid_argument);
  EXPECT_THROW(select_sites_random(d, 5, 1), std::invalid_argument);
}

TEST(CoverageMetrics, AllNodesZero) {
  const DelayMatrix d = all_pairs_delay(fixtures::random_topology(6, 9));
  std::vector<int> all{0, 1, 2, 3, 4, 5};
  const auto [avg, mx] = coverage_metrics(d, all);
  EXPECT_EQ(avg, 0.0);
  EXPECT_EQ(mx, 0.0);
}

TEST(CoverageMetrics, PathGraphHandExample) {
  Topology t = unit_link(3, {{0, 1}, {1, 2}});
  const DelayMatrix d = all_pairs_delay(t);
  const auto [avg, mx] = coverage_metrics(d, std::vector<int>{1});
  EXPECT_DOUBLE_EQ(avg, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(mx, 1.0);
}

TEST(CoverageMetrics, EmptySiteListThrows) {
  const DelayMatrix d = all_pairs_delay(fixtures::random_topology(4, 6));
  EXPECT_THROW(coverage_metrics(d, std::vector<int>{}), std::invalid_argument);
}

TEST(CoverageMetrics, MonotoneUnderSiteAddition) {
  Rng rng(13);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 5 + static_cast<int>(rng.bounded(10));
    const Topology t = fixtures::random_topology(n, rng.next_u64());
    const DelayMatrix d = all_pairs_delay(t);
    std::vector<int> sites{static_cast<int>(rng.bounded(n))};
    auto [avg, mx] = coverage_metrics(d, sites);
    for (int add = 0; add < n; ++add) {
      if (std::find(sites.begin(), sites.end(), add) != sites.end()) continue;
      sites.push_back(add);
      const auto [avg2, mx2] = coverage_metrics(d, sites);
      ASSERT_LE(avg2, avg + 1e-12);
      ASSERT_LE(mx2, mx + 1e-12);
      avg = avg2;
      mx = mx2;
    }
  }
}

}  // namespace
