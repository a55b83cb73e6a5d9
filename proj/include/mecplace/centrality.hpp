#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mecplace/topology.hpp"

namespace mecplace {

// Which all-pairs metric ranks candidate locations. Coverage and the D_max
// threshold are always evaluated in propagation-delay ms; the ranking metric
// only orders the candidates. Hop ranking reproduces the reference results
// on germany50; Delay ranks by the same matrix used for coverage.
enum class CcMetric { Hop, Delay };

CcMetric cc_metric_from_string(const std::string& s);
std::string to_string(CcMetric m);

struct SiteSelection {
  std::vector<int> sites;  // establishment order
  double avg_delay_ms = 0.0;
  double max_delay_ms = 0.0;
};

// CC[i] = 1 / sum_j d(i, j). Throws std::runtime_error naming an unreachable
// pair when the matrix is not fully connected.
std::vector<double> closeness_centrality(const DelayMatrix& d);

// Candidate order for CC selection: descending value, ties by ascending id.
std::vector<int> ranking_order(std::span<const double> values);

// (mean, max) over nodes of the delay to the nearest site. Sites must be
// non-empty (throws std::invalid_argument otherwise).
std::pair<double, double> coverage_metrics(const DelayMatrix& delay, std::span<const int> sites);

// Establishes sites in `order` until max coverage delay <= dmax_ms.
SiteSelection select_sites_prefix(const DelayMatrix& delay, std::span<const int> order,
                                  double dmax_ms);

// Ranking by closeness centrality of the chosen metric, then prefix
// establishment against the delay matrix.
SiteSelection select_sites_cc(const Topology& t, const DelayMatrix& delay, double dmax_ms,
                              CcMetric metric = CcMetric::Hop);

// k distinct uniformly drawn sites; deterministic under seed.
SiteSelection select_sites_random(const DelayMatrix& delay, int k, std::uint64_t seed);

}  // namespace mecplace
