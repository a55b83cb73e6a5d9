#include "mecplace/centrality.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mecplace/kernels.hpp"
#include "mecplace/rng.hpp"

namespace mecplace {

CcMetric cc_metric_from_string(const std::string& s) {
  if (s == "hop") return CcMetric::Hop;
  if (s == "delay") return CcMetric::Delay;
  throw std::invalid_argument("unknown cc metric '" + s + "' (expected hop|delay)");
}

std::string to_string(CcMetric m) { return m == CcMetric::Hop ? "hop" : "delay"; }

std::vector<double> closeness_centrality(const DelayMatrix& d) {
  std::pair<int, int> bad;
  if (!d.fully_connected(&bad))
    throw std::runtime_error("closeness centrality undefined: node " + std::to_string(bad.first) +
                             " cannot reach node " + std::to_string(bad.second));
  const std::size_t n = d.size();
  std::vector<double> cc(n);
  for (std::size_t i = 0; i < n; ++i) {
    // diagonal is zero, so the full row sum equals sum over j != i
    cc[i] = 1.0 / kernels::sum(d.row(i), n);
  }
  return cc;
}

std::vector<int> ranking_order(std::span<const double> values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  return order;
}

std::pair<double, double> coverage_metrics(const DelayMatrix& delay, std::span<const int> sites) {
  if (sites.empty()) throw std::invalid_argument("coverage_metrics: empty site list");
  const std::size_t n = delay.size();
  std::vector<double> best(delay.row(static_cast<std::size_t>(sites[0])),
                           delay.row(static_cast<std::size_t>(sites[0])) + n);
  for (std::size_t s = 1; s < sites.size(); ++s)
    kernels::min_inplace(best.data(), delay.row(static_cast<std::size_t>(sites[s])), n);
  const double avg = kernels::sum(best.data(), n) / static_cast<double>(n);
  return {avg, kernels::max(best.data(), n)};
}

SiteSelection select_sites_prefix(const DelayMatrix& delay, std::span<const int> order,
                                  double dmax_ms) {
  if (dmax_ms < 0.0) throw std::invalid_argument("select_sites_prefix: negative dmax");
  const std::size_t n = delay.size();
  SiteSelection sel;
  std::vector<double> best(n, DelayMatrix::kUnreachable);
  for (const int site : order) {
    sel.sites.push_back(site);
    kernels::min_inplace(best.data(), delay.row(static_cast<std::size_t>(site)), n);
    sel.max_delay_ms = kernels::max(best.data(), n);
    if (sel.max_delay_ms <= dmax_ms) break;
  }
  sel.avg_delay_ms = kernels::sum(best.data(), n) / static_cast<double>(n);
  return sel;
}

SiteSelection select_sites_cc(const Topology& t, const DelayMatrix& delay, double dmax_ms,
                              CcMetric metric) {
  const std::vector<double> cc =
      metric == CcMetric::Hop ? closeness_centrality(all_pairs_hops(t)) : closeness_centrality(delay);
  return select_sites_prefix(delay, ranking_order(cc), dmax_ms);
}

SiteSelection select_sites_random(const DelayMatrix& delay, int k, std::uint64_t seed) {
  const int n = static_cast<int>(delay.size());
  if (k < 1 || k > n)
    throw std::invalid_argument("select_sites_random: k=" + std::to_string(k) +
                                " out of range [1, " + std::to_string(n) + "]");
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  Rng rng(seed);
  SiteSelection sel;
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
    sel.sites.push_back(pool[i]);
  }
  const auto [avg, mx] = coverage_metrics(delay, sel.sites);
  sel.avg_delay_ms = avg;
  sel.max_delay_ms = mx;
  return sel;
}

}  // namespace mecplace
