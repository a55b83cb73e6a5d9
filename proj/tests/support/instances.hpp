#pragma once

// Random fixtures for the test and acceptance suites.

#include <cstdint>
#include <string>
#include <vector>

#include "mecplace/model.hpp"
#include "mecplace/topology.hpp"

namespace fixtures {

// Repo-root data file loader (MECPLACE_SOURCE_DIR is baked in by CMake).
std::string data_path(const std::string& name);
mecplace::Topology load_germany50();

// Connected random topology: spanning tree plus extra links, coordinates in
// a Germany-sized box so delays land in the same regime as the real data.
mecplace::Topology random_topology(int nodes, std::uint64_t seed, double extra_link_frac = 0.35);

struct TinySpec {
  int nodes = 9;
  int sites = 3;
  int servers_per_site = 2;
  int requests = 8;
  // ample: every site delay-feasible for every request (no rejections, all
  // solvers serve everything). Otherwise Table-1 delay bounds apply and
  // rejections may happen.
  bool ample = true;
  bool site_anti_affinity = false;
  bool delay_weighted_traffic = false;
  std::uint64_t seed = 1;
};

struct TestInstance {
  mecplace::Topology topo;
  mecplace::DelayMatrix delay;
  std::vector<int> sites;
  mecplace::Config config;
  mecplace::PlacementInstance inst;
};

TestInstance make_tiny(const TinySpec& spec);

}  // namespace fixtures
