#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace mecplace {

// Propagation speed of light in fiber, expressed in km per millisecond
// (2 x 10^5 km/s).
inline constexpr double kFiberKmPerMs = 200.0;

struct Node {
  int id = 0;  // dense index assigned in file order
  std::string label;
  double latitude = 0.0;
  double longitude = 0.0;
};

struct Link {
  int u = 0;
  int v = 0;
  double length_km = 0.0;
  double delay_ms = 0.0;  // always length_km / kFiberKmPerMs
};

struct Topology {
  std::string name;
  std::vector<Node> nodes;
  std::vector<Link> links;

  int node_count() const { return static_cast<int>(nodes.size()); }
};

// Dense symmetric matrix of shortest-path propagation delays in ms.
// Disconnected pairs hold kUnreachable.
class DelayMatrix {
 public:
  static constexpr double kUnreachable = std::numeric_limits<double>::infinity();

  DelayMatrix() = default;
  explicit DelayMatrix(std::size_t n, double fill = kUnreachable)
      : n_(n), d_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double& at(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }
  const double* row(std::size_t i) const { return d_.data() + i * n_; }
  double* row(std::size_t i) { return d_.data() + i * n_; }

  // True when every pair is reachable. If not and `unreachable` is non-null,
  // it receives one offending (i, j) pair.
  bool fully_connected(std::pair<int, int>* unreachable = nullptr) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

struct ParseError : std::runtime_error {
  ParseError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
  int line;
};

double haversine_km(double lat1, double lon1, double lat2, double lon2);

// Parses the SNDlib native-format subset: a NODES section of
// `label ( lon lat )` entries and a LINKS section of `id ( src dst ) ...`
// entries (trailing link attributes are ignored, as are other sections).
// Link lengths come from great-circle distance between the endpoint
// coordinates, delays from fiber propagation at 2e5 km/s. Parallel links
// collapse to the minimum-delay one; a note per collapse is appended to
// `warnings` when given.
Topology parse_sndlib(const std::string& text, std::vector<std::string>* warnings = nullptr);

// Writes a Topology back to the same SNDlib native subset accepted by
// parse_sndlib (parse/serialize round trips are identical).
std::string write_sndlib(const Topology& t);

// Delay-weighted all-pairs shortest paths (Floyd-Warshall over the kernels
// backend). Unreachable pairs get DelayMatrix::kUnreachable.
DelayMatrix all_pairs_delay(const Topology& t);

// All-pairs hop counts (every link weighted 1.0), same machinery.
DelayMatrix all_pairs_hops(const Topology& t);

nlohmann::json topology_to_json(const Topology& t);
nlohmann::json delay_matrix_to_json(const DelayMatrix& d);

}  // namespace mecplace
