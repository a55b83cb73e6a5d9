#include "mecplace/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mecplace/kernels.hpp"

namespace mecplace {

bool DelayMatrix::fully_connected(std::pair<int, int>* unreachable) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (at(i, j) == kUnreachable) {
        if (unreachable) *unreachable = {static_cast<int>(i), static_cast<int>(j)};
        return false;
      }
  return true;
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadiusKm = 6371.0;
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
  const double p1 = lat1 * kDegToRad;
  const double p2 = lat2 * kDegToRad;
  const double dp = (lat2 - lat1) * kDegToRad;
  const double dl = (lon2 - lon1) * kDegToRad;
  const double h =
      std::sin(dp / 2) * std::sin(dp / 2) + std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

namespace {

// Strips comments and whitespace; returns empty for ignorable lines.
std::string clean_line(const std::string& raw) {
  std::string s = raw;
  if (const auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& s, double* out) {
  try {
    std::size_t pos = 0;
    *out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace

Topology parse_sndlib(const std::string& text, std::vector<std::string>* warnings) {
  Topology t;
  std::map<std::string, int> by_label;
  // endpoint pair (min,max) -> index into t.links
  std::map<std::pair<int, int>, std::size_t> link_index;

  enum class Section { None, Nodes, Links, Skip };
  Section section = Section::None;
  bool saw_nodes = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = clean_line(raw);
    if (line.empty() || line[0] == '?') continue;

    if (section == Section::None) {
      const auto toks = tokenize(line);
      if (toks.size() != 2 || toks[1] != "(")
        throw ParseError(line_no, "malformed section header: '" + line + "'");
      if (toks[0] == "NODES") {
        section = Section::Nodes;
        saw_nodes = true;
      } else if (toks[0] == "LINKS") {
        section = Section::Links;
      } else {
        section = Section::Skip;  // META, DEMANDS, ... are not our business
      }
      continue;
    }

    if (line == ")") {
      section = Section::None;
      continue;
    }
    if (section == Section::Skip) continue;

    const auto toks = tokenize(line);
    if (section == Section::Nodes) {
      // label ( lon lat )
      double lon = 0.0, lat = 0.0;
      if (toks.size() < 5 || toks[1] != "(" || toks[4] != ")" || !parse_double(toks[2], &lon) ||
          !parse_double(toks[3], &lat))
        throw ParseError(line_no, "malformed node entry: '" + line + "'");
      if (by_label.count(toks[0]))
        throw ParseError(line_no, "duplicate node id '" + toks[0] + "'");
      if (lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0)
        throw ParseError(line_no, "coordinates out of range for node '" + toks[0] + "'");
      Node n;
      n.id = t.node_count();
      n.label = toks[0];
      n.longitude = lon;
      n.latitude = lat;
      by_label.emplace(n.label, n.id);
      t.nodes.push_back(std::move(n));
      continue;
    }

    // LINKS: id ( src dst ) [attributes...]
    if (toks.size() < 5 || toks[1] != "(" || toks[4] != ")")
      throw ParseError(line_no, "malformed link entry: '" + line + "'");
    const auto src = by_label.find(toks[2]);
    const auto dst = by_label.find(toks[3]);
    if (src == by_label.end())
      throw ParseError(line_no, "link references unknown node '" + toks[2] + "'");
    if (dst == by_label.end())
      throw ParseError(line_no, "link references unknown node '" + toks[3] + "'");
    if (src->second == dst->second)
      throw ParseError(line_no, "self-loop on node '" + toks[2] + "'");

    Link l;
    l.u = src->second;
    l.v = dst->second;
    const Node& a = t.nodes[l.u];
    const Node& b = t.nodes[l.v];
    l.length_km = haversine_km(a.latitude, a.longitude, b.latitude, b.longitude);
    if (l.length_km <= 0.0)
      throw ParseError(line_no, "zero-length link between co-located nodes '" + toks[2] +
                                    "' and '" + toks[3] + "'");
    l.delay_ms = l.length_km / kFiberKmPerMs;

    const auto key = std::minmax(l.u, l.v);
    if (const auto it = link_index.find(key); it != link_index.end()) {
      Link& kept = t.links[it->second];
      if (l.delay_ms < kept.delay_ms) kept = l;
      if (warnings)
        warnings->push_back("line " + std::to_string(line_no) + ": parallel link " + toks[2] + "-" +
                            toks[3] + " collapsed to minimum delay");
      continue;
    }
    link_index.emplace(key, t.links.size());
    t.links.push_back(l);
  }

  if (section != Section::None) throw ParseError(line_no, "unterminated section");
  if (!saw_nodes) throw ParseError(line_no, "missing NODES section");
  return t;
}

std::string write_sndlib(const Topology& t) {
  std::ostringstream out;
  out << "?SNDlib native format; type: network; version: 1.0\n";
  if (!t.name.empty()) out << "# network " << t.name << "\n";
  out << "\nNODES (\n";
  out.precision(17);
  for (const Node& n : t.nodes)
    out << "  " << n.label << " ( " << n.longitude << " " << n.latitude << " )\n";
  out << ")\n\nLINKS (\n";
  for (const Link& l : t.links)
    out << "  " << t.nodes[l.u].label << "_" << t.nodes[l.v].label << " ( " << t.nodes[l.u].label
        << " " << t.nodes[l.v].label << " )\n";
  out << ")\n";
  return out.str();
}

namespace {

DelayMatrix floyd_warshall(const Topology& t, bool unit_weights) {
  const auto n = static_cast<std::size_t>(t.node_count());
  DelayMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) d.at(i, i) = 0.0;
  for (const Link& l : t.links) {
    const double w = unit_weights ? 1.0 : l.delay_ms;
    if (w < d.at(l.u, l.v)) {
      d.at(l.u, l.v) = w;
      d.at(l.v, l.u) = w;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double* via = d.row(k);
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = d.at(i, k);
      if (dik == DelayMatrix::kUnreachable) continue;
      kernels::min_plus_relax(d.row(i), via, dik, n);
    }
  }
  return d;
}

}  // namespace

DelayMatrix all_pairs_delay(const Topology& t) { return floyd_warshall(t, false); }

DelayMatrix all_pairs_hops(const Topology& t) { return floyd_warshall(t, true); }

nlohmann::json topology_to_json(const Topology& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const Node& n : t.nodes)
    nodes.push_back({{"id", n.id},
                     {"label", n.label},
                     {"latitude", n.latitude},
                     {"longitude", n.longitude}});
  nlohmann::json links = nlohmann::json::array();
  for (const Link& l : t.links)
    links.push_back(
        {{"u", l.u}, {"v", l.v}, {"length_km", l.length_km}, {"delay_ms", l.delay_ms}});
  return {{"name", t.name}, {"nodes", nodes}, {"links", links}};
}

nlohmann::json delay_matrix_to_json(const DelayMatrix& d) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < d.size(); ++j) {
      const double v = d.at(i, j);
      if (v == DelayMatrix::kUnreachable)
        row.push_back(nullptr);
      else
        row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return {{"n", d.size()}, {"delay_ms", rows}};
}

}  // namespace mecplace
