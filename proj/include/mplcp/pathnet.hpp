#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mplcp/sampler.hpp"

namespace mplcp {

class OriginNotOnNetwork : public Error {
 public:
  using Error::Error;
};

class WindowOverflow : public Error {
 public:
  using Error::Error;
};

enum class NodeTag : std::uint8_t { kIntersection, kCoxPoint, kOrigin, kWaypoint };

// Nodes closer than this along a line collapse into one (probability-zero
// coincidences of floating-point sampling).
inline constexpr double kMergeTolerance = 1e-12;

// Graph induced by a LineSet and CoxSample: nodes are line-line intersections,
// Cox points and the origin; every edge is the axis-parallel segment between
// consecutive nodes of one line.
struct PathNetwork {
  struct Node {
    double x = 0, y = 0;
    NodeTag tag = NodeTag::kIntersection;
    bool cox_witness = false;  // candidate nearest point (origin atom excluded)
  };
  struct Edge {
    std::uint32_t a = 0, b = 0;
    double weight = 0;
  };

  std::vector<Node> nodes;
  std::uint32_t origin = 0;
  double window_half_width = 0;
  // Node ids in coordinate order along each line; verticals first, then
  // horizontals, in LineSet order.
  std::vector<std::vector<std::uint32_t>> line_nodes;
  std::vector<Orientation> line_orientation;

  std::vector<Edge> edges() const;
  std::size_t cox_node_count() const;
};

// Extra pass-through nodes, used to check subdivision invariance of the
// search: (line index, coordinate along that line).
struct NetworkMarkers {
  std::vector<std::pair<std::size_t, double>> waypoints;
};

PathNetwork build_network(const LineSet& lines, const CoxSample& points,
                          const NetworkMarkers* markers = nullptr);

struct DistanceResult {
  double distance = 0;  // km along the network
  double witness_x = 0;
  double witness_y = 0;
  bool exact = false;  // distance <= window half-width
};

struct SearchResult {
  DistanceResult result;
  std::uint32_t witness_node = 0;
  std::vector<std::uint32_t> path;  // origin .. witness
};

// Single-source search from the origin to the nearest Cox node; equidistant
// witnesses are resolved by lexicographic (x, y).  Empty optional when no
// Cox node exists or none is reachable inside the window.
std::optional<SearchResult> search_nearest(const PathNetwork& net);
std::optional<DistanceResult> shortest_path_to_nearest(const PathNetwork& net);

struct Trial {
  LineSet lines;
  CoxSample points;
  DistanceResult result;
  int attempts = 0;
};

// Samples a palm-conditioned realization and returns the exact shortest path
// distance from the origin to the nearest Cox point, doubling the window until
// the result is certified.  window_cap_km of 0 selects the default
// 1e4/lambda_c; initial_half_width_km of 0 selects max(3/lambda_c, 3/lambda_l)
// (the override exists to drive the doubling path in tests — the accepted
// distance law does not depend on the starting window).
Trial simulate_trial(const ModelParams& params, Palm mode, std::uint64_t seed,
                     double window_cap_km = 0, double initial_half_width_km = 0);
DistanceResult simulate_distance(const ModelParams& params, Palm mode,
                                 std::uint64_t seed, double window_cap_km = 0,
                                 double initial_half_width_km = 0);

}  // namespace mplcp
