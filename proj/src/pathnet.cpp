#include "mplcp/pathnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "mplcp/rng.hpp"

namespace mplcp {

namespace {

constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

int tag_priority(NodeTag t) {
  switch (t) {
    case NodeTag::kOrigin: return 3;
    case NodeTag::kCoxPoint: return 2;
    case NodeTag::kIntersection: return 1;
    case NodeTag::kWaypoint: return 0;
  }
  return 0;
}

struct RawNodes {
  struct Entry {
    double x, y;
    NodeTag tag;
    bool cox;
  };
  std::vector<Entry> entries;
  std::vector<std::uint32_t> parent;  // union-find, path-halving

  void reserve(std::size_t n) {
    entries.reserve(n);
    parent.reserve(n);
  }

  std::uint32_t add(double px, double py, NodeTag t, bool is_cox) {
    entries.push_back(Entry{px, py, t, is_cox});
    parent.push_back(static_cast<std::uint32_t>(parent.size()));
    return static_cast<std::uint32_t>(parent.size() - 1);
  }

  std::uint32_t find(std::uint32_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }

  // The lower id survives; flags combine, the stronger tag wins.
  void merge(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;
    entries[a].cox = entries[a].cox || entries[b].cox;
    if (tag_priority(entries[b].tag) > tag_priority(entries[a].tag)) {
      entries[a].tag = entries[b].tag;
    }
  }
};

// Merges two coordinate-sorted id runs into one sorted per-line list.
void merge_runs(const std::vector<std::pair<double, std::uint32_t>>& a,
                const std::vector<std::pair<double, std::uint32_t>>& b,
                std::vector<std::pair<double, std::uint32_t>>& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
}

}  // namespace

std::vector<PathNetwork::Edge> PathNetwork::edges() const {
  std::vector<Edge> out;
  for (std::size_t l = 0; l < line_nodes.size(); ++l) {
    const bool vertical = line_orientation[l] == Orientation::kVertical;
    const auto& ids = line_nodes[l];
    for (std::size_t k = 1; k < ids.size(); ++k) {
      const Node& a = nodes[ids[k - 1]];
      const Node& b = nodes[ids[k]];
      const double w = vertical ? std::fabs(b.y - a.y) : std::fabs(b.x - a.x);
      out.push_back(Edge{ids[k - 1], ids[k], w});
    }
  }
  return out;
}

std::size_t PathNetwork::cox_node_count() const {
  std::size_t n = 0;
  for (const Node& node : nodes) n += node.cox_witness ? 1 : 0;
  return n;
}

PathNetwork build_network(const LineSet& lines, const CoxSample& points,
                          const NetworkMarkers* markers) {
  if (lines.palm == Palm::kNone) {
    throw OriginNotOnNetwork("origin lies on no line; palm-condition the input first");
  }
  const std::size_t n_v = lines.vertical_offsets.size();
  const std::size_t n_h = lines.horizontal_offsets.size();
  if (points.vertical_points.size() != n_v || points.horizontal_points.size() != n_h) {
    throw InvalidArgument("CoxSample is not aligned with the LineSet");
  }

  std::size_t total_points = points.point_count();
  const std::size_t n_raw_total =
      n_v * n_h + total_points + 1 + (markers ? markers->waypoints.size() : 0);

  RawNodes raw;
  raw.reserve(n_raw_total);
  // Intersection grid, vertical-major.
  for (std::size_t i = 0; i < n_v; ++i) {
    for (std::size_t j = 0; j < n_h; ++j) {
      raw.add(lines.vertical_offsets[i], lines.horizontal_offsets[j],
              NodeTag::kIntersection, false);
    }
  }
  std::vector<std::uint32_t> cox_base_v(n_v), cox_base_h(n_h);
  for (std::size_t i = 0; i < n_v; ++i) {
    cox_base_v[i] = static_cast<std::uint32_t>(raw.parent.size());
    for (double c : points.vertical_points[i]) {
      raw.add(lines.vertical_offsets[i], c, NodeTag::kCoxPoint, true);
    }
  }
  for (std::size_t j = 0; j < n_h; ++j) {
    cox_base_h[j] = static_cast<std::uint32_t>(raw.parent.size());
    for (double c : points.horizontal_points[j]) {
      raw.add(c, lines.horizontal_offsets[j], NodeTag::kCoxPoint, true);
    }
  }
  const std::uint32_t origin_raw = raw.add(0.0, 0.0, NodeTag::kOrigin, false);

  const std::size_t n_lines = n_v + n_h;
  std::vector<std::vector<std::uint32_t>> waypoint_ids(n_lines);
  if (markers != nullptr) {
    for (const auto& [line, coord] : markers->waypoints) {
      if (line >= n_lines) throw InvalidArgument("marker line index out of range");
      const bool vertical = line < n_v;
      const double off = vertical ? lines.vertical_offsets[line]
                                  : lines.horizontal_offsets[line - n_v];
      waypoint_ids[line].push_back(
          raw.add(vertical ? off : coord, vertical ? coord : off,
                  NodeTag::kWaypoint, false));
    }
  }

  // Per-line candidate lists sorted by coordinate along the line.  The
  // crossing offsets and the point coordinates are both already sorted, so a
  // linear merge suffices; origin and waypoints are inserted individually.
  std::vector<std::vector<std::pair<double, std::uint32_t>>> per_line(n_lines);
  std::vector<std::pair<double, std::uint32_t>> run_a, run_b;
  auto insert_sorted = [](std::vector<std::pair<double, std::uint32_t>>& lst,
                          double coord, std::uint32_t id) {
    lst.insert(std::lower_bound(lst.begin(), lst.end(),
                                std::make_pair(coord, id)),
               {coord, id});
  };
  for (std::size_t i = 0; i < n_v; ++i) {
    run_a.clear();
    run_a.reserve(n_h);
    for (std::size_t j = 0; j < n_h; ++j) {
      run_a.emplace_back(lines.horizontal_offsets[j],
                         static_cast<std::uint32_t>(i * n_h + j));
    }
    run_b.clear();
    run_b.reserve(points.vertical_points[i].size());
    for (std::size_t k = 0; k < points.vertical_points[i].size(); ++k) {
      run_b.emplace_back(points.vertical_points[i][k],
                         cox_base_v[i] + static_cast<std::uint32_t>(k));
    }
    merge_runs(run_a, run_b, per_line[i]);
    if (lines.palm == Palm::kTypicalIntersection && lines.vertical_offsets[i] == 0.0) {
      insert_sorted(per_line[i], 0.0, origin_raw);
    }
    for (std::uint32_t id : waypoint_ids[i]) {
      insert_sorted(per_line[i], raw.entries[id].y, id);
    }
  }
  for (std::size_t j = 0; j < n_h; ++j) {
    run_a.clear();
    run_a.reserve(n_v);
    for (std::size_t i = 0; i < n_v; ++i) {
      run_a.emplace_back(lines.vertical_offsets[i],
                         static_cast<std::uint32_t>(i * n_h + j));
    }
    run_b.clear();
    run_b.reserve(points.horizontal_points[j].size());
    for (std::size_t k = 0; k < points.horizontal_points[j].size(); ++k) {
      run_b.emplace_back(points.horizontal_points[j][k],
                         cox_base_h[j] + static_cast<std::uint32_t>(k));
    }
    merge_runs(run_a, run_b, per_line[n_v + j]);
    if (lines.horizontal_offsets[j] == 0.0) {
      insert_sorted(per_line[n_v + j], 0.0, origin_raw);
    }
    for (std::uint32_t id : waypoint_ids[n_v + j]) {
      insert_sorted(per_line[n_v + j], raw.entries[id].x, id);
    }
  }

  for (auto& lst : per_line) {
    for (std::size_t k = 1; k < lst.size(); ++k) {
      if (lst[k].first - lst[k - 1].first <= kMergeTolerance) {
        raw.merge(lst[k - 1].second, lst[k].second);
      }
    }
  }

  // Compact the union-find roots into the final node array.
  const std::size_t n_raw = raw.parent.size();
  std::vector<std::uint32_t> compact(n_raw, kNoParent);
  PathNetwork net;
  net.nodes.reserve(n_raw);
  for (std::uint32_t id = 0; id < n_raw; ++id) {
    const std::uint32_t root = raw.find(id);
    if (compact[root] == kNoParent) {
      compact[root] = static_cast<std::uint32_t>(net.nodes.size());
      const RawNodes::Entry& e = raw.entries[root];
      net.nodes.push_back(PathNetwork::Node{e.x, e.y, e.tag, e.cox});
    }
    compact[id] = compact[root];
  }

  net.origin = compact[origin_raw];
  net.window_half_width = lines.window.half_width;
  net.line_nodes.resize(n_lines);
  net.line_orientation.resize(n_lines);
  for (std::size_t l = 0; l < n_lines; ++l) {
    net.line_orientation[l] =
        l < n_v ? Orientation::kVertical : Orientation::kHorizontal;
    auto& ids = net.line_nodes[l];
    ids.reserve(per_line[l].size());
    for (const auto& [coord, id] : per_line[l]) {
      const std::uint32_t c = compact[id];
      if (ids.empty() || ids.back() != c) ids.push_back(c);
    }
  }
  return net;
}

std::optional<SearchResult> search_nearest(const PathNetwork& net) {
  const std::size_t n = net.nodes.size();
  if (n == 0) return std::nullopt;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Line membership in CSR form.
  std::vector<std::uint32_t> degree(n, 0);
  for (const auto& ids : net.line_nodes) {
    for (std::uint32_t id : ids) ++degree[id];
  }
  std::vector<std::uint32_t> offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + degree[i];
  std::vector<std::uint32_t> member_line(offset[n]);
  {
    std::vector<std::uint32_t> cursor(offset.begin(), offset.end() - 1);
    for (std::size_t l = 0; l < net.line_nodes.size(); ++l) {
      for (std::uint32_t id : net.line_nodes[l]) {
        member_line[cursor[id]++] = static_cast<std::uint32_t>(l);
      }
    }
  }

  // The L1 norm lower-bounds every axis-parallel path from the origin, so
  // candidate labels are clamped up to it; together with whole-line
  // relaxation (one subtraction per straight run) this keeps shortest path
  // distances free of per-edge roundoff accumulation.
  std::vector<double> l1(n);
  for (std::size_t i = 0; i < n; ++i) {
    l1[i] = std::fabs(net.nodes[i].x) + std::fabs(net.nodes[i].y);
  }

  std::vector<double> dist(n, kInf);
  std::vector<std::uint32_t> parent(n, kNoParent);
  std::vector<std::uint32_t> arrival_line(n, kNoParent);
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[net.origin] = 0;
  heap.emplace(0.0, net.origin);

  double best = kInf;
  double upper = kInf;  // least label seen on any cox node; a search bound
  std::vector<std::uint32_t> witnesses;
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    if (d > best) break;
    if (net.nodes[u].cox_witness) {
      if (d < best) {
        best = d;
        witnesses.assign(1, u);
      } else {
        witnesses.push_back(u);
      }
    }
    for (std::uint32_t m = offset[u]; m < offset[u + 1]; ++m) {
      const std::uint32_t l = member_line[m];
      // A label that arrived along l already came from a whole-line
      // relaxation, which covered every node of l directly; skipping the
      // line here keeps run lengths single subtractions and makes the
      // result invariant under node subdivision.
      if (l == arrival_line[u]) continue;
      const bool vertical = net.line_orientation[l] == Orientation::kVertical;
      const double cu = vertical ? net.nodes[u].y : net.nodes[u].x;
      for (std::uint32_t v : net.line_nodes[l]) {
        if (v == u) continue;
        const double cv = vertical ? net.nodes[v].y : net.nodes[v].x;
        double cand = d + std::fabs(cv - cu);
        if (cand > upper) continue;  // cannot beat or tie the final answer
        if (cand < l1[v]) cand = l1[v];
        if (cand < dist[v]) {
          dist[v] = cand;
          parent[v] = u;
          arrival_line[v] = l;
          heap.emplace(cand, v);
          if (net.nodes[v].cox_witness && cand < upper) upper = cand;
        }
      }
    }
  }
  if (best == kInf) return std::nullopt;

  std::uint32_t w = witnesses.front();
  for (std::uint32_t c : witnesses) {
    if (net.nodes[c].x < net.nodes[w].x ||
        (net.nodes[c].x == net.nodes[w].x && net.nodes[c].y < net.nodes[w].y)) {
      w = c;
    }
  }

  SearchResult out;
  out.result = DistanceResult{best, net.nodes[w].x, net.nodes[w].y,
                              best <= net.window_half_width};
  out.witness_node = w;
  for (std::uint32_t v = w; v != kNoParent; v = parent[v]) out.path.push_back(v);
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

std::optional<DistanceResult> shortest_path_to_nearest(const PathNetwork& net) {
  auto found = search_nearest(net);
  if (!found) return std::nullopt;
  return found->result;
}

namespace {

// Appends rate-`rate` Poisson points on [-w_new, -w_old) and [w_old, w_new)
// to a sorted coordinate list.
void extend_point_list(std::vector<double>& pts, double rate, double w_old,
                       double w_new, SplitMix64& rng) {
  const double seg = w_new - w_old;
  const std::size_t old_size = pts.size();
  for (std::uint64_t k = poisson_count(rng, rate * seg); k > 0; --k) {
    pts.push_back(rng.next_uniform(-w_new, -w_old));
  }
  for (std::uint64_t k = poisson_count(rng, rate * seg); k > 0; --k) {
    pts.push_back(rng.next_uniform(w_old, w_new));
  }
  std::sort(pts.begin() + static_cast<std::ptrdiff_t>(old_size), pts.end());
  std::inplace_merge(pts.begin(),
                     pts.begin() + static_cast<std::ptrdiff_t>(old_size),
                     pts.end());
}

// Reveals the annulus between the current window and half-width w_new around
// the same realization: existing lines gain points on their new segments, new
// lines arrive on the fresh intercept ranges with fully populated points.
void extend_realization(LineSet& lines, CoxSample& points,
                        const ModelParams& params, double w_new,
                        SplitMix64 rng) {
  const double w_old = lines.window.half_width;
  const double seg = w_new - w_old;

  auto extend_orientation = [&](std::vector<double>& offsets,
                                std::vector<std::vector<double>>& per_line) {
    for (auto& lst : per_line) {
      extend_point_list(lst, params.lambda_c, w_old, w_new, rng);
    }
    std::vector<std::pair<double, std::vector<double>>> zipped;
    zipped.reserve(offsets.size());
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      zipped.emplace_back(offsets[i], std::move(per_line[i]));
    }
    for (std::uint64_t k = poisson_count(rng, params.lambda_l * 2.0 * seg);
         k > 0; --k) {
      const double u = rng.next_unit();
      const double off = u < 0.5 ? -w_new + seg * (2.0 * u)
                                 : w_old + seg * (2.0 * u - 1.0);
      std::vector<double> pts(poisson_count(rng, params.lambda_c * 2.0 * w_new));
      for (auto& v : pts) v = rng.next_uniform(-w_new, w_new);
      std::sort(pts.begin(), pts.end());
      zipped.emplace_back(off, std::move(pts));
    }
    std::sort(zipped.begin(), zipped.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    offsets.resize(zipped.size());
    per_line.resize(zipped.size());
    for (std::size_t i = 0; i < zipped.size(); ++i) {
      offsets[i] = zipped[i].first;
      per_line[i] = std::move(zipped[i].second);
    }
  };

  extend_orientation(lines.vertical_offsets, points.vertical_points);
  extend_orientation(lines.horizontal_offsets, points.horizontal_points);
  lines.window.half_width = w_new;
}

}  // namespace

Trial simulate_trial(const ModelParams& params, Palm mode, std::uint64_t seed,
                     double window_cap_km, double initial_half_width_km) {
  validate_params(params.lambda_l, params.lambda_c);
  if (mode == Palm::kNone) throw InvalidArgument("simulate requires a palm mode");
  const double cap = window_cap_km > 0 ? window_cap_km : 1e4 / params.lambda_c;

  // One realization, revealed outward.  A found distance d <= W is final:
  // any path of length d stays inside the closed L1 ball of radius d, which
  // the window contains, so nothing outside the window can shorten it.  On
  // failure the window doubles around the SAME realization (fresh annulus
  // content only); there is no rejection, so the accepted distance is an
  // unconditioned draw from the exact distance law.  (Redrawing the whole
  // window on failure would instead sample d conditioned on d <= W, which
  // visibly skews the law whenever the failure probability is non-trivial.)
  double w = initial_half_width_km > 0
                 ? initial_half_width_km
                 : std::max(3.0 / params.lambda_c, 3.0 / params.lambda_l);
  if (w > cap) throw WindowOverflow("window half-width exceeded the configured cap");

  LineSet ls = palm_condition(
      sample_mplp(params, Window{w}, hash_combine(seed, 1)), mode);
  CoxSample cs = sample_cox(ls, params, hash_combine(seed, 2));
  for (int attempt = 1;; ++attempt) {
    PathNetwork net = build_network(ls, cs);
    auto found = search_nearest(net);
    if (found && found->result.distance <= w) {
      return Trial{std::move(ls), std::move(cs), found->result, attempt};
    }
    const double w_new = 2.0 * w;
    if (w_new > cap) {
      throw WindowOverflow("window half-width exceeded the configured cap");
    }
    extend_realization(ls, cs, params, w_new,
                       SplitMix64::stream(hash_combine(seed, 3), attempt));
    w = w_new;
  }
}

DistanceResult simulate_distance(const ModelParams& params, Palm mode,
                                 std::uint64_t seed, double window_cap_km,
                                 double initial_half_width_km) {
  return simulate_trial(params, mode, seed, window_cap_km, initial_half_width_km)
      .result;
}

}  // namespace mplcp
