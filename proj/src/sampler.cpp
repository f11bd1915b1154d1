#include "mplcp/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "mplcp/rng.hpp"

namespace mplcp {

namespace {

void check_offsets(const std::vector<double>& offsets, double w, const char* what) {
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (std::fabs(offsets[i]) > w) {
      throw InvalidArgument(std::string(what) + " offset outside the window");
    }
    if (i > 0 && offsets[i] <= offsets[i - 1]) {
      throw InvalidArgument(std::string(what) +
                            " offsets must be strictly increasing");
    }
  }
}

bool contains_zero(const std::vector<double>& offsets) {
  auto it = std::lower_bound(offsets.begin(), offsets.end(), 0.0);
  return it != offsets.end() && *it == 0.0;
}

void insert_zero(std::vector<double>& offsets) {
  auto it = std::lower_bound(offsets.begin(), offsets.end(), 0.0);
  if (it != offsets.end() && *it == 0.0) return;  // a sampled line already sits there
  offsets.insert(it, 0.0);
}

std::vector<double> sample_offsets(SplitMix64& rng, double mean, double w) {
  const std::uint64_t n = poisson_count(rng, mean);
  std::vector<double> out(n);
  for (auto& v : out) v = rng.next_uniform(-w, w);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Line> LineSet::lines() const {
  std::vector<Line> out;
  out.reserve(line_count());
  const bool palm_v = palm == Palm::kTypicalIntersection;
  const bool palm_h = palm != Palm::kNone;
  for (double off : vertical_offsets) {
    out.push_back(Line{Orientation::kVertical, off, palm_v && off == 0.0});
  }
  for (double off : horizontal_offsets) {
    out.push_back(Line{Orientation::kHorizontal, off, palm_h && off == 0.0});
  }
  return out;
}

LineSet make_line_set(std::vector<double> vertical_offsets,
                      std::vector<double> horizontal_offsets, Window window,
                      Palm palm) {
  if (!(window.half_width > 0)) throw InvalidArgument("window half_width must be positive");
  check_offsets(vertical_offsets, window.half_width, "vertical");
  check_offsets(horizontal_offsets, window.half_width, "horizontal");
  if (palm != Palm::kNone && !contains_zero(horizontal_offsets)) {
    throw InvalidArgument("palm conditioning requires a horizontal line at offset 0");
  }
  if (palm == Palm::kTypicalIntersection && !contains_zero(vertical_offsets)) {
    throw InvalidArgument("typical intersection requires a vertical line at offset 0");
  }
  return LineSet{std::move(vertical_offsets), std::move(horizontal_offsets), window, palm};
}

std::size_t CoxSample::point_count() const {
  std::size_t n = 0;
  for (const auto& pts : vertical_points) n += pts.size();
  for (const auto& pts : horizontal_points) n += pts.size();
  return n;
}

LineSet sample_mplp(const ModelParams& params, const Window& window,
                    std::uint64_t seed) {
  if (!(params.lambda_l > 0)) throw NonPositiveDensity("lambda_l");
  if (!(window.half_width > 0)) throw InvalidArgument("window half_width must be positive");

  const double w = window.half_width;
  const double mean = params.lambda_l * 2.0 * w;
  SplitMix64 rng = SplitMix64::stream(seed, 0x11);
  LineSet out;
  out.vertical_offsets = sample_offsets(rng, mean, w);
  out.horizontal_offsets = sample_offsets(rng, mean, w);
  out.window = window;
  out.palm = Palm::kNone;
  return out;
}

LineSet palm_condition(const LineSet& lines, Palm mode) {
  if (mode == Palm::kNone) throw InvalidArgument("palm mode must not be none");
  if (lines.palm != Palm::kNone) throw AlreadyConditioned("line set already palm-conditioned");

  LineSet out = lines;
  insert_zero(out.horizontal_offsets);  // L_x in both modes
  if (mode == Palm::kTypicalIntersection) insert_zero(out.vertical_offsets);
  out.palm = mode;
  return out;
}

CoxSample sample_cox(const LineSet& lines, const ModelParams& params,
                     std::uint64_t seed) {
  if (!(params.lambda_c > 0)) throw NonPositiveDensity("lambda_c");

  const double w = lines.window.half_width;
  const double mean = params.lambda_c * 2.0 * w;
  SplitMix64 rng = SplitMix64::stream(seed, 0x22);

  CoxSample out;
  out.vertical_points.reserve(lines.vertical_offsets.size());
  out.horizontal_points.reserve(lines.horizontal_offsets.size());
  for (std::size_t i = 0; i < lines.vertical_offsets.size(); ++i) {
    out.vertical_points.push_back(sample_offsets(rng, mean, w));
  }
  for (std::size_t i = 0; i < lines.horizontal_offsets.size(); ++i) {
    out.horizontal_points.push_back(sample_offsets(rng, mean, w));
  }
  out.has_atom_at_origin = lines.palm == Palm::kTypicalPoint;
  return out;
}

double empirical_line_density(const ModelParams& params, const Window& window,
                              std::uint64_t n_trials, std::uint64_t seed) {
  if (n_trials == 0) throw InvalidArgument("empirical_line_density: n_trials must be >= 1");

  const double w = window.half_width;
  const double disc_area = M_PI * w * w;
  double acc = 0;
  for (std::uint64_t t = 0; t < n_trials; ++t) {
    const LineSet ls = sample_mplp(params, window, hash_combine(seed, t));
    double length = 0;
    for (double off : ls.vertical_offsets) {
      if (std::fabs(off) < w) length += 2.0 * std::sqrt(w * w - off * off);
    }
    for (double off : ls.horizontal_offsets) {
      if (std::fabs(off) < w) length += 2.0 * std::sqrt(w * w - off * off);
    }
    acc += length / disc_area;
  }
  return acc / static_cast<double>(n_trials);
}

}  // namespace mplcp
