#pragma once

#include <cstdint>
#include <vector>

#include "mplcp/geom.hpp"

namespace mplcp {

class AlreadyConditioned : public Error {
 public:
  using Error::Error;
};

enum class Palm { kNone, kTypicalIntersection, kTypicalPoint };

// A Manhattan line process realization inside a square window.  Each line is
// stored as its axis intercept; the palm mode records which axis lines were
// added by conditioning (they sit at offset 0).
struct LineSet {
  std::vector<double> vertical_offsets;    // sorted x-intercepts in [-W, W]
  std::vector<double> horizontal_offsets;  // sorted y-intercepts in [-W, W]
  Window window;
  Palm palm = Palm::kNone;

  std::size_t line_count() const {
    return vertical_offsets.size() + horizontal_offsets.size();
  }
  std::vector<Line> lines() const;
};

// Validates sortedness, window containment and the palm invariants.
LineSet make_line_set(std::vector<double> vertical_offsets,
                      std::vector<double> horizontal_offsets, Window window,
                      Palm palm = Palm::kNone);

// Point process realization on the lines of a LineSet.  Entry i of each list
// holds the sorted 1D coordinates of the points on line i: y-coordinates for
// vertical lines, x-coordinates for horizontal ones.  The typical-point atom
// at the origin is flagged, never listed, and never a nearest-point candidate.
struct CoxSample {
  std::vector<std::vector<double>> vertical_points;
  std::vector<std::vector<double>> horizontal_points;
  bool has_atom_at_origin = false;

  std::size_t point_count() const;
};

LineSet sample_mplp(const ModelParams& params, const Window& window,
                    std::uint64_t seed);

// Adds the conditioning axis lines: both axes for the typical intersection,
// only the x-axis line for the typical point.
LineSet palm_condition(const LineSet& lines, Palm mode);

CoxSample sample_cox(const LineSet& lines, const ModelParams& params,
                     std::uint64_t seed);

// Monte-Carlo estimate of mean line length per unit area, measured inside the
// disc of radius W inscribed in the sampling window.
double empirical_line_density(const ModelParams& params, const Window& window,
                              std::uint64_t n_trials, std::uint64_t seed);

}  // namespace mplcp
