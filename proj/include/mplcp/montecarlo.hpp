#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mplcp/geom.hpp"
#include "mplcp/pathnet.hpp"

namespace mplcp {

class GridMismatch : public Error {
 public:
  using Error::Error;
};

// Allowance on top of the DKW band for quadrature error in the analytic curve.
inline constexpr double kKsQuadratureSlack = 0.002;

struct ValidationReport {
  std::string regime;
  Palm mode = Palm::kNone;
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
  double ks_statistic = 0;
  double dkw_halfwidth = 0;
  double tolerance = 0;
  bool pass = false;
  // Grid point of the largest deviation and the two values there.
  double worst_distance_km = 0;
  double worst_empirical = 0;
  double worst_analytic = 0;
};

// Number of worker threads: `requested` (0 = all cores), capped by the
// MANHATTAN_COX_THREADS environment variable when set.
unsigned worker_thread_count(unsigned requested = 0);

// Empirical CDF of the shortest path distance over n_trials seeded trials
// (trial i uses seed + i), evaluated on the given strictly increasing grid.
CdfCurve estimate_cdf(const ModelParams& params, Palm mode,
                      std::uint64_t n_trials, const std::vector<double>& grid,
                      std::uint64_t seed, unsigned n_threads = 0);

// Sup-distance between an empirical curve and the analytic CDF on the same
// grid; passes when it is within tolerance (0 = DKW half-width + slack).
ValidationReport ks_compare(const CdfCurve& empirical,
                            const std::function<double(double)>& analytic_fn,
                            std::string regime = {}, double tolerance = 0);
ValidationReport ks_compare(const CdfCurve& empirical, const CdfCurve& analytic,
                            std::string regime = {}, double tolerance = 0);

// Smallest d with cdf(d) >= p, by bisection.
double analytic_percentile(const std::function<double(double)>& cdf, double p);

// Uniform grid of `points` distances from 0 to the analytic 99.9th percentile.
std::vector<double> make_distance_grid(const std::function<double(double)>& cdf,
                                       std::size_t points = 200);

}  // namespace mplcp
