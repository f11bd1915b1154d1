#include "mplcp/geom.hpp"

#include <cmath>

namespace mplcp {

namespace {
constexpr double kCurveClamp = 1e-12;
constexpr double kProbabilityClamp = 1e-10;
}  // namespace

ModelParams validate_params(double lambda_l, double lambda_c) {
  if (!(lambda_l > 0)) throw NonPositiveDensity("lambda_l");
  if (!(lambda_c > 0)) throw NonPositiveDensity("lambda_c");
  return ModelParams{lambda_l, lambda_c};
}

Window make_window(double half_width) {
  if (!(half_width > 0)) {
    throw InvalidArgument("window half_width must be strictly positive");
  }
  return Window{half_width};
}

double dkw_halfwidth(std::uint64_t n_trials, double alpha) {
  if (n_trials == 0) throw InvalidArgument("dkw_halfwidth: n_trials must be >= 1");
  if (!(alpha > 0 && alpha < 1)) {
    throw InvalidArgument("dkw_halfwidth: alpha must be in (0, 1)");
  }
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n_trials)));
}

double clamp_probability(double p) {
  if (p == 0) return 0;  // normalizes -0.0
  if (p >= 0 && p <= 1) return p;
  if (p < 0 && p >= -kProbabilityClamp) return 0;
  if (p > 1 && p <= 1 + kProbabilityClamp) return 1;
  throw Error("probability overshoot beyond clamp threshold: " + std::to_string(p));
}

static void check_curve_inputs(const std::vector<double>& grid,
                               std::vector<double>& values) {
  if (grid.size() != values.size()) {
    throw InvalidCurve("grid and value lists differ in length");
  }
  if (grid.empty()) throw InvalidCurve("empty curve");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw InvalidCurve("grid must be strictly increasing");
    }
  }
  double prev = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    if (v < 0 && v >= -kCurveClamp) v = 0;
    if (v > 1 && v <= 1 + kCurveClamp) v = 1;
    if (v < 0 || v > 1) throw InvalidCurve("value outside [0, 1]");
    if (i > 0 && v < prev) {
      if (prev - v <= kCurveClamp) {
        v = prev;
      } else {
        throw InvalidCurve("values decrease beyond clamp threshold");
      }
    }
    values[i] = v;
    prev = v;
  }
}

CdfCurve CdfCurve::analytic(std::vector<double> grid, std::vector<double> values) {
  check_curve_inputs(grid, values);
  CdfCurve c;
  c.grid_ = std::move(grid);
  c.values_ = std::move(values);
  c.kind_ = CurveKind::kAnalytic;
  return c;
}

CdfCurve CdfCurve::empirical(std::vector<double> grid, std::vector<double> values,
                             std::uint64_t n_trials, double alpha) {
  check_curve_inputs(grid, values);
  CdfCurve c;
  c.grid_ = std::move(grid);
  c.values_ = std::move(values);
  c.kind_ = CurveKind::kEmpirical;
  c.n_trials_ = n_trials;
  c.dkw_halfwidth_ = dkw_halfwidth(n_trials, alpha);
  return c;
}

}  // namespace mplcp
