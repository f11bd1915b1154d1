#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mplcp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NonPositiveDensity : public Error {
 public:
  explicit NonPositiveDensity(std::string which)
      : Error("density must be strictly positive: " + which),
        which_(std::move(which)) {}
  const std::string& which() const { return which_; }

 private:
  std::string which_;
};

class NegativeDistance : public Error {
 public:
  using Error::Error;
};

class InvalidCurve : public Error {
 public:
  using Error::Error;
};

// Model densities, per km.  These are the experiment's only free parameters.
struct ModelParams {
  double lambda_l = 0;  // intercept density of each of the two axis point processes
  double lambda_c = 0;  // point density along each line

  // Mean line length per unit area of the resulting line process.
  double mu_l() const { return 2.0 * lambda_l; }
};

ModelParams validate_params(double lambda_l, double lambda_c);

// Closed square [-half_width, +half_width]^2, km.
struct Window {
  double half_width = 0;
};

Window make_window(double half_width);

enum class Orientation { kHorizontal, kVertical };

struct Line {
  Orientation orientation = Orientation::kHorizontal;
  double offset = 0;  // y-intercept for horizontal lines, x-intercept for vertical
  bool palm_added = false;
};

enum class CurveKind { kAnalytic, kEmpirical };

inline constexpr double kDefaultDkwAlpha = 0.05;

// Half-width of the distribution-free confidence band, sqrt(ln(2/alpha)/(2n)).
double dkw_halfwidth(std::uint64_t n_trials, double alpha = kDefaultDkwAlpha);

// Clamps floating overshoot of at most 1e-10 outside [0, 1]; anything larger
// signals a formula or quadrature bug and is reported as an error.
double clamp_probability(double p);

// Probabilities sampled on a strictly increasing distance grid.  Values must
// be nondecreasing and inside [0, 1]; a dip below the running maximum of at
// most 1e-12 is clamped, anything larger is rejected.
class CdfCurve {
 public:
  static CdfCurve analytic(std::vector<double> grid, std::vector<double> values);
  static CdfCurve empirical(std::vector<double> grid, std::vector<double> values,
                            std::uint64_t n_trials,
                            double alpha = kDefaultDkwAlpha);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  CurveKind kind() const { return kind_; }
  std::uint64_t n_trials() const { return n_trials_; }
  double dkw() const { return dkw_halfwidth_; }

 private:
  CdfCurve() = default;

  std::vector<double> grid_;
  std::vector<double> values_;
  CurveKind kind_ = CurveKind::kAnalytic;
  std::uint64_t n_trials_ = 0;
  double dkw_halfwidth_ = 0;
};

}  // namespace mplcp
