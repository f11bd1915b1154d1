#pragma once

#include "mplcp/geom.hpp"
#include "mplcp/quadrature.hpp"

namespace mplcp {

class BranchDomain : public Error {
 public:
  using Error::Error;
};

// Distances from the typical point to the nearer (x1) and farther (x2) of the
// two nearest intersections on either side along its line.
struct ConditioningState {
  ConditioningState(double x1_, double x2_);
  double x1;
  double x2;
};

// Joint ordering of the nearest on-line point distances D1, D2 against the
// nearest intersection distances X1, X2:
//   E1: D1 <= X1, D2 >  X2      E2: D1 <= X1, D2 <= X2
//   E3: D1 >  X1, D2 >  X2      E4: D1 >  X1, D2 <= X2
enum class EventId { kE1, kE2, kE3, kE4 };

inline constexpr EventId kAllEvents[4] = {EventId::kE1, EventId::kE2,
                                          EventId::kE3, EventId::kE4};

// CDF of the shortest path distance from the typical intersection, closed form.
double cdf_intersection(double t, const ModelParams& params);

// Density of the distance to the nearest vertical line on one side.
double pdf_s(double s, const ModelParams& params);

// Joint density of (X1, X2) on 0 <= x1 <= x2.
double pdf_x1x2(const ConditioningState& state, const ModelParams& params);

// Probability of each event conditioned on (X1, X2); the four sum to one.
double prob_event(EventId e, const ConditioningState& state,
                  const ModelParams& params);

// Conditional CDFs of the one-sided detour distances W1 (toward x1) and W2
// (toward x2) given E3.  Branch 1 covers w <= x2 (resp. x1), branch 2 the
// rest; the pieces agree at the boundary.  The Z1 distance of the E4 analysis
// has the same conditional law as W1.
double cdf_w1_branch1(double w, const ModelParams& params);
double cdf_w1_branch2(double w, const ConditioningState& state,
                      const ModelParams& params);
double cdf_w1(double w, const ConditioningState& state, const ModelParams& params);
double cdf_w2_branch1(double w, const ModelParams& params);
double cdf_w2_branch2(double w, const ConditioningState& state,
                      const ModelParams& params);
double cdf_w2(double w, const ConditioningState& state, const ModelParams& params);

// CDF of the typical-point shortest path distance conditioned on an event and
// on (X1, X2), piecewise in rm against x1, x2 and x1 + x2.
double cond_cdf_rm(EventId e, double rm, const ConditioningState& state,
                   const ModelParams& params);

// CDF of the typical-point shortest path distance: solved expression with the
// remaining one- and two-dimensional integrals evaluated by adaptive
// quadrature split at the integrand breakpoints.
double cdf_typical_solved(double rm, const ModelParams& params,
                            const QuadSpec& quad = {});

// Independent route to the same CDF: total probability over the four events
// integrated against the joint density of (X1, X2).  Serves as the oracle for
// cdf_typical_solved.
double cdf_typical_assembled(double rm, const ModelParams& params,
                             const QuadSpec& quad = {});

// Clamps dips below the running maximum caused by quadrature noise; a dip
// beyond `tolerance` is a genuine monotonicity violation and throws.
void monotonize_cdf_values(std::vector<double>& values, double tolerance);

}  // namespace mplcp
