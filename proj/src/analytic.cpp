#include "mplcp/analytic.hpp"

#include <cmath>

namespace mplcp {

namespace {

void check_params(const ModelParams& p) {
  if (!(p.lambda_l > 0)) throw NonPositiveDensity("lambda_l");
  if (!(p.lambda_c > 0)) throw NonPositiveDensity("lambda_c");
}

// Survival functions 1 - F of the detour distance branches; exponents are
// nonpositive, so these stay in (0, 1].
double surv_w_branch1(double w, const ModelParams& p) {
  const double e = -3.0 * (p.lambda_c + p.lambda_l) * w -
                   1.5 * (p.lambda_l / p.lambda_c) * std::expm1(-2.0 * p.lambda_c * w);
  return std::exp(e);
}

double surv_w_branch2(double w, double far_side, const ModelParams& p) {
  const double lc = p.lambda_c;
  const double e = -3.0 * (p.lambda_c + p.lambda_l) * w +
                   (p.lambda_l / (2.0 * lc)) *
                       (3.0 + 2.0 * std::exp(-2.0 * lc * far_side) -
                        std::exp(-2.0 * lc * w) -
                        4.0 * std::exp(-lc * (far_side + w)));
  return std::exp(e);
}

double combine_min(double fa, double fb) { return fa + fb - fa * fb; }

}  // namespace

ConditioningState::ConditioningState(double x1_, double x2_) : x1(x1_), x2(x2_) {
  if (!(x1 >= 0) || !(x2 >= x1)) {
    throw InvalidArgument("conditioning state requires 0 <= x1 <= x2");
  }
}

double cdf_intersection(double t, const ModelParams& params) {
  check_params(params);
  if (t < 0) throw NegativeDistance("cdf_intersection: t < 0");
  const double e = -4.0 * (params.lambda_c + params.lambda_l) * t -
                   (2.0 * params.lambda_l / params.lambda_c) *
                       std::expm1(-2.0 * params.lambda_c * t);
  return clamp_probability(-std::expm1(e));
}

double pdf_s(double s, const ModelParams& params) {
  check_params(params);
  if (s < 0) throw NegativeDistance("pdf_s: s < 0");
  return params.lambda_l * std::exp(-params.lambda_l * s);
}

double pdf_x1x2(const ConditioningState& state, const ModelParams& params) {
  check_params(params);
  if (state.x1 > state.x2) return 0;
  return 2.0 * params.lambda_l * params.lambda_l *
         std::exp(-params.lambda_l * (state.x1 + state.x2));
}

double prob_event(EventId e, const ConditioningState& state,
                  const ModelParams& params) {
  check_params(params);
  const double a = std::exp(-params.lambda_c * state.x1);
  const double b = std::exp(-params.lambda_c * state.x2);
  switch (e) {
    case EventId::kE1: return (1.0 - a) * b;
    case EventId::kE2: return (1.0 - a) * (1.0 - b);
    case EventId::kE3: return a * b;
    case EventId::kE4: return a * (1.0 - b);
  }
  throw InvalidArgument("unknown event");
}

double cdf_w1_branch1(double w, const ModelParams& params) {
  check_params(params);
  if (w < 0) throw BranchDomain("branch 1 requires w >= 0");
  return clamp_probability(1.0 - surv_w_branch1(w, params));
}

double cdf_w1_branch2(double w, const ConditioningState& state,
                      const ModelParams& params) {
  check_params(params);
  if (w < state.x2) throw BranchDomain("W1 branch 2 requires w >= x2");
  return clamp_probability(1.0 - surv_w_branch2(w, state.x2, params));
}

double cdf_w1(double w, const ConditioningState& state, const ModelParams& params) {
  return w <= state.x2 ? cdf_w1_branch1(w, params)
                       : cdf_w1_branch2(w, state, params);
}

double cdf_w2_branch1(double w, const ModelParams& params) {
  return cdf_w1_branch1(w, params);  // same closed form, mirrored roles
}

double cdf_w2_branch2(double w, const ConditioningState& state,
                      const ModelParams& params) {
  check_params(params);
  if (w < state.x1) throw BranchDomain("W2 branch 2 requires w >= x1");
  return clamp_probability(1.0 - surv_w_branch2(w, state.x1, params));
}

double cdf_w2(double w, const ConditioningState& state, const ModelParams& params) {
  return w <= state.x1 ? cdf_w2_branch1(w, params)
                       : cdf_w2_branch2(w, state, params);
}

double cond_cdf_rm(EventId e, double rm, const ConditioningState& state,
                   const ModelParams& params) {
  check_params(params);
  if (rm < 0) throw NegativeDistance("cond_cdf_rm: rm < 0");
  if (rm == 0) return 0;
  const double lc = params.lambda_c;
  const double x1 = state.x1;
  const double x2 = state.x2;
  switch (e) {
    case EventId::kE1: {
      if (rm > x1) return 1;
      // rm > 0 here, hence x1 > 0 and the denominator is nonzero.
      return std::expm1(-lc * rm) / std::expm1(-lc * x1);
    }
    case EventId::kE2: {
      if (rm >= x1) return 1;
      const double a = std::exp(-lc * x1);
      const double b = std::exp(-lc * x2);
      const double num =
          -std::expm1(-2.0 * lc * rm) + std::expm1(-lc * rm) * (a + b);
      return clamp_probability(num / ((1.0 - a) * (1.0 - b)));
    }
    case EventId::kE3: {
      if (rm < x1) return 0;
      if (rm < x2) return cdf_w1_branch1(rm - x1, params);
      if (rm < x1 + x2) {
        return clamp_probability(combine_min(cdf_w1_branch1(rm - x1, params),
                                             cdf_w2_branch1(rm - x2, params)));
      }
      return clamp_probability(
          combine_min(cdf_w1_branch2(rm - x1, state, params),
                      cdf_w2_branch2(rm - x2, state, params)));
    }
    case EventId::kE4: {
      if (rm >= x2) return 1;
      const double denom = -std::expm1(-lc * x2);  // x2 > rm > 0
      if (rm <= x1) return -std::expm1(-lc * rm) / denom;
      const double surv_z1 = surv_w_branch1(rm - x1, params);
      const double tail = std::exp(-lc * rm) - std::exp(-lc * x2);
      return clamp_probability(1.0 - surv_z1 * tail / denom);
    }
  }
  throw InvalidArgument("unknown event");
}

double cdf_typical_solved(double rm, const ModelParams& params,
                            const QuadSpec& quad) {
  check_params(params);
  if (rm < 0) throw NegativeDistance("cdf_typical_solved: rm < 0");
  if (rm == 0) return 0;

  const double ll = params.lambda_l;
  const double beta = params.lambda_l + params.lambda_c;
  QuadSpec piece = quad;
  piece.abs_tol = quad.abs_tol / 5.0;

  const double t0 = std::exp(-2.0 * beta * rm);

  auto surv1 = [&](double w) { return surv_w_branch1(w, params); };
  auto surv2 = [&](double w, double far) { return surv_w_branch2(w, far, params); };

  const double t1 =
      2.0 * ll * std::exp(-beta * rm) *
      integrate_adaptive(
          [&](double x1) { return surv1(rm - x1) * std::exp(-beta * x1); }, 0.0,
          rm, piece);

  // Region x2 <= rm < x1 + x2: both detours in branch 1.
  const double t2 =
      2.0 * ll * ll *
      integrate_2d(
          [&](double x2, double x1) {
            return std::exp(-beta * x2) * surv1(rm - x2) * surv1(rm - x1) *
                   std::exp(-beta * x1);
          },
          rm / 2.0, rm, [&](double x2) { return rm - x2; },
          [&](double x2) { return x2; }, piece);

  auto branch2_integrand = [&](double x2, double x1) {
    return std::exp(-beta * x2) * surv2(rm - x1, x2) * surv2(rm - x2, x1) *
           std::exp(-beta * x1);
  };
  // Region x1 + x2 <= rm: both detours in branch 2.
  const double t3 = 2.0 * ll * ll *
                    integrate_2d(branch2_integrand, rm / 2.0, rm,
                                 [](double) { return 0.0; },
                                 [&](double x2) { return rm - x2; }, piece);
  const double t4 = 2.0 * ll * ll *
                    integrate_2d(branch2_integrand, 0.0, rm / 2.0,
                                 [](double) { return 0.0; },
                                 [](double x2) { return x2; }, piece);

  return clamp_probability(1.0 - t0 - t1 - t2 - t3 - t4);
}

double cdf_typical_assembled(double rm, const ModelParams& params,
                             const QuadSpec& quad) {
  check_params(params);
  if (rm < 0) throw NegativeDistance("cdf_typical_assembled: rm < 0");
  if (rm == 0) return 0;

  // The outer integrand carries the factor exp(-lambda_l * (x1 + x2)) of the
  // joint density, so the mass beyond T is at most 2 exp(-lambda_l * T).
  const double tail =
      quad.tail_cut > 0
          ? quad.tail_cut
          : rm + std::log(2.0 / quad.abs_tol) / params.lambda_l;
  QuadSpec piece = quad;
  piece.abs_tol = quad.abs_tol / 6.0;

  auto summand = [&](double x2, double x1) {
    if (x1 > x2) return 0.0;
    const ConditioningState st(x1, x2);
    double s = 0;
    for (EventId e : kAllEvents) {
      const double p = prob_event(e, st, params);
      if (p > 0) s += p * cond_cdf_rm(e, rm, st, params);
    }
    return s * pdf_x1x2(st, params);
  };

  double total = 0;
  // Pieces follow the breakpoints of the conditional CDFs at x1 = rm, x2 = rm
  // and x1 + x2 = rm, so every inner integrand is smooth.
  total += integrate_2d(summand, 0.0, rm / 2.0, [](double) { return 0.0; },
                        [](double x2) { return x2; }, piece);
  total += integrate_2d(summand, rm / 2.0, rm, [](double) { return 0.0; },
                        [&](double x2) { return rm - x2; }, piece);
  total += integrate_2d(summand, rm / 2.0, rm,
                        [&](double x2) { return rm - x2; },
                        [](double x2) { return x2; }, piece);
  if (tail > rm) {
    total += integrate_2d(summand, rm, tail, [](double) { return 0.0; },
                          [&](double) { return rm; }, piece);
    total += integrate_2d(summand, rm, tail, [&](double) { return rm; },
                          [](double x2) { return x2; }, piece);
  }
  return clamp_probability(total);
}

void monotonize_cdf_values(std::vector<double>& values, double tolerance) {
  double run_max = 0;
  for (double& v : values) {
    if (v < run_max) {
      if (run_max - v > tolerance) {
        throw Error("CDF values decrease beyond the quadrature tolerance");
      }
      v = run_max;
    }
    run_max = v;
  }
}

}  // namespace mplcp
