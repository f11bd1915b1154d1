#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mplcp/geom.hpp"

namespace mplcp {

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

// Tolerances and budget for adaptive integration.  The estimate is accepted
// once the accumulated error bound is below max(abs_tol, rel_tol * |result|).
// tail_cut is the truncation point for improper integrals; callers must pick
// it so the neglected tail is below abs_tol (0 = let the caller derive one).
struct QuadSpec {
  double abs_tol = 1e-9;
  double rel_tol = 1e-8;
  double tail_cut = 0;
  int max_panels = 4000;
};

namespace quad_detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel g7k15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  double resg = kWg[3] * fc;
  double resk = kWgk[7] * fc;
  double resabs = std::fabs(resk);
  double flo[7], fhi[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    flo[j] = f(center - dx);
    fhi[j] = f(center + dx);
    const double fsum = flo[j] + fhi[j];
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    resk += kWgk[j] * fsum;
    resabs += kWgk[j] * (std::fabs(flo[j]) + std::fabs(fhi[j]));
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::fabs(flo[j] - reskh) + std::fabs(fhi[j] - reskh));
  }
  resasc *= std::fabs(half);
  resabs *= std::fabs(half);

  double err = std::fabs((resk - resg) * half);
  if (resasc != 0 && err != 0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  if (resabs > uflow / eps50) err = std::max(eps50 * resabs, err);

  return Panel{a, b, resk * half, err};
}

}  // namespace quad_detail

// Globally adaptive Gauss-Kronrod quadrature on [a, b]: the panel with the
// largest error estimate is bisected until the total passes QuadSpec.
template <class F>
double integrate_adaptive(F&& f, double a, double b, const QuadSpec& spec = {}) {
  if (!(a <= b)) throw InvalidArgument("integrate_adaptive: requires a <= b");
  if (a == b) return 0;

  std::vector<quad_detail::Panel> heap;
  heap.push_back(quad_detail::g7k15(f, a, b));
  double total = heap.front().value;
  double total_err = heap.front().error;

  while (true) {
    if (!std::isfinite(total)) {
      throw QuadratureFailure("integrate_adaptive: non-finite estimate");
    }
    if (total_err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
      return total;
    }
    if (static_cast<int>(heap.size()) >= spec.max_panels) {
      throw QuadratureFailure("integrate_adaptive: panel budget exhausted");
    }

    std::pop_heap(heap.begin(), heap.end());
    const quad_detail::Panel worst = heap.back();
    heap.pop_back();

    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      throw QuadratureFailure("integrate_adaptive: interval too small to refine");
    }
    const quad_detail::Panel left = quad_detail::g7k15(f, worst.a, mid);
    const quad_detail::Panel right = quad_detail::g7k15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
  }
}

// Same, but with the domain pre-split at known kinks of the integrand.
// Breakpoints outside (a, b) are ignored.
template <class F>
double integrate_adaptive_split(F&& f, double a, double b,
                                std::vector<double> breakpoints,
                                const QuadSpec& spec = {}) {
  if (!(a <= b)) throw InvalidArgument("integrate_adaptive_split: requires a <= b");
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  double total = 0;
  double lo = a;
  for (double cut : breakpoints) {
    if (cut <= lo) continue;
    if (cut > b) break;
    total += integrate_adaptive(f, lo, cut, spec);
    lo = cut;
  }
  return total;
}

// Nested adaptive quadrature of f(x, y) over a <= x <= b, lo(x) <= y <= hi(x).
// The inner integral runs at a tighter tolerance so its noise stays below the
// outer error estimate.
template <class F, class Lo, class Hi>
double integrate_2d(F&& f, double a, double b, Lo&& lo, Hi&& hi,
                    const QuadSpec& spec = {}) {
  QuadSpec inner = spec;
  inner.abs_tol = std::max(spec.abs_tol * 1e-3, 1e-14);
  inner.rel_tol = std::min(spec.rel_tol, 1e-10);
  auto outer = [&](double x) {
    const double ylo = lo(x);
    const double yhi = hi(x);
    if (!(yhi > ylo)) return 0.0;
    auto slice = [&](double y) { return f(x, y); };
    return integrate_adaptive(slice, ylo, yhi, inner);
  };
  return integrate_adaptive(outer, a, b, spec);
}

}  // namespace mplcp
