#include "mplcp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace mplcp {

unsigned worker_thread_count(unsigned requested) {
  unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MANHATTAN_COX_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned long>(n, cap);
  }
  return n;
}

CdfCurve estimate_cdf(const ModelParams& params, Palm mode,
                      std::uint64_t n_trials, const std::vector<double>& grid,
                      std::uint64_t seed, unsigned n_threads) {
  validate_params(params.lambda_l, params.lambda_c);
  if (n_trials < 100) throw InvalidArgument("estimate_cdf: n_trials must be >= 100");
  if (grid.empty()) throw InvalidArgument("estimate_cdf: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw InvalidArgument("estimate_cdf: grid must be strictly increasing");
    }
  }

  std::vector<double> samples(n_trials);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(worker_thread_count(n_threads), n_trials));
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
    try {
      for (std::uint64_t i = lo; i < hi; ++i) {
        samples[i] = simulate_distance(params, mode, seed + i).distance;
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (workers <= 1) {
    run_range(0, n_trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (n_trials + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t) {
      const std::uint64_t lo = t * chunk;
      const std::uint64_t hi = std::min<std::uint64_t>(lo + chunk, n_trials);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(samples.begin(), samples.end());
  std::vector<double> values(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto it = std::upper_bound(samples.begin(), samples.end(), grid[g]);
    values[g] = static_cast<double>(it - samples.begin()) /
                static_cast<double>(n_trials);
  }
  return CdfCurve::empirical(grid, std::move(values), n_trials);
}

namespace {

ValidationReport compare_on_grid(const CdfCurve& empirical,
                                 const std::vector<double>& analytic_values,
                                 std::string regime, double tolerance) {
  const auto& grid = empirical.grid();
  const auto& emp = empirical.values();
  ValidationReport report;
  report.regime = std::move(regime);
  report.n_trials = empirical.n_trials();
  report.dkw_halfwidth = empirical.dkw();
  report.tolerance = tolerance > 0 ? tolerance : empirical.dkw() + kKsQuadratureSlack;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double dev = std::fabs(emp[i] - analytic_values[i]);
    if (dev >= report.ks_statistic) {
      report.ks_statistic = dev;
      report.worst_distance_km = grid[i];
      report.worst_empirical = emp[i];
      report.worst_analytic = analytic_values[i];
    }
  }
  report.pass = report.ks_statistic <= report.tolerance;
  return report;
}

}  // namespace

ValidationReport ks_compare(const CdfCurve& empirical,
                            const std::function<double(double)>& analytic_fn,
                            std::string regime, double tolerance) {
  std::vector<double> analytic_values(empirical.grid().size());
  for (std::size_t i = 0; i < analytic_values.size(); ++i) {
    analytic_values[i] = analytic_fn(empirical.grid()[i]);
  }
  return compare_on_grid(empirical, analytic_values, std::move(regime), tolerance);
}

ValidationReport ks_compare(const CdfCurve& empirical, const CdfCurve& analytic,
                            std::string regime, double tolerance) {
  if (empirical.grid() != analytic.grid()) {
    throw GridMismatch("ks_compare: curves must share one grid");
  }
  return compare_on_grid(empirical, analytic.values(), std::move(regime), tolerance);
}

double analytic_percentile(const std::function<double(double)>& cdf, double p) {
  if (!(p > 0 && p < 1)) throw InvalidArgument("percentile must be in (0, 1)");
  double hi = 1;
  for (int i = 0; i < 200 && cdf(hi) < p; ++i) hi *= 2;
  if (cdf(hi) < p) throw Error("analytic_percentile: no bracket found");
  double lo = 0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return hi;
}

std::vector<double> make_distance_grid(const std::function<double(double)>& cdf,
                                       std::size_t points) {
  if (points < 2) throw InvalidArgument("grid needs at least two points");
  const double upper = analytic_percentile(cdf, 0.999);
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = upper * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

}  // namespace mplcp
