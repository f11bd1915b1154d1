#include "mplcp/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mplcp/analytic.hpp"
#include "mplcp/montecarlo.hpp"

namespace mplcp {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;
// Allowance for quadrature noise when monotonizing analytic curve samples.
constexpr double kQuadratureMonotoneTol = 1e-8;
constexpr double kClosedFormMonotoneTol = 1e-13;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string mode_name(Palm mode) {
  return mode == Palm::kTypicalIntersection ? "intersection" : "typical-point";
}

Palm parse_mode(const std::string& s) {
  if (s == "intersection") return Palm::kTypicalIntersection;
  if (s == "typical-point") return Palm::kTypicalPoint;
  throw InvalidArgument("mode must be 'intersection' or 'typical-point'");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << content;
  if (!out) throw Error("failed writing output file: " + path);
}

// RFC 4180: CRLF line endings; all emitted fields are numeric or plain
// headers, so no quoting is ever required.
std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line += ',';
    line += fields[i];
  }
  line += "\r\n";
  return line;
}

void load_config_file(const std::string& path, RunConfig& cfg, std::string& mode_str) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file: " + path);
  json doc = json::parse(in);
  for (const auto& [key, value] : doc.items()) {
    if (key == "mode") mode_str = value.get<std::string>();
    else if (key == "lambda_l") cfg.lambda_l = value.get<double>();
    else if (key == "lambda_c") cfg.lambda_c = value.get<double>();
    else if (key == "trials") cfg.trials = value.get<std::uint64_t>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "grid_size") cfg.grid_size = value.get<std::size_t>();
    else if (key == "out") cfg.out_path = value.get<std::string>();
    else if (key == "format") cfg.format = value.get<std::string>();
    else if (key == "preset") cfg.preset = value.get<std::string>();
    else throw InvalidArgument("unknown config key: " + key);
  }
}

json report_to_json(const ValidationReport& r) {
  return json{{"regime", r.regime},
              {"mode", mode_name(r.mode)},
              {"n_trials", r.n_trials},
              {"seed", r.seed},
              {"ks_statistic", r.ks_statistic},
              {"dkw_halfwidth", r.dkw_halfwidth},
              {"tolerance", r.tolerance},
              {"pass", r.pass},
              {"worst_deviation",
               json{{"distance_km", r.worst_distance_km},
                    {"cdf_empirical", r.worst_empirical},
                    {"cdf_analytic", r.worst_analytic}}}};
}

std::function<double(double)> analytic_cdf(Palm mode, const ModelParams& params) {
  if (mode == Palm::kTypicalIntersection) {
    return [params](double d) { return cdf_intersection(d, params); };
  }
  return [params](double d) { return cdf_typical_solved(d, params); };
}

int run_validate(const RunConfig& cfg) {
  const ModelParams params = validate_params(cfg.lambda_l, cfg.lambda_c);
  const auto cdf = analytic_cdf(cfg.mode, params);
  const std::vector<double> grid = make_distance_grid(cdf, cfg.grid_size);

  std::vector<double> analytic_values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) analytic_values[i] = cdf(grid[i]);
  monotonize_cdf_values(analytic_values,
                        cfg.mode == Palm::kTypicalIntersection
                            ? kClosedFormMonotoneTol
                            : kQuadratureMonotoneTol);
  const CdfCurve analytic = CdfCurve::analytic(grid, analytic_values);
  const CdfCurve empirical =
      estimate_cdf(params, cfg.mode, cfg.trials, grid, cfg.seed);

  ValidationReport report = ks_compare(empirical, analytic, cfg.regime_label);
  report.mode = cfg.mode;
  report.seed = cfg.seed;

  const json report_json{{"schema_version", kSchemaVersion},
                         {"command", "validate"},
                         {"lambda_l", params.lambda_l},
                         {"lambda_c", params.lambda_c},
                         {"report", report_to_json(report)}};

  if (cfg.format == "json") {
    json doc = report_json;
    doc["curve"] = json{{"distance_km", grid},
                        {"cdf_empirical", empirical.values()},
                        {"cdf_analytic", analytic.values()}};
    write_file(cfg.out_path, doc.dump(2) + "\n");
  } else {
    std::string csv = csv_line({"distance_km", "cdf_empirical", "cdf_analytic",
                                "dkw_lo", "dkw_hi"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double e = empirical.values()[i];
      const double lo = std::max(0.0, e - empirical.dkw());
      const double hi = std::min(1.0, e + empirical.dkw());
      csv += csv_line({format_double(grid[i]), format_double(e),
                       format_double(analytic.values()[i]), format_double(lo),
                       format_double(hi)});
    }
    write_file(cfg.out_path, csv);
    write_file(cfg.out_path + ".report.json", report_json.dump(2) + "\n");
  }

  std::cout << "validate " << (report.regime.empty() ? "custom" : report.regime)
            << " " << mode_name(cfg.mode) << ": ks=" << report.ks_statistic
            << " tolerance=" << report.tolerance
            << (report.pass ? " PASS" : " FAIL") << "\n";
  return report.pass ? kExitPass : kExitValidationFailed;
}

int run_curve(const RunConfig& cfg) {
  const ModelParams params = validate_params(cfg.lambda_l, cfg.lambda_c);
  const auto cdf = analytic_cdf(cfg.mode, params);
  const std::vector<double> grid = make_distance_grid(cdf, cfg.grid_size);

  std::vector<double> primary(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) primary[i] = cdf(grid[i]);

  std::vector<double> assembled;
  if (cfg.mode == Palm::kTypicalPoint) {
    assembled.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      assembled[i] = cdf_typical_assembled(grid[i], params);
    }
    monotonize_cdf_values(primary, kQuadratureMonotoneTol);
    monotonize_cdf_values(assembled, kQuadratureMonotoneTol);
  } else {
    monotonize_cdf_values(primary, kClosedFormMonotoneTol);
  }

  if (cfg.format == "json") {
    json doc{{"schema_version", kSchemaVersion},
             {"command", "curve"},
             {"mode", mode_name(cfg.mode)},
             {"lambda_l", params.lambda_l},
             {"lambda_c", params.lambda_c},
             {"distance_km", grid}};
    if (cfg.mode == Palm::kTypicalPoint) {
      doc["cdf_solved"] = primary;
      doc["cdf_assembled"] = assembled;
    } else {
      doc["cdf"] = primary;
    }
    write_file(cfg.out_path, doc.dump(2) + "\n");
  } else if (cfg.mode == Palm::kTypicalPoint) {
    std::string csv =
        csv_line({"distance_km", "cdf_solved", "cdf_assembled", "abs_diff"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv += csv_line({format_double(grid[i]), format_double(primary[i]),
                       format_double(assembled[i]),
                       format_double(std::fabs(primary[i] - assembled[i]))});
    }
    write_file(cfg.out_path, csv);
  } else {
    std::string csv = csv_line({"distance_km", "cdf"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      csv += csv_line({format_double(grid[i]), format_double(primary[i])});
    }
    write_file(cfg.out_path, csv);
  }
  return kExitPass;
}

}  // namespace

std::optional<ModelParams> preset_params(const std::string& preset, Palm mode) {
  struct Row {
    const char* name;
    double lambda_l;
    double lambda_c_intersection;
    double lambda_c_typical;
  };
  static constexpr Row kRows[] = {
      {"dl-dp", 10, 3, 5},
      {"sl-dp", 1, 3, 5},
      {"dl-sp", 10, 0.5, 0.5},
      {"sl-sp", 1, 0.5, 0.5},
  };
  for (const Row& row : kRows) {
    if (preset == row.name) {
      const double lc = mode == Palm::kTypicalIntersection
                            ? row.lambda_c_intersection
                            : row.lambda_c_typical;
      return ModelParams{row.lambda_l, lc};
    }
  }
  return std::nullopt;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Manhattan line-network shortest path distance toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string mode_str;
  std::string config_path;

  // Config file first, flags override.
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  try {
    if (!config_path.empty()) load_config_file(config_path, cfg, mode_str);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
    cmd->add_option("--mode", mode_str, "reference point: intersection | typical-point")
        ->check(CLI::IsMember({"intersection", "typical-point"}));
    cmd->add_option("--lambda-l", cfg.lambda_l, "line density per km");
    cmd->add_option("--lambda-c", cfg.lambda_c, "point density per km per line");
    cmd->add_option("--seed", cfg.seed, "base seed");
    cmd->add_option("--grid-size", cfg.grid_size, "number of grid points");
    cmd->add_option("--out", cfg.out_path, "output file path");
    cmd->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--preset", cfg.preset, "regime preset")
        ->check(CLI::IsMember({"dl-dp", "dl-sp", "sl-dp", "sl-sp"}));
  };

  CLI::App* validate = app.add_subcommand("validate",
                                          "run seeded trials and compare the empirical "
                                          "CDF against the analytic one");
  add_common(validate);
  validate->add_option("--trials", cfg.trials, "number of Monte-Carlo trials");

  CLI::App* curve = app.add_subcommand("curve", "emit the analytic CDF on a grid");
  add_common(curve);

  std::vector<const char*> argv;
  argv.push_back("mplcp");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (mode_str.empty()) throw InvalidArgument("--mode is required");
    cfg.mode = parse_mode(mode_str);
    if (!cfg.preset.empty()) {
      const auto preset = preset_params(cfg.preset, cfg.mode);
      if (!preset) throw InvalidArgument("unknown preset: " + cfg.preset);
      if (cfg.lambda_l == 0) cfg.lambda_l = preset->lambda_l;
      if (cfg.lambda_c == 0) cfg.lambda_c = preset->lambda_c;
      cfg.regime_label = cfg.preset;
    }
    if (cfg.out_path.empty()) throw InvalidArgument("--out is required");
    if (validate->parsed() && cfg.trials < 100) {
      throw InvalidArgument("--trials must be >= 100");
    }
    cfg.command = validate->parsed() ? "validate" : "curve";
    return validate->parsed() ? run_validate(cfg) : run_curve(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace mplcp
