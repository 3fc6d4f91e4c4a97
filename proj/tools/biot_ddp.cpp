// biot-ddp: run or sweep the three-field Biot FETI-DP/BDDC solver.

#include "biot/errors.hpp"
#include "biot/experiment.hpp"
#include "biot/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::vector<std::pair<std::string, std::string>> overrides;  // (config key, value)
  std::vector<std::string> black;
  std::vector<std::string> sweep;
  std::optional<std::string> sweep_mode;
  std::optional<std::string> out, format, residual_out, fit_out, classification_out, dump_g;
};

std::pair<std::string, std::string> split_assignment(const std::string& s, const std::string& flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
    throw biot::ConfigurationError(flag + " expects KEY=VALUE, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

json load_json(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw biot::ConfigurationError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw biot::ConfigurationError("config file '" + path + "': " + e.what());
  }
}

std::optional<std::string> pick(const std::optional<std::string>& flag, const json& j, const char* key) {
  if (flag) return flag;
  if (j.contains(key) && j.at(key).is_string()) return j.at(key).get<std::string>();
  return std::nullopt;
}

template <class Fn>
void with_output(const std::optional<std::string>& path, Fn&& fn) {
  if (!path || *path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream os(*path);
  if (!os) throw biot::ConfigurationError("cannot write '" + *path + "'");
  fn(os);
}

void write_rows(const std::vector<biot::ResultRow>& rows, const std::optional<std::string>& out,
                const std::string& format) {
  with_output(out, [&](std::ostream& os) {
    if (format == "json") biot::write_json(os, rows);
    else biot::write_csv(os, rows);
  });
}

biot::ExperimentConfig build_config(const Options& o, const json& j) {
  biot::ExperimentConfig cfg = biot::config_from_json(j);
  for (const auto& [key, value] : o.overrides) biot::apply_config_value(cfg, key, value);
  for (const auto& b : o.black) {
    const auto [k, v] = split_assignment(b, "--black");
    biot::apply_config_value(cfg, "black." + k, v);
  }
  return cfg;
}

int run(const Options& o) {
  const json j = load_json(o.config);
  const biot::ExperimentConfig cfg = build_config(o, j);
  const std::string format = pick(o.format, j, "format").value_or("csv");
  if (format != "csv" && format != "json")
    throw biot::ConfigurationError("unknown format '" + format + "' (expected csv|json)");

  if (const auto path = pick(o.classification_out, j, "classification_out"))
    with_output(path, [&](std::ostream& os) {
      os << biot::classification_to_json(biot::classify_case(cfg)).dump(2) << "\n";
    });
  if (const auto path = pick(o.dump_g, j, "dump_g"))
    with_output(path, [&](std::ostream& os) {
      biot::write_coordinate(os, biot::probe_reduced_operator(cfg, cfg.dense_limit));
    });

  const biot::CaseOutput res = biot::run_case(cfg);
  if (const auto path = pick(o.residual_out, j, "residual_out"))
    with_output(path, [&](std::ostream& os) { biot::write_residual_history(os, res.pcg); });
  write_rows({res.row}, pick(o.out, j, "out"), format);
  if (res.pcg.valid_min.warning)
    std::cerr << "warning: degenerate smallest Ritz value suspected but too few Ritz values\n";
  if (!res.row.converged) {
    std::cerr << "error: PCG did not converge in " << res.row.iterations << " iterations\n";
    return 3;
  }
  return 0;
}

int sweep(const Options& o) {
  const json j = load_json(o.config);
  const biot::ExperimentConfig base = build_config(o, j);
  biot::SweepSpec spec = biot::sweep_from_json(j);
  if (!o.sweep.empty()) {
    spec.axes.clear();
    for (const auto& s : o.sweep) {
      const auto [key, list] = split_assignment(s, "--sweep");
      biot::SweepAxis axis{key, {}};
      for (const auto& v : split_list(list)) axis.values.emplace_back(v);
      spec.axes.push_back(std::move(axis));
    }
  }
  if (o.sweep_mode) {
    if (*o.sweep_mode == "cartesian") spec.mode = biot::SweepMode::cartesian;
    else if (*o.sweep_mode == "paired") spec.mode = biot::SweepMode::paired;
    else throw biot::ConfigurationError("unknown sweep mode '" + *o.sweep_mode + "'");
  }
  const std::string format = pick(o.format, j, "format").value_or("csv");
  if (format != "csv" && format != "json")
    throw biot::ConfigurationError("unknown format '" + format + "' (expected csv|json)");

  const std::vector<biot::ResultRow> rows = biot::sweep(base, spec);
  write_rows(rows, pick(o.out, j, "out"), format);
  if (const auto path = pick(o.fit_out, j, "fit_out"))
    with_output(path, [&](std::ostream& os) {
      os << biot::fit_to_json(biot::fit_polylog(rows)).dump(2) << "\n";
    });
  for (const auto& r : rows)
    if (!r.converged) return 3;
  return 0;
}

void add_common(CLI::App* app, Options& o) {
  app->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
  const auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(
        name, [&o, key](const std::string& v) { o.overrides.emplace_back(key, v); }, help);
  };
  flag("--nx", "nx", "cells per side of the base mesh");
  flag("--sub", "sub", "subdomain grid NxM");
  flag("--H-over-h", "H_over_h", "cells per subdomain side (sets nx)");
  flag("--elem", "elem", "total pressure element {p1|p0}");
  flag("--primal", "primal", "primal set {vertex|vertex-edge}");
  flag("--lambda-pc", "lambda_pc", "multiplier block {dirichlet|lumped}");
  flag("--E", "E", "Young's modulus");
  flag("--nu", "nu", "Poisson ratio");
  flag("--alpha", "alpha", "Biot-Willis coefficient");
  flag("--kappa", "kappa", "permeability");
  flag("--pattern", "pattern", "coefficient pattern {uniform|checkerboard}");
  flag("--bc", "bc", "boundary mode {neumann-left|dirichlet}");
  flag("--tol", "tol", "relative residual tolerance");
  flag("--max-iter", "max_iter", "PCG iteration cap");
  flag("--ritz-threshold", "ritz_threshold", "degenerate smallest Ritz value ratio");
  flag("--reorthogonalize", "reorthogonalize", "full reorthogonalization {true|false}");
  flag("--oracle", "oracle", "dense oracle {auto|on|off}");
  flag("--dense-limit", "dense_limit", "largest system the oracle factors densely");
  app->add_option("--black", o.black, "checkerboard black-cell override KEY=VALUE (E, nu, alpha, kappa)");
  app->add_option("--out", o.out, "result file (default stdout)");
  app->add_option("--format", o.format, "result format {csv|json}");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-field Biot FETI-DP/BDDC solver"};
  app.require_subcommand(1);
  Options o;

  CLI::App* run_cmd = app.add_subcommand("run", "solve one configuration");
  add_common(run_cmd, o);
  run_cmd->add_option("--residual-out", o.residual_out, "residual history CSV");
  run_cmd->add_option("--classification-out", o.classification_out, "dof classification JSON");
  run_cmd->add_option("--dump-g", o.dump_g, "explicit reduced operator, coordinate format");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve a one- or two-axis parameter sweep");
  add_common(sweep_cmd, o);
  sweep_cmd->add_option("--sweep", o.sweep, "sweep axis KEY=v1,v2,... (replaces the config sweep)");
  sweep_cmd->add_option("--sweep-mode", o.sweep_mode, "{cartesian|paired}");
  sweep_cmd->add_option("--fit-out", o.fit_out, "fit of eig_max against (1+log(H/h))^2, JSON");

  CLI11_PARSE(app, argc, argv);
  try {
    return run_cmd->parsed() ? run(o) : sweep(o);
  } catch (const biot::ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const biot::DomainError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const biot::SingularBlockError& e) {
    std::cerr << "singular block (subdomain " << e.subdomain() << "): " << e.what() << "\n";
    return 3;
  } catch (const biot::SpdViolation& e) {
    std::cerr << "SPD violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
