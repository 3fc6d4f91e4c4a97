#include "biot/experiment.hpp"

#include "biot/errors.hpp"
#include "biot/partition.hpp"
#include "biot/reduced_system.hpp"
#include "biot/transfer_operators.hpp"

#include <chrono>
#include <cmath>
#include <set>

namespace biot {

using nlohmann::json;

std::string to_string(MaterialPattern p) { return p == MaterialPattern::uniform ? "uniform" : "checkerboard"; }

MaterialPattern parse_pattern(const std::string& s) {
  if (s == "uniform") return MaterialPattern::uniform;
  if (s == "checkerboard") return MaterialPattern::checkerboard;
  throw ConfigurationError("unknown material pattern '" + s + "' (expected uniform|checkerboard)");
}

std::string to_string(OracleMode m) {
  switch (m) {
    case OracleMode::automatic: return "auto";
    case OracleMode::on: return "on";
    case OracleMode::off: return "off";
  }
  return "auto";
}

OracleMode parse_oracle_mode(const std::string& s) {
  if (s == "auto") return OracleMode::automatic;
  if (s == "on") return OracleMode::on;
  if (s == "off") return OracleMode::off;
  throw ConfigurationError("unknown oracle mode '" + s + "' (expected auto|on|off)");
}

BoundarySpec parse_boundary(const std::string& s) {
  if (s == "neumann-left") return BoundarySpec::neumann_left();
  if (s == "dirichlet" || s == "all-dirichlet") return BoundarySpec::all_dirichlet();
  throw ConfigurationError("unknown boundary mode '" + s + "' (expected neumann-left|dirichlet)");
}

SubdomainGrid parse_subdomain_grid(const std::string& s) {
  const auto x = s.find_first_of("xX");
  try {
    size_t used = 0;
    if (x == std::string::npos) {
      const int n = std::stoi(s, &used);
      if (used == s.size() && n >= 1) return {n, n};
    } else {
      const int a = std::stoi(s.substr(0, x), &used);
      const bool ok_a = used == x;
      const std::string rest = s.substr(x + 1);
      const int b = std::stoi(rest, &used);
      if (ok_a && used == rest.size() && a >= 1 && b >= 1) return {a, b};
    }
  } catch (const std::logic_error&) {
  }
  throw ConfigurationError("invalid subdomain grid '" + s + "' (expected NxM)");
}

MaterialParameters ExperimentConfig::black_material() const {
  MaterialParameters b = material;
  if (black.E) b.E = *black.E;
  if (black.nu) b.nu = *black.nu;
  if (black.alpha) b.alpha = *black.alpha;
  if (black.kappa) b.kappa = *black.kappa;
  return b;
}

MaterialField ExperimentConfig::materials() const {
  if (pattern == MaterialPattern::uniform) return MaterialField::uniform(sub, material);
  return MaterialField::checkerboard(sub, material, black_material());
}

void ExperimentConfig::validate() const {
  if (nx < 1) throw ConfigurationError("nx must be positive");
  if (sub.nx < 1 || sub.ny < 1) throw ConfigurationError("subdomain grid must be at least 1x1");
  if (nx % sub.nx != 0 || nx % sub.ny != 0)
    throw ConfigurationError("nx = " + std::to_string(nx) + " is not divisible by the subdomain grid " +
                             std::to_string(sub.nx) + "x" + std::to_string(sub.ny));
  if (pattern == MaterialPattern::checkerboard && (sub.nx < 2 || sub.ny < 2))
    throw ConfigurationError("checkerboard pattern requires at least 2x2 subdomains");
  if (dense_limit < 0) throw ConfigurationError("dense_limit must be non-negative");
  bc.validate();
  pcg.validate();
  try {
    (void)materials();
  } catch (const DomainError& e) {
    throw ConfigurationError(std::string("material parameters out of range: ") + e.what());
  }
}

namespace {

std::string context(const ExperimentConfig& c) {
  return " [case nx=" + std::to_string(c.nx) + " sub=" + std::to_string(c.sub.nx) + "x" +
         std::to_string(c.sub.ny) + " elem=" + to_string(c.elem) + " primal=" + to_string(c.primal) +
         " lambda_pc=" + to_string(c.lambda_pc) + " pattern=" + to_string(c.pattern) + "]";
}

CaseOutput run_pipeline(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const StructuredMesh mesh = build_mesh(cfg.nx, cfg.sub);
  const FeSpaceSet spaces = build_spaces(mesh, cfg.bc, cfg.elem);
  const MaterialField mat = cfg.materials();
  const BlockSystem sys = assemble_blocks(mesh, spaces, mat, cfg.bc, cfg.load);
  const SubdomainPartition part = partition(mesh, cfg.sub);
  const DofClassification dc = classify_dofs(part, mesh, spaces, cfg.primal);
  const ScalingWeights w = build_scalings(dc, mat);
  const JumpOperator jump = build_jump(dc, w);
  const RestrictionSet r = build_restrictions(dc, w);
  const ReducedOperator op(sys, dc, jump);
  const BlockPreconditioner M(op, dc, mat, w, r, jump, cfg.lambda_pc);

  CaseOutput out;
  out.pcg = pcg([&](const Vec& x) { return op.apply(x); }, [&](const Vec& x) { return M.apply(x); },
                op.rhs(), cfg.pcg);
  out.solution = op.recover(out.pcg.x);
  const auto t1 = std::chrono::steady_clock::now();

  ResultRow& row = out.row;
  row.config = cfg;
  row.iterations = out.pcg.iterations;
  row.converged = out.pcg.converged;
  row.eig_min = out.pcg.eig_min;
  row.eig_max = out.pcg.eig_max;
  row.valid_eig_min = out.pcg.valid_min.value;
  row.min_excluded = out.pcg.valid_min.excluded_smallest;
  row.n_interface = op.size();
  row.total_dofs = sys.total_dofs();
  row.operator_applies = op.apply_count();
  row.jump_residual = out.solution.jump_residual;
  row.wall_s = std::chrono::duration<double>(t1 - t0).count();

  const bool fits = sys.total_dofs() <= cfg.dense_limit;
  switch (cfg.oracle) {
    case OracleMode::off: row.oracle_status = "off"; break;
    case OracleMode::automatic: row.oracle_status = fits ? "ok" : "skipped"; break;
    case OracleMode::on: row.oracle_status = fits ? "ok" : "refused"; break;
  }
  if (row.oracle_status == "ok")
    row.oracle = compare_fields(out.solution, dense_solve(sys, cfg.dense_limit));
  return out;
}

}  // namespace

CaseOutput run_case(const ExperimentConfig& cfg) {
  cfg.validate();
  try {
    return run_pipeline(cfg);
  } catch (const SingularBlockError& e) {
    throw SingularBlockError(e.what() + context(cfg), e.subdomain());
  } catch (const SpdViolation& e) {
    throw SpdViolation(e.what() + context(cfg));
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(e.what() + context(cfg));
  } catch (const InternalError& e) {
    throw InternalError(e.what() + context(cfg));
  }
}

DofClassification classify_case(const ExperimentConfig& cfg) {
  cfg.validate();
  const StructuredMesh mesh = build_mesh(cfg.nx, cfg.sub);
  const FeSpaceSet spaces = build_spaces(mesh, cfg.bc, cfg.elem);
  return classify_dofs(partition(mesh, cfg.sub), mesh, spaces, cfg.primal);
}

DenseMat probe_reduced_operator(const ExperimentConfig& cfg, int limit) {
  cfg.validate();
  const StructuredMesh mesh = build_mesh(cfg.nx, cfg.sub);
  const FeSpaceSet spaces = build_spaces(mesh, cfg.bc, cfg.elem);
  const MaterialField mat = cfg.materials();
  const BlockSystem sys = assemble_blocks(mesh, spaces, mat, cfg.bc, cfg.load);
  const DofClassification dc = classify_dofs(partition(mesh, cfg.sub), mesh, spaces, cfg.primal);
  const JumpOperator jump = build_jump(dc, build_scalings(dc, mat));
  const ReducedOperator op(sys, dc, jump);
  if (op.size() > limit)
    throw ConfigurationError("probing refused: interface size " + std::to_string(op.size()) +
                             " exceeds the limit of " + std::to_string(limit));
  return op.explicit_matrix();
}

namespace {

double as_number(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      size_t used = 0;
      const std::string s = v.get<std::string>();
      const double d = std::stod(s, &used);
      if (used == s.size()) return d;
    } catch (const std::logic_error&) {
    }
  }
  throw ConfigurationError("config key '" + key + "' expects a number");
}

int as_int(const json& v, const std::string& key) {
  const double d = as_number(v, key);
  if (d != std::floor(d)) throw ConfigurationError("config key '" + key + "' expects an integer");
  return static_cast<int>(d);
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigurationError("config key '" + key + "' expects a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& key) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
  }
  throw ConfigurationError("config key '" + key + "' expects a boolean");
}

const std::set<std::string>& harness_keys() {
  static const std::set<std::string> keys{"sweep", "sweep_mode", "out", "format", "residual_out",
                                          "fit_out", "classification_out", "dump_g", "fit"};
  return keys;
}

}  // namespace

void apply_config_value(ExperimentConfig& cfg, const std::string& key, const json& v) {
  if (key == "nx") cfg.nx = as_int(v, key);
  else if (key == "sub") {
    if (v.is_array() && v.size() == 2) cfg.sub = {as_int(v[0], key), as_int(v[1], key)};
    else if (v.is_number()) cfg.sub = {as_int(v, key), as_int(v, key)};
    else cfg.sub = parse_subdomain_grid(as_string(v, key));
  } else if (key == "H_over_h") cfg.nx = as_int(v, key) * cfg.sub.nx;
  else if (key == "elem") cfg.elem = parse_total_pressure_element(as_string(v, key));
  else if (key == "primal") cfg.primal = parse_primal_variant(as_string(v, key));
  else if (key == "lambda_pc") cfg.lambda_pc = parse_lagrange_variant(as_string(v, key));
  else if (key == "pattern") cfg.pattern = parse_pattern(as_string(v, key));
  else if (key == "E") cfg.material.E = as_number(v, key);
  else if (key == "nu") cfg.material.nu = as_number(v, key);
  else if (key == "alpha") cfg.material.alpha = as_number(v, key);
  else if (key == "kappa") cfg.material.kappa = as_number(v, key);
  else if (key == "black.E") cfg.black.E = as_number(v, key);
  else if (key == "black.nu") cfg.black.nu = as_number(v, key);
  else if (key == "black.alpha") cfg.black.alpha = as_number(v, key);
  else if (key == "black.kappa") cfg.black.kappa = as_number(v, key);
  else if (key == "bc") cfg.bc = parse_boundary(as_string(v, key));
  else if (key == "tol") cfg.pcg.tol = as_number(v, key);
  else if (key == "max_iter") cfg.pcg.max_iter = as_int(v, key);
  else if (key == "ritz_threshold") cfg.pcg.ritz_threshold = as_number(v, key);
  else if (key == "reorthogonalize") cfg.pcg.reorthogonalize = as_bool(v, key);
  else if (key == "oracle") cfg.oracle = parse_oracle_mode(as_string(v, key));
  else if (key == "dense_limit") cfg.dense_limit = as_int(v, key);
  else if (key == "load.fx") cfg.load.fx = as_number(v, key);
  else if (key == "load.fy") cfg.load.fy = as_number(v, key);
  else if (key == "load.g") cfg.load.g = as_number(v, key);
  else throw ConfigurationError("unknown config key '" + key + "'");
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig base) {
  if (!j.is_object()) throw ConfigurationError("config must be a JSON object");
  // H_over_h depends on the subdomain grid, so it is applied last.
  std::optional<json> h_over_h;
  for (const auto& [key, v] : j.items()) {
    if (harness_keys().count(key)) continue;
    if (key == "black" || key == "load") {
      if (!v.is_object()) throw ConfigurationError("config key '" + key + "' expects an object");
      for (const auto& [k2, v2] : v.items()) apply_config_value(base, key + "." + k2, v2);
    } else if (key == "H_over_h") {
      h_over_h = v;
    } else {
      apply_config_value(base, key, v);
    }
  }
  if (h_over_h) apply_config_value(base, "H_over_h", *h_over_h);
  return base;
}

SweepSpec sweep_from_json(const json& j) {
  SweepSpec spec;
  if (j.contains("sweep_mode")) {
    const std::string m = as_string(j.at("sweep_mode"), "sweep_mode");
    if (m == "cartesian") spec.mode = SweepMode::cartesian;
    else if (m == "paired") spec.mode = SweepMode::paired;
    else throw ConfigurationError("unknown sweep_mode '" + m + "' (expected cartesian|paired)");
  }
  if (!j.contains("sweep")) return spec;
  const json& s = j.at("sweep");
  if (!s.is_object()) throw ConfigurationError("'sweep' must map config keys to value lists");
  for (const auto& [key, v] : s.items()) {
    if (!v.is_array()) throw ConfigurationError("sweep axis '" + key + "' must be a list");
    SweepAxis axis{key, {}};
    for (const auto& x : v) axis.values.push_back(x);
    spec.axes.push_back(std::move(axis));
  }
  return spec;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["nx"] = c.nx;
  j["sub"] = std::to_string(c.sub.nx) + "x" + std::to_string(c.sub.ny);
  j["elem"] = to_string(c.elem);
  j["primal"] = to_string(c.primal);
  j["lambda_pc"] = to_string(c.lambda_pc);
  j["pattern"] = to_string(c.pattern);
  j["E"] = c.material.E;
  j["nu"] = c.material.nu;
  j["alpha"] = c.material.alpha;
  j["kappa"] = c.material.kappa;
  json b = json::object();
  if (c.black.E) b["E"] = *c.black.E;
  if (c.black.nu) b["nu"] = *c.black.nu;
  if (c.black.alpha) b["alpha"] = *c.black.alpha;
  if (c.black.kappa) b["kappa"] = *c.black.kappa;
  j["black"] = b;
  j["bc"] = c.bc.name();
  j["load"] = {{"fx", c.load.fx}, {"fy", c.load.fy}, {"g", c.load.g}};
  j["tol"] = c.pcg.tol;
  j["max_iter"] = c.pcg.max_iter;
  j["ritz_threshold"] = c.pcg.ritz_threshold;
  j["reorthogonalize"] = c.pcg.reorthogonalize;
  j["oracle"] = to_string(c.oracle);
  j["dense_limit"] = c.dense_limit;
  return j;
}

std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& base, const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2)
    throw ConfigurationError("a sweep needs exactly one or two axes");
  for (const auto& a : spec.axes)
    if (a.values.empty()) throw ConfigurationError("sweep axis '" + a.key + "' has an empty value list");
  if (spec.mode == SweepMode::paired && spec.axes.size() == 2 &&
      spec.axes[0].values.size() != spec.axes[1].values.size())
    throw ConfigurationError("paired sweep axes must have equal lengths");

  std::vector<std::vector<std::pair<const SweepAxis*, const json*>>> combos;
  const SweepAxis& a0 = spec.axes[0];
  if (spec.axes.size() == 1) {
    for (const auto& v : a0.values) combos.push_back({{&a0, &v}});
  } else {
    const SweepAxis& a1 = spec.axes[1];
    if (spec.mode == SweepMode::paired) {
      for (size_t k = 0; k < a0.values.size(); ++k) combos.push_back({{&a0, &a0.values[k]}, {&a1, &a1.values[k]}});
    } else {
      for (const auto& v0 : a0.values)
        for (const auto& v1 : a1.values) combos.push_back({{&a0, &v0}, {&a1, &v1}});
    }
  }

  std::vector<ExperimentConfig> out;
  for (const auto& combo : combos) {
    ExperimentConfig c = base;
    for (const auto& [axis, v] : combo)
      if (axis->key != "H_over_h") apply_config_value(c, axis->key, *v);
    for (const auto& [axis, v] : combo)
      if (axis->key == "H_over_h") apply_config_value(c, axis->key, *v);
    out.push_back(c);
  }
  return out;
}

std::vector<ResultRow> sweep(const ExperimentConfig& base, const SweepSpec& spec) {
  std::vector<ResultRow> rows;
  for (const auto& c : expand_sweep(base, spec)) rows.push_back(run_case(c).row);
  return rows;
}

FitResult fit_polylog(const std::vector<std::pair<double, double>>& points) {
  std::set<double> distinct;
  for (const auto& [t, y] : points) {
    if (!(t > 0.0)) throw ConfigurationError("fit_polylog: H/h must be positive");
    distinct.insert(t);
  }
  if (distinct.size() < 3) throw ConfigurationError("fit_polylog needs at least three distinct H/h values");
  const int n = static_cast<int>(points.size());
  DenseMat X(n, 2);
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    const double l = 1.0 + std::log(points[i].first);
    X(i, 0) = 1.0;
    X(i, 1) = l * l;
    y[i] = points[i].second;
  }
  const Vec c = X.colPivHouseholderQr().solve(y);
  FitResult f;
  f.C1 = c[0];
  f.C2 = c[1];
  f.points = points;
  const double ss_res = (X * c - y).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
  if (ss_tot > 0.0) f.R2 = 1.0 - ss_res / ss_tot;
  else f.R2 = ss_res <= 1e-24 * std::max(1.0, y.squaredNorm()) ? 1.0 : 0.0;
  return f;
}

FitResult fit_polylog(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw ConfigurationError("fit_polylog needs at least three distinct H/h values");
  auto key = [](const ResultRow& r) {
    json j = config_to_json(r.config);
    j.erase("nx");
    return j;
  };
  const json ref = key(rows.front());
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (key(r) != ref) throw ConfigurationError("fit_polylog: rows differ in more than the mesh size");
    pts.emplace_back(r.config.H_over_h(), r.eig_max);
  }
  return fit_polylog(pts);
}

}  // namespace biot
