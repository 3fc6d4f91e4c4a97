#include "biot/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace biot {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "nx",  "sub_x",   "sub_y",         "H_over_h", "elem",         "primal",       "lambda_pc",
      "pattern", "E",   "nu",            "alpha",    "kappa",        "bc",           "iter",
      "eig_min", "valid_eig_min", "eig_max", "oracle_err_u", "oracle_err_xi", "oracle_err_p", "wall_s"};
  return cols;
}

std::vector<std::string> csv_fields(const ResultRow& r) {
  const ExperimentConfig& c = r.config;
  auto oracle = [&](double FieldErrors::*m) {
    return r.oracle ? format_number((*r.oracle).*m) : std::string("NA");
  };
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", r.wall_s);
  return {std::to_string(c.nx),
          std::to_string(c.sub.nx),
          std::to_string(c.sub.ny),
          format_number(c.H_over_h()),
          to_string(c.elem),
          to_string(c.primal),
          to_string(c.lambda_pc),
          to_string(c.pattern),
          format_number(c.material.E),
          format_number(c.material.nu),
          format_number(c.material.alpha),
          format_number(c.material.kappa),
          c.bc.name(),
          std::to_string(r.iterations),
          format_number(r.eig_min),
          format_number(r.valid_eig_min),
          format_number(r.eig_max),
          oracle(&FieldErrors::u),
          oracle(&FieldErrors::xi),
          oracle(&FieldErrors::p),
          wall};
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  const auto& cols = csv_columns();
  for (size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
  os << '\n';
  for (const auto& r : rows) {
    const auto f = csv_fields(r);
    for (size_t k = 0; k < f.size(); ++k) os << (k ? "," : "") << f[k];
    os << '\n';
  }
}

json row_to_json(const ResultRow& r) {
  auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  json j;
  j["config"] = config_to_json(r.config);
  j["H_over_h"] = r.config.H_over_h();
  j["subdomains"] = r.config.sub.count();
  j["iter"] = r.iterations;
  j["converged"] = r.converged;
  j["eig_min"] = num(r.eig_min);
  j["valid_eig_min"] = num(r.valid_eig_min);
  j["min_excluded"] = r.min_excluded;
  j["eig_max"] = num(r.eig_max);
  j["interface_size"] = r.n_interface;
  j["total_dofs"] = r.total_dofs;
  j["operator_applies"] = r.operator_applies;
  j["jump_residual"] = r.jump_residual;
  j["oracle_status"] = r.oracle_status;
  if (r.oracle) {
    j["oracle_err_u"] = r.oracle->u;
    j["oracle_err_xi"] = r.oracle->xi;
    j["oracle_err_p"] = r.oracle->p;
  } else {
    j["oracle_err_u"] = j["oracle_err_xi"] = j["oracle_err_p"] = nullptr;
  }
  j["wall_s"] = r.wall_s;
  return j;
}

void write_json(std::ostream& os, const std::vector<ResultRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back(row_to_json(r));
  os << a.dump(2) << '\n';
}

json fit_to_json(const FitResult& fit) {
  json pts = json::array();
  for (const auto& [t, y] : fit.points) pts.push_back({{"H_over_h", t}, {"eig_max", y}});
  return {{"C1", fit.C1}, {"C2", fit.C2}, {"R2", fit.R2}, {"points", pts}};
}

namespace {

json field_to_json(const FieldClassification& f) {
  json subs = json::array();
  for (size_t s = 0; s < f.sub.size(); ++s) {
    const FieldSubdomainMap& m = f.sub[s];
    json interior = json::array(), interface = json::array();
    for (int k = 0; k < m.n_interior; ++k) interior.push_back(m.dofs[k]);
    for (int k = m.n_interior; k < m.size(); ++k) interface.push_back(m.dofs[k]);
    json dual = json::array(), primal = json::array();
    for (size_t k = 0; k < m.dual.size(); ++k) dual.push_back({{"position", m.dual[k]}, {"id", m.dual_id[k]}});
    for (size_t k = 0; k < m.primal.size(); ++k)
      primal.push_back({{"position", m.primal[k]}, {"id", m.primal_id[k]}});
    json edges = json::array();
    for (const auto& [start, len] : m.edge_blocks) edges.push_back({start, len});
    subs.push_back({{"subdomain", s},
                    {"interior", interior},
                    {"interface", interface},
                    {"dual", dual},
                    {"primal", primal},
                    {"edge_blocks", edges}});
  }
  return {{"dofs", f.n_dofs},
          {"interface_dofs", f.interface_dofs},
          {"primal_count", f.n_primal},
          {"dual_count", f.n_dual()},
          {"edge_transformed", f.transformed},
          {"subdomains", subs}};
}

}  // namespace

json classification_to_json(const DofClassification& dc) {
  return {{"primal_variant", to_string(dc.primal_variant)},
          {"xi_element", to_string(dc.xi_element)},
          {"u", field_to_json(dc.u)},
          {"xi", field_to_json(dc.xi)},
          {"p", field_to_json(dc.p)}};
}

void write_coordinate(std::ostream& os, const DenseMat& m) {
  os.precision(17);
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) os << i << ' ' << j << ' ' << m(i, j) << '\n';
}

}  // namespace biot
