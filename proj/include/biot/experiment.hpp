#pragma once

#include "biot/assembly.hpp"
#include "biot/boundary.hpp"
#include "biot/dof_classification.hpp"
#include "biot/fe_spaces.hpp"
#include "biot/material.hpp"
#include "biot/oracle.hpp"
#include "biot/pcg.hpp"
#include "biot/preconditioner.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace biot {

enum class MaterialPattern { uniform, checkerboard };
enum class OracleMode { automatic, on, off };

std::string to_string(MaterialPattern p);
MaterialPattern parse_pattern(const std::string& s);
std::string to_string(OracleMode m);
OracleMode parse_oracle_mode(const std::string& s);
BoundarySpec parse_boundary(const std::string& s);
SubdomainGrid parse_subdomain_grid(const std::string& s);

/// Black-cell overrides of the checkerboard pattern; unset values follow the white cells.
struct BlackCells {
  std::optional<double> E, nu, alpha, kappa;
};

struct ExperimentConfig {
  int nx = 48;
  SubdomainGrid sub{4, 4};
  TotalPressureElement elem = TotalPressureElement::p1;
  PrimalVariant primal = PrimalVariant::vertex;
  LagrangeVariant lambda_pc = LagrangeVariant::dirichlet;
  MaterialPattern pattern = MaterialPattern::uniform;
  MaterialParameters material;
  BlackCells black;
  BoundarySpec bc = BoundarySpec::neumann_left();
  LoadSpec load;
  PcgConfig pcg;
  OracleMode oracle = OracleMode::automatic;
  int dense_limit = default_dense_limit;

  double H_over_h() const { return static_cast<double>(nx) / sub.nx; }
  MaterialParameters black_material() const;
  MaterialField materials() const;
  /// Throws ConfigurationError on out-of-domain values.
  void validate() const;
};

struct ResultRow {
  ExperimentConfig config;
  int iterations = 0;
  bool converged = false;
  double eig_min = 0.0;
  double valid_eig_min = 0.0;
  bool min_excluded = false;
  double eig_max = 0.0;
  int n_interface = 0;
  int total_dofs = 0;
  long operator_applies = 0;
  double jump_residual = 0.0;
  std::string oracle_status = "off";  // off | ok | refused
  std::optional<FieldErrors> oracle;
  double wall_s = 0.0;
};

struct CaseOutput {
  ResultRow row;
  PcgResult pcg;
  FieldSolution solution;
};

/// Full pipeline: assemble, decompose, reduce, precondition, solve, recover,
/// and compare with the dense oracle when enabled.
CaseOutput run_case(const ExperimentConfig& cfg);

/// Dof classification of a configuration (no solve).
DofClassification classify_case(const ExperimentConfig& cfg);
/// Explicit reduced operator G by unit-vector probing; refuses interface
/// sizes above `limit`.
DenseMat probe_reduced_operator(const ExperimentConfig& cfg, int limit = default_dense_limit);

enum class SweepMode { cartesian, paired };

/// One swept configuration key with its values (strings or numbers as JSON).
struct SweepAxis {
  std::string key;
  std::vector<nlohmann::json> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  SweepMode mode = SweepMode::cartesian;
};

/// Expands a sweep into configurations in stable order (first axis slowest).
/// Accepted keys: any scalar config key, "sub", "H_over_h" (sets nx from the
/// subdomain count) and "black.E", "black.nu", "black.alpha", "black.kappa".
std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& base, const SweepSpec& spec);
std::vector<ResultRow> sweep(const ExperimentConfig& base, const SweepSpec& spec);

struct FitResult {
  double C1 = 0.0;
  double C2 = 0.0;
  double R2 = 0.0;
  std::vector<std::pair<double, double>> points;  // (H/h, eig_max)
};

/// Least-squares fit eig_max ~ C1 + C2 (1 + log(H/h))^2 over rows that differ
/// only in mesh size. Needs at least three distinct H/h values.
FitResult fit_polylog(const std::vector<ResultRow>& rows);
FitResult fit_polylog(const std::vector<std::pair<double, double>>& points);

/// Applies one config key (JSON scalar) to cfg.
void apply_config_value(ExperimentConfig& cfg, const std::string& key, const nlohmann::json& v);
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
SweepSpec sweep_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace biot
