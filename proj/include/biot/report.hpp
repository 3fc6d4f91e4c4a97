#pragma once

#include "biot/dof_classification.hpp"
#include "biot/experiment.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace biot {

/// Column order of the result CSV.
const std::vector<std::string>& csv_columns();

/// Values of one row in csv_columns() order; oracle columns read "NA" when skipped.
std::vector<std::string> csv_fields(const ResultRow& row);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
/// JSON array of rows: configuration echo plus every result field.
void write_json(std::ostream& os, const std::vector<ResultRow>& rows);
nlohmann::json row_to_json(const ResultRow& row);
nlohmann::json fit_to_json(const FitResult& fit);

/// Per-field, per-subdomain dof classification.
nlohmann::json classification_to_json(const DofClassification& dc);

/// Coordinate dump of the nonzero entries of a dense matrix.
void write_coordinate(std::ostream& os, const DenseMat& m);

/// Shortest round-trip decimal representation used in every output file.
std::string format_number(double v);

}  // namespace biot
