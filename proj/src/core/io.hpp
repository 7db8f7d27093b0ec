// File formats: CSV panels and matrices, the model/config structured text
// (JSON), fit-set tables, and standalone SVG heatmaps. All writers are
// deterministic; numbers round-trip through max_digits10 formatting.
#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/regress.hpp"
#include "core/select.hpp"

namespace tvgm {

// --- panels -----------------------------------------------------------
// Header row `x1,...,xp`, one time point per row.
void write_panel_csv(const TimeSeriesPanel& panel, const std::string& path);
TimeSeriesPanel read_panel_csv(const std::string& path);

// --- plain matrices ---------------------------------------------------
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

// --- model specification ----------------------------------------------
// JSON document with keys p, d, sigma (p x p array) and lags: a list of
// {j, entries: [{row, col, kind, ...params}]} with 1-based row/col. Entry
// params: kind "constant" {value}, "logistic" {lo, hi}, "table" {knots:
// [[u, value], ...]}.
std::string model_to_json(const TvVarModel& model);
TvVarModel model_from_json(const std::string& text);
void write_model_json(const TvVarModel& model, const std::string& path);
TvVarModel read_model_json(const std::string& path);

// --- fit sets -----------------------------------------------------------
// Columnar CSV `a,k,b,r,re,im,lambda,delta`. A leading descriptor row with
// a = 0 stores the set dimensions (n, p, M, nu, stride); each fit then
// contributes one metadata row with b = 0, r = 0 (carrying ok, iterations,
// lambda, delta) followed by one row per nonzero coefficient. Column maps
// and the frequency grid are reconstructed on read.
void write_fitset_csv(const NodewiseFitSet& fits, const std::string& path);
NodewiseFitSet read_fitset_csv(const std::string& path);

// --- weights ------------------------------------------------------------
void write_weights_csv(const WeightMatrices& w, const std::string& self_path,
                       const std::string& other_path);
WeightMatrices read_weights_csv(const std::string& self_path,
                                const std::string& other_path);

// --- heatmaps -----------------------------------------------------------
// Standalone SVG: p x p cells on a linear white-to-blue scale with value
// annotations; row/column labels are node indices.
void write_heatmap_svg(const Eigen::MatrixXd& values, const std::string& title,
                       const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tvgm
