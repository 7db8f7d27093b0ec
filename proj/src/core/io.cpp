#include "core/io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tvgm {

namespace {

using ordered_json = nlohmann::ordered_json;

// max_digits10 formatting: the shortest form that still round-trips exactly.
std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return out.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::runtime_error(where + ": not a number: '" + text + "'");
  }
  if (used != text.size())
    throw std::runtime_error(where + ": trailing characters in '" + text + "'");
  return value;
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

void finish_write(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

// Rows of doubles with a fixed column count; `header_lines` rows are skipped.
std::vector<std::vector<double>> read_numeric_rows(std::istream& in,
                                                   const std::string& path) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 1;  // header already consumed by callers that have one
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields)
      row.push_back(parse_double(f, path + ":" + std::to_string(line_no)));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(rows.front().size()) +
                               " fields, found " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Eigen::MatrixXd();
  Eigen::MatrixXd m(static_cast<int>(rows.size()),
                    static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

ordered_json entry_to_json(int row, int col, const CoefficientFunction& f) {
  ordered_json e;
  e["row"] = row + 1;
  e["col"] = col + 1;
  switch (f.kind()) {
    case CoefficientFunction::Kind::kConstant:
      e["kind"] = "constant";
      e["value"] = f.value();
      break;
    case CoefficientFunction::Kind::kLogistic:
      e["kind"] = "logistic";
      e["lo"] = f.lo();
      e["hi"] = f.hi();
      break;
    case CoefficientFunction::Kind::kTable: {
      e["kind"] = "table";
      auto knots = ordered_json::array();
      for (const auto& [u, v] : f.knots()) knots.push_back({u, v});
      e["knots"] = std::move(knots);
      break;
    }
  }
  return e;
}

CoefficientFunction entry_from_json(const ordered_json& e) {
  const std::string kind = e.at("kind").get<std::string>();
  if (kind == "constant") return CoefficientFunction::constant(e.at("value").get<double>());
  if (kind == "logistic")
    return CoefficientFunction::logistic(e.at("lo").get<double>(), e.at("hi").get<double>());
  if (kind == "table") {
    std::vector<std::pair<double, double>> knots;
    for (const auto& knot : e.at("knots")) {
      if (!knot.is_array() || knot.size() != 2)
        throw std::invalid_argument("model JSON: table knot must be [u, value]");
      knots.emplace_back(knot[0].get<double>(), knot[1].get<double>());
    }
    return CoefficientFunction::table(std::move(knots));
  }
  throw std::invalid_argument("model JSON: unknown entry kind '" + kind + "'");
}

}  // namespace

// --- panels -----------------------------------------------------------

void write_panel_csv(const TimeSeriesPanel& panel, const std::string& path) {
  auto out = open_for_write(path);
  for (int a = 1; a <= panel.p(); ++a) out << (a == 1 ? "x" : ",x") << a;
  out << "\n";
  for (int t = 0; t < panel.n(); ++t) {
    for (int a = 0; a < panel.p(); ++a)
      out << (a == 0 ? "" : ",") << fmt(panel.data(t, a));
    out << "\n";
  }
  finish_write(out, path);
}

TimeSeriesPanel read_panel_csv(const std::string& path) {
  auto in = open_for_read(path);
  std::string header;
  if (!std::getline(in, header) || header.empty())
    throw std::runtime_error(path + ": missing panel header");
  const int p = static_cast<int>(split_csv(header).size());
  auto rows = read_numeric_rows(in, path);
  if (rows.empty()) throw std::runtime_error(path + ": panel has no rows");
  if (static_cast<int>(rows.front().size()) != p)
    throw std::runtime_error(path + ": header names " + std::to_string(p) +
                             " series but rows have " +
                             std::to_string(rows.front().size()) + " fields");
  TimeSeriesPanel panel;
  panel.data = rows_to_matrix(rows);
  return panel;
}

// --- plain matrices ---------------------------------------------------

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  auto out = open_for_write(path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out << (j == 0 ? "" : ",") << fmt(m(i, j));
    out << "\n";
  }
  finish_write(out, path);
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  auto in = open_for_read(path);
  auto rows = read_numeric_rows(in, path);
  if (rows.empty()) throw std::runtime_error(path + ": matrix file is empty");
  return rows_to_matrix(rows);
}

// --- model specification ----------------------------------------------

std::string model_to_json(const TvVarModel& model) {
  ordered_json doc;
  doc["p"] = model.p();
  doc["d"] = model.d();
  auto sigma = ordered_json::array();
  for (int i = 0; i < model.p(); ++i) {
    auto row = ordered_json::array();
    for (int j = 0; j < model.p(); ++j) row.push_back(model.sigma()(i, j));
    sigma.push_back(std::move(row));
  }
  doc["sigma"] = std::move(sigma);
  auto lags = ordered_json::array();
  for (int j = 1; j <= model.d(); ++j) {
    auto entries = ordered_json::array();
    for (int row = 0; row < model.p(); ++row)
      for (int col = 0; col < model.p(); ++col) {
        const auto& f = model.entry(j, row, col);
        // Exact structural zeros are the default; skip them.
        if (f.kind() == CoefficientFunction::Kind::kConstant && f.value() == 0.0)
          continue;
        entries.push_back(entry_to_json(row, col, f));
      }
    lags.push_back({{"j", j}, {"entries", std::move(entries)}});
  }
  doc["lags"] = std::move(lags);
  return doc.dump(2);
}

TvVarModel model_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("model JSON: parse error: ") + e.what());
  }
  try {
    const int p = doc.at("p").get<int>();
    const int d = doc.at("d").get<int>();
    if (p < 1 || d < 1)
      throw std::invalid_argument("model JSON: p and d must be positive");
    const auto& sig = doc.at("sigma");
    if (!sig.is_array() || static_cast<int>(sig.size()) != p)
      throw std::invalid_argument("model JSON: sigma must be a p x p array");
    Eigen::MatrixXd sigma(p, p);
    for (int i = 0; i < p; ++i) {
      if (!sig[i].is_array() || static_cast<int>(sig[i].size()) != p)
        throw std::invalid_argument("model JSON: sigma must be a p x p array");
      for (int j = 0; j < p; ++j) sigma(i, j) = sig[i][j].get<double>();
    }
    TvVarModel model(p, d, std::move(sigma));
    for (const auto& lag : doc.at("lags")) {
      const int j = lag.at("j").get<int>();
      if (j < 1 || j > d)
        throw std::invalid_argument("model JSON: lag index j out of [1, d]");
      for (const auto& e : lag.at("entries")) {
        const int row = e.at("row").get<int>();
        const int col = e.at("col").get<int>();
        if (row < 1 || row > p || col < 1 || col > p)
          throw std::invalid_argument("model JSON: entry row/col out of [1, p]");
        model.set_entry(j, row - 1, col - 1, entry_from_json(e));
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model JSON: ") + e.what());
  }
}

void write_model_json(const TvVarModel& model, const std::string& path) {
  write_text_file(path, model_to_json(model) + "\n");
}

TvVarModel read_model_json(const std::string& path) {
  return model_from_json(read_text_file(path));
}

// --- fit sets -----------------------------------------------------------
//
// Row layout within the fixed `a,k,b,r,re,im,lambda,delta` columns:
//   - one leading descriptor row, marked by a = 0, storing the set dimensions
//     as b = n, r = p, re = M, im = nu, lambda = stride;
//   - per fit, one metadata row with b = 0, r = 0 storing re = ok (0/1),
//     im = iterations, and the fit's lambda and delta;
//   - then one row per nonzero coefficient (lambda and delta left 0).
// Column maps and the frequency grid are reconstructed from the dimensions
// and the fit rows, so zero coefficients need no storage.

void write_fitset_csv(const NodewiseFitSet& fits, const std::string& path) {
  auto out = open_for_write(path);
  out << "a,k,b,r,re,im,lambda,delta\n";
  out << "0,0," << fits.n << "," << fits.p << "," << fits.M << "," << fits.nu
      << "," << fits.stride << ",0\n";
  for (const auto& fit : fits.fits) {
    out << fit.a << "," << fit.k << ",0,0," << (fit.ok ? 1 : 0) << ","
        << fit.iterations << "," << fmt(fit.lambda) << "," << fmt(fit.delta)
        << "\n";
    const auto& map = fits.column_maps.at(fit.a - 1);
    for (int c = 0; c < fit.beta.size(); ++c) {
      if (fit.beta(c) == std::complex<double>(0.0, 0.0)) continue;
      out << fit.a << "," << fit.k << "," << map[c].first << ","
          << map[c].second << "," << fmt(fit.beta(c).real()) << ","
          << fmt(fit.beta(c).imag()) << ",0,0\n";
    }
  }
  finish_write(out, path);
}

NodewiseFitSet read_fitset_csv(const std::string& path) {
  auto in = open_for_read(path);
  std::string header;
  if (!std::getline(in, header) || split_csv(header).size() != 8)
    throw std::runtime_error(path + ": missing fit-set header");
  auto rows = read_numeric_rows(in, path);
  if (rows.empty() || rows.front().size() != 8 || rows.front()[0] != 0.0)
    throw std::runtime_error(path + ": missing fit-set descriptor row");

  NodewiseFitSet set;
  set.n = static_cast<int>(rows.front()[2]);
  set.p = static_cast<int>(rows.front()[3]);
  set.M = static_cast<int>(rows.front()[4]);
  set.nu = static_cast<int>(rows.front()[5]);
  set.stride = static_cast<int>(rows.front()[6]);
  if (set.n < 1 || set.p < 1 || set.M < 0 || set.nu < 0 || set.stride < 1)
    throw std::runtime_error(path + ": implausible fit-set dimensions");
  set.column_maps.resize(set.p);
  for (int a = 1; a <= set.p; ++a)
    for (int r = -set.nu; r <= set.nu; ++r)
      for (int b = 1; b <= set.p; ++b)
        if (!(b == a && r == 0)) set.column_maps[a - 1].emplace_back(b, r);

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const int a = static_cast<int>(row[0]);
    const int k = static_cast<int>(row[1]);
    const int b = static_cast<int>(row[2]);
    const int r = static_cast<int>(row[3]);
    if (a < 1 || a > set.p || k < 1 || k > set.n)
      throw std::runtime_error(path + ": fit row with node or frequency out of range");
    if (b == 0 && r == 0) {
      NodewiseFit fit;
      fit.a = a;
      fit.k = k;
      fit.ok = row[4] != 0.0;
      fit.iterations = static_cast<int>(row[5]);
      fit.lambda = row[6];
      fit.delta = row[7];
      fit.beta = Eigen::VectorXcd::Zero(
          static_cast<int>(set.column_maps[a - 1].size()));
      set.fits.push_back(std::move(fit));
      continue;
    }
    if (set.fits.empty() || set.fits.back().a != a || set.fits.back().k != k)
      throw std::runtime_error(path + ": coefficient row before its fit metadata");
    const auto& map = set.column_maps[a - 1];
    int col = -1;
    for (std::size_t c = 0; c < map.size(); ++c)
      if (map[c].first == b && map[c].second == r) {
        col = static_cast<int>(c);
        break;
      }
    if (col < 0)
      throw std::runtime_error(path + ": coefficient (b, r) outside the column map");
    set.fits.back().beta(col) = std::complex<double>(row[4], row[5]);
  }

  // Fits are stored node-major, so the first node's fits walk the full grid.
  if (!set.fits.empty()) {
    const int first = set.fits.front().a;
    for (const auto& fit : set.fits)
      if (fit.a == first) set.k_grid.push_back(fit.k);
  }
  return set;
}

// --- weights ------------------------------------------------------------

void write_weights_csv(const WeightMatrices& w, const std::string& self_path,
                       const std::string& other_path) {
  write_matrix_csv(w.self, self_path);
  write_matrix_csv(w.other, other_path);
}

WeightMatrices read_weights_csv(const std::string& self_path,
                                const std::string& other_path) {
  WeightMatrices w;
  w.self = read_matrix_csv(self_path);
  w.other = read_matrix_csv(other_path);
  if (w.self.rows() != w.self.cols() || w.other.rows() != w.self.rows() ||
      w.other.cols() != w.self.cols())
    throw std::runtime_error("weight matrices must be square and equally sized");
  w.p = static_cast<int>(w.self.rows());
  // The frequency grid the sums ran over is not part of the matrix files.
  return w;
}

// --- heatmaps -----------------------------------------------------------

namespace {

std::string escape_xml(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

std::string short_value(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << v;
  return s.str();
}

}  // namespace

void write_heatmap_svg(const Eigen::MatrixXd& values, const std::string& title,
                       const std::string& path) {
  const int rows = static_cast<int>(values.rows());
  const int cols = static_cast<int>(values.cols());
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("heatmap requires a nonempty matrix");
  const int cell = 56, left = 44, top = 52, pad = 12;
  const int width = left + cols * cell + pad;
  const int height = top + rows * cell + pad;
  const double scale = std::max(values.maxCoeff(), 0.0);

  auto out = open_for_write(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "  <rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"#ffffff\"/>\n";
  out << "  <text x=\"" << width / 2
      << "\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\" fill=\"#111111\">"
      << escape_xml(title) << "</text>\n";
  for (int j = 0; j < cols; ++j)
    out << "  <text x=\"" << left + j * cell + cell / 2 << "\" y=\"" << top - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\" fill=\"#444444\">"
        << j + 1 << "</text>\n";
  for (int i = 0; i < rows; ++i)
    out << "  <text x=\"" << left - 8 << "\" y=\"" << top + i * cell + cell / 2 + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#444444\">"
        << i + 1 << "</text>\n";
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double v = values(i, j);
      const double t = scale > 0.0 ? std::max(v, 0.0) / scale : 0.0;
      // Linear white (255,255,255) -> blue (37,99,235).
      const int cr = static_cast<int>(std::lround(255 - t * (255 - 37)));
      const int cg = static_cast<int>(std::lround(255 - t * (255 - 99)));
      const int cb = static_cast<int>(std::lround(255 - t * (255 - 235)));
      out << "  <rect x=\"" << left + j * cell << "\" y=\"" << top + i * cell
          << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"rgb("
          << cr << "," << cg << "," << cb << ")\" stroke=\"#cccccc\"/>\n";
      out << "  <text x=\"" << left + j * cell + cell / 2 << "\" y=\""
          << top + i * cell + cell / 2 + 4
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"10\" fill=\""
          << (t > 0.55 ? "#ffffff" : "#111111") << "\">" << short_value(v)
          << "</text>\n";
    }
  out << "</svg>\n";
  finish_write(out, path);
}

std::string read_text_file(const std::string& path) {
  auto in = open_for_read(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failed: " + path);
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_for_write(path);
  out << text;
  finish_write(out, path);
}

}  // namespace tvgm
