#include "core/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "core/model.hpp"

namespace tvgm {

bool NonStGraph::has_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  for (const auto& e : edges)
    if (e.a == a && e.b == b) return true;
  return false;
}

bool NonStGraph::edge_time_varying(int a, int b) const {
  if (a > b) std::swap(a, b);
  for (const auto& e : edges)
    if (e.a == a && e.b == b) return e.time_varying;
  throw std::out_of_range("edge not present in graph");
}

void NonStGraph::set_edge(int a, int b, bool time_varying) {
  if (a == b) throw std::invalid_argument("self-loops are node flags, not edges");
  if (a > b) std::swap(a, b);
  for (auto& e : edges)
    if (e.a == a && e.b == b) {
      e.time_varying = time_varying;
      return;
    }
  edges.push_back({a, b, time_varying});
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
}

GraphMetrics compare_graphs(const NonStGraph& estimated, const NonStGraph& truth) {
  if (estimated.p != truth.p)
    throw std::invalid_argument("graph comparison requires equal dimensions");
  GraphMetrics m;
  int attr_match = 0;
  for (const auto& e : estimated.edges) {
    if (truth.has_edge(e.a, e.b)) {
      ++m.true_positive;
      if (truth.edge_time_varying(e.a, e.b) == e.time_varying) ++attr_match;
    } else {
      ++m.false_positive;
    }
  }
  for (const auto& e : truth.edges)
    if (!estimated.has_edge(e.a, e.b)) ++m.false_negative;

  m.edge_precision = estimated.edges.empty()
                         ? 1.0
                         : static_cast<double>(m.true_positive) / estimated.edges.size();
  m.edge_recall = truth.edges.empty()
                      ? 1.0
                      : static_cast<double>(m.true_positive) / truth.edges.size();
  int self_match = 0;
  for (int a = 0; a < truth.p; ++a)
    if (estimated.nonstationary[a] == truth.nonstationary[a]) ++self_match;
  m.self_accuracy = truth.p > 0 ? static_cast<double>(self_match) / truth.p : 1.0;
  m.attr_accuracy =
      m.true_positive > 0 ? static_cast<double>(attr_match) / m.true_positive : 1.0;
  return m;
}

namespace {

// Range of a sampled scalar trajectory; zero iff constant on the grid.
double grid_range(const std::vector<double>& samples) {
  auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  return *hi - *lo;
}

}  // namespace

NonStGraph true_graph(const TvVarModel& model, int grid_points, double tol) {
  if (!model.sigma_is_diagonal(0.0))
    throw std::invalid_argument(
        "graph reading off the coefficients requires diagonal innovation covariance");

  const int p = model.p(), d = model.d();
  // A[j-1][g] = A_j(u_g) on the equispaced grid.
  std::vector<std::vector<Eigen::MatrixXd>> A(d);
  for (int j = 1; j <= d; ++j) {
    A[j - 1].reserve(grid_points);
    for (int g = 0; g < grid_points; ++g)
      A[j - 1].push_back(model.eval_transition(j, static_cast<double>(g) / (grid_points - 1)));
  }
  Eigen::VectorXd winv(p);  // 1/sigma_c^2 weights for the column dot products
  for (int c = 0; c < p; ++c) winv[c] = 1.0 / model.sigma()(c, c);

  // Union over lags and grid points of the nonzero row support of column a.
  auto column_support = [&](int a) {
    std::set<int> rows;
    for (int j = 0; j < d; ++j)
      for (const auto& Ag : A[j])
        for (int c = 0; c < p; ++c)
          if (std::abs(Ag(c, a)) > tol) rows.insert(c);
    return rows;
  };

  auto entry_track = [&](int j, int r, int c) {
    std::vector<double> v(grid_points);
    for (int g = 0; g < grid_points; ++g) v[g] = A[j][g](r, c);
    return v;
  };

  NonStGraph graph;
  graph.p = p;
  graph.nonstationary.assign(p, false);

  // Node a is nonstationary when any entry of any lag's column a moves with u.
  for (int a = 0; a < p; ++a) {
    bool varying = false;
    for (int j = 0; j < d && !varying; ++j)
      for (int c = 0; c < p && !varying; ++c)
        if (grid_range(entry_track(j, c, a)) > tol) varying = true;
    graph.nonstationary[a] = varying;
  }

  std::vector<std::set<int>> support(p);
  for (int a = 0; a < p; ++a) support[a] = column_support(a);

  for (int a = 0; a < p; ++a) {
    for (int b = a + 1; b < p; ++b) {
      bool cross_zero = true;
      for (int j = 0; j < d && cross_zero; ++j)
        for (int g = 0; g < grid_points && cross_zero; ++g)
          if (std::abs(A[j][g](a, b)) > tol || std::abs(A[j][g](b, a)) > tol)
            cross_zero = false;
      bool disjoint = true;
      for (int c : support[a])
        if (support[b].count(c)) {
          disjoint = false;
          break;
        }
      if (disjoint && cross_zero) continue;  // conditionally noncorrelated

      // Attribute: time-varying when a cross entry or any weighted column
      // dot product <col_a of A_j1, col_b of A_j2> moves with u.
      bool varying = false;
      for (int j = 0; j < d && !varying; ++j) {
        if (grid_range(entry_track(j, a, b)) > tol) varying = true;
        if (!varying && grid_range(entry_track(j, b, a)) > tol) varying = true;
      }
      for (int j1 = 0; j1 < d && !varying; ++j1)
        for (int j2 = 0; j2 < d && !varying; ++j2) {
          std::vector<double> dot(grid_points);
          for (int g = 0; g < grid_points; ++g) {
            double s = 0;
            for (int c = 0; c < p; ++c) s += winv[c] * A[j1][g](c, a) * A[j2][g](c, b);
            dot[g] = s;
          }
          if (grid_range(dot) > tol) varying = true;
        }
      graph.set_edge(a + 1, b + 1, varying);
    }
  }
  return graph;
}

std::string graph_to_text(const NonStGraph& g) {
  std::ostringstream out;
  out << "nodes " << g.p << "\n";
  for (int a = 1; a <= g.p; ++a)
    out << "node " << a << ' '
        << (g.nonstationary[a - 1] ? "nonstationary" : "stationary") << "\n";
  for (const auto& e : g.edges)
    out << "edge " << e.a << ' ' << e.b << ' '
        << (e.time_varying ? "time_varying" : "time_invariant") << "\n";
  return out.str();
}

NonStGraph graph_from_text(const std::string& text) {
  NonStGraph g;
  std::istringstream in(text);
  std::string word;
  while (in >> word) {
    if (word == "nodes") {
      if (!(in >> g.p) || g.p <= 0) throw std::invalid_argument("bad graph header");
      g.nonstationary.assign(g.p, false);
    } else if (word == "node") {
      int a;
      std::string flag;
      if (!(in >> a >> flag) || a < 1 || a > g.p)
        throw std::invalid_argument("bad node line");
      if (flag != "stationary" && flag != "nonstationary")
        throw std::invalid_argument("bad node flag: " + flag);
      g.nonstationary[a - 1] = (flag == "nonstationary");
    } else if (word == "edge") {
      int a, b;
      std::string attr;
      if (!(in >> a >> b >> attr) || a < 1 || b < 1 || a > g.p || b > g.p || a == b)
        throw std::invalid_argument("bad edge line");
      if (attr != "time_invariant" && attr != "time_varying")
        throw std::invalid_argument("bad edge attribute: " + attr);
      g.set_edge(a, b, attr == "time_varying");
    } else {
      throw std::invalid_argument("unexpected token in graph text: " + word);
    }
  }
  if (g.p == 0) throw std::invalid_argument("graph text missing nodes header");
  return g;
}

}  // namespace tvgm
