#include "core/select.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace tvgm {

WeightMatrices weight_matrices(const NodewiseFitSet& fits) {
  const int p = fits.p;
  if (p < 1) throw std::invalid_argument("empty fit set");
  WeightMatrices w;
  w.p = p;
  w.self = Eigen::MatrixXd::Zero(p, p);
  w.other = Eigen::MatrixXd::Zero(p, p);
  w.k_grid = fits.k_grid;
  for (const auto& fit : fits.fits) {
    const auto& map = fits.column_maps[fit.a - 1];
    if (fit.beta.size() != static_cast<Eigen::Index>(map.size()))
      throw std::invalid_argument("fit coefficient length does not match its column map");
    for (std::size_t c = 0; c < map.size(); ++c) {
      auto [b, r] = map[c];
      double mass = std::norm(fit.beta(c));
      if (r == 0)
        w.self(fit.a - 1, b - 1) += mass;
      else
        w.other(fit.a - 1, b - 1) += mass;
    }
  }
  return w;
}

double rank_gap_threshold(std::vector<double> values) {
  std::vector<double> positive;
  for (double v : values)
    if (v > 0.0) positive.push_back(v);
  if (positive.size() < 2) return 0.0;
  std::sort(positive.begin(), positive.end());
  double best_ratio = 1.0;
  std::size_t best = positive.size();
  for (std::size_t i = 0; i + 1 < positive.size(); ++i) {
    double ratio = positive[i + 1] / positive[i];
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = i;
    }
  }
  if (best == positive.size()) return 0.0;  // all values equal: no gap
  return std::sqrt(positive[best] * positive[best + 1]);
}

NonStGraph select_graph(const WeightMatrices& w, Rule rule, double edge_threshold,
                        double ns_threshold) {
  const int p = w.p;
  if (w.self.rows() != p || w.other.rows() != p)
    throw std::invalid_argument("weight matrices have inconsistent dimensions");
  NonStGraph g;
  g.p = p;
  g.nonstationary.assign(p, false);
  auto pass = [rule](double x, double y, double thr) {
    return rule == Rule::kAnd ? (x > thr && y > thr) : (x > thr || y > thr);
  };
  Eigen::MatrixXd combined = w.self + w.other;
  for (int a = 1; a <= p; ++a)
    g.nonstationary[a - 1] = w.other(a - 1, a - 1) > ns_threshold;
  for (int a = 1; a <= p; ++a)
    for (int b = a + 1; b <= p; ++b)
      if (pass(combined(a - 1, b - 1), combined(b - 1, a - 1), edge_threshold))
        g.set_edge(a, b, pass(w.other(a - 1, b - 1), w.other(b - 1, a - 1), ns_threshold));
  return g;
}

NonStGraph select_graph_auto(const WeightMatrices& w, Rule rule) {
  std::vector<double> edge_candidates, ns_candidates;
  Eigen::MatrixXd combined = w.self + w.other;
  for (int a = 0; a < w.p; ++a)
    for (int b = 0; b < w.p; ++b) {
      if (a != b) edge_candidates.push_back(combined(a, b));
      ns_candidates.push_back(w.other(a, b));
    }
  return select_graph(w, rule, rank_gap_threshold(std::move(edge_candidates)),
                      rank_gap_threshold(std::move(ns_candidates)));
}

}  // namespace tvgm
