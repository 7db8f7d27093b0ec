// Aggregation of node-wise fits into weight matrices and graph selection.
//
// W_self collects squared coefficient moduli at equal frequencies (offset 0),
// W_other at unequal frequencies (offsets r != 0). Support of W_self + W_other
// encodes edges; W_other mass encodes conditional nonstationarity (diagonal:
// nonstationary nodes, off-diagonal: time-varying edges).
#pragma once

#include <Eigen/Dense>

#include <vector>

#include "core/graph.hpp"
#include "core/regress.hpp"

namespace tvgm {

struct WeightMatrices {
  int p = 0;
  Eigen::MatrixXd self;   // W_self, diagonal identically 0 (self at offset 0 is never a regressor)
  Eigen::MatrixXd other;  // W_other
  std::vector<int> k_grid;  // frequencies the sums ran over
};

// W_self[a][b] = sum_k |B_{(b,k)->(a,k)}|^2;
// W_other[a][b] = sum_k sum_{0 < |r| <= nu} |B_{(b,k+r)->(a,k)}|^2.
// Offsets beyond nu are not estimated, so W_other is the truncated version of
// the full unequal-frequency double sum.
WeightMatrices weight_matrices(const NodewiseFitSet& fits);

enum class Rule { kAnd, kOr };

// Largest-relative-gap threshold: sorts the positive values, finds the widest
// ratio gap, and returns the geometric mean of its endpoints. Returns 0 for
// fewer than two distinct positive values (so any positive value passes a
// strict comparison).
double rank_gap_threshold(std::vector<double> values);

// Edge (a,b) present when (W_self+W_other)[a][b] and/or [b][a] exceed
// edge_threshold per the rule; a present edge is time_varying when W_other
// exceeds ns_threshold the same way; node a nonstationary when
// W_other[a][a] > ns_threshold. All comparisons strict.
NonStGraph select_graph(const WeightMatrices& w, Rule rule, double edge_threshold,
                        double ns_threshold);

// Convenience: thresholds from rank_gap_threshold over the off-diagonal
// combined weights and the W_other candidates respectively.
NonStGraph select_graph_auto(const WeightMatrices& w, Rule rule);

}  // namespace tvgm
