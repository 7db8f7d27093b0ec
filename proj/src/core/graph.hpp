// Nonstationary graphical-model structure: nodes with stationary or
// nonstationary self-loops, undirected edges attributed as time-invariant or
// time-varying. Absent edges encode conditional noncorrelation; attributes
// encode conditional stationarity (Toeplitz inverse-covariance blocks).
#pragma once

#include <string>
#include <vector>

namespace tvgm {

class TvVarModel;

struct NonStGraph {
  struct Edge {
    int a = 0, b = 0;          // 1-based node labels, stored with a < b
    bool time_varying = false; // attribute of a present edge
  };

  int p = 0;
  std::vector<bool> nonstationary;  // size p, per-node self-loop flag
  std::vector<Edge> edges;          // canonical (a < b), sorted lexicographically

  bool has_edge(int a, int b) const;
  // Returns the attribute of a present edge; throws if absent.
  bool edge_time_varying(int a, int b) const;
  // Inserts or updates an edge (canonicalizes the pair order).
  void set_edge(int a, int b, bool time_varying);
};

// Edge precision/recall plus attribute agreement against a reference graph.
struct GraphMetrics {
  double edge_precision = 0.0;  // 1.0 when no estimated edges
  double edge_recall = 0.0;     // 1.0 when no true edges
  double self_accuracy = 0.0;   // fraction of nodes with matching self-loop flag
  double attr_accuracy = 0.0;   // fraction of true-positive edges with matching attribute (1.0 if none)
  int true_positive = 0, false_positive = 0, false_negative = 0;
};

GraphMetrics compare_graphs(const NonStGraph& estimated, const NonStGraph& truth);

// Reads the ground-truth graph off the coefficient structure of a tvVAR model
// with diagonal Sigma (throws otherwise). Edge (a,b) is present when some
// lag's column supports intersect or a cross entry A[a][b] / A[b][a] is not
// identically zero; attributes follow constancy of the relevant entries and
// weighted column dot products on an equispaced u-grid.
NonStGraph true_graph(const TvVarModel& model, int grid_points = 101,
                      double tol = 1e-12);

// Adjacency-list text format:
//   nodes <p>
//   node <a> stationary|nonstationary
//   edge <a> <b> time_invariant|time_varying
std::string graph_to_text(const NonStGraph& g);
NonStGraph graph_from_text(const std::string& text);

}  // namespace tvgm
