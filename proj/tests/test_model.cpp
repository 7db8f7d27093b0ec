// Model module: coefficient trajectories, builtin systems, simulation, and
// ground-truth graph reading.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "core/graph.hpp"
#include "core/model.hpp"

using namespace tvgm;

namespace {

// e^{-5}/(1+e^{-5}), the logistic transition evaluated at u = 0.
constexpr double kS0 = 0.0066928509242848554;

TvVarModel constant_var1(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Sigma) {
  TvVarModel m(static_cast<int>(A.rows()), 1, Sigma);
  for (int r = 0; r < A.rows(); ++r)
    for (int c = 0; c < A.cols(); ++c)
      if (A(r, c) != 0.0) m.set_entry(1, r, c, CoefficientFunction::constant(A(r, c)));
  return m;
}

}  // namespace

TEST_CASE("rescaled time clamps to the unit interval") {
  CHECK(rescaled_time(1, 100) == 0.0);
  CHECK(rescaled_time(100, 100) == 1.0);
  CHECK(rescaled_time(50, 100) == doctest::Approx(49.0 / 99.0));
  CHECK(rescaled_time(-7, 100) == 0.0);   // bi-infinite lattice, left of window
  CHECK(rescaled_time(108, 100) == 1.0);  // right of window
}

TEST_CASE("logistic trajectory endpoints and midpoint") {
  auto f = CoefficientFunction::logistic(-0.8, 0.8);
  // lo + (hi-lo) e^{-5+10u}/(1+e^{-5+10u}) at u = 0, 1/2, 1.
  CHECK(f.eval(0.0) == doctest::Approx(-0.8 + 1.6 * kS0).epsilon(1e-14));
  CHECK(f.eval(0.0) == doctest::Approx(-0.789291438521144).epsilon(1e-12));
  CHECK(f.eval(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(f.eval(1.0) == doctest::Approx(0.789291438521144).epsilon(1e-12));
  CHECK_FALSE(f.is_constant());
  CHECK_THROWS_AS(f.eval(-0.01), std::domain_error);
  CHECK_THROWS_AS(f.eval(1.01), std::domain_error);
}

TEST_CASE("table trajectory interpolates and clamps") {
  auto f = CoefficientFunction::table({{0.2, 0.1}, {0.6, 0.5}, {0.8, 0.3}});
  CHECK(f.eval(0.4) == doctest::Approx(0.3));       // midpoint of first segment
  CHECK(f.eval(0.7) == doctest::Approx(0.4));       // midpoint of second
  CHECK(f.eval(0.05) == doctest::Approx(0.1));      // clamp left of first knot
  CHECK(f.eval(0.95) == doctest::Approx(0.3));      // clamp right of last knot
  CHECK_FALSE(f.is_constant());
  auto flat = CoefficientFunction::table({{0.0, 0.4}, {1.0, 0.4}});
  CHECK(flat.is_constant());
}

TEST_CASE("small system transition structure") {
  auto m = builtin_small_system();
  REQUIRE(m.p() == 4);
  REQUIRE(m.d() == 1);
  CHECK(m.sigma().isIdentity(0.0));

  // u = 0: the two logistic diagonal entries sit near -0.79.
  auto A0 = eval_transition(m, 1, 0.0);
  CHECK(A0(0, 0) == doctest::Approx(-0.8 * (1 - kS0) + 0.8 * kS0).epsilon(1e-14));
  CHECK(A0(2, 2) == doctest::Approx(-0.789291438521144).epsilon(1e-12));

  // Time-invariant entries are 0.4 at every u; structural zeros stay zero.
  for (double u : {0.0, 0.3, 0.7, 1.0}) {
    auto A = eval_transition(m, 1, u);
    CHECK(A(1, 0) == 0.4);
    CHECK(A(1, 1) == 0.4);
    CHECK(A(1, 3) == 0.4);
    CHECK(A(3, 1) == 0.4);
    CHECK(A(3, 3) == 0.4);
    CHECK(A(0, 2) == 0.4);
    CHECK(A(2, 1) == 0.0);
    CHECK(A(0, 1) == 0.0);
    CHECK(A(0, 3) == 0.0);
    CHECK(A(1, 2) == 0.0);
    CHECK(A(2, 0) == 0.0);
    CHECK(A(2, 3) == 0.0);
    CHECK(A(3, 0) == 0.0);
    CHECK(A(3, 2) == 0.0);
  }

  auto A1 = eval_transition(m, 1, 1.0);
  CHECK(A1(2, 2) == doctest::Approx(0.789291438521144).epsilon(1e-12));

  CHECK_THROWS_AS(eval_transition(m, 0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(eval_transition(m, 2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(eval_transition(m, 1, 1.5), std::domain_error);
}

TEST_CASE("large system transition structure") {
  auto m = builtin_large_system();
  REQUIRE(m.p() == 10);
  REQUIRE(m.d() == 1);

  auto A0 = eval_transition(m, 1, 0.0);
  CHECK(A0(4, 4) == doctest::Approx(0.7 - 1.4 * kS0).epsilon(1e-14));
  CHECK(A0(4, 4) == doctest::Approx(0.690630008706001).epsilon(1e-12));
  auto A1 = eval_transition(m, 1, 1.0);
  CHECK(A1(4, 4) == doctest::Approx(-0.690630008706001).epsilon(1e-12));

  for (double u : {0.0, 0.5, 1.0}) {
    auto A = eval_transition(m, 1, u);
    for (int j = 0; j < 10; ++j)
      if (j != 4) CHECK(A(j, j) == 0.5);
    CHECK(A(8, 0) == 0.3);
    CHECK(A(9, 0) == 0.3);
    CHECK(A(2, 4) == 0.3);
    CHECK(A(3, 4) == 0.3);
    CHECK(A(5, 4) == 0.3);
    CHECK(A(6, 4) == 0.3);
    // Row 2 carries nothing but its own diagonal: node 2 is isolated.
    for (int c = 0; c < 10; ++c)
      if (c != 1) CHECK(A(1, c) == 0.0);
    for (int c = 0; c < 10; ++c)
      if (c != 7) CHECK(A(7, c) == 0.0);
  }
}

TEST_CASE("builtin lookup by name") {
  CHECK(builtin_model("small").p() == 4);
  CHECK(builtin_model("large").p() == 10);
  CHECK_THROWS_AS(builtin_model("medium"), std::invalid_argument);
}

TEST_CASE("stability report for the builtin systems") {
  // The 4-node system violates the sufficient norm condition while remaining
  // comfortably stable in spectral radius.
  auto small = stability_check(builtin_small_system());
  CHECK(small.sup_norm > 1.0);
  CHECK(small.sup_norm < 1.1);
  CHECK(small.sup_radius == doctest::Approx(0.8).epsilon(0.02));
  CHECK_FALSE(small.sufficient());
  CHECK(small.stable());

  auto large = stability_check(builtin_large_system());
  CHECK(large.sup_norm < 1.0);
  CHECK(large.sufficient());
  CHECK(large.stable());
}

TEST_CASE("simulation is deterministic given the seed") {
  auto m = builtin_small_system();
  auto p1 = simulate(m, 200, 500, 42);
  auto p2 = simulate(m, 200, 500, 42);
  REQUIRE(p1.n() == 200);
  REQUIRE(p1.p() == 4);
  CHECK((p1.data - p2.data).cwiseAbs().maxCoeff() == 0.0);

  auto p3 = simulate(m, 200, 500, 43);
  CHECK((p1.data - p3.data).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("white noise panel has identity covariance") {
  TvVarModel m(3, 1, Eigen::MatrixXd::Identity(3, 3));  // A == 0
  const int n = 10000;
  auto panel = simulate(m, n, 100, 7);
  Eigen::MatrixXd centered = panel.data.rowwise() - panel.data.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered / n;
  double tol = 3.0 * (2.0 / std::sqrt(static_cast<double>(n)));
  CHECK((cov - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < tol);
}

TEST_CASE("constant scalar autoregression matches its autocorrelation") {
  Eigen::MatrixXd A(1, 1), S(1, 1);
  A << 0.5;
  S << 1.0;
  auto panel = simulate(constant_var1(A, S), 20000, 500, 11);
  const auto& x = panel.data.col(0);
  int n = panel.n();
  double mean = x.mean();
  double c0 = 0, c1 = 0;
  for (int t = 0; t < n; ++t) c0 += (x[t] - mean) * (x[t] - mean);
  for (int t = 0; t + 1 < n; ++t) c1 += (x[t] - mean) * (x[t + 1] - mean);
  double rho1 = c1 / c0;
  CHECK(rho1 > 0.47);
  CHECK(rho1 < 0.53);
}

TEST_CASE("simulation rejects bad arguments") {
  auto m = builtin_small_system();
  CHECK_THROWS_AS(simulate(m, 0, 10, 1), std::invalid_argument);
  // strict mode rejects models that fail the sufficient norm condition
  CHECK_THROWS_AS(simulate(m, 50, 10, 1, /*strict=*/true), std::invalid_argument);

  Eigen::MatrixXd A(1, 1), S(1, 1);
  A << 1.05;  // spectral radius beyond 1: diverging recursion
  S << 1.0;
  CHECK_THROWS_AS(simulate(constant_var1(A, S), 50, 10, 1), std::invalid_argument);
}

TEST_CASE("builtin panels stay bounded at experiment lengths") {
  auto panel = simulate(builtin_large_system(), 15000, 500, 3);
  CHECK(panel.data.cwiseAbs().maxCoeff() < 50.0);
  CHECK(panel.data.allFinite());
}

TEST_CASE("true graph of the small system") {
  auto g = true_graph(builtin_small_system());
  REQUIRE(g.p == 4);

  std::set<std::pair<int, int>> edges;
  for (const auto& e : g.edges) edges.insert({e.a, e.b});
  CHECK(edges == std::set<std::pair<int, int>>{{1, 2}, {1, 3}, {1, 4}, {2, 4}});

  // Nonstationary self-loops at the two logistic nodes only.
  CHECK(g.nonstationary[0]);
  CHECK_FALSE(g.nonstationary[1]);
  CHECK(g.nonstationary[2]);
  CHECK_FALSE(g.nonstationary[3]);

  // Edge (1,3) rides on a time-varying product; the rest are invariant.
  CHECK(g.edge_time_varying(1, 3));
  CHECK_FALSE(g.edge_time_varying(1, 2));
  CHECK_FALSE(g.edge_time_varying(1, 4));
  CHECK_FALSE(g.edge_time_varying(2, 4));
}

TEST_CASE("true graph of the large system") {
  auto g = true_graph(builtin_large_system());
  REQUIRE(g.p == 10);

  std::set<std::pair<int, int>> edges;
  for (const auto& e : g.edges) edges.insert({e.a, e.b});
  CHECK(edges == std::set<std::pair<int, int>>{
                     {1, 9}, {1, 10}, {3, 5}, {4, 5}, {5, 6}, {5, 7}});

  for (int a = 1; a <= 10; ++a) CHECK(g.nonstationary[a - 1] == (a == 5));
  for (const auto& e : g.edges) CHECK_FALSE(e.time_varying);

  // Nodes 2 and 8 are isolated.
  for (const auto& e : g.edges) {
    CHECK(e.a != 2);
    CHECK(e.b != 2);
    CHECK(e.a != 8);
    CHECK(e.b != 8);
  }
}

TEST_CASE("true graph of degenerate models") {
  TvVarModel zero(3, 1, Eigen::MatrixXd::Identity(3, 3));
  auto g = true_graph(zero);
  CHECK(g.edges.empty());
  for (int a = 0; a < 3; ++a) CHECK_FALSE(g.nonstationary[a]);

  // A constant-coefficient model has all-invariant attributes.
  Eigen::MatrixXd A(2, 2), S(2, 2);
  A << 0.5, 0.2, 0.0, 0.3;
  S = Eigen::MatrixXd::Identity(2, 2);
  auto gc = true_graph(constant_var1(A, S));
  REQUIRE(gc.has_edge(1, 2));
  CHECK_FALSE(gc.edge_time_varying(1, 2));
  CHECK_FALSE(gc.nonstationary[0]);
  CHECK_FALSE(gc.nonstationary[1]);

  // Non-diagonal innovation covariance is rejected.
  Eigen::MatrixXd Sfull(2, 2);
  Sfull << 1.0, 0.3, 0.3, 1.0;
  CHECK_THROWS_AS(true_graph(constant_var1(A, Sfull)), std::invalid_argument);
}

TEST_CASE("graph comparison metrics") {
  auto truth = true_graph(builtin_small_system());
  auto exact = compare_graphs(truth, truth);
  CHECK(exact.edge_precision == 1.0);
  CHECK(exact.edge_recall == 1.0);
  CHECK(exact.self_accuracy == 1.0);
  CHECK(exact.attr_accuracy == 1.0);

  NonStGraph empty;
  empty.p = 4;
  empty.nonstationary.assign(4, false);
  auto miss = compare_graphs(empty, truth);
  CHECK(miss.edge_recall == 0.0);
  CHECK(miss.edge_precision == 1.0);  // no estimated edges, nothing wrong
  CHECK(miss.self_accuracy == doctest::Approx(0.5));
}

TEST_CASE("graph text round trip") {
  auto g = true_graph(builtin_small_system());
  auto text = graph_to_text(g);
  auto back = graph_from_text(text);
  CHECK(back.p == g.p);
  CHECK(back.edges.size() == g.edges.size());
  for (const auto& e : g.edges) {
    CHECK(back.has_edge(e.a, e.b));
    CHECK(back.edge_time_varying(e.a, e.b) == e.time_varying);
  }
  for (int a = 0; a < g.p; ++a) CHECK(back.nonstationary[a] == g.nonstationary[a]);
}
