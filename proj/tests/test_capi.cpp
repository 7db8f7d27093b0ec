// Shared-library C interface: status codes, opaque handle lifecycles, and the
// thread-local error message. Links the shared library and sees only tvgm.h.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "tvgm.h"

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(std::string name) : path(std::move(name)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("version and error message lifecycle") {
  CHECK(std::strcmp(tvgm_version(), "0.1.0") == 0);

  tvgm_model* model = nullptr;
  CHECK(tvgm_model_builtin("mystery", &model) == TVGM_ERR_INVALID);
  CHECK(std::strlen(tvgm_last_error()) > 0);
  CHECK(model == nullptr);

  REQUIRE(tvgm_model_builtin("small", &model) == TVGM_OK);
  CHECK(std::strlen(tvgm_last_error()) == 0);  // success clears the message
  tvgm_model_free(model);
}

TEST_CASE("model dims, transition, and stability") {
  tvgm_model* model = nullptr;
  REQUIRE(tvgm_model_builtin("small", &model) == TVGM_OK);

  int p = 0, d = 0;
  REQUIRE(tvgm_model_dims(model, &p, &d) == TVGM_OK);
  CHECK(p == 4);
  CHECK(d == 1);

  std::vector<double> a0(16), a1(16);
  REQUIRE(tvgm_model_transition(model, 1, 0.0, a0.data()) == TVGM_OK);
  REQUIRE(tvgm_model_transition(model, 1, 1.0, a1.data()) == TVGM_OK);
  CHECK(a0[1 * 4 + 0] == 0.4);               // constant entry
  CHECK(a0[0 * 4 + 0] == a0[2 * 4 + 2]);     // both logistic diagonals move together
  CHECK(a1[0 * 4 + 0] > 0.7);
  CHECK(a0[0 * 4 + 0] < -0.7);
  CHECK(a0[0 * 4 + 1] == 0.0);

  CHECK(tvgm_model_transition(model, 2, 0.0, a0.data()) == TVGM_ERR_INVALID);
  CHECK(tvgm_model_transition(model, 1, 1.5, a0.data()) == TVGM_ERR_INVALID);

  double sup_norm = 0.0, sup_radius = 0.0;
  REQUIRE(tvgm_model_stability(model, &sup_norm, &sup_radius) == TVGM_OK);
  CHECK(sup_radius < 1.0);
  CHECK(sup_norm >= sup_radius);

  tvgm_model_free(model);
}

TEST_CASE("model JSON save and load round trip") {
  tvgm_model* model = nullptr;
  REQUIRE(tvgm_model_builtin("large", &model) == TVGM_OK);
  TempFile tmp("capi_model_tmp.json");
  REQUIRE(tvgm_model_save(model, tmp.path.c_str()) == TVGM_OK);

  tvgm_model* back = nullptr;
  REQUIRE(tvgm_model_load(tmp.path.c_str(), &back) == TVGM_OK);
  int p = 0, d = 0;
  REQUIRE(tvgm_model_dims(back, &p, &d) == TVGM_OK);
  CHECK(p == 10);
  std::vector<double> a(100), b(100);
  for (double u : {0.0, 0.3, 1.0}) {
    REQUIRE(tvgm_model_transition(model, 1, u, a.data()) == TVGM_OK);
    REQUIRE(tvgm_model_transition(back, 1, u, b.data()) == TVGM_OK);
    CHECK(a == b);
  }
  tvgm_model_free(back);
  tvgm_model_free(model);

  tvgm_model* missing = nullptr;
  CHECK(tvgm_model_load("capi_missing_zz.json", &missing) == TVGM_ERR_IO);
}

TEST_CASE("simulation and panel CSV round trip") {
  tvgm_model* model = nullptr;
  REQUIRE(tvgm_model_builtin("small", &model) == TVGM_OK);

  tvgm_panel* panel = nullptr;
  REQUIRE(tvgm_simulate(model, 100, 200, 7ULL, &panel) == TVGM_OK);
  int n = 0, p = 0;
  REQUIRE(tvgm_panel_dims(panel, &n, &p) == TVGM_OK);
  CHECK(n == 100);
  CHECK(p == 4);

  std::vector<double> data(400);
  REQUIRE(tvgm_panel_get(panel, data.data()) == TVGM_OK);

  TempFile tmp("capi_panel_tmp.csv");
  REQUIRE(tvgm_panel_write_csv(panel, tmp.path.c_str()) == TVGM_OK);
  tvgm_panel* back = nullptr;
  REQUIRE(tvgm_panel_read_csv(tmp.path.c_str(), &back) == TVGM_OK);
  std::vector<double> data2(400);
  REQUIRE(tvgm_panel_get(back, data2.data()) == TVGM_OK);
  CHECK(data == data2);
  tvgm_panel_free(back);
  tvgm_panel_free(panel);
  tvgm_model_free(model);

  tvgm_panel* missing = nullptr;
  CHECK(tvgm_panel_read_csv("capi_missing_zz.csv", &missing) == TVGM_ERR_IO);
  CHECK(tvgm_simulate(nullptr, 10, 0, 1ULL, &missing) == TVGM_ERR_INVALID);
}

TEST_CASE("estimation, weights, and graph selection over the C interface") {
  tvgm_model* model = nullptr;
  REQUIRE(tvgm_model_builtin("small", &model) == TVGM_OK);
  tvgm_panel* panel = nullptr;
  REQUIRE(tvgm_simulate(model, 96, 200, 21ULL, &panel) == TVGM_OK);

  tvgm_config config = tvgm_config_default();
  CHECK(config.M == 0);
  CHECK(config.nu == 1);
  CHECK(config.folds == 5);
  config.stride = 8;

  tvgm_fitset* fits = nullptr;
  REQUIRE(tvgm_estimate(panel, &config, &fits) == TVGM_OK);

  // Fit-set CSV round trip preserves the derived weights bitwise.
  TempFile ftmp("capi_fits_tmp.csv");
  REQUIRE(tvgm_fitset_write_csv(fits, ftmp.path.c_str()) == TVGM_OK);
  tvgm_fitset* fits2 = nullptr;
  REQUIRE(tvgm_fitset_read_csv(ftmp.path.c_str(), &fits2) == TVGM_OK);

  tvgm_weights* w1 = nullptr;
  tvgm_weights* w2 = nullptr;
  REQUIRE(tvgm_weights_from_fits(fits, &w1) == TVGM_OK);
  REQUIRE(tvgm_weights_from_fits(fits2, &w2) == TVGM_OK);
  int wp = 0;
  REQUIRE(tvgm_weights_dims(w1, &wp) == TVGM_OK);
  REQUIRE(wp == 4);
  std::vector<double> s1(16), o1(16), s2(16), o2(16);
  REQUIRE(tvgm_weights_get(w1, s1.data(), o1.data()) == TVGM_OK);
  REQUIRE(tvgm_weights_get(w2, s2.data(), o2.data()) == TVGM_OK);
  CHECK(s1 == s2);
  CHECK(o1 == o2);
  for (int a = 0; a < 4; ++a) CHECK(s1[a * 4 + a] == 0.0);

  // Weight CSV round trip.
  TempFile stmp("capi_wself_tmp.csv"), otmp("capi_wother_tmp.csv");
  REQUIRE(tvgm_weights_write_csv(w1, stmp.path.c_str(), otmp.path.c_str()) == TVGM_OK);
  tvgm_weights* w3 = nullptr;
  REQUIRE(tvgm_weights_read_csv(stmp.path.c_str(), otmp.path.c_str(), &w3) == TVGM_OK);
  std::vector<double> s3(16), o3(16);
  REQUIRE(tvgm_weights_get(w3, s3.data(), o3.data()) == TVGM_OK);
  CHECK(s1 == s3);
  CHECK(o1 == o3);

  // Rank-gap thresholds via negative arguments; both rules parse.
  tvgm_graph* est = nullptr;
  REQUIRE(tvgm_select_graph(w1, "or", -1.0, -1.0, &est) == TVGM_OK);
  tvgm_graph* est_and = nullptr;
  REQUIRE(tvgm_select_graph(w1, "and", -1.0, -1.0, &est_and) == TVGM_OK);
  CHECK(tvgm_select_graph(w1, "nor", -1.0, -1.0, &est_and) == TVGM_ERR_INVALID);

  tvgm_graph* truth = nullptr;
  REQUIRE(tvgm_true_graph(model, &truth) == TVGM_OK);
  double precision = -1.0, recall = -1.0, self_acc = -1.0, attr_acc = -1.0;
  REQUIRE(tvgm_graph_compare(est, truth, &precision, &recall, &self_acc,
                             &attr_acc) == TVGM_OK);
  CHECK(precision >= 0.0);
  CHECK(precision <= 1.0);
  CHECK(recall >= 0.0);
  CHECK(recall <= 1.0);
  CHECK(self_acc >= 0.0);
  CHECK(attr_acc >= 0.0);

  // Graph text round trip: identical structure compares perfectly.
  TempFile gtmp("capi_graph_tmp.txt");
  REQUIRE(tvgm_graph_write(truth, gtmp.path.c_str()) == TVGM_OK);
  tvgm_graph* gback = nullptr;
  REQUIRE(tvgm_graph_read(gtmp.path.c_str(), &gback) == TVGM_OK);
  double p2 = 0.0, r2 = 0.0, sa2 = 0.0, aa2 = 0.0;
  REQUIRE(tvgm_graph_compare(gback, truth, &p2, &r2, &sa2, &aa2) == TVGM_OK);
  CHECK(p2 == 1.0);
  CHECK(r2 == 1.0);
  CHECK(sa2 == 1.0);
  CHECK(aa2 == 1.0);

  tvgm_graph_free(gback);
  tvgm_graph_free(truth);
  tvgm_graph_free(est_and);
  tvgm_graph_free(est);
  tvgm_weights_free(w3);
  tvgm_weights_free(w2);
  tvgm_weights_free(w1);
  tvgm_fitset_free(fits2);
  tvgm_fitset_free(fits);
  tvgm_panel_free(panel);
  tvgm_model_free(model);
}

TEST_CASE("weights from caller buffers") {
  std::vector<double> self = {0.0, 2.0, 0.5, 0.0};
  std::vector<double> other = {1.0, 0.0, 0.0, 3.0};
  tvgm_weights* w = nullptr;
  REQUIRE(tvgm_weights_create(2, self.data(), other.data(), &w) == TVGM_OK);
  std::vector<double> s(4), o(4);
  REQUIRE(tvgm_weights_get(w, s.data(), o.data()) == TVGM_OK);
  CHECK(s == self);
  CHECK(o == other);
  tvgm_weights_free(w);
  CHECK(tvgm_weights_create(0, self.data(), other.data(), &w) == TVGM_ERR_INVALID);
}

TEST_CASE("verification report") {
  tvgm_model* model = nullptr;
  REQUIRE(tvgm_model_builtin("small", &model) == TVGM_OK);

  TempFile tmp("capi_verify_tmp.csv");
  int failures = -1;
  REQUIRE(tvgm_verify(model, 48, tmp.path.c_str(), &failures) == TVGM_OK);
  CHECK(failures == 0);
  std::ifstream in(tmp.path);
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "name,a,b,t,tau,error,tolerance,pass");

  CHECK(tvgm_verify(model, 4, nullptr, &failures) == TVGM_ERR_INVALID);
  tvgm_model_free(model);
}

TEST_CASE("heatmap over the C interface") {
  std::vector<double> values = {0.0, 0.3, 0.7, 1.0};
  TempFile tmp("capi_heat_tmp.svg");
  REQUIRE(tvgm_heatmap_svg(2, values.data(), "weights", tmp.path.c_str()) == TVGM_OK);
  std::ifstream in(tmp.path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("weights") != std::string::npos);
  CHECK(tvgm_heatmap_svg(2, values.data(), "t", "/nonexistent_zz/h.svg") == TVGM_ERR_IO);
}
