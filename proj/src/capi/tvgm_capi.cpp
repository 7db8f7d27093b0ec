// C interface over the core library: opaque handles, status codes, and a
// thread-local error message. Exceptions never cross the boundary.
#include "tvgm.h"

#include <new>
#include <stdexcept>
#include <string>

#include "core/graph.hpp"
#include "core/io.hpp"
#include "core/model.hpp"
#include "core/oracle.hpp"
#include "core/regress.hpp"
#include "core/select.hpp"
#include "core/spectral.hpp"

struct tvgm_model {
  tvgm::TvVarModel m;
};
struct tvgm_panel {
  tvgm::TimeSeriesPanel p;
};
struct tvgm_fitset {
  tvgm::NodewiseFitSet f;
};
struct tvgm_weights {
  tvgm::WeightMatrices w;
};
struct tvgm_graph {
  tvgm::NonStGraph g;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs the body, translating exceptions to status codes. Invalid-argument
// style errors always map to TVGM_ERR_INVALID; other failures map to
// `runtime_code` so file functions report TVGM_ERR_IO and computations
// TVGM_ERR_NUMERIC.
template <typename F>
int run(int runtime_code, F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    return fail(TVGM_ERR_INVALID, e.what());
  } catch (const std::domain_error& e) {
    return fail(TVGM_ERR_INVALID, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TVGM_ERR_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return fail(runtime_code, e.what());
  }
}

void need(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

tvgm::EstimationConfig to_core_config(const tvgm_config* c) {
  tvgm::EstimationConfig cfg;
  if (!c) return cfg;
  cfg.M = c->M;
  cfg.nu = c->nu;
  cfg.lambda_grid_len = c->lambda_grid_len;
  cfg.lambda_min_ratio = c->lambda_min_ratio;
  cfg.folds = c->folds;
  cfg.stride = c->stride;
  cfg.tol = c->tol;
  cfg.max_iter = c->max_iter;
  cfg.shared_lambda = c->shared_lambda != 0;
  cfg.half_grid = c->half_grid != 0;
  return cfg;
}

tvgm::Rule parse_rule(const char* rule) {
  need(rule != nullptr, "rule is null");
  const std::string r(rule);
  if (r == "and") return tvgm::Rule::kAnd;
  if (r == "or") return tvgm::Rule::kOr;
  throw std::invalid_argument("rule must be \"and\" or \"or\"");
}

}  // namespace

extern "C" {

const char* tvgm_version(void) { return TVGM_VERSION; }

const char* tvgm_last_error(void) { return g_last_error.c_str(); }

/* --- models ---------------------------------------------------------- */

int tvgm_model_builtin(const char* name, tvgm_model** out) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(name && out, "null argument");
    *out = new tvgm_model{tvgm::builtin_model(name)};
    return TVGM_OK;
  });
}

int tvgm_model_load(const char* path, tvgm_model** out) {
  return run(TVGM_ERR_IO, [&] {
    need(path && out, "null argument");
    *out = new tvgm_model{tvgm::read_model_json(path)};
    return TVGM_OK;
  });
}

int tvgm_model_save(const tvgm_model* model, const char* path) {
  return run(TVGM_ERR_IO, [&] {
    need(model && path, "null argument");
    tvgm::write_model_json(model->m, path);
    return TVGM_OK;
  });
}

void tvgm_model_free(tvgm_model* model) { delete model; }

int tvgm_model_dims(const tvgm_model* model, int* p, int* d) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(model != nullptr, "null model");
    if (p) *p = model->m.p();
    if (d) *d = model->m.d();
    return TVGM_OK;
  });
}

int tvgm_model_transition(const tvgm_model* model, int j, double u, double* out) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(model && out, "null argument");
    Eigen::MatrixXd a = model->m.eval_transition(j, u);
    for (int r = 0; r < a.rows(); ++r)
      for (int c = 0; c < a.cols(); ++c) out[r * a.cols() + c] = a(r, c);
    return TVGM_OK;
  });
}

int tvgm_model_stability(const tvgm_model* model, double* sup_norm,
                         double* sup_radius) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(model != nullptr, "null model");
    auto report = tvgm::stability_check(model->m);
    if (sup_norm) *sup_norm = report.sup_norm;
    if (sup_radius) *sup_radius = report.sup_radius;
    return TVGM_OK;
  });
}

/* --- simulation -------------------------------------------------------- */

int tvgm_simulate(const tvgm_model* model, int n, int burn_in,
                  unsigned long long seed, tvgm_panel** out) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(model && out, "null argument");
    *out = new tvgm_panel{tvgm::simulate(model->m, n, burn_in, seed)};
    return TVGM_OK;
  });
}

void tvgm_panel_free(tvgm_panel* panel) { delete panel; }

int tvgm_panel_dims(const tvgm_panel* panel, int* n, int* p) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(panel != nullptr, "null panel");
    if (n) *n = panel->p.n();
    if (p) *p = panel->p.p();
    return TVGM_OK;
  });
}

int tvgm_panel_get(const tvgm_panel* panel, double* out) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(panel && out, "null argument");
    const auto& data = panel->p.data;
    for (int t = 0; t < data.rows(); ++t)
      for (int a = 0; a < data.cols(); ++a) out[t * data.cols() + a] = data(t, a);
    return TVGM_OK;
  });
}

int tvgm_panel_write_csv(const tvgm_panel* panel, const char* path) {
  return run(TVGM_ERR_IO, [&] {
    need(panel && path, "null argument");
    tvgm::write_panel_csv(panel->p, path);
    return TVGM_OK;
  });
}

int tvgm_panel_read_csv(const char* path, tvgm_panel** out) {
  return run(TVGM_ERR_IO, [&] {
    need(path && out, "null argument");
    *out = new tvgm_panel{tvgm::read_panel_csv(path)};
    return TVGM_OK;
  });
}

/* --- estimation -------------------------------------------------------- */

tvgm_config tvgm_config_default(void) {
  tvgm::EstimationConfig cfg;
  tvgm_config c;
  c.M = cfg.M;
  c.nu = cfg.nu;
  c.lambda_grid_len = cfg.lambda_grid_len;
  c.lambda_min_ratio = cfg.lambda_min_ratio;
  c.folds = cfg.folds;
  c.stride = cfg.stride;
  c.tol = cfg.tol;
  c.max_iter = cfg.max_iter;
  c.shared_lambda = cfg.shared_lambda ? 1 : 0;
  c.half_grid = cfg.half_grid ? 1 : 0;
  return c;
}

int tvgm_estimate(const tvgm_panel* panel, const tvgm_config* config,
                  tvgm_fitset** out) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(panel && out, "null argument");
    auto dft_panel = tvgm::dft(panel->p);
    *out = new tvgm_fitset{tvgm::fit_all(dft_panel, to_core_config(config))};
    return TVGM_OK;
  });
}

void tvgm_fitset_free(tvgm_fitset* fits) { delete fits; }

int tvgm_fitset_write_csv(const tvgm_fitset* fits, const char* path) {
  return run(TVGM_ERR_IO, [&] {
    need(fits && path, "null argument");
    tvgm::write_fitset_csv(fits->f, path);
    return TVGM_OK;
  });
}

int tvgm_fitset_read_csv(const char* path, tvgm_fitset** out) {
  return run(TVGM_ERR_IO, [&] {
    need(path && out, "null argument");
    *out = new tvgm_fitset{tvgm::read_fitset_csv(path)};
    return TVGM_OK;
  });
}

/* --- weights and graph selection --------------------------------------- */

int tvgm_weights_from_fits(const tvgm_fitset* fits, tvgm_weights** out) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(fits && out, "null argument");
    *out = new tvgm_weights{tvgm::weight_matrices(fits->f)};
    return TVGM_OK;
  });
}

int tvgm_weights_create(int p, const double* self_w, const double* other_w,
                        tvgm_weights** out) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(self_w && other_w && out, "null argument");
    need(p >= 1, "p must be positive");
    tvgm::WeightMatrices w;
    w.p = p;
    w.self.resize(p, p);
    w.other.resize(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        w.self(i, j) = self_w[i * p + j];
        w.other(i, j) = other_w[i * p + j];
      }
    *out = new tvgm_weights{std::move(w)};
    return TVGM_OK;
  });
}

void tvgm_weights_free(tvgm_weights* w) { delete w; }

int tvgm_weights_dims(const tvgm_weights* w, int* p) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(w != nullptr, "null weights");
    if (p) *p = w->w.p;
    return TVGM_OK;
  });
}

int tvgm_weights_get(const tvgm_weights* w, double* self_out, double* other_out) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(w != nullptr, "null weights");
    const int p = w->w.p;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        if (self_out) self_out[i * p + j] = w->w.self(i, j);
        if (other_out) other_out[i * p + j] = w->w.other(i, j);
      }
    return TVGM_OK;
  });
}

int tvgm_weights_write_csv(const tvgm_weights* w, const char* self_path,
                           const char* other_path) {
  return run(TVGM_ERR_IO, [&] {
    need(w && self_path && other_path, "null argument");
    tvgm::write_weights_csv(w->w, self_path, other_path);
    return TVGM_OK;
  });
}

int tvgm_weights_read_csv(const char* self_path, const char* other_path,
                          tvgm_weights** out) {
  return run(TVGM_ERR_IO, [&] {
    need(self_path && other_path && out, "null argument");
    *out = new tvgm_weights{tvgm::read_weights_csv(self_path, other_path)};
    return TVGM_OK;
  });
}

int tvgm_select_graph(const tvgm_weights* w, const char* rule,
                      double edge_threshold, double ns_threshold,
                      tvgm_graph** out) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(w && out, "null argument");
    const tvgm::Rule r = parse_rule(rule);
    double et = edge_threshold, nt = ns_threshold;
    // Negative thresholds ask for the rank-gap heuristic over the same
    // candidate pools select_graph_auto uses.
    if (et < 0.0) {
      std::vector<double> candidates;
      const Eigen::MatrixXd combined = w->w.self + w->w.other;
      for (int i = 0; i < w->w.p; ++i)
        for (int j = 0; j < w->w.p; ++j)
          if (i != j) candidates.push_back(combined(i, j));
      et = tvgm::rank_gap_threshold(std::move(candidates));
    }
    if (nt < 0.0) {
      std::vector<double> candidates;
      for (int i = 0; i < w->w.p; ++i)
        for (int j = 0; j < w->w.p; ++j) candidates.push_back(w->w.other(i, j));
      nt = tvgm::rank_gap_threshold(std::move(candidates));
    }
    *out = new tvgm_graph{tvgm::select_graph(w->w, r, et, nt)};
    return TVGM_OK;
  });
}

int tvgm_true_graph(const tvgm_model* model, tvgm_graph** out) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(model && out, "null argument");
    *out = new tvgm_graph{tvgm::true_graph(model->m)};
    return TVGM_OK;
  });
}

void tvgm_graph_free(tvgm_graph* graph) { delete graph; }

int tvgm_graph_write(const tvgm_graph* graph, const char* path) {
  return run(TVGM_ERR_IO, [&] {
    need(graph && path, "null argument");
    tvgm::write_text_file(path, tvgm::graph_to_text(graph->g));
    return TVGM_OK;
  });
}

int tvgm_graph_read(const char* path, tvgm_graph** out) {
  return run(TVGM_ERR_IO, [&] {
    need(path && out, "null argument");
    *out = new tvgm_graph{tvgm::graph_from_text(tvgm::read_text_file(path))};
    return TVGM_OK;
  });
}

int tvgm_graph_compare(const tvgm_graph* estimated, const tvgm_graph* truth,
                       double* precision, double* recall, double* self_accuracy,
                       double* attr_accuracy) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(estimated && truth, "null graph");
    auto metrics = tvgm::compare_graphs(estimated->g, truth->g);
    if (precision) *precision = metrics.edge_precision;
    if (recall) *recall = metrics.edge_recall;
    if (self_accuracy) *self_accuracy = metrics.self_accuracy;
    if (attr_accuracy) *attr_accuracy = metrics.attr_accuracy;
    return TVGM_OK;
  });
}

/* --- verification and reports ------------------------------------------ */

int tvgm_verify(const tvgm_model* model, int n, const char* report_path,
                int* failures) {
  return run(TVGM_ERR_NUMERIC, [&] {
    need(model != nullptr, "null model");
    auto report = tvgm::verify_model(model->m, n);
    if (report_path) tvgm::write_text_file(report_path, report.to_csv());
    if (failures) *failures = report.failures();
    return TVGM_OK;
  });
}

int tvgm_heatmap_svg(int p, const double* values, const char* title,
                     const char* path) {
  return run(TVGM_ERR_IO, [&] {
    need(values && path, "null argument");
    need(p >= 1, "p must be positive");
    Eigen::MatrixXd m(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) m(i, j) = values[i * p + j];
    tvgm::write_heatmap_svg(m, title ? title : "", path);
    return TVGM_OK;
  });
}

}  // extern "C"
