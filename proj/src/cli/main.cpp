// Command-line front end over the shared-library C interface.
//
// Subcommands:
//   simulate  builtin or JSON model -> one panel CSV per replicate + manifest
//   estimate  panels in --out -> per-replicate fits/weights/graph + averages
//   verify    model-implied oracle checks -> pass/fail table, exit 3 on failure
//   report    averaged weight CSVs -> annotated SVG heatmaps
//
// Exit codes: 0 success, 1 usage or input/output problem, 2 numeric failure,
// 3 verification failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "tvgm.h"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string model_path;
  std::string builtin;
  int n = 0;
  int burnin = 200;
  unsigned long long seed = 1;
  int replicates = 1;
  int M = 0;  // 0: resolved to ceil(sqrt(n)) at fit time
  int nu = 1;
  int stride = 1;
  int folds = 5;
  int lambda_grid = 50;
  std::string rule = "and";
  std::string out;
  bool overwrite = false;
};

using ModelPtr = std::unique_ptr<tvgm_model, decltype(&tvgm_model_free)>;
using PanelPtr = std::unique_ptr<tvgm_panel, decltype(&tvgm_panel_free)>;
using FitsetPtr = std::unique_ptr<tvgm_fitset, decltype(&tvgm_fitset_free)>;
using WeightsPtr = std::unique_ptr<tvgm_weights, decltype(&tvgm_weights_free)>;
using GraphPtr = std::unique_ptr<tvgm_graph, decltype(&tvgm_graph_free)>;

int map_status(int status) {
  switch (status) {
    case TVGM_OK: return 0;
    case TVGM_ERR_INVALID: return 1;
    case TVGM_ERR_IO: return 1;
    case TVGM_ERR_NUMERIC: return 2;
    case TVGM_ERR_VERIFY: return 3;
    default: return 2;
  }
}

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 1;
}

int library_error(int status) {
  std::cerr << "error: " << tvgm_last_error() << "\n";
  return map_status(status);
}

// Refuses to clobber an existing artifact unless --overwrite was given.
bool refuse_existing(const fs::path& path, bool overwrite) {
  if (!overwrite && fs::exists(path)) {
    std::cerr << "error: " << path.string()
              << " already exists (use --overwrite to replace)\n";
    return true;
  }
  return false;
}

std::string replicate_name(const char* prefix, int i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%03d.%s", prefix, i, ext);
  return buf;
}

ModelPtr load_model(const Options& opts, int* status) {
  tvgm_model* model = nullptr;
  *status = opts.builtin.empty()
                ? tvgm_model_load(opts.model_path.c_str(), &model)
                : tvgm_model_builtin(opts.builtin.c_str(), &model);
  return ModelPtr(model, &tvgm_model_free);
}

int write_json_file(const ordered_json& doc, const fs::path& path) {
  std::ofstream out(path);
  out << doc.dump(2) << "\n";
  out.flush();
  if (!out) return usage_error("cannot write " + path.string());
  return 0;
}

tvgm_config config_from(const Options& opts) {
  tvgm_config config = tvgm_config_default();
  config.M = opts.M;
  config.nu = opts.nu;
  config.stride = opts.stride;
  config.folds = opts.folds;
  config.lambda_grid_len = opts.lambda_grid;
  return config;
}

ordered_json config_echo(const tvgm_config& config, const std::string& rule) {
  ordered_json echo;
  echo["M"] = config.M;
  echo["nu"] = config.nu;
  echo["stride"] = config.stride;
  echo["folds"] = config.folds;
  echo["lambda_grid_len"] = config.lambda_grid_len;
  echo["lambda_min_ratio"] = config.lambda_min_ratio;
  echo["tol"] = config.tol;
  echo["max_iter"] = config.max_iter;
  echo["shared_lambda"] = config.shared_lambda != 0;
  echo["half_grid"] = config.half_grid != 0;
  echo["rule"] = rule;
  return echo;
}

int cmd_simulate(const Options& opts) {
  if (opts.builtin.empty() == opts.model_path.empty())
    return usage_error("simulate needs exactly one of --builtin or --model");
  std::error_code ec;
  fs::create_directories(opts.out, ec);
  if (ec) return usage_error("cannot create output directory " + opts.out);

  const fs::path dir(opts.out);
  if (refuse_existing(dir / "manifest.json", opts.overwrite)) return 1;
  for (int i = 1; i <= opts.replicates; ++i)
    if (refuse_existing(dir / replicate_name("panel", i, "csv"), opts.overwrite))
      return 1;

  int status = TVGM_OK;
  auto model = load_model(opts, &status);
  if (!model) return library_error(status);

  std::vector<unsigned long long> seeds;
  for (int i = 1; i <= opts.replicates; ++i) {
    const unsigned long long seed = opts.seed + static_cast<unsigned long long>(i - 1);
    tvgm_panel* raw = nullptr;
    if (int st = tvgm_simulate(model.get(), opts.n, opts.burnin, seed, &raw);
        st != TVGM_OK)
      return library_error(st);
    PanelPtr panel(raw, &tvgm_panel_free);
    const auto path = dir / replicate_name("panel", i, "csv");
    if (int st = tvgm_panel_write_csv(panel.get(), path.string().c_str());
        st != TVGM_OK)
      return library_error(st);
    seeds.push_back(seed);
  }

  ordered_json manifest;
  manifest["library_version"] = tvgm_version();
  manifest["command"] = "simulate";
  manifest["model"] = opts.builtin.empty() ? opts.model_path : opts.builtin;
  manifest["n"] = opts.n;
  manifest["burnin"] = opts.burnin;
  manifest["replicates"] = opts.replicates;
  manifest["master_seed"] = opts.seed;
  manifest["replicate_seeds"] = seeds;
  if (int rc = write_json_file(manifest, dir / "manifest.json"); rc != 0) return rc;

  std::cout << "wrote " << opts.replicates << " panel(s) and manifest.json to "
            << opts.out << "\n";
  return 0;
}

int cmd_estimate(const Options& opts) {
  const fs::path dir(opts.out);
  if (!fs::is_directory(dir))
    return usage_error("output directory " + opts.out + " does not exist");

  int replicates = 0;
  while (fs::exists(dir / replicate_name("panel", replicates + 1, "csv")))
    ++replicates;
  if (replicates == 0)
    return usage_error("no panel_XXX.csv files in " + opts.out +
                       " (run simulate first)");

  for (int i = 1; i <= replicates; ++i) {
    for (const char* prefix : {"fits", "wself", "wother"})
      if (refuse_existing(dir / replicate_name(prefix, i, "csv"), opts.overwrite))
        return 1;
    if (refuse_existing(dir / replicate_name("graph", i, "txt"), opts.overwrite))
      return 1;
  }
  for (const char* name :
       {"wself_avg.csv", "wother_avg.csv", "graph_avg.txt", "estimate_manifest.json"})
    if (refuse_existing(dir / name, opts.overwrite)) return 1;

  const tvgm_config config = config_from(opts);
  int p = 0;
  std::vector<double> self_sum, other_sum, self_buf, other_buf;

  for (int i = 1; i <= replicates; ++i) {
    tvgm_panel* praw = nullptr;
    const auto panel_path = dir / replicate_name("panel", i, "csv");
    if (int st = tvgm_panel_read_csv(panel_path.string().c_str(), &praw);
        st != TVGM_OK)
      return library_error(st);
    PanelPtr panel(praw, &tvgm_panel_free);

    tvgm_fitset* fraw = nullptr;
    if (int st = tvgm_estimate(panel.get(), &config, &fraw); st != TVGM_OK)
      return library_error(st);
    FitsetPtr fits(fraw, &tvgm_fitset_free);
    const auto fits_path = dir / replicate_name("fits", i, "csv");
    if (int st = tvgm_fitset_write_csv(fits.get(), fits_path.string().c_str());
        st != TVGM_OK)
      return library_error(st);

    tvgm_weights* wraw = nullptr;
    if (int st = tvgm_weights_from_fits(fits.get(), &wraw); st != TVGM_OK)
      return library_error(st);
    WeightsPtr weights(wraw, &tvgm_weights_free);
    if (p == 0) {
      if (int st = tvgm_weights_dims(weights.get(), &p); st != TVGM_OK)
        return library_error(st);
      self_sum.assign(static_cast<std::size_t>(p) * p, 0.0);
      other_sum.assign(static_cast<std::size_t>(p) * p, 0.0);
      self_buf.resize(self_sum.size());
      other_buf.resize(other_sum.size());
    }
    if (int st = tvgm_weights_write_csv(
            weights.get(), (dir / replicate_name("wself", i, "csv")).string().c_str(),
            (dir / replicate_name("wother", i, "csv")).string().c_str());
        st != TVGM_OK)
      return library_error(st);
    if (int st = tvgm_weights_get(weights.get(), self_buf.data(), other_buf.data());
        st != TVGM_OK)
      return library_error(st);
    for (std::size_t j = 0; j < self_sum.size(); ++j) {
      self_sum[j] += self_buf[j];
      other_sum[j] += other_buf[j];
    }

    tvgm_graph* graw = nullptr;
    if (int st = tvgm_select_graph(weights.get(), opts.rule.c_str(), -1.0, -1.0, &graw);
        st != TVGM_OK)
      return library_error(st);
    GraphPtr graph(graw, &tvgm_graph_free);
    const auto graph_path = dir / replicate_name("graph", i, "txt");
    if (int st = tvgm_graph_write(graph.get(), graph_path.string().c_str());
        st != TVGM_OK)
      return library_error(st);
  }

  for (std::size_t j = 0; j < self_sum.size(); ++j) {
    self_sum[j] /= replicates;
    other_sum[j] /= replicates;
  }
  tvgm_weights* avg_raw = nullptr;
  if (int st = tvgm_weights_create(p, self_sum.data(), other_sum.data(), &avg_raw);
      st != TVGM_OK)
    return library_error(st);
  WeightsPtr averaged(avg_raw, &tvgm_weights_free);
  if (int st = tvgm_weights_write_csv(averaged.get(),
                                      (dir / "wself_avg.csv").string().c_str(),
                                      (dir / "wother_avg.csv").string().c_str());
      st != TVGM_OK)
    return library_error(st);
  tvgm_graph* avg_graph_raw = nullptr;
  if (int st = tvgm_select_graph(averaged.get(), opts.rule.c_str(), -1.0, -1.0,
                                 &avg_graph_raw);
      st != TVGM_OK)
    return library_error(st);
  GraphPtr avg_graph(avg_graph_raw, &tvgm_graph_free);
  if (int st = tvgm_graph_write(avg_graph.get(), (dir / "graph_avg.txt").string().c_str());
      st != TVGM_OK)
    return library_error(st);

  ordered_json manifest;
  manifest["library_version"] = tvgm_version();
  manifest["command"] = "estimate";
  manifest["replicates"] = replicates;
  manifest["config"] = config_echo(config, opts.rule);
  if (int rc = write_json_file(manifest, dir / "estimate_manifest.json"); rc != 0)
    return rc;

  std::cout << "estimated " << replicates << " replicate(s) in " << opts.out
            << "; averaged weights in wself_avg.csv / wother_avg.csv\n";
  return 0;
}

int cmd_verify(const Options& opts) {
  if (opts.builtin.empty() == opts.model_path.empty())
    return usage_error("verify needs exactly one of --builtin or --model");
  int status = TVGM_OK;
  auto model = load_model(opts, &status);
  if (!model) return library_error(status);

  std::string report_path;
  if (!opts.out.empty()) {
    std::error_code ec;
    fs::create_directories(opts.out, ec);
    if (ec) return usage_error("cannot create output directory " + opts.out);
    const fs::path path = fs::path(opts.out) / "report.csv";
    if (refuse_existing(path, opts.overwrite)) return 1;
    report_path = path.string();
  }

  int failures = 0;
  if (int st = tvgm_verify(model.get(), opts.n,
                           report_path.empty() ? nullptr : report_path.c_str(),
                           &failures);
      st != TVGM_OK)
    return library_error(st);

  std::cout << "verification at n=" << opts.n << ": "
            << (failures == 0 ? "all checks passed" :
                                std::to_string(failures) + " check(s) failed")
            << (report_path.empty() ? "" : "; table in " + report_path) << "\n";
  return failures == 0 ? 0 : 3;
}

int cmd_report(const Options& opts) {
  const fs::path dir(opts.out);
  if (!fs::is_directory(dir))
    return usage_error("output directory " + opts.out + " does not exist");
  const auto self_csv = dir / "wself_avg.csv";
  const auto other_csv = dir / "wother_avg.csv";
  if (!fs::exists(self_csv) || !fs::exists(other_csv))
    return usage_error("averaged weight CSVs not found in " + opts.out +
                       " (run estimate first)");
  const auto self_svg = dir / "wself_avg.svg";
  const auto other_svg = dir / "wother_avg.svg";
  if (refuse_existing(self_svg, opts.overwrite)) return 1;
  if (refuse_existing(other_svg, opts.overwrite)) return 1;

  tvgm_weights* raw = nullptr;
  if (int st = tvgm_weights_read_csv(self_csv.string().c_str(),
                                     other_csv.string().c_str(), &raw);
      st != TVGM_OK)
    return library_error(st);
  WeightsPtr weights(raw, &tvgm_weights_free);
  int p = 0;
  if (int st = tvgm_weights_dims(weights.get(), &p); st != TVGM_OK)
    return library_error(st);
  std::vector<double> self(static_cast<std::size_t>(p) * p),
      other(static_cast<std::size_t>(p) * p);
  if (int st = tvgm_weights_get(weights.get(), self.data(), other.data());
      st != TVGM_OK)
    return library_error(st);

  if (int st = tvgm_heatmap_svg(p, self.data(), "same-frequency weights (average)",
                                self_svg.string().c_str());
      st != TVGM_OK)
    return library_error(st);
  if (int st = tvgm_heatmap_svg(p, other.data(), "cross-frequency weights (average)",
                                other_svg.string().c_str());
      st != TVGM_OK)
    return library_error(st);

  std::cout << "wrote " << self_svg.string() << " and " << other_svg.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tvgm: time-varying graphical models for multivariate time series"};
  app.set_version_flag("--version", tvgm_version());
  app.require_subcommand(1);

  Options opts;

  auto add_model_flags = [&](CLI::App* cmd) {
    cmd->add_option("--model", opts.model_path, "model specification JSON");
    cmd->add_option("--builtin", opts.builtin, "builtin model name")
        ->check(CLI::IsMember({"small", "large"}));
  };

  auto* sim = app.add_subcommand("simulate", "simulate replicate panels");
  add_model_flags(sim);
  sim->add_option("--n", opts.n, "observations per panel")
      ->required()
      ->check(CLI::PositiveNumber);
  sim->add_option("--burnin", opts.burnin, "burn-in steps")
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--seed", opts.seed, "master seed (replicate i uses seed+i-1)");
  sim->add_option("--replicates", opts.replicates, "number of panels")
      ->check(CLI::PositiveNumber);
  sim->add_option("--out", opts.out, "output directory")->required();
  sim->add_flag("--overwrite", opts.overwrite, "replace existing artifacts");

  auto* est = app.add_subcommand("estimate", "fit node-wise regressions on panels");
  est->add_option("--M", opts.M, "window half-width (0: ceil(sqrt(n)))")
      ->check(CLI::NonNegativeNumber);
  est->add_option("--nu", opts.nu, "regressor offset bandwidth")
      ->check(CLI::NonNegativeNumber);
  est->add_option("--stride", opts.stride, "fit every stride-th frequency")
      ->check(CLI::PositiveNumber);
  est->add_option("--folds", opts.folds, "cross-validation folds")
      ->check(CLI::Range(2, 1000));
  est->add_option("--lambda-grid", opts.lambda_grid, "penalty grid length")
      ->check(CLI::Range(2, 10000));
  est->add_option("--rule", opts.rule, "edge combination rule")
      ->check(CLI::IsMember({"and", "or"}));
  est->add_option("--out", opts.out, "directory holding panel_XXX.csv files")
      ->required();
  est->add_flag("--overwrite", opts.overwrite, "replace existing artifacts");

  auto* ver = app.add_subcommand("verify", "run model-implied oracle checks");
  add_model_flags(ver);
  opts.n = 64;  // verify default; simulate always overwrites via its required --n
  ver->add_option("--n", opts.n, "section length for the checks")
      ->check(CLI::PositiveNumber);
  ver->add_option("--out", opts.out, "directory for report.csv (optional)");
  ver->add_flag("--overwrite", opts.overwrite, "replace existing artifacts");

  auto* rep = app.add_subcommand("report", "render averaged weights as heatmaps");
  rep->add_option("--out", opts.out, "directory holding wself_avg.csv/wother_avg.csv")
      ->required();
  rep->add_flag("--overwrite", opts.overwrite, "replace existing artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (sim->parsed()) return cmd_simulate(opts);
  if (est->parsed()) return cmd_estimate(opts);
  if (ver->parsed()) return cmd_verify(opts);
  if (rep->parsed()) return cmd_report(opts);
  return usage_error("no command given");
}
