// scc - command-line front end for the spatial curve clustering library.
// Talks to the core exclusively through the C API in scc/scc.h.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <string>

#include "scc/scc.h"

namespace {

using nlohmann::json;

struct CommonOpts {
  std::string input, adjacency, config, out_dir = ".";
  uint64_t seed = 1;
  int jobs = 1;
  bool seed_set = false, jobs_set = false;
};

std::string out_path(const CommonOpts& o, const std::string& name) {
  std::filesystem::create_directories(o.out_dir);
  return (std::filesystem::path(o.out_dir) / name).string();
}

// Load the config file (if any) and fold the CLI overrides on top; the
// library revalidates the merged result.
json merged_config(const CommonOpts& o, const json& overrides) {
  json cfg = json::object();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) {
      std::fprintf(stderr, "scc: cannot open config file %s\n", o.config.c_str());
      std::exit(1);
    }
    in >> cfg;
  }
  for (const auto& [k, v] : overrides.items()) cfg[k] = v;
  if (o.seed_set || !cfg.contains("seed")) cfg["seed"] = o.seed;
  if (o.jobs_set || !cfg.contains("jobs")) cfg["jobs"] = o.jobs;
  return cfg;
}

int check(scc_status st, const char* what) {
  if (st == SCC_OK) return 0;
  std::fprintf(stderr, "scc: %s failed: %s\n", what, scc_error_message());
  return 1;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_adjacency = true) {
  cmd->add_option("--input", o.input, "input curves CSV");
  if (with_adjacency) cmd->add_option("--adjacency", o.adjacency, "adjacency CSV (edge list or matrix)");
  cmd->add_option("--config", o.config, "JSON config file");
  cmd->add_option("--out-dir", o.out_dir, "output directory");
  cmd->add_option("--seed", o.seed, "RNG seed")->each([&](const std::string&) { o.seed_set = true; });
  cmd->add_option("--jobs", o.jobs, "parallel fits for grid/replicate fan-out")
      ->each([&](const std::string&) { o.jobs_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scc - Bayesian clustering of spatially correlated growth-rate curves"};
  app.require_subcommand(1);

  CommonOpts o;

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "cumulative case CSV -> scaled growth-rate curves");
  std::string date_start, date_end;
  add_common(pre, o, false);
  pre->add_option("--date-start", date_start, "first day (ISO), inclusive");
  pre->add_option("--date-end", date_end, "last day (ISO), inclusive");

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset (designs 1-8)");
  int design = 1;
  add_common(sim, o, false);
  sim->add_option("--design", design, "design id 1-8")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "run the MCMC at a fixed h");
  double h = 0.0;
  int iterations = -1, burn_in = -1;
  add_common(fit, o);
  fit->add_option("--h", h, "geographic decay parameter");
  fit->add_option("--iterations", iterations, "MCMC sweeps");
  fit->add_option("--burn-in", burn_in, "discarded prefix");

  // select-h
  auto* sel = app.add_subcommand("select-h", "fit an h grid and pick the LPML argmax");
  std::string h_grid;
  add_common(sel, o);
  sel->add_option("--h-grid", h_grid, "comma-separated candidates, e.g. 0,0.5,1");
  sel->add_option("--iterations", iterations, "MCMC sweeps");
  sel->add_option("--burn-in", burn_in, "discarded prefix");

  // evaluate
  auto* eva = app.add_subcommand("evaluate", "Rand index between estimated and true labels");
  std::string labels_path, truth_path;
  bool baseline = false;
  add_common(eva, o);
  eva->add_option("--labels", labels_path, "estimated labels CSV")->required();
  eva->add_option("--truth", truth_path, "true labels CSV")->required();
  eva->add_flag("--baseline", baseline, "add a k-means baseline (needs --input)");

  // summarize
  auto* sum = app.add_subcommand("summarize", "post-process an existing trace file");
  std::string trace_path;
  add_common(sum, o);
  sum->add_option("--trace", trace_path, "trace JSONL from fit/select-h")->required();

  CLI11_PARSE(app, argc, argv);

  if (pre->parsed()) {
    if (o.input.empty()) {
      std::fprintf(stderr, "scc: preprocess needs --input\n");
      return 1;
    }
    return check(scc_preprocess_file(o.input.c_str(), date_start.c_str(), date_end.c_str(),
                                     out_path(o, "curves.csv").c_str(),
                                     out_path(o, "preprocess_report.json").c_str()),
                 "preprocess");
  }

  if (sim->parsed()) {
    return check(scc_simulate_file(design, o.seed, out_path(o, "curves.csv").c_str(),
                                   out_path(o, "truth.csv").c_str()),
                 "simulate");
  }

  auto fit_overrides = [&](bool with_h) {
    json ov = json::object();
    if (with_h && fit->count("--h")) ov["h"] = h;
    if (iterations >= 0) ov["iterations"] = iterations;
    if (burn_in >= 0) ov["burn_in"] = burn_in;
    return ov;
  };

  if (fit->parsed()) {
    if (o.input.empty() || o.adjacency.empty()) {
      std::fprintf(stderr, "scc: fit needs --input and --adjacency\n");
      return 1;
    }
    const std::string cfg = merged_config(o, fit_overrides(true)).dump();
    return check(scc_fit_file(o.input.c_str(), o.adjacency.c_str(), cfg.c_str(),
                              out_path(o, "trace.jsonl").c_str(),
                              out_path(o, "summary.json").c_str(),
                              out_path(o, "labels.csv").c_str()),
                 "fit");
  }

  if (sel->parsed()) {
    if (o.input.empty() || o.adjacency.empty()) {
      std::fprintf(stderr, "scc: select-h needs --input and --adjacency\n");
      return 1;
    }
    json ov = fit_overrides(false);
    if (!h_grid.empty()) {
      json grid = json::array();
      std::stringstream ss(h_grid);
      std::string tok;
      while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
      ov["h_grid"] = grid;
    }
    const std::string cfg = merged_config(o, ov).dump();
    int failures = 0;
    const scc_status st = scc_select_h_file(
        o.input.c_str(), o.adjacency.c_str(), cfg.c_str(), out_path(o, "lpml_by_h.csv").c_str(),
        out_path(o, "summary.json").c_str(), out_path(o, "trace.jsonl").c_str(),
        out_path(o, "labels.csv").c_str(), &failures);
    if (const int rc = check(st, "select-h")) return rc;
    if (failures > 0) {
      std::fprintf(stderr, "scc: select-h finished with %d failed grid point(s)\n", failures);
      return 1;
    }
    return 0;
  }

  if (eva->parsed()) {
    if (baseline && o.input.empty()) {
      std::fprintf(stderr, "scc: evaluate --baseline needs --input\n");
      return 1;
    }
    return check(scc_evaluate_file(labels_path.c_str(), truth_path.c_str(),
                                   baseline ? o.input.c_str() : nullptr, o.seed,
                                   out_path(o, "metrics.json").c_str()),
                 "evaluate");
  }

  if (sum->parsed()) {
    if (o.input.empty() || o.adjacency.empty()) {
      std::fprintf(stderr, "scc: summarize needs --input and --adjacency\n");
      return 1;
    }
    const std::string cfg = merged_config(o, json::object()).dump();
    return check(scc_summarize_file(trace_path.c_str(), o.input.c_str(), o.adjacency.c_str(),
                                    cfg.c_str(), out_path(o, "summary.json").c_str(),
                                    out_path(o, "mean_curves.csv").c_str()),
                 "summarize");
  }

  return 1;
}
