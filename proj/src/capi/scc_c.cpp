#include "scc/scc.h"

#include <cstring>
#include <string>

#include "curves.hpp"
#include "errors.hpp"
#include "inference.hpp"
#include "pipeline.hpp"
#include "runconfig.hpp"
#include "spatial.hpp"
#include "us_data.hpp"

using namespace scc;

namespace {

thread_local std::string g_last_error;

scc_status code_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Io: return SCC_ERR_IO;
    case ErrorCode::Format: return SCC_ERR_FORMAT;
    case ErrorCode::DuplicateRecord: return SCC_ERR_DUPLICATE_RECORD;
    case ErrorCode::DateGap: return SCC_ERR_DATE_GAP;
    case ErrorCode::Degenerate: return SCC_ERR_DEGENERATE;
    case ErrorCode::Domain: return SCC_ERR_DOMAIN;
    case ErrorCode::Numeric: return SCC_ERR_NUMERIC;
    case ErrorCode::Rank: return SCC_ERR_RANK;
    case ErrorCode::Mismatch: return SCC_ERR_MISMATCH;
    case ErrorCode::InvalidArgument: return SCC_ERR_INVALID_ARGUMENT;
  }
  return SCC_ERR_UNKNOWN;
}

template <typename Fn>
scc_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SCC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SCC_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown error";
    return SCC_ERR_UNKNOWN;
  }
}

scc_status invalid(const char* msg) {
  g_last_error = msg;
  return SCC_ERR_INVALID_ARGUMENT;
}

RunConfig parse_config(const char* config_json) {
  if (!config_json || !*config_json) return RunConfig{};
  return RunConfig::from_json_text(config_json);
}

}  // namespace

struct scc_dataset {
  CurveMatrix curves;
};
struct scc_graph {
  AdjacencyGraph graph;
};
struct scc_result {
  FitArtifacts fit;
  RunConfig cfg;
};

extern "C" {

const char* scc_version(void) { return "0.1.0"; }

const char* scc_error_message(void) { return g_last_error.c_str(); }

scc_status scc_dataset_load_curves(const char* path, scc_dataset** out) {
  if (!path || !out) return invalid("scc_dataset_load_curves: null argument");
  return guarded([&] { *out = new scc_dataset{read_curve_csv(path)}; });
}

scc_status scc_dataset_dims(const scc_dataset* d, int* n_regions, int* n_gridpoints) {
  if (!d) return invalid("scc_dataset_dims: null dataset");
  if (n_regions) *n_regions = d->curves.n();
  if (n_gridpoints) *n_gridpoints = d->curves.t();
  return SCC_OK;
}

const char* scc_dataset_region_id(const scc_dataset* d, int index) {
  if (!d || index < 0 || index >= d->curves.n()) return nullptr;
  return d->curves.region_ids[index].c_str();
}

void scc_dataset_free(scc_dataset* d) { delete d; }

scc_status scc_graph_load(const char* path, scc_graph** out) {
  if (!path || !out) return invalid("scc_graph_load: null argument");
  return guarded([&] { *out = new scc_graph{load_adjacency(path)}; });
}

scc_status scc_graph_us_states(scc_graph** out) {
  if (!out) return invalid("scc_graph_us_states: null argument");
  return guarded([&] {
    *out = new scc_graph{adjacency_from_csv_text(us_data::kStateAdjacencyCsv, "bundled adjacency")};
  });
}

scc_status scc_graph_n_regions(const scc_graph* g, int* n) {
  if (!g || !n) return invalid("scc_graph_n_regions: null argument");
  *n = g->graph.n();
  return SCC_OK;
}

scc_status scc_graph_car_bounds(const scc_graph* g, double* ell, double* u) {
  if (!g) return invalid("scc_graph_car_bounds: null graph");
  return guarded([&] {
    const CarBounds b = car_bounds(g->graph);
    if (ell) *ell = b.ell;
    if (u) *u = b.u;
  });
}

void scc_graph_free(scc_graph* g) { delete g; }

scc_status scc_fit_run(const scc_dataset* d, const scc_graph* g, const char* config_json,
                       scc_result** out) {
  if (!d || !g || !out) return invalid("scc_fit_run: null argument");
  return guarded([&] {
    RunConfig cfg = parse_config(config_json);
    auto* r = new scc_result;
    r->cfg = cfg;
    try {
      r->fit = fit_data(d->curves, g->graph, cfg, 0);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

scc_status scc_result_lpml(const scc_result* r, double* lpml) {
  if (!r || !lpml) return invalid("scc_result_lpml: null argument");
  *lpml = r->fit.lpml.lpml;
  return SCC_OK;
}

scc_status scc_result_num_clusters(const scc_result* r, int* k) {
  if (!r || !k) return invalid("scc_result_num_clusters: null argument");
  *k = r->fit.summary.partition.num_clusters();
  return SCC_OK;
}

scc_status scc_result_labels(const scc_result* r, int* labels, size_t n) {
  if (!r || !labels) return invalid("scc_result_labels: null argument");
  const auto& lab = r->fit.summary.partition.labels;
  if (n < lab.size()) return invalid("scc_result_labels: buffer too small");
  for (size_t i = 0; i < lab.size(); ++i) labels[i] = lab[i] + 1;
  return SCC_OK;
}

scc_status scc_result_phi_interval(const scc_result* r, double* lo, double* hi) {
  if (!r) return invalid("scc_result_phi_interval: null result");
  if (lo) *lo = r->fit.summary.phi_lo;
  if (hi) *hi = r->fit.summary.phi_hi;
  return SCC_OK;
}

scc_status scc_result_acceptance_rate(const scc_result* r, double* rate) {
  if (!r || !rate) return invalid("scc_result_acceptance_rate: null argument");
  *rate = r->fit.trace.acceptance_rate;
  return SCC_OK;
}

scc_status scc_result_summary_json(const scc_result* r, char** out) {
  if (!r || !out) return invalid("scc_result_summary_json: null argument");
  return guarded([&] {
    const std::string s = summary_json(r->fit, r->cfg);
    *out = new char[s.size() + 1];
    std::memcpy(*out, s.c_str(), s.size() + 1);
  });
}

scc_status scc_result_write_trace(const scc_result* r, const char* path) {
  if (!r || !path) return invalid("scc_result_write_trace: null argument");
  return guarded([&] { write_trace(path, r->fit.trace, r->cfg, r->fit.h, r->fit.p); });
}

void scc_result_free(scc_result* r) { delete r; }

void scc_string_free(char* s) { delete[] s; }

scc_status scc_preprocess_file(const char* input_csv, const char* date_start,
                               const char* date_end, const char* out_curves,
                               const char* out_report) {
  if (!input_csv || !out_curves || !out_report) return invalid("scc_preprocess_file: null argument");
  return guarded([&] {
    preprocess_file(input_csv, date_start ? date_start : "", date_end ? date_end : "", out_curves,
                    out_report);
  });
}

scc_status scc_simulate_file(int design, uint64_t seed, const char* out_curves,
                             const char* out_truth) {
  if (!out_curves || !out_truth) return invalid("scc_simulate_file: null argument");
  return guarded([&] { simulate_file(design, seed, out_curves, out_truth); });
}

scc_status scc_fit_file(const char* curves_csv, const char* adjacency_csv,
                        const char* config_json, const char* out_trace, const char* out_summary,
                        const char* out_labels) {
  if (!curves_csv || !adjacency_csv) return invalid("scc_fit_file: null argument");
  return guarded([&] {
    fit_file(curves_csv, adjacency_csv, parse_config(config_json), out_trace ? out_trace : "",
             out_summary ? out_summary : "", out_labels ? out_labels : "");
  });
}

scc_status scc_select_h_file(const char* curves_csv, const char* adjacency_csv,
                             const char* config_json, const char* out_lpml_csv,
                             const char* out_summary, const char* out_trace,
                             const char* out_labels, int* n_failures) {
  if (!curves_csv || !adjacency_csv) return invalid("scc_select_h_file: null argument");
  return guarded([&] {
    auto res = select_h_file(curves_csv, adjacency_csv, parse_config(config_json),
                             out_lpml_csv ? out_lpml_csv : "", out_summary ? out_summary : "",
                             out_trace ? out_trace : "", out_labels ? out_labels : "");
    if (n_failures) *n_failures = res.failures;
  });
}

scc_status scc_evaluate_file(const char* estimated_labels_csv, const char* truth_labels_csv,
                             const char* curves_csv, uint64_t baseline_seed,
                             const char* out_json) {
  if (!estimated_labels_csv || !truth_labels_csv || !out_json)
    return invalid("scc_evaluate_file: null argument");
  return guarded([&] {
    evaluate_file(estimated_labels_csv, truth_labels_csv, curves_csv ? curves_csv : "",
                  baseline_seed, out_json);
  });
}

scc_status scc_summarize_file(const char* trace_path, const char* curves_csv,
                              const char* adjacency_csv, const char* config_json,
                              const char* out_summary, const char* out_mean_curves_csv) {
  if (!trace_path || !curves_csv || !adjacency_csv)
    return invalid("scc_summarize_file: null argument");
  return guarded([&] {
    summarize_file(trace_path, curves_csv, adjacency_csv, parse_config(config_json),
                   out_summary ? out_summary : "", out_mean_curves_csv ? out_mean_curves_csv : "");
  });
}

}  // extern "C"
