#ifndef SCC_PIPELINE_HPP
#define SCC_PIPELINE_HPP

#include <string>
#include <vector>

#include "inference.hpp"
#include "runconfig.hpp"
#include "simgen.hpp"

namespace scc {

// File-level operations behind the C API and CLI. Every output embeds the
// resolved config (JSON outputs: "config" field; CSVs: leading '#' line).

struct PreprocessResult {
  int n_regions = 0;
  int t_grid = 0;
  long long total_corrections = 0;
};
PreprocessResult preprocess_file(const std::string& input_csv, const std::string& date_start,
                                 const std::string& date_end, const std::string& out_curves,
                                 const std::string& out_report);

void simulate_file(int design, uint64_t seed, const std::string& out_curves,
                   const std::string& out_truth);

struct FitArtifacts {
  McmcTrace trace;
  ClusterSummary summary;
  LpmlReport lpml;
  int p = 0;
  double h = 0.0;
  std::vector<std::string> region_ids;
};

// In-memory fit at cfg.h; h_index feeds the seed derivation (0 for cmd_fit).
FitArtifacts fit_data(const CurveMatrix& curves, const AdjacencyGraph& graph,
                      const RunConfig& cfg, int h_index = 0);

void write_trace(const std::string& path, const McmcTrace& trace, const RunConfig& cfg,
                 double h, int p);
McmcTrace read_trace(const std::string& path);

std::string summary_json(const FitArtifacts& fit, const RunConfig& cfg);
void write_labels_csv(const std::string& path, const std::vector<std::string>& region_ids,
                      const std::vector<int>& labels, const std::string& config_echo);
std::vector<std::pair<std::string, int>> read_labels_csv(const std::string& path);

void fit_file(const std::string& curves_csv, const std::string& adjacency_csv,
              const RunConfig& cfg, const std::string& out_trace, const std::string& out_summary,
              const std::string& out_labels);

struct SelectHResult {
  double best_h = 0.0;
  int failures = 0;
};
SelectHResult select_h_file(const std::string& curves_csv, const std::string& adjacency_csv,
                            const RunConfig& cfg, const std::string& out_lpml_csv,
                            const std::string& out_summary, const std::string& out_trace,
                            const std::string& out_labels);

void evaluate_file(const std::string& estimated_labels, const std::string& truth_labels,
                   const std::string& curves_csv_for_baseline, uint64_t baseline_seed,
                   const std::string& out_json);

void summarize_file(const std::string& trace_path, const std::string& curves_csv,
                    const std::string& adjacency_csv, const RunConfig& cfg,
                    const std::string& out_summary, const std::string& out_mean_curves_csv);

}  // namespace scc

#endif
