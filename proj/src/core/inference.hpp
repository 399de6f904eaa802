#ifndef SCC_INFERENCE_HPP
#define SCC_INFERENCE_HPP

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "model.hpp"
#include "sampler.hpp"

namespace scc {

struct LpmlReport {
  // log(CPO_i); with T~100 grid points raw CPO values overflow double.
  std::vector<double> per_region_log_cpo;
  double lpml = 0.0;
  double h = 0.0;
  std::vector<int> flagged_regions;  // regions with a non-finite per-draw density
};

LpmlReport cpo_lpml(const McmcTrace& trace, const GwdpModel& model);

Partition dahl_partition(const McmcTrace& trace);

double rand_index(std::span<const int> labels1, std::span<const int> labels2);

struct ClusterSummary {
  Partition partition;                      // Dahl point estimate
  std::vector<Eigen::VectorXd> mean_curves; // one T-vector per cluster
  double phi_lo = 0.0, phi_hi = 0.0;        // 95% equal-tailed interval
  std::vector<std::pair<int, int>> k_histogram;  // (K, count) over draws
  double acceptance_rate = 0.0;
  bool used_fallback = false;  // mean curves averaged per-cluster member sets
};

ClusterSummary summarize(const McmcTrace& trace, const GwdpModel& model);

struct KmeansResult {
  std::vector<int> labels;
  int k = 0;
  double ch_index = 0.0;
  bool degraded = false;  // empty-cluster restarts exhausted
};

KmeansResult kmeans_baseline(const CurveMatrix& curves, int k_min, int k_max, uint64_t seed,
                             int restarts = 10);

struct HSelection {
  double best_h = 0.0;
  int best_index = -1;
  std::vector<LpmlReport> reports;          // one per candidate, grid order
  std::vector<std::string> errors;          // empty string for clean runs
};

// Runs a full MCMC per candidate h (parallel when jobs > 1) and picks the
// LPML argmax, ties toward smaller h. `fit_one` maps a grid index to a
// finished report, so callers control seeding and by-products.
HSelection select_h(const std::vector<double>& candidates,
                    const std::function<LpmlReport(int)>& fit_one, int jobs);

// Equal-tailed quantile with linear interpolation.
double quantile(std::vector<double> values, double q);

}  // namespace scc

#endif
