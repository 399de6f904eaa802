#include "inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <thread>

#include "errors.hpp"
#include "log.hpp"

namespace scc {

LpmlReport cpo_lpml(const McmcTrace& trace, const GwdpModel& model) {
  if (trace.draws.empty()) fail(ErrorCode::InvalidArgument, "cpo_lpml: empty trace");
  const int n = model.n();
  const int m = static_cast<int>(trace.draws.size());
  // log CPO_i = log M - logsumexp_l(-log f_{i,l})
  Eigen::MatrixXd neg_logf(m, n);
  std::set<int> flagged;
  for (int l = 0; l < m; ++l) {
    const Draw& d = trace.draws[l];
    ModelState state{d.partition.labels, d.clusters, d.phi};
    const Eigen::MatrixXd e = model.residual_columns(state);
    for (int i = 0; i < n; ++i) {
      const double lf = model.per_state_density(i, state, e);
      if (!std::isfinite(lf)) flagged.insert(i);
      neg_logf(l, i) = -lf;
    }
  }
  LpmlReport report;
  report.flagged_regions.assign(flagged.begin(), flagged.end());
  report.per_region_log_cpo.resize(n);
  for (int i = 0; i < n; ++i) {
    const double mx = neg_logf.col(i).maxCoeff();
    double acc = 0.0;
    for (int l = 0; l < m; ++l) acc += std::exp(neg_logf(l, i) - mx);
    const double lse = mx + std::log(acc);
    report.per_region_log_cpo[i] = std::log(static_cast<double>(m)) - lse;
    report.lpml += report.per_region_log_cpo[i];
  }
  return report;
}

Partition dahl_partition(const McmcTrace& trace) {
  if (trace.draws.empty()) fail(ErrorCode::InvalidArgument, "dahl_partition: empty trace");
  const int n = trace.draws.front().partition.n();
  const int m = static_cast<int>(trace.draws.size());
  Eigen::MatrixXd pihat = Eigen::MatrixXd::Zero(n, n);
  for (const Draw& d : trace.draws) {
    const auto& lab = d.partition.labels;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (lab[i] == lab[j]) pihat(i, j) += 1.0;
  }
  pihat /= m;
  double best_loss = INFINITY;
  int best = 0;
  for (int l = 0; l < m; ++l) {
    const auto& lab = trace.draws[l].partition.labels;
    double loss = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double delta = (lab[i] == lab[j] ? 1.0 : 0.0) - pihat(i, j);
        loss += delta * delta;
      }
    if (loss < best_loss) {  // strict: earliest draw wins ties
      best_loss = loss;
      best = l;
    }
  }
  return trace.draws[best].partition;
}

double rand_index(std::span<const int> labels1, std::span<const int> labels2) {
  if (labels1.size() != labels2.size()) fail(ErrorCode::Mismatch, "rand_index: size mismatch");
  const int n = static_cast<int>(labels1.size());
  if (n < 2) fail(ErrorCode::InvalidArgument, "rand_index: need at least 2 items");
  long long agree = 0, total = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ++total;
      const bool same1 = labels1[i] == labels1[j];
      const bool same2 = labels2[i] == labels2[j];
      if (same1 == same2) ++agree;
    }
  return static_cast<double>(agree) / static_cast<double>(total);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) fail(ErrorCode::InvalidArgument, "quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double idx = q * (values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(idx));
  const size_t hi = static_cast<size_t>(std::ceil(idx));
  const double w = idx - lo;
  return (1.0 - w) * values[lo] + w * values[hi];
}

ClusterSummary summarize(const McmcTrace& trace, const GwdpModel& model) {
  if (trace.draws.empty()) fail(ErrorCode::InvalidArgument, "summarize: empty trace");
  ClusterSummary s;
  s.partition = dahl_partition(trace);
  s.acceptance_rate = trace.acceptance_rate;
  const int k = s.partition.num_clusters();
  const int p = model.p();

  // mean curves: average beta over draws whose partition equals the Dahl
  // partition (the Dahl draw itself always qualifies)
  std::vector<Eigen::VectorXd> beta_sum(k, Eigen::VectorXd::Zero(p));
  int matches = 0;
  for (const Draw& d : trace.draws) {
    if (d.partition == s.partition) {
      for (int c = 0; c < k; ++c) beta_sum[c] += d.clusters[c].beta;
      ++matches;
    }
  }
  if (matches == 0) {
    // per-cluster member-set fallback
    s.used_fallback = true;
    const auto groups = s.partition.groups();
    for (int c = 0; c < k; ++c) {
      int cnt = 0;
      for (const Draw& d : trace.draws) {
        const int dc = d.partition.labels[groups[c].front()];
        std::vector<int> mem;
        for (int i = 0; i < d.partition.n(); ++i)
          if (d.partition.labels[i] == dc) mem.push_back(i);
        if (mem == groups[c]) {
          beta_sum[c] += d.clusters[dc].beta;
          ++cnt;
        }
      }
      if (cnt > 0) beta_sum[c] /= cnt;
    }
  } else {
    for (int c = 0; c < k; ++c) beta_sum[c] /= matches;
  }
  for (int c = 0; c < k; ++c) s.mean_curves.push_back(model.xi() * beta_sum[c]);

  std::vector<double> phis;
  std::map<int, int> khist;
  for (const Draw& d : trace.draws) {
    phis.push_back(d.phi);
    khist[d.partition.num_clusters()]++;
  }
  s.phi_lo = quantile(phis, 0.025);
  s.phi_hi = quantile(phis, 0.975);
  s.k_histogram.assign(khist.begin(), khist.end());
  return s;
}

namespace {

double kmeans_once(const Eigen::MatrixXd& x, int k, Rng& rng, std::vector<int>& labels,
                   bool& empty_cluster) {
  const int n = static_cast<int>(x.rows());
  // distinct random rows as initial centers
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.next_u64() % (i + 1)]);
  Eigen::MatrixXd centers(k, x.cols());
  for (int c = 0; c < k; ++c) centers.row(c) = x.row(order[c]);

  labels.assign(n, 0);
  empty_cluster = false;
  double wss = 0.0;
  for (int it = 0; it < 200; ++it) {
    bool changed = false;
    wss = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = INFINITY;
      int arg = 0;
      for (int c = 0; c < k; ++c) {
        const double d = (x.row(i) - centers.row(c)).squaredNorm();
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      if (labels[i] != arg) changed = true;
      labels[i] = arg;
      wss += best;
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(labels[i]) += x.row(i);
      counts[labels[i]]++;
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        empty_cluster = true;
        return wss;
      }
      centers.row(c) = sums.row(c) / counts[c];
    }
    if (!changed) break;
  }
  return wss;
}

}  // namespace

KmeansResult kmeans_baseline(const CurveMatrix& curves, int k_min, int k_max, uint64_t seed,
                             int restarts) {
  const int n = curves.n();
  if (k_min < 2 || k_max > n - 1 || k_min > k_max)
    fail(ErrorCode::InvalidArgument, "kmeans_baseline: k range must sit inside [2, n-1]");
  const Eigen::MatrixXd& x = curves.values;
  const Eigen::RowVectorXd grand_mean = x.colwise().mean();

  KmeansResult best;
  best.ch_index = -INFINITY;
  for (int k = k_min; k <= k_max; ++k) {
    std::vector<int> best_labels;
    double best_wss = INFINITY;
    bool all_degraded = true;
    Rng rng(derive_seed(seed, 0x6b6d65616e73ULL /* "kmeans" */, k));
    for (int r = 0; r < restarts; ++r) {
      std::vector<int> labels;
      bool empty = false;
      const double wss = kmeans_once(x, k, rng, labels, empty);
      if (empty) continue;
      all_degraded = false;
      if (wss < best_wss) {
        best_wss = wss;
        best_labels = labels;
      }
    }
    if (best_labels.empty()) {
      log::warn("kmeans: all restarts hit an empty cluster at k=%d", k);
      continue;
    }
    // Calinski-Harabasz: (B/(k-1)) / (W/(n-k))
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.row(best_labels[i]) += x.row(i);
      counts[best_labels[i]]++;
    }
    double bss = 0.0;
    for (int c = 0; c < k; ++c) {
      const Eigen::RowVectorXd center = sums.row(c) / counts[c];
      bss += counts[c] * (center - grand_mean).squaredNorm();
    }
    const double ch = (bss / (k - 1)) / (best_wss / (n - k));
    if (ch > best.ch_index) {
      best.ch_index = ch;
      best.k = k;
      best.labels = best_labels;
      best.degraded = all_degraded;
    }
  }
  if (best.labels.empty())
    fail(ErrorCode::Numeric, "kmeans_baseline: no valid clustering found in the k range");
  best.labels = Partition::canonical(best.labels).labels;
  return best;
}

HSelection select_h(const std::vector<double>& candidates,
                    const std::function<LpmlReport(int)>& fit_one, int jobs) {
  if (candidates.empty()) fail(ErrorCode::InvalidArgument, "select_h: empty candidate grid");
  for (double h : candidates)
    if (h < 0.0) fail(ErrorCode::Domain, "select_h: candidates must be >= 0");

  HSelection sel;
  const int m = static_cast<int>(candidates.size());
  sel.reports.resize(m);
  sel.errors.assign(m, "");
  jobs = std::max(1, std::min(jobs, m));

  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= m) return;
      try {
        sel.reports[idx] = fit_one(idx);
        sel.reports[idx].h = candidates[idx];
      } catch (const std::exception& ex) {
        sel.errors[idx] = ex.what();
        log::warn("select_h: candidate h=%g failed: %s", candidates[idx], ex.what());
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  double best = -INFINITY;
  for (int idx = 0; idx < m; ++idx) {
    if (!sel.errors[idx].empty()) continue;
    const double lpml = sel.reports[idx].lpml;
    const bool wins = sel.best_index < 0 || lpml > best ||
                      (lpml == best && candidates[idx] < sel.best_h);
    if (wins) {
      best = lpml;
      sel.best_index = idx;
      sel.best_h = candidates[idx];
    }
  }
  if (sel.best_index < 0) fail(ErrorCode::Numeric, "select_h: every candidate failed");
  return sel;
}

}  // namespace scc
