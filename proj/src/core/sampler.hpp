#ifndef SCC_SAMPLER_HPP
#define SCC_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace scc {

enum class InitMode { kSingletons, kSingleCluster };

struct McmcConfig {
  int iterations = 4000;
  int burn_in = 2000;
  int thin = 1;
  uint64_t seed = 1;
  double proposal_sd = 0.05;
  bool adapt_proposal = true;  // burn-in only; frozen afterwards
  LikelihoodForm likelihood_form = LikelihoodForm::kConditional;
  InitMode init = InitMode::kSingletons;
  std::optional<double> fix_phi;  // skip Step 3, hold phi fixed

  void validate() const;
};

struct Draw {
  int iter = 0;  // 1-based sweep index
  double phi = 0.0;
  Partition partition;
  std::vector<ClusterParams> clusters;  // aligned with canonical labels
};

struct McmcTrace {
  std::vector<Draw> draws;
  double acceptance_rate = 0.0;  // phi moves, post burn-in
  double final_proposal_sd = 0.0;
  uint64_t seed = 0;
};

class GibbsSampler {
 public:
  GibbsSampler(const GwdpModel& model, const WeightMatrix& weights, const McmcConfig& config);

  McmcTrace run();

  // One full sweep (Step 1 -> 2 -> 3); exposed for tests.
  void sweep();
  void step1_update_params();
  void step2_update_partition();
  bool step3_update_phi();

  const ModelState& state() const { return state_; }
  void set_state(const ModelState& s);
  Rng& rng() { return rng_; }

  // Unnormalized log weights Step 2 would use for region i in the current
  // state (existing clusters in order, then the new-cluster weight). Does not
  // mutate the state.
  std::vector<double> step2_log_weights(int i) const;

  // Singleton Normal-Inverse-Gamma posterior draw for region i (Step 1
  // formulas with |c| = 1).
  ClusterParams draw_singleton_params(int i);

 private:
  void remove_region(int i);
  void assign_region(int i, int cluster, ClusterParams&& fresh);
  std::vector<double> log_weights_of_removed(int i) const;
  ClusterParams sample_cluster_params(const std::vector<int>& members);
  Draw record(int iter) const;

  const GwdpModel& model_;
  const WeightMatrix& weights_;
  McmcConfig cfg_;
  Rng rng_;
  ModelState state_;
  std::vector<std::vector<int>> members_;
  Eigen::MatrixXd e_;  // T x n standardized residuals, kept in sync with state_
  double proposal_sd_;
};

McmcTrace run_mcmc(const GwdpModel& model, const WeightMatrix& weights, const McmcConfig& config);

}  // namespace scc

#endif
