#ifndef SCC_RUNCONFIG_HPP
#define SCC_RUNCONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"
#include "sampler.hpp"
#include "spatial.hpp"

namespace scc {

// Fully resolved run settings; serialized into every output for provenance.
struct RunConfig {
  // model hyperparameters
  double alpha = 1.0;
  double mu0 = 0.0;        // broadcast to a p-vector
  double lambda0 = 1e-6;   // Lambda0 = lambda0 * I
  double nu0 = 1e-2;
  double s0 = 1.0;
  // basis
  int p = 0;               // 0: choose by FPCA
  int p_min = 6;
  int p_max = 12;
  int spline_order = 4;
  double fve_threshold = 0.95;
  bool fpca_denoise = true;
  // spatial
  double h = 0.0;
  std::vector<double> h_grid = {0.0, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
  std::string disconnected = "sentinel";  // sentinel | zero
  // mcmc
  int iterations = 4000;
  int burn_in = 2000;
  int thin = 1;
  uint64_t seed = 1;
  double proposal_sd = 0.05;
  bool adapt_proposal = true;
  std::string likelihood_form = "conditional";  // conditional | independence
  std::string init = "singletons";              // singletons | single_cluster
  std::optional<double> fix_phi;
  // execution
  int jobs = 1;

  static RunConfig from_json_text(const std::string& text);
  // parse file (if non-empty path), then apply override JSON snippets
  static RunConfig load(const std::string& config_path, const std::string& overrides_json);
  std::string to_json() const;

  McmcConfig mcmc() const;
  LikelihoodForm form() const;
  DisconnectedPolicy disconnected_policy() const;
  Hyperparams hyperparams(int p_resolved) const;
  int resolve_p(const CurveMatrix& curves) const;
};

}  // namespace scc

#endif
