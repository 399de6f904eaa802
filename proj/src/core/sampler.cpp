#include "sampler.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "log.hpp"

namespace scc {

void McmcConfig::validate() const {
  if (iterations <= 0) fail(ErrorCode::InvalidArgument, "mcmc: iterations must be positive");
  if (burn_in < 0 || burn_in >= iterations)
    fail(ErrorCode::InvalidArgument, "mcmc: need 0 <= burn_in < iterations");
  if (thin < 1) fail(ErrorCode::InvalidArgument, "mcmc: thin must be >= 1");
  if (!(proposal_sd > 0.0)) fail(ErrorCode::InvalidArgument, "mcmc: proposal_sd must be > 0");
}

GibbsSampler::GibbsSampler(const GwdpModel& model, const WeightMatrix& weights,
                           const McmcConfig& config)
    : model_(model), weights_(weights), cfg_(config), rng_(config.seed), proposal_sd_(config.proposal_sd) {
  cfg_.validate();
  if (weights.w.rows() != model.n()) fail(ErrorCode::Mismatch, "sampler: weight matrix size mismatch");

  const int n = model.n();
  state_.phi = cfg_.fix_phi.value_or(0.0);
  if (cfg_.fix_phi && !model.bounds().contains(*cfg_.fix_phi) && *cfg_.fix_phi != 0.0)
    fail(ErrorCode::Domain, "sampler: fix_phi outside the CAR support");
  if (cfg_.init == InitMode::kSingletons) {
    state_.labels.resize(n);
    members_.resize(n);
    for (int i = 0; i < n; ++i) {
      state_.labels[i] = i;
      members_[i] = {i};
    }
    state_.params.assign(n, ClusterParams{Eigen::VectorXd::Zero(model.p()), 1.0});
  } else {
    state_.labels.assign(n, 0);
    members_.assign(1, {});
    for (int i = 0; i < n; ++i) members_[0].push_back(i);
    state_.params.assign(1, ClusterParams{Eigen::VectorXd::Zero(model.p()), 1.0});
  }
  step1_update_params();  // replaces the placeholder params with posterior draws
}

void GibbsSampler::set_state(const ModelState& s) {
  state_ = s;
  members_.assign(Partition{s.labels}.num_clusters(), {});
  for (int i = 0; i < model_.n(); ++i) members_[s.labels[i]].push_back(i);
  e_ = model_.residual_columns(state_);
}

ClusterParams GibbsSampler::sample_cluster_params(const std::vector<int>& members) {
  const int m = static_cast<int>(members.size());
  const int t = model_.t();
  const int p = model_.p();
  const auto& xi = model_.xi();
  const auto& yt = model_.yt();
  const auto& hyper = model_.hyper();
  const auto& a = model_.graph().a;
  const double phi = state_.phi;

  // within-cluster adjacency terms
  double edge_sum = 0.0;              // 1' A_cc 1
  Eigen::VectorXd deg = Eigen::VectorXd::Zero(m);  // A_cc 1
  double tr_cross = 0.0;              // sum over within-cluster edges of 2 <Y_i, Y_j>
  for (int ii = 0; ii < m; ++ii)
    for (int jj = ii + 1; jj < m; ++jj)
      if (a(members[ii], members[jj]) != 0.0) {
        edge_sum += 2.0;
        deg(ii) += 1.0;
        deg(jj) += 1.0;
        tr_cross += 2.0 * yt.col(members[ii]).dot(yt.col(members[jj]));
      }

  const double one_m_one = m - phi * edge_sum;  // 1'(I - phi A_cc)1 > 0 inside the support
  Eigen::MatrixXd lambda_n = one_m_one * model_.xtx() + hyper.lambda0;
  // xi' [Y]_c (I - phi A_cc) 1
  Eigen::VectorXd v = Eigen::VectorXd::Zero(t);
  double tr_yy = 0.0;
  for (int ii = 0; ii < m; ++ii) {
    v.noalias() += (1.0 - phi * deg(ii)) * yt.col(members[ii]);
    tr_yy += yt.col(members[ii]).squaredNorm();
  }
  Eigen::VectorXd rhs = xi.transpose() * v + hyper.lambda0 * hyper.mu0;
  Eigen::LLT<Eigen::MatrixXd> llt(lambda_n);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::Numeric, "step1: Lambda_n not positive definite");
  Eigen::VectorXd mu_n = llt.solve(rhs);

  const double a_n = (static_cast<double>(t) * m + hyper.nu0) / 2.0;
  const double tr_term = tr_yy - phi * tr_cross;  // tr([Y]'[Y](I - phi A_cc))
  const double b_n = 0.5 * (hyper.nu0 * hyper.s0sq + hyper.mu0.dot(hyper.lambda0 * hyper.mu0) +
                            tr_term - mu_n.dot(rhs));
  if (!(b_n > 0.0)) fail(ErrorCode::Numeric, "step1: b_n <= 0 (corrupted state)");

  ClusterParams cp;
  cp.sigma2 = 1.0 / rng_.gamma(a_n, b_n);
  Eigen::VectorXd z(p);
  for (int k = 0; k < p; ++k) z(k) = rng_.normal();
  // beta = mu_n + sqrt(sigma2) * L^{-T} z with Lambda_n = L L'
  Eigen::VectorXd w = llt.matrixU().solve(z);
  cp.beta = mu_n + std::sqrt(cp.sigma2) * w;
  return cp;
}

void GibbsSampler::step1_update_params() {
  for (size_t c = 0; c < members_.size(); ++c) state_.params[c] = sample_cluster_params(members_[c]);
  e_ = model_.residual_columns(state_);
}

ClusterParams GibbsSampler::draw_singleton_params(int i) { return sample_cluster_params({i}); }

void GibbsSampler::remove_region(int i) {
  const int c = state_.labels[i];
  auto& mem = members_[c];
  mem.erase(std::find(mem.begin(), mem.end(), i));
  if (mem.empty()) {
    // swap-pop the emptied cluster slot
    const int last = static_cast<int>(members_.size()) - 1;
    if (c != last) {
      members_[c] = std::move(members_[last]);
      state_.params[c] = std::move(state_.params[last]);
      for (int j : members_[c]) state_.labels[j] = c;
    }
    members_.pop_back();
    state_.params.pop_back();
  }
  state_.labels[i] = -1;
}

std::vector<double> GibbsSampler::log_weights_of_removed(int i) const {
  const size_t k = members_.size();
  std::vector<double> logw(k + 1);
  for (size_t c = 0; c < k; ++c) {
    double wsum = 0.0;
    for (int j : members_[c]) wsum += weights_.w(i, j);
    const double lw = wsum > 0.0 ? std::log(wsum) : -INFINITY;
    logw[c] = lw + model_.state_conditional_loglik(i, state_, e_, state_.params[c]);
  }
  logw[k] = std::log(model_.hyper().alpha) + model_.new_cluster_marginal_loglik(i, state_, e_);
  return logw;
}

std::vector<double> GibbsSampler::step2_log_weights(int i) const {
  GibbsSampler copy(*this);
  copy.remove_region(i);
  return copy.log_weights_of_removed(i);
}

void GibbsSampler::assign_region(int i, int cluster, ClusterParams&& fresh) {
  if (cluster == static_cast<int>(members_.size())) {
    members_.push_back({i});
    state_.params.push_back(std::move(fresh));
  } else {
    members_[cluster].push_back(i);
  }
  state_.labels[i] = cluster;
  model_.refresh_residual_column(e_, state_, i);
}

void GibbsSampler::step2_update_partition() {
  const int n = model_.n();
  for (int i = 0; i < n; ++i) {
    remove_region(i);
    std::vector<double> logw = log_weights_of_removed(i);
    const int k = rng_.categorical_log(logw);
    ClusterParams fresh;
    if (k == static_cast<int>(members_.size())) fresh = draw_singleton_params(i);
    assign_region(i, k, std::move(fresh));
  }
}

bool GibbsSampler::step3_update_phi() {
  if (cfg_.fix_phi) return false;
  const auto& b = model_.bounds();
  const double phi = state_.phi;
  const double sd = proposal_sd_;
  const double proposal = rng_.truncated_normal(phi, sd, b.ell, b.u);

  const auto terms = model_.phi_terms(e_);
  const double delta = model_.phi_loglik_from_terms(terms, proposal) -
                       model_.phi_loglik_from_terms(terms, phi);
  // Hastings correction for the truncated-normal proposal
  auto log_z = [&](double center) {
    return std::log(norm_cdf((b.u - center) / sd) - norm_cdf((b.ell - center) / sd));
  };
  const double log_accept = delta + log_z(phi) - log_z(proposal);
  if (std::log(rng_.uniform()) < log_accept) {
    state_.phi = proposal;
    return true;
  }
  return false;
}

void GibbsSampler::sweep() {
  step1_update_params();
  step2_update_partition();
  step3_update_phi();
}

Draw GibbsSampler::record(int iter) const {
  Draw d;
  d.iter = iter;
  d.phi = state_.phi;
  d.partition = Partition::canonical(state_.labels);
  d.clusters.resize(members_.size());
  // canonical order: first appearance in the label vector
  std::vector<int> canon_to_internal(members_.size(), -1);
  for (int i = 0; i < model_.n(); ++i) {
    const int c = d.partition.labels[i];
    if (canon_to_internal[c] < 0) canon_to_internal[c] = state_.labels[i];
  }
  for (size_t c = 0; c < members_.size(); ++c) d.clusters[c] = state_.params[canon_to_internal[c]];
  return d;
}

McmcTrace GibbsSampler::run() {
  McmcTrace trace;
  trace.seed = cfg_.seed;
  int accepted = 0, attempted = 0;
  int window_accepted = 0, window_attempted = 0;
  for (int iter = 1; iter <= cfg_.iterations; ++iter) {
    step1_update_params();
    step2_update_partition();
    const bool moved = step3_update_phi();
    const bool in_burn = iter <= cfg_.burn_in;
    if (!cfg_.fix_phi) {
      if (in_burn && cfg_.adapt_proposal) {
        window_attempted++;
        window_accepted += moved ? 1 : 0;
        if (window_attempted == 100) {
          const double rate = static_cast<double>(window_accepted) / window_attempted;
          if (rate < 0.30) proposal_sd_ *= 0.8;
          if (rate > 0.45) proposal_sd_ *= 1.25;
          const auto& b = model_.bounds();
          proposal_sd_ = std::clamp(proposal_sd_, 1e-5, b.u - b.ell);
          window_attempted = window_accepted = 0;
        }
      } else if (!in_burn) {
        attempted++;
        accepted += moved ? 1 : 0;
      }
    }
    if (!in_burn && (iter - cfg_.burn_in - 1) % cfg_.thin == 0) trace.draws.push_back(record(iter));
    if (iter % 500 == 0)
      log::debug("iter %d: K=%d phi=%.4f", iter, static_cast<int>(members_.size()), state_.phi);
  }
  trace.acceptance_rate = attempted > 0 ? static_cast<double>(accepted) / attempted : 0.0;
  trace.final_proposal_sd = proposal_sd_;
  return trace;
}

McmcTrace run_mcmc(const GwdpModel& model, const WeightMatrix& weights, const McmcConfig& config) {
  GibbsSampler sampler(model, weights, config);
  return sampler.run();
}

}  // namespace scc
