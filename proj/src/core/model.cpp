#include "model.hpp"

#include <cmath>
#include <map>

#include "errors.hpp"

namespace scc {

int Partition::num_clusters() const {
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);
  return k;
}

std::vector<std::vector<int>> Partition::groups() const {
  std::vector<std::vector<int>> g(num_clusters());
  for (int i = 0; i < n(); ++i) g[labels[i]].push_back(i);
  return g;
}

Partition Partition::canonical(const std::vector<int>& raw) {
  Partition p;
  p.labels.resize(raw.size());
  std::map<int, int> remap;
  int next = 0;
  for (size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(raw[i], next);
    if (inserted) ++next;
    p.labels[i] = it->second;
  }
  return p;
}

static double logdet_spd(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) fail(ErrorCode::Numeric, std::string(what) + ": not positive definite");
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i) s += std::log(llt.matrixL()(i, i));
  return 2.0 * s;
}

GwdpModel::GwdpModel(const CurveMatrix& curves, const BasisSet& basis, const AdjacencyGraph& graph,
                     const CarBounds& bounds, Hyperparams hyper, LikelihoodForm form)
    : curves_(&curves),
      basis_(&basis),
      graph_(&graph),
      bounds_(&bounds),
      hyper_(std::move(hyper)),
      form_(form),
      n_(curves.n()),
      t_(curves.t()),
      p_(basis.p) {
  if (graph.n() != n_) fail(ErrorCode::Mismatch, "model: graph and curves have different n");
  if (basis.eval.rows() != t_) fail(ErrorCode::Mismatch, "model: basis grid size differs from curves");
  if (hyper_.mu0.size() != p_ || hyper_.lambda0.rows() != p_)
    fail(ErrorCode::Mismatch, "model: hyperparameter dimensions do not match basis size");
  yt_ = curves.values.transpose();
  xtx_ = basis.eval.transpose() * basis.eval;
  lam_star_llt_.compute(xtx_ + hyper_.lambda0);
  if (lam_star_llt_.info() != Eigen::Success)
    fail(ErrorCode::Numeric, "model: xi'xi + Lambda0 not positive definite");
  logdet_lam0_ = logdet_spd(hyper_.lambda0, "Lambda0");
  logdet_lam_star_ = 0.0;
  for (int i = 0; i < p_; ++i) logdet_lam_star_ += 2.0 * std::log(lam_star_llt_.matrixL()(i, i));
  mu0_lam0_mu0_ = hyper_.mu0.dot(hyper_.lambda0 * hyper_.mu0);
}

void GwdpModel::check_state(const ModelState& state) const {
  if (static_cast<int>(state.labels.size()) != n_)
    fail(ErrorCode::Mismatch, "model: state has wrong number of regions");
  for (int l : state.labels)
    if (l < 0 || l >= static_cast<int>(state.params.size()))
      fail(ErrorCode::Mismatch, "model: label points to missing cluster params");
}

Eigen::MatrixXd GwdpModel::residual_columns(const ModelState& state) const {
  check_state(state);
  Eigen::MatrixXd e(t_, n_);
  for (int i = 0; i < n_; ++i) refresh_residual_column(e, state, i);
  return e;
}

void GwdpModel::refresh_residual_column(Eigen::MatrixXd& e, const ModelState& state, int i) const {
  const ClusterParams& cp = state.params[state.labels[i]];
  if (!(cp.sigma2 > 0.0)) fail(ErrorCode::Numeric, "model: sigma2 must be positive");
  e.col(i) = (yt_.col(i) - basis_->eval * cp.beta) / std::sqrt(cp.sigma2);
}

Eigen::MatrixXd GwdpModel::standardized_residuals(const ModelState& state) const {
  return residual_columns(state).transpose();
}

double GwdpModel::state_conditional_loglik(int i, const ModelState& state,
                                           const Eigen::MatrixXd& e,
                                           const ClusterParams& candidate) const {
  if (!(candidate.sigma2 > 0.0)) fail(ErrorCode::Numeric, "conditional loglik: sigma2 <= 0");
  const double sigma = std::sqrt(candidate.sigma2);
  Eigen::VectorXd mean = basis_->eval * candidate.beta;
  if (form_ == LikelihoodForm::kConditional && state.phi != 0.0) {
    // exact CAR full conditional: offset sigma*phi*sum_j A_ij eps*_j(t)
    for (int j : graph_->neighbors[i]) mean.noalias() += (sigma * state.phi) * e.col(j);
  }
  const double rss = (yt_.col(i) - mean).squaredNorm();
  if (!std::isfinite(rss)) fail(ErrorCode::Numeric, "conditional loglik: non-finite residuals");
  return -0.5 * t_ * std::log(2.0 * M_PI * candidate.sigma2) - rss / (2.0 * candidate.sigma2);
}

double GwdpModel::state_conditional_loglik(int i, const ModelState& state,
                                           const ClusterParams& candidate) const {
  return state_conditional_loglik(i, state, residual_columns(state), candidate);
}

Eigen::VectorXd GwdpModel::raw_residual_offset(int i, const ModelState& state,
                                               const Eigen::MatrixXd& e) const {
  Eigen::VectorXd offset = Eigen::VectorXd::Zero(t_);
  if (form_ == LikelihoodForm::kConditional && state.phi != 0.0) {
    for (int j : graph_->neighbors[i]) {
      const double sigma_j = std::sqrt(state.params[state.labels[j]].sigma2);
      offset.noalias() += (state.phi * sigma_j) * e.col(j);
    }
  }
  return offset;
}

double GwdpModel::new_cluster_marginal_loglik(int i, const ModelState& state,
                                              const Eigen::MatrixXd& e) const {
  Eigen::VectorXd y_adj = yt_.col(i) - raw_residual_offset(i, state, e);
  const Eigen::VectorXd rhs = basis_->eval.transpose() * y_adj + hyper_.lambda0 * hyper_.mu0;
  const Eigen::VectorXd mu_star = lam_star_llt_.solve(rhs);
  const double a_star = (t_ + hyper_.nu0) / 2.0;
  const double b_star = 0.5 * (hyper_.nu0 * hyper_.s0sq + mu0_lam0_mu0_ + y_adj.squaredNorm() -
                               mu_star.dot(rhs));
  if (!(b_star > 0.0)) fail(ErrorCode::Numeric, "marginal loglik: b* <= 0 (corrupted state)");
  return std::lgamma(a_star) - std::lgamma(hyper_.nu0 / 2.0) +
         (hyper_.nu0 / 2.0) * std::log(hyper_.nu0 * hyper_.s0sq / 2.0) - a_star * std::log(b_star) +
         0.5 * (logdet_lam0_ - logdet_lam_star_) - 0.5 * t_ * std::log(2.0 * M_PI);
}

double GwdpModel::new_cluster_marginal_loglik(int i, const ModelState& state) const {
  return new_cluster_marginal_loglik(i, state, residual_columns(state));
}

GwdpModel::PhiTerms GwdpModel::phi_terms(const Eigen::MatrixXd& e) const {
  PhiTerms terms;
  terms.tr_ee = e.squaredNorm();
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j : graph_->neighbors[i])
      if (j > i) s += e.col(i).dot(e.col(j));
  terms.tr_eea = 2.0 * s;
  return terms;
}

double GwdpModel::phi_loglik_from_terms(const PhiTerms& terms, double phi) const {
  return 0.5 * t_ * car_log_det(*bounds_, phi) + 0.5 * phi * terms.tr_eea - 0.5 * terms.tr_ee;
}

double GwdpModel::phi_loglik(const ModelState& state, double phi) const {
  return phi_loglik_from_terms(phi_terms(residual_columns(state)), phi);
}

double GwdpModel::per_state_density(int i, const ModelState& state,
                                    const Eigen::MatrixXd& e) const {
  return state_conditional_loglik(i, state, e, state.params[state.labels[i]]);
}

double GwdpModel::per_state_density(int i, const ModelState& state) const {
  return per_state_density(i, state, residual_columns(state));
}

}  // namespace scc
