#ifndef SCC_MODEL_HPP
#define SCC_MODEL_HPP

#include <Eigen/Dense>
#include <vector>

#include "curves.hpp"
#include "spatial.hpp"

namespace scc {

struct Hyperparams {
  Eigen::VectorXd mu0;      // length p
  Eigen::MatrixXd lambda0;  // p x p SPD prior precision scale
  double nu0 = 1e-2;
  double s0sq = 1.0;
  double alpha = 1.0;
  double h = 0.0;

  static Hyperparams defaults(int p) {
    Hyperparams hp;
    hp.mu0 = Eigen::VectorXd::Zero(p);
    hp.lambda0 = 1e-6 * Eigen::MatrixXd::Identity(p, p);
    return hp;
  }
};

struct ClusterParams {
  Eigen::VectorXd beta;
  double sigma2 = 1.0;
};

// Cluster labels, canonicalized by order of first appearance.
struct Partition {
  std::vector<int> labels;

  int n() const { return static_cast<int>(labels.size()); }
  int num_clusters() const;
  std::vector<std::vector<int>> groups() const;
  static Partition canonical(const std::vector<int>& raw);
  bool operator==(const Partition&) const = default;
};

struct ModelState {
  std::vector<int> labels;            // cluster index per region
  std::vector<ClusterParams> params;  // one per non-empty cluster
  double phi = 0.0;
};

enum class LikelihoodForm { kConditional, kIndependence };

// Likelihood evaluations shared by the sampler and by CPO/LPML. Pure given a
// state snapshot; safe for concurrent read-only use.
class GwdpModel {
 public:
  GwdpModel(const CurveMatrix& curves, const BasisSet& basis, const AdjacencyGraph& graph,
            const CarBounds& bounds, Hyperparams hyper,
            LikelihoodForm form = LikelihoodForm::kConditional);

  int n() const { return n_; }
  int t() const { return t_; }
  int p() const { return p_; }
  const Eigen::MatrixXd& yt() const { return yt_; }        // T x n
  const Eigen::MatrixXd& xi() const { return basis_->eval; }  // T x p
  const Eigen::MatrixXd& xtx() const { return xtx_; }
  const AdjacencyGraph& graph() const { return *graph_; }
  const CarBounds& bounds() const { return *bounds_; }
  const Hyperparams& hyper() const { return hyper_; }
  LikelihoodForm form() const { return form_; }

  // row i = (Y_i - xi*beta_{c_i}) / sigma_{c_i};  n x T per the module contract
  Eigen::MatrixXd standardized_residuals(const ModelState& state) const;
  // T x n layout used internally by the sampler
  Eigen::MatrixXd residual_columns(const ModelState& state) const;
  void refresh_residual_column(Eigen::MatrixXd& e, const ModelState& state, int i) const;

  // log f(Y_i | candidate params, phi, rest) with e = residual_columns(state).
  double state_conditional_loglik(int i, const ModelState& state, const Eigen::MatrixXd& e,
                                  const ClusterParams& candidate) const;
  double state_conditional_loglik(int i, const ModelState& state,
                                  const ClusterParams& candidate) const;

  // Closed-form NIG marginal of the (CAR-adjusted) data vector of region i.
  double new_cluster_marginal_loglik(int i, const ModelState& state,
                                     const Eigen::MatrixXd& e) const;
  double new_cluster_marginal_loglik(int i, const ModelState& state) const;

  // (T/2) log det(I-phi*A) + (phi/2) tr(E'E A) - (1/2) tr(E'E)
  double phi_loglik(const ModelState& state, double phi) const;
  // The two E-dependent constants, reusable across phi evaluations.
  struct PhiTerms {
    double tr_ee = 0.0;    // tr(E'E)
    double tr_eea = 0.0;   // tr(E'E A)
  };
  PhiTerms phi_terms(const Eigen::MatrixXd& e) const;
  double phi_loglik_from_terms(const PhiTerms& terms, double phi) const;

  // log f(y_i | theta) at region i's own cluster params; used by CPO/LPML.
  double per_state_density(int i, const ModelState& state, const Eigen::MatrixXd& e) const;
  double per_state_density(int i, const ModelState& state) const;

  // T-vector of the conditional CAR adjustment phi * sum_j A_ij r_j using
  // unstandardized neighbor residuals; zero vector under the independence form.
  Eigen::VectorXd raw_residual_offset(int i, const ModelState& state,
                                      const Eigen::MatrixXd& e) const;

 private:
  void check_state(const ModelState& state) const;

  const CurveMatrix* curves_;
  const BasisSet* basis_;
  const AdjacencyGraph* graph_;
  const CarBounds* bounds_;
  Hyperparams hyper_;
  LikelihoodForm form_;
  int n_, t_, p_;
  Eigen::MatrixXd yt_;   // T x n
  Eigen::MatrixXd xtx_;  // p x p
  Eigen::LLT<Eigen::MatrixXd> lam_star_llt_;  // xtx + lambda0
  double logdet_lam0_ = 0.0;
  double logdet_lam_star_ = 0.0;
  double mu0_lam0_mu0_ = 0.0;
};

}  // namespace scc

#endif
