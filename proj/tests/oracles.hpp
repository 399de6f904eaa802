// Independent reference computations used to freeze expected values. These
// deliberately avoid the code paths they check: dense matrix algebra and
// brute-force loops instead of cached spectra and incremental updates.
#ifndef SCC_TEST_ORACLES_HPP
#define SCC_TEST_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// log N(x; mean, Q^{-1}) for a dense precision matrix Q.
inline double mvn_logpdf_precision(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                                   const Eigen::MatrixXd& q) {
  const int n = static_cast<int>(x.size());
  Eigen::LLT<Eigen::MatrixXd> llt(q);
  double logdet = 0.0;
  for (int i = 0; i < n; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  const Eigen::VectorXd d = x - mean;
  return 0.5 * logdet - 0.5 * d.dot(q * d) - 0.5 * n * std::log(2.0 * M_PI);
}

// Joint log density of the standardized-residual matrix e (T x n) under
// vec ~ N(0, (I - phi A)^{-1} (x) I_T): columns over regions at each time.
inline double car_joint_logpdf(const Eigen::MatrixXd& e, const Eigen::MatrixXd& a, double phi) {
  const int n = static_cast<int>(a.rows());
  const Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n) - phi * a;
  double total = 0.0;
  for (int t = 0; t < e.rows(); ++t)
    total += mvn_logpdf_precision(e.row(t).transpose(), Eigen::VectorXd::Zero(n), q);
  return total;
}

// Trapezoid-free 2-D midpoint quadrature of f(beta, sigma2) over a box.
inline double quad2d(const std::function<double(double, double)>& f, double b_lo, double b_hi,
                     double s_lo, double s_hi, int nb, int ns) {
  const double db = (b_hi - b_lo) / nb;
  const double ds = (s_hi - s_lo) / ns;
  double acc = 0.0;
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < ns; ++j)
      acc += f(b_lo + (i + 0.5) * db, s_lo + (j + 0.5) * ds);
  return acc * db * ds;
}

// Multi-observation NIG marginal at phi=0: m curves sharing (beta, sigma2).
// Used by the stationarity enumeration.
inline double nig_marginal_stacked(const Eigen::MatrixXd& yc /* T x m */, const Eigen::MatrixXd& xi,
                                   const Eigen::VectorXd& mu0, const Eigen::MatrixXd& lambda0,
                                   double nu0, double s0sq) {
  const int t = static_cast<int>(yc.rows());
  const int m = static_cast<int>(yc.cols());
  const Eigen::MatrixXd lam_n = m * (xi.transpose() * xi) + lambda0;
  const Eigen::VectorXd rhs = xi.transpose() * yc.rowwise().sum() + lambda0 * mu0;
  const Eigen::VectorXd mu_n = lam_n.llt().solve(rhs);
  const double a_n = (static_cast<double>(t) * m + nu0) / 2.0;
  const double b_n =
      0.5 * (nu0 * s0sq + mu0.dot(lambda0 * mu0) + yc.squaredNorm() - mu_n.dot(rhs));
  auto logdet = [](const Eigen::MatrixXd& mat) {
    Eigen::LLT<Eigen::MatrixXd> llt(mat);
    double s = 0.0;
    for (int i = 0; i < mat.rows(); ++i) s += 2.0 * std::log(llt.matrixL()(i, i));
    return s;
  };
  return -0.5 * t * m * std::log(2.0 * M_PI) + 0.5 * (logdet(lambda0) - logdet(lam_n)) +
         (nu0 / 2.0) * std::log(nu0 * s0sq / 2.0) - a_n * std::log(b_n) + std::lgamma(a_n) -
         std::lgamma(nu0 / 2.0);
}

// All partitions of {0..n-1} (restricted growth strings).
inline std::vector<std::vector<int>> all_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> labels(n, 0);
  std::function<void(int, int)> rec = [&](int i, int maxl) {
    if (i == n) {
      out.push_back(labels);
      return;
    }
    for (int l = 0; l <= maxl + 1; ++l) {
      labels[i] = l;
      rec(i + 1, std::max(maxl, l));
    }
  };
  rec(0, -1);
  return out;
}

}  // namespace oracle

#endif
