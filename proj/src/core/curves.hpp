#ifndef SCC_CURVES_HPP
#define SCC_CURVES_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "csv.hpp"

namespace scc {

struct CumulativeSeries {
  std::string region_id;
  std::vector<Date> dates;        // strictly increasing, no gaps after ingestion
  std::vector<long long> counts;  // cumulative confirmed cases
};

// n regions x T grid points of scaled growth-rate values; rows sum to 1.
struct CurveMatrix {
  Eigen::MatrixXd values;               // n x T
  std::vector<std::string> region_ids;  // length n
  int n() const { return static_cast<int>(values.rows()); }
  int t() const { return static_cast<int>(values.cols()); }
  // grid point j is j/(T-1) on [0,1]
  double grid(int j) const { return static_cast<double>(j) / (values.cols() - 1); }
};

struct BasisSet {
  Eigen::MatrixXd eval;  // T x p, discrete Gram eval'*eval*dt == I
  int p = 0;
  int order = 4;
  std::vector<double> interior_knots;
};

std::vector<CumulativeSeries> load_cumulative_cases(
    const std::string& path, std::optional<Date> start = std::nullopt,
    std::optional<Date> end = std::nullopt);

// Repairs negative daily increments by removing the miscounted cases from the
// most recent earlier days with positive increments. Idempotent; output is
// non-decreasing with the final value unchanged.
CumulativeSeries correct_negatives(const CumulativeSeries& s);

// Total cases removed by correct_negatives (0 if the series was clean).
long long miscount_removed(const CumulativeSeries& before, const CumulativeSeries& after);

CurveMatrix to_growth_curves(const std::vector<CumulativeSeries>& series);

BasisSet build_basis(int p, int t_grid, int order = 4);

struct FpcaOptions {
  double fve_threshold = 0.95;
  // Remove the measurement-noise floor (Rice estimate + Marchenko-Pastur
  // edge) before computing the variance fractions.
  bool denoise = false;
};

// Returns p = 1 + p' where p' is the number of components reaching the FVE
// threshold.
int fpca_select_p(const CurveMatrix& curves, const FpcaOptions& opt = {});

// CSV round trip: header "region_id,t_0,...,t_{T-1}".
CurveMatrix read_curve_csv(const std::string& path);
std::string curve_csv_text(const CurveMatrix& m, const std::string& config_echo = "");

}  // namespace scc

#endif
