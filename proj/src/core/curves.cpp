#include "curves.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace scc {

std::vector<CumulativeSeries> load_cumulative_cases(const std::string& path,
                                                    std::optional<Date> start,
                                                    std::optional<Date> end) {
  auto table = csv::read_file(path);
  const int c_region = table.column("region_id");
  const int c_date = table.column("date");
  const int c_count = table.column("cumulative_cases");
  if (c_region < 0 || c_date < 0 || c_count < 0)
    fail(ErrorCode::Format,
         path + ": required columns region_id,date,cumulative_cases (got header with " +
             std::to_string(table.header.size()) + " columns)");

  std::map<std::string, std::map<int, long long>> by_region;  // region -> serial -> count
  std::vector<std::string> order;
  for (const auto& row : table.rows) {
    const std::string& region = row[c_region];
    const Date d = Date::parse(row[c_date]);
    if (start && d < *start) continue;
    if (end && *end < d) continue;
    long long count = 0;
    try {
      count = std::stoll(row[c_count]);
    } catch (const std::exception&) {
      fail(ErrorCode::Format, path + ": non-integer cumulative_cases '" + row[c_count] + "'");
    }
    if (count < 0) fail(ErrorCode::Format, path + ": negative cumulative_cases for " + region);
    auto [it, inserted] = by_region.try_emplace(region);
    if (inserted) order.push_back(region);
    if (!it->second.emplace(d.serial, count).second)
      fail(ErrorCode::DuplicateRecord,
           path + ": duplicate record for (" + region + ", " + d.iso() + ")");
  }

  std::vector<CumulativeSeries> out;
  out.reserve(order.size());
  for (const auto& region : order) {
    const auto& days = by_region[region];
    CumulativeSeries s;
    s.region_id = region;
    int prev = 0;
    bool first = true;
    for (const auto& [serial, count] : days) {
      if (!first && serial != prev + 1)
        fail(ErrorCode::DateGap, path + ": gap in dates for region " + region + " after " +
                                     Date{prev}.iso() + " (next is " + Date{serial}.iso() + ")");
      s.dates.push_back(Date{serial});
      s.counts.push_back(count);
      prev = serial;
      first = false;
    }
    out.push_back(std::move(s));
  }
  return out;
}

CumulativeSeries correct_negatives(const CumulativeSeries& s) {
  CumulativeSeries out = s;
  const size_t n = s.counts.size();
  if (n == 0) return out;
  // Work on increments; the initial level acts as the oldest increment so the
  // deficit is always absorbable when counts are non-negative.
  std::vector<long long> inc(n);
  inc[0] = s.counts[0];
  for (size_t t = 1; t < n; ++t) inc[t] = s.counts[t] - s.counts[t - 1];
  for (size_t t = 1; t < n; ++t) {
    if (inc[t] >= 0) continue;
    long long deficit = -inc[t];
    inc[t] = 0;
    for (size_t j = t; j-- > 0 && deficit > 0;) {
      const long long take = std::min(inc[j], deficit);
      inc[j] -= take;
      deficit -= take;
    }
    if (deficit > 0)
      fail(ErrorCode::Numeric, "correct_negatives: unabsorbable miscount in region " + s.region_id);
  }
  long long acc = 0;
  for (size_t t = 0; t < n; ++t) {
    acc += inc[t];
    out.counts[t] = acc;
  }
  return out;
}

long long miscount_removed(const CumulativeSeries& before, const CumulativeSeries& after) {
  long long total = 0;
  for (size_t t = 0; t < before.counts.size(); ++t) {
    const long long d = before.counts[t] - after.counts[t];
    total = std::max(total, d);
  }
  return total;
}

CurveMatrix to_growth_curves(const std::vector<CumulativeSeries>& series) {
  if (series.empty()) fail(ErrorCode::InvalidArgument, "to_growth_curves: no series");
  const size_t len = series.front().counts.size();
  if (len < 3) fail(ErrorCode::InvalidArgument, "to_growth_curves: series shorter than 3 days");
  for (const auto& s : series)
    if (s.counts.size() != len)
      fail(ErrorCode::Mismatch, "to_growth_curves: series lengths differ (region " + s.region_id + ")");

  const int T = static_cast<int>(len) - 1;
  CurveMatrix m;
  m.values.resize(static_cast<int>(series.size()), T);
  for (size_t i = 0; i < series.size(); ++i) {
    const auto& f = series[i].counts;
    double total = 0.0;
    for (int t = 0; t < T; ++t) {
      const long long inc = f[t + 1] - f[t];
      if (inc < 0)
        fail(ErrorCode::InvalidArgument, "to_growth_curves: negative increment in region " +
                                             series[i].region_id + " (run correct_negatives first)");
      m.values(static_cast<int>(i), t) = static_cast<double>(inc);
      total += static_cast<double>(inc);
    }
    if (total <= 0.0)
      fail(ErrorCode::Degenerate,
           "to_growth_curves: region " + series[i].region_id + " has zero total increments");
    m.values.row(static_cast<int>(i)) /= total;
    m.region_ids.push_back(series[i].region_id);
  }
  return m;
}

namespace {

// Cox-de Boor evaluation of all p B-spline basis functions of the given order
// at x, on the clamped uniform knot vector with p-order interior knots.
void bspline_row(double x, int p, int order, const std::vector<double>& knots,
                 Eigen::RowVectorXd& row) {
  row.setZero(p);
  const int nk = static_cast<int>(knots.size());
  // locate the knot span [knots[k], knots[k+1]) containing x; clamp right end
  int k = order - 1;
  while (k < nk - order - 1 && x >= knots[k + 1]) ++k;
  // order-1 case: degree 0
  std::vector<double> N(order, 0.0);
  N[0] = 1.0;
  for (int deg = 1; deg < order; ++deg) {
    double saved = 0.0;
    for (int r = 0; r < deg; ++r) {
      const int left_i = k - deg + 1 + r;
      const double den = knots[left_i + deg] - knots[left_i];
      double term = 0.0;
      if (den > 0.0) term = N[r] / den;
      N[r] = saved + (knots[left_i + deg] - x) * term;
      saved = (x - knots[left_i]) * term;
    }
    N[deg] = saved;
  }
  for (int r = 0; r < order; ++r) {
    const int j = k - order + 1 + r;
    if (j >= 0 && j < p) row(j) = N[r];
  }
}

}  // namespace

BasisSet build_basis(int p, int t_grid, int order) {
  if (order < 1) fail(ErrorCode::InvalidArgument, "build_basis: order must be >= 1");
  if (p < order) fail(ErrorCode::InvalidArgument, "build_basis: need p >= order");
  if (t_grid <= p) fail(ErrorCode::InvalidArgument, "build_basis: need T > p");

  BasisSet b;
  b.p = p;
  b.order = order;
  const int n_interior = p - order;
  std::vector<double> knots;
  for (int i = 0; i < order; ++i) knots.push_back(0.0);
  for (int i = 1; i <= n_interior; ++i) {
    const double x = static_cast<double>(i) / (n_interior + 1);
    knots.push_back(x);
    b.interior_knots.push_back(x);
  }
  for (int i = 0; i < order; ++i) knots.push_back(1.0);

  Eigen::MatrixXd raw(t_grid, p);
  Eigen::RowVectorXd row(p);
  for (int t = 0; t < t_grid; ++t) {
    double x = static_cast<double>(t) / (t_grid - 1);
    if (t == t_grid - 1) x = 1.0 - 1e-12;  // keep x inside the last span
    bspline_row(x, p, order, knots, row);
    raw.row(t) = row;
  }
  // right endpoint: only the last basis function is non-zero, with value 1
  raw.row(t_grid - 1).setZero();
  raw(t_grid - 1, p - 1) = 1.0;

  // Orthonormalize against the discrete L2 inner product sum f*g*dt.
  const double dt = 1.0 / (t_grid - 1);
  Eigen::MatrixXd gram = raw.transpose() * raw * dt;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::Rank, "build_basis: singular Gram matrix (p too large for grid)");
  const Eigen::MatrixXd L = llt.matrixL();
  if (L.diagonal().minCoeff() < 1e-10 * L.diagonal().maxCoeff())
    fail(ErrorCode::Rank, "build_basis: near-singular Gram matrix (p too large for grid)");
  // eval = raw * L^{-T}  =>  eval' * eval * dt = I
  b.eval = L.transpose().triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(raw);
  return b;
}

int fpca_select_p(const CurveMatrix& curves, const FpcaOptions& opt) {
  const int n = curves.n();
  const int T = curves.t();
  if (n < 2) fail(ErrorCode::InvalidArgument, "fpca_select_p: need at least 2 curves");
  if (!(opt.fve_threshold > 0.0 && opt.fve_threshold < 1.0))
    fail(ErrorCode::InvalidArgument, "fpca_select_p: fve_threshold must be in (0,1)");

  Eigen::MatrixXd centered = curves.values.rowwise() - curves.values.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  Eigen::VectorXd lambda = svd.singularValues().array().square() / (n - 1);
  const double lmax = lambda.size() ? lambda(0) : 0.0;
  if (lmax <= 0.0) fail(ErrorCode::Degenerate, "fpca_select_p: zero total variance");

  std::vector<double> kept;
  for (int i = 0; i < lambda.size(); ++i)
    if (lambda(i) > 1e-12 * lmax) kept.push_back(lambda(i));

  if (opt.denoise) {
    // Rice second-difference estimate of the white-noise variance, then keep
    // only eigenvalues above the Marchenko-Pastur bulk edge.
    double ss = 0.0;
    for (int i = 0; i < n; ++i)
      for (int t = 1; t + 1 < T; ++t) {
        const double d2 =
            curves.values(i, t + 1) - 2.0 * curves.values(i, t) + curves.values(i, t - 1);
        ss += d2 * d2;
      }
    const double sigma2 = ss / (6.0 * n * (T - 2));
    const double gamma = static_cast<double>(T) / std::max(1, n - 1);
    const double edge = sigma2 * (1.0 + std::sqrt(gamma)) * (1.0 + std::sqrt(gamma));
    std::vector<double> top;
    for (double l : kept)
      if (l > edge) top.push_back(l);
    if (!top.empty()) kept = std::move(top);
  }

  double total = 0.0;
  for (double l : kept) total += l;
  double acc = 0.0;
  int p_prime = static_cast<int>(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    acc += kept[i];
    if (acc / total >= opt.fve_threshold) {
      p_prime = static_cast<int>(i) + 1;
      break;
    }
  }
  return 1 + p_prime;
}

CurveMatrix read_curve_csv(const std::string& path) {
  auto table = csv::read_file(path);
  if (table.header.empty() || table.header[0] != "region_id")
    fail(ErrorCode::Format, path + ": curve CSV must start with region_id column");
  const int T = static_cast<int>(table.header.size()) - 1;
  if (T < 2) fail(ErrorCode::Format, path + ": curve CSV needs at least 2 grid columns");
  CurveMatrix m;
  m.values.resize(static_cast<int>(table.rows.size()), T);
  for (size_t i = 0; i < table.rows.size(); ++i) {
    m.region_ids.push_back(table.rows[i][0]);
    for (int t = 0; t < T; ++t) {
      try {
        m.values(static_cast<int>(i), t) = std::stod(table.rows[i][t + 1]);
      } catch (const std::exception&) {
        fail(ErrorCode::Format, path + ": non-numeric curve value for region " + table.rows[i][0]);
      }
    }
  }
  return m;
}

std::string curve_csv_text(const CurveMatrix& m, const std::string& config_echo) {
  std::ostringstream out;
  if (!config_echo.empty()) out << "# config " << config_echo << "\n";
  out << "region_id";
  for (int t = 0; t < m.t(); ++t) out << ",t_" << t;
  out << "\n";
  for (int i = 0; i < m.n(); ++i) {
    out << m.region_ids[i];
    for (int t = 0; t < m.t(); ++t) out << ',' << csv::format_double(m.values(i, t));
    out << "\n";
  }
  return out.str();
}

}  // namespace scc
