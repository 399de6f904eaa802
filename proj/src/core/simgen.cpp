#include "simgen.hpp"

#include <cmath>

#include "errors.hpp"
#include "us_data.hpp"

namespace scc {

Eigen::MatrixXd sample_car_noise(const AdjacencyGraph& graph, const CarBounds& bounds, double phi,
                                 int t, Rng& rng) {
  if (phi != 0.0 && !bounds.contains(phi))
    fail(ErrorCode::Domain, "sample_car_noise: phi outside the CAR support");
  const int n = graph.n();
  Eigen::MatrixXd precision = Eigen::MatrixXd::Identity(n, n) - phi * graph.a;
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::Domain, "sample_car_noise: I - phi*A not positive definite");
  Eigen::MatrixXd z(n, t);
  for (int j = 0; j < t; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = rng.normal();
  // solve L' x = z column-wise: cov(x) = (L L')^{-1}
  return llt.matrixU().solve(z);
}

Eigen::MatrixXd scheme1_templates(int t_grid) {
  Eigen::MatrixXd f(3, t_grid);
  for (int j = 0; j < t_grid; ++j) {
    const double t = static_cast<double>(j) / (t_grid - 1);
    f(0, j) = t * std::pow(1.0 - t, 3.5);
    f(1, j) = t * std::pow(1.0 - t, 2.5);
    f(2, j) = t * t * t * (1.0 - t) * (1.0 - t);
  }
  for (int c = 0; c < 3; ++c) f.row(c) /= f.row(c).sum();
  return f;
}

SimulatedData gen_scheme1(const AdjacencyGraph& graph, const CarBounds& bounds,
                          const Scheme1Config& config) {
  const int n = graph.n();
  if (static_cast<int>(config.truth_labels.size()) != n)
    fail(ErrorCode::Mismatch, "gen_scheme1: truth labels do not match the graph");
  if (!(config.sigma2 > 0.0)) fail(ErrorCode::InvalidArgument, "gen_scheme1: sigma2 must be > 0");

  const Eigen::MatrixXd mu = scheme1_templates(config.t_grid);
  Rng rng(config.seed);
  const Eigen::MatrixXd eps = sample_car_noise(graph, bounds, config.phi, config.t_grid, rng);
  const double sigma = std::sqrt(config.sigma2);

  SimulatedData out;
  out.curves.values.resize(n, config.t_grid);
  out.curves.region_ids = graph.region_ids;
  for (int i = 0; i < n; ++i) {
    const int c = config.truth_labels[i];
    if (c < 0 || c >= 3) fail(ErrorCode::InvalidArgument, "gen_scheme1: cluster index out of range");
    Eigen::RowVectorXd y0 = mu.row(c) + sigma * eps.row(i);
    const double total = y0.sum();
    if (!(std::abs(total) > 1e-12)) fail(ErrorCode::Numeric, "gen_scheme1: curve sums to zero");
    out.curves.values.row(i) = y0 / total;
  }
  out.truth.labels = config.truth_labels;
  out.truth = Partition::canonical(out.truth.labels);
  return out;
}

SirPath integrate_sir(double n_pop, double i0, double r0, double beta,
                      const std::array<Date, 5>& phases, const std::array<double, 4>& deltas) {
  for (int j = 0; j + 1 < 5; ++j)
    if (!(phases[j] < phases[j + 1]))
      fail(ErrorCode::InvalidArgument, "integrate_sir: phase dates must be strictly increasing");
  if (!(n_pop > i0 + r0)) fail(ErrorCode::InvalidArgument, "integrate_sir: need N > I0 + R0");

  SirPath path;
  double i_now = std::round(i0);
  double r_now = std::round(r0);
  double s_now = std::round(n_pop) - i_now - r_now;
  path.s.push_back(s_now);
  path.i.push_back(i_now);
  path.r.push_back(r_now);
  for (int day = phases[0].serial + 1; day <= phases[4].serial; ++day) {
    // gamma = delta_j on [t_{j-1}, t_j); the final day keeps delta_4
    double gamma = deltas[3];
    for (int j = 0; j < 4; ++j)
      if (day < phases[j + 1].serial) {
        gamma = deltas[j];
        break;
      }
    // whole-person daily flows keep S+I+R exactly equal to N
    const double new_inf = std::min(s_now, std::round(beta * i_now * s_now / std::round(n_pop)));
    const double rec = std::min(i_now + new_inf, std::round(gamma * i_now));
    s_now -= new_inf;
    i_now += new_inf - rec;
    r_now += rec;
    if (s_now < 0.0 || i_now < 0.0 || r_now < 0.0)
      fail(ErrorCode::Numeric, "integrate_sir: negative compartment (unstable configuration)");
    path.s.push_back(s_now);
    path.i.push_back(i_now);
    path.r.push_back(r_now);
    path.daily_new.push_back(new_inf);
  }
  return path;
}

SimulatedData gen_scheme2_sir(const SirConfig& config) {
  const int n = static_cast<int>(config.truth_labels.size());
  if (n == 0) fail(ErrorCode::InvalidArgument, "gen_scheme2_sir: no regions");
  if (config.population.size() != static_cast<size_t>(n))
    fail(ErrorCode::Mismatch, "gen_scheme2_sir: population list does not match regions");
  if (config.clusters.empty()) fail(ErrorCode::InvalidArgument, "gen_scheme2_sir: no cluster specs");

  if (config.region_ids.size() != static_cast<size_t>(n))
    fail(ErrorCode::Mismatch, "gen_scheme2_sir: region ids do not match labels");

  Rng rng(config.seed);
  SimulatedData out;
  out.truth = Partition::canonical(config.truth_labels);
  out.curves.region_ids = config.region_ids;

  const int days = config.clusters.front().phase_dates[4].serial -
                   config.clusters.front().phase_dates[0].serial + 1;
  const int t_grid = days - 1;
  out.curves.values.resize(n, t_grid);
  for (int i = 0; i < n; ++i) {
    const int c = config.truth_labels[i];
    if (c < 0 || c >= static_cast<int>(config.clusters.size()))
      fail(ErrorCode::InvalidArgument, "gen_scheme2_sir: cluster index out of range");
    const SirClusterSpec& spec = config.clusters[c];
    std::array<double, 4> deltas{};
    for (int j = 0; j < 4; ++j)
      deltas[j] = rng.uniform(spec.delta_base[j] - config.delta_jitter_sd,
                              spec.delta_base[j] + config.delta_jitter_sd);
    const SirPath path = integrate_sir(config.population[i], config.i0, config.r0, spec.beta,
                                       spec.phase_dates, deltas);
    Eigen::RowVectorXd s(t_grid);
    for (int t = 0; t < t_grid; ++t) s(t) = path.daily_new[t];
    const double total = s.sum();
    if (!(total > 0.0)) fail(ErrorCode::Degenerate, "gen_scheme2_sir: epidemic produced no cases");
    Eigen::RowVectorXd y = s / total;
    if (config.obs_noise_sd > 0.0) {
      for (int t = 0; t < t_grid; ++t) y(t) += config.obs_noise_sd * rng.normal();
      const double total2 = y.sum();
      if (!(std::abs(total2) > 1e-12)) fail(ErrorCode::Numeric, "gen_scheme2_sir: noisy curve sums to zero");
      y /= total2;
    }
    out.curves.values.row(i) = y;
  }
  return out;
}

SirConfig default_sir_config(int structure, double noise_sd, uint64_t seed) {
  SirConfig cfg;
  cfg.obs_noise_sd = noise_sd;
  cfg.seed = seed;

  auto day = [](int m, int d) { return Date::from_ymd(2020, m, d); };
  SirClusterSpec c1{0.08, {day(3, 14), day(4, 3), day(4, 23), day(5, 13), day(6, 20)},
                    {0.05, 0.065, 0.095, 0.11}};
  SirClusterSpec c2{0.11, {day(3, 14), day(3, 24), day(4, 8), day(5, 8), day(6, 20)},
                    {0.06, 0.095, 0.125, 0.16}};
  SirClusterSpec c3{0.14, {day(3, 14), day(4, 18), day(5, 8), day(5, 18), day(6, 20)},
                    {0.11, 0.125, 0.155, 0.17}};
  cfg.clusters = {c1, c2, c3};

  const char* label_csv =
      structure == 1 ? us_data::kStructure1LabelsCsv : us_data::kStructure2LabelsCsv;
  auto labels = csv::parse(label_csv, "structure template");
  auto pops = csv::parse(us_data::kStatePopulationCsv, "populations");
  for (size_t i = 0; i < labels.rows.size(); ++i) {
    cfg.region_ids.push_back(labels.rows[i][0]);
    cfg.truth_labels.push_back(std::stoi(labels.rows[i][1]) - 1);
    if (pops.rows[i][0] != labels.rows[i][0])
      fail(ErrorCode::Mismatch, "default_sir_config: bundled data out of sync");
    cfg.population.push_back(std::stod(pops.rows[i][1]));
  }
  return cfg;
}

SimulatedData gen_design(int design, uint64_t seed) {
  if (design < 1 || design > 8)
    fail(ErrorCode::InvalidArgument,
         "design must be 1..8 (got " + std::to_string(design) + ")");
  const auto graph = adjacency_from_csv_text(us_data::kStateAdjacencyCsv, "bundled adjacency");
  if (design <= 4) {
    const int structure = (design <= 2) ? 1 : 2;
    const double phi = (design % 2 == 1) ? 0.01 : 0.15;
    const char* label_csv =
        structure == 1 ? us_data::kStructure1LabelsCsv : us_data::kStructure2LabelsCsv;
    auto labels = csv::parse(label_csv, "structure template");
    Scheme1Config cfg;
    cfg.phi = phi;
    cfg.seed = seed;
    for (size_t i = 0; i < labels.rows.size(); ++i) {
      if (labels.rows[i][0] != graph.region_ids[i])
        fail(ErrorCode::Mismatch, "gen_design: bundled data out of sync");
      cfg.truth_labels.push_back(std::stoi(labels.rows[i][1]) - 1);
    }
    const auto bounds = car_bounds(graph);
    return gen_scheme1(graph, bounds, cfg);
  }
  const int structure = (design <= 6) ? 1 : 2;
  const double sd = (design % 2 == 1) ? 0.010 : 0.015;
  return gen_scheme2_sir(default_sir_config(structure, sd, seed));
}

}  // namespace scc
