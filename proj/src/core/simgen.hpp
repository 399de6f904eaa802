#ifndef SCC_SIMGEN_HPP
#define SCC_SIMGEN_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "curves.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "spatial.hpp"

namespace scc {

struct SimulatedData {
  CurveMatrix curves;
  Partition truth;
};

struct Scheme1Config {
  std::vector<int> truth_labels;  // 0-based template index per region
  double phi = 0.01;
  double sigma2 = 6e-5;
  int t_grid = 98;
  uint64_t seed = 1;
};

// Columns independent, each ~ N(0, (I - phi A)^{-1}); n x T.
Eigen::MatrixXd sample_car_noise(const AdjacencyGraph& graph, const CarBounds& bounds, double phi,
                                 int t, Rng& rng);

// Normalized Beta-shaped cluster templates on the unit grid; rows sum to 1.
Eigen::MatrixXd scheme1_templates(int t_grid);

SimulatedData gen_scheme1(const AdjacencyGraph& graph, const CarBounds& bounds,
                          const Scheme1Config& config);

struct SirClusterSpec {
  double beta = 0.1;                       // infection rate
  std::array<Date, 5> phase_dates{};       // t_0 .. t_4
  std::array<double, 4> delta_base{};      // recovery-rate levels per phase
};

struct SirConfig {
  std::vector<SirClusterSpec> clusters;
  std::vector<std::string> region_ids;
  std::vector<int> truth_labels;       // 0-based cluster per region
  std::vector<double> population;      // per region
  double delta_jitter_sd = 0.005;      // U(a - sd, a + sd)
  double obs_noise_sd = 0.01;          // on the normalized curve
  double i0 = 5000.0;
  double r0 = 500.0;
  uint64_t seed = 1;
};

// Daily compartment trajectory with whole-person flows; S+I+R == N exactly.
struct SirPath {
  std::vector<double> s, i, r;
  std::vector<double> daily_new;  // s(t), length = days - 1
};
SirPath integrate_sir(double n_pop, double i0, double r0, double beta,
                      const std::array<Date, 5>& phases, const std::array<double, 4>& deltas);

SimulatedData gen_scheme2_sir(const SirConfig& config);

// Designs 1-8 on the bundled 51-state map (1-4: scheme 1; 5-8: SIR).
SimulatedData gen_design(int design, uint64_t seed);

// Table-style SIR parameter presets for the bundled templates.
SirConfig default_sir_config(int structure, double noise_sd, uint64_t seed);

}  // namespace scc

#endif
