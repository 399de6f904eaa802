#ifndef SCC_RNG_HPP
#define SCC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace scc {

// Self-contained generator (xoshiro256++ seeded through splitmix64) so that
// traces are reproducible across compilers and standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& w : s_) {
      // splitmix64
      x += 0x9e3779b97f4a7c15ULL;
      uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      w = z ^ (z >> 31);
    }
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on (0,1); never returns 0 or 1
  double uniform() {
    const uint64_t bits = next_u64() >> 11;  // 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller (two uniforms per variate)
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Gamma(shape, rate) by Marsaglia-Tsang; shape<1 handled by the boost trick.
  double gamma(double shape, double rate) {
    if (shape <= 0.0 || rate <= 0.0) throw std::invalid_argument("gamma: shape and rate must be > 0");
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v / rate;
    }
  }

  // Normal(mean, sd) truncated to (lo, hi), by rejection.
  double truncated_normal(double mean, double sd, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("truncated_normal: empty support");
    for (int k = 0; k < 1024; ++k) {
      const double x = normal(mean, sd);
      if (x > lo && x < hi) return x;
    }
    // essentially no proposal mass inside the interval; fall back to the
    // nearly-flat restriction of the density
    return uniform(lo, hi);
  }

  // Sample an index proportionally to exp(logw), stably.
  int categorical_log(std::span<const double> logw) {
    double m = -INFINITY;
    for (double w : logw) m = std::max(m, w);
    if (!std::isfinite(m)) throw std::runtime_error("categorical_log: all weights are -inf");
    double total = 0.0;
    for (double w : logw) total += std::exp(w - m);
    double u = uniform() * total;
    for (size_t k = 0; k < logw.size(); ++k) {
      u -= std::exp(logw[k] - m);
      if (u <= 0.0) return static_cast<int>(k);
    }
    return static_cast<int>(logw.size()) - 1;
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

// Named seed derivation so that parallel fan-out (replicates, h grid) is
// deterministic regardless of scheduling.
inline uint64_t derive_seed(uint64_t base, uint64_t stream, uint64_t a = 0, uint64_t b = 0) {
  uint64_t x = base;
  auto mix = [&x](uint64_t v) {
    x ^= v + 0x9e3779b97f4a7c15ULL + (x << 6) + (x >> 2);
    x *= 0xd6e8feb86659fd93ULL;
    x ^= x >> 32;
  };
  mix(stream);
  mix(a);
  mix(b);
  return x;
}

// standard normal CDF
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

}  // namespace scc

#endif
