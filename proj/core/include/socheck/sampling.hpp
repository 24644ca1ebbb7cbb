#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "socheck/expr.hpp"

namespace socheck {

/// Deterministic sampling helper. Uniform deviates are derived directly from
/// the mt19937_64 word stream (53-bit mantissa), so runs are reproducible
/// for a fixed seed independent of the standard library's distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Vec gaussian_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

  Vec unit_sphere(int n) {
    Vec v = gaussian_vec(n);
    double nrm = v.norm();
    while (nrm < 1e-12) {
      v = gaussian_vec(n);
      nrm = v.norm();
    }
    return v / nrm;
  }

  /// Uniform point in the closed ball B(center, radius).
  Vec ball_point(const Vec& center, double radius) {
    const int n = static_cast<int>(center.size());
    const double scale =
        radius * std::pow(uniform01(), 1.0 / static_cast<double>(n));
    return center + scale * unit_sphere(n);
  }

  Vec box_point(const Box& box) {
    Vec v(box.lo.size());
    for (int i = 0; i < v.size(); ++i) v[i] = uniform(box.lo[i], box.hi[i]);
    return v;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace socheck
