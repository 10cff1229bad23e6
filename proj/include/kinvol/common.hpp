// Shared numeric primitives: small vectors, tolerances, ball volumes,
// binomials, and the deterministic random generator used throughout.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinvol {

// Ambient dimensions are 1..4; lifted (epigraph) points live in up to 5.
inline constexpr int kMaxDim = 4;
inline constexpr int kMaxLift = 5;

// Stack-allocated dynamic vector, capacity kMaxLift.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxLift, 1>;
using Mat = Eigen::MatrixXd;

namespace tol {
// Geometric predicate tolerance (coplanarity, coincidence merging).
inline constexpr double geom = 1e-9;
// Representation-equality tolerance (canonical forms, involutions).
inline constexpr double rep = 1e-12;
}  // namespace tol

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Volume of the i-dimensional unit ball.
inline double kappa(int i) {
  require(i >= 0, "kappa: negative dimension");
  return std::pow(M_PI, 0.5 * i) / std::tgamma(0.5 * i + 1.0);
}

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
  return std::round(r);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic generator. The engine is fully specified by the standard;
// uniform and normal variates are derived from raw engine output so that
// streams are identical across platforms and compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Sub-stream for sample index i; independent of chunking and thread count.
  static Rng for_sample(std::uint64_t seed, std::uint64_t i) {
    return Rng(splitmix64(seed ^ splitmix64(i + 1)));
  }

  double uniform() {  // [0, 1)
    return double(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {  // Box-Muller, one variate per call
    double u1 = 0.0;
    do { u1 = uniform(); } while (u1 <= 0.0);
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

inline bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace kinvol
