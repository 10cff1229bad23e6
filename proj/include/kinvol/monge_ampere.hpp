// Discrete (mixed, conjugate) Monge-Ampere measures, the radial fast path,
// mixed discriminants, and the radial integral transforms connecting
// singular Hessian densities to measure densities.

#pragma once

#include "kinvol/convex.hpp"

#include <functional>

namespace kinvol {

// Finite weighted point set in R^n. Signed masses appear in polarization
// intermediates; final mixed measures are validated nonnegative.
struct AtomicMeasure {
  int dim = 0;
  struct Atom {
    Vec x;
    double mass;
  };
  std::vector<Atom> atoms;

  double total_mass() const;
};

std::vector<AtomicMeasure::Atom> merge_measure_atoms(
    std::vector<AtomicMeasure::Atom> atoms, double eps = tol::geom);

// Continuous piecewise-linear density on [0, infinity), zero beyond the
// last breakpoint (densities on [0,1] are stored the same way).
class TestFunction {
 public:
  static TestFunction make(std::vector<double> breaks,
                           std::vector<double> values);
  // 1 at zero, linear down to 0 at support_end.
  static TestFunction wedge(double support_end);
  // 0 at a, peak 1 at b, back to 0 at c.
  static TestFunction hat(double a, double b, double c);

  double operator()(double r) const;
  double support_end() const { return breaks_.back(); }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return vals_; }

  // integral of r^p * f(r) over [lo, hi], exact per segment
  double moment(int p, double lo, double hi) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> vals_;
};

// Piecewise-polynomial function on [0, infinity), zero beyond the support.
class PiecewisePoly {
 public:
  PiecewisePoly(std::vector<double> breaks,
                std::vector<std::vector<double>> coeffs);
  double operator()(double s) const;
  double support_end() const { return breaks_.back(); }

 private:
  std::vector<double> breaks_;
  std::vector<std::vector<double>> coeffs_;  // per segment, ascending powers
};

// Monge-Ampere measure of a piecewise-affine finite convex function:
// one atom per full-dimensional cell of the induced regular subdivision.
AtomicMeasure ma(const MaxAffine& v);

// MA*(u; .) = MA(u*; .): same cells, read from the epigraph side.
AtomicMeasure conj_ma(const EpiPolyhedral& u);

// Conjugate mixed Monge-Ampere measure by polarization over epi-sums.
AtomicMeasure mixed_map(const std::vector<EpiPolyhedral>& args);

// Mixed Monge-Ampere measure of finite convex functions (pointwise sums).
AtomicMeasure mixed_ma(const std::vector<MaxAffine>& args);

// MAp_j(u; .): u repeated j times, ball indicator n-j times.
AtomicMeasure map_j(const EpiPolyhedral& u, int j, int ball_resolution);
AtomicMeasure map_j(const EpiPolyhedral& u, int j, const EpiPolyhedral& ball);

// Exact radial path: integral of alpha(|y|) dMAp_j(u; y) for radial u,
// equal to kappa_n * j * int alpha(phi'(r)) r^{j-1} dr (kappa_n alpha(0)
// for j = 0). The overload takes any evaluator for alpha.
double radial_map_j_integral(const RadialProfile& u, int j,
                             const TestFunction& alpha);
double radial_map_j_integral(const RadialProfile& u, int j,
                             const std::function<double(double)>& alpha);

double integrate_radial(const AtomicMeasure& mu, const TestFunction& alpha);

// sum_{i,k} m_i m_k alpha(max(|x_i|, |y_k|))
double double_integral_max(const AtomicMeasure& mu, const AtomicMeasure& nu,
                           const TestFunction& alpha);

// sum over sphere atoms of |w_n||z_n| beta(min(|w_n|, |z_n|)) m m'
double double_integral_min_weighted(const AtomicSphereMeasure& mu,
                                    const AtomicSphereMeasure& nu,
                                    const TestFunction& beta);

// R^m zeta(s) = s^m zeta(s) + m int_s^inf t^{m-1} zeta(t) dt; R^0 = id.
PiecewisePoly r_transform(const TestFunction& zeta, int m);

// integral of zeta against dMA_{n-j}(q; y) = (n-j)/n |y|^{-j} dy up to the
// cutoff radius; j = n returns kappa_n zeta(0) (the atom at the origin).
double ma_q_radial_integral(int n, int j, const TestFunction& zeta,
                            double cutoff);

// beta(s) = (1/kappa_n) [zeta(s) MA_{n-j}(q; sB) + tail integral]; agrees
// pointwise with r_transform(zeta, n-j).
std::function<double(double)> beta_from_zeta(int n, int j,
                                             const TestFunction& zeta);

// jth elementary symmetric function of the eigenvalues (sum of principal
// j-minors) and the mixed discriminant by polarization of det.
double elementary_symmetric(const Mat& a, int j);
double mixed_discriminant(const std::vector<Mat>& as);

// Smooth radial convex profile with derivatives, for the Hessian path.
struct RadialC2 {
  std::function<double(double)> f, df, d2f;
};

// integral of zeta(|x|) [D^2 v]_j dx for v = psi(|x|), via the radial
// eigenvalue structure; adaptive quadrature per zeta segment.
double hessian_integral_radial(const RadialC2& psi, const TestFunction& zeta,
                               int j, int n, double rel_tol = 1e-12);

}  // namespace kinvol
