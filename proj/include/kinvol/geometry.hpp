// Exact polyhedral geometry: hulls, Minkowski sums, volumes, surface and
// mixed area measures, mixed and intrinsic volumes, Haar rotation sampling.

#pragma once

#include "kinvol/common.hpp"
#include "kinvol/hull.hpp"

#include <optional>

namespace kinvol {

struct MergedFacet {
  Vec normal;              // outer unit normal
  double offset = 0.0;     // support value in direction normal
  std::vector<int> verts;  // indices of all vertices on the facet
  double area = 0.0;       // (n-1)-dimensional Hausdorff measure
};

// Convex body given by its extreme points. Lower-dimensional inputs are
// detected and carried in their affine hull.
class Polytope {
 public:
  static Polytope hull(std::vector<Vec> points);

  int dim() const { return dim_; }
  int affine_dim() const { return aff_dim_; }
  const std::vector<Vec>& vertices() const { return verts_; }

  double volume() const { return aff_dim_ == dim_ ? rel_volume_ : 0.0; }
  double relative_volume() const { return rel_volume_; }
  double support(const Vec& dir) const;
  Vec centroid() const;

  // Simplicial facet decomposition in working coordinates (ambient when
  // full-dimensional, affine-hull coordinates otherwise).
  const std::vector<detail::Facet>& simplicial_facets() const { return facets_; }
  const std::vector<Vec>& working_vertices() const {
    return aff_dim_ == dim_ ? verts_ : rel_verts_;
  }

  // Coplanar facets merged; full-dimensional bodies only.
  const std::vector<MergedFacet>& facets() const;

  // Orthonormal basis data of the affine hull (identity when full-dim).
  const detail::AffineSpan& span() const { return span_; }

  Polytope scaled(double c) const;
  Polytope translated(const Vec& t) const;

  bool same_vertices(const Polytope& other, double eps = tol::geom) const;

 private:
  Polytope() = default;
  int dim_ = 0;
  int aff_dim_ = 0;
  std::vector<Vec> verts_;      // ambient, lexicographically sorted
  std::vector<Vec> rel_verts_;  // affine-hull coordinates (degenerate case)
  detail::AffineSpan span_;
  std::vector<detail::Facet> facets_;  // simplicial, working coordinates
  double rel_volume_ = 0.0;
  mutable std::optional<std::vector<MergedFacet>> merged_;
};

// Element of SO(n), optionally composed with the reflection through the
// hyperplane x_n = 0 (the O(1) factor used by the sphere formulas).
struct Rotation {
  Mat m;                     // n x n, orthogonal, det +1
  bool reflect_last = false;

  int dim() const { return int(m.rows()); }
  Vec apply(const Vec& x) const {
    Vec y = x;
    if (reflect_last) y[y.size() - 1] = -y[y.size() - 1];
    Vec r = m * y;
    return r;
  }
  Rotation inverse() const;
};

// Haar-distributed rotation: QR of a Gaussian matrix with sign correction.
Rotation sample_rotation(int n, Rng& rng);
Rotation identity_rotation(int n);

// Finite weighted point set on the unit sphere; signed masses are permitted
// while polarizing, final measures are validated nonnegative by callers.
struct AtomicSphereMeasure {
  int dim = 0;
  struct Atom {
    Vec z;
    double mass;
  };
  std::vector<Atom> atoms;

  double total_mass() const;
  Vec weighted_sum() const;  // sum of z * mass (zero for closed boundaries)
};

// Merge coincident atoms (distance < eps); deterministic output order.
std::vector<AtomicSphereMeasure::Atom> merge_atoms(
    std::vector<AtomicSphereMeasure::Atom> atoms, double eps = tol::geom);

Polytope convex_hull(const std::vector<Vec>& points);
Polytope minkowski_sum(const Polytope& p, const Polytope& q);
double volume(const Polytope& p);

// Inscribed deterministic approximation of the unit ball (m >= n+1):
// regular m-gon for n = 2, Fibonacci lattice for n = 3, Hopf-angle Halton
// points for n = 4.
Polytope polytopal_ball(int n, int m);

// Unit disk of dimension n-1 embedded in the hyperplane x_n = 0.
Polytope polytopal_disk_in_hyperplane(int n, int m);

AtomicSphereMeasure surface_area_measure(const Polytope& p);

// V(K_1,...,K_n) by polarization over subset Minkowski sums.
double mixed_volume(const std::vector<Polytope>& bodies);

// S(K_1,...,K_{n-1}; .) by polarization of the surface area measure.
AtomicSphereMeasure mixed_area_measure(const std::vector<Polytope>& bodies);

// V_j with exact shortcuts for j in {0, n-1, n}; otherwise the mixed-volume
// path against polytopal balls with Richardson extrapolation over m and 2m.
double intrinsic_volume(const Polytope& p, int j, int ball_resolution = 64);

// The mixed-volume path alone (no shortcuts), optionally extrapolated.
double intrinsic_volume_mixed_path(const Polytope& p, int j, int m,
                                   bool extrapolate = true);

Polytope rotate(const Polytope& p, const Rotation& r);

}  // namespace kinvol
