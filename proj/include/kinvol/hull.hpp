// Dimension-generic convex hull (d = 1..5) with simplicial facet output.
// Used for polytopes, Minkowski sums, lower-envelope pruning and
// Monge-Ampere cell extraction (via epigraph lifts, hence d up to 5).

#pragma once

#include "kinvol/common.hpp"

namespace kinvol::detail {

struct AffineSpan {
  int dim = 0;                // affine dimension of the point set
  Vec origin;                 // base point (first witness)
  std::vector<Vec> basis;     // orthonormal basis of the span, size dim
  std::vector<int> witnesses; // dim+1 affinely independent input indices
};

AffineSpan affine_span(const std::vector<Vec>& pts, double eps = tol::geom);

// Coordinates of p in the span's orthonormal basis.
Vec to_span_coords(const AffineSpan& sp, const Vec& p);

struct Facet {
  std::array<int, kMaxLift> v{};  // d vertex indices into the input list
  Vec normal;                     // outward unit normal
  double offset = 0.0;            // <normal, x> = offset on the facet
};

struct Hull {
  std::vector<int> vertices;   // extreme-point indices, sorted ascending
  std::vector<Facet> facets;   // simplicial facets, outward-oriented
};

// Requires the input to affinely span R^d; duplicates are tolerated.
// eps is relative to the coordinate scale of the input.
Hull quickhull(const std::vector<Vec>& pts, double eps = tol::geom);

// (d-1)-volume of the simplex spanned by facet vertices.
double facet_area(const std::vector<Vec>& pts, const Facet& f);

// Lebesgue volume of the hull (fan decomposition over facets).
double hull_volume(const std::vector<Vec>& pts, const Hull& h);

}  // namespace kinvol::detail
