// Finite dual representations of convex functions:
//   MaxAffine      v(x) = max_i <a_i, x> + b_i           (finite everywhere)
//   EpiPolyhedral  u = lower convex envelope of points    (compact domain)
//   RadialProfile  u(x) = phi(|x|) + I_{RB^n}(x)          (exact 1-D path)
//
// MaxAffine and EpiPolyhedral share one canonical structure: the lower
// convex hull of lifted points (slopes lifted by -offset, locations lifted
// by value). Legendre-Fenchel conjugation swaps the two readings of the
// same structure, so it is exact and involutive by construction, and the
// hull's cells are exactly the Monge-Ampere cells both measures need.

#pragma once

#include "kinvol/geometry.hpp"

#include <memory>

namespace kinvol {

// Full-dimensional cell of the subdivision induced by the lower hull:
// the envelope equals <grad, x> + off on the cell, whose volume is mass.
struct EnvelopeCell {
  Vec grad;
  double off = 0.0;
  double mass = 0.0;
};

namespace detail {

struct HalfSpace {
  Vec normal;
  double offset;
};

class Envelope {
 public:
  // Canonicalize: duplicate locations keep the lowest lift, points not on
  // the lower hull are pruned.
  static Envelope build(std::vector<Vec> points, std::vector<double> heights);

  int dim() const { return dim_; }
  const std::vector<Vec>& points() const { return pts_; }
  const std::vector<double>& heights() const { return hts_; }
  int location_dim() const { return loc_span_.dim; }

  // Cells in ambient coordinates; empty when the domain is degenerate.
  const std::vector<EnvelopeCell>& cells() const;

  // Lower-envelope value over the location domain, +infinity outside.
  double eval(const Vec& x) const;

  bool same(const Envelope& other, double eps) const;

  Envelope summed_with(const Envelope& other) const;  // Minkowski sum of lifts
  Envelope scaled(double lambda) const;               // lambda > 0
  Envelope rotated(const Rotation& r) const;
  Envelope projected(const std::vector<Vec>& basis) const;

 private:
  int dim_ = 0;
  std::vector<Vec> pts_;       // ambient locations, lex sorted with heights
  std::vector<double> hts_;
  AffineSpan loc_span_;        // affine hull of the locations
  std::vector<Vec> work_pts_;  // span coordinates (empty when full-dim)
  std::vector<EnvelopeCell> work_cells_;  // cells in working coordinates
  std::vector<EnvelopeCell> amb_cells_;   // = work_cells_ when full-dim
  mutable std::optional<std::vector<HalfSpace>> dom_;  // lazy, working coords

  const std::vector<Vec>& working_points() const {
    return loc_span_.dim == dim_ ? pts_ : work_pts_;
  }
  const std::vector<HalfSpace>& domain_facets() const;
  friend class EnvelopeTestAccess;
};

}  // namespace detail

class EpiPolyhedral;

// Finite piecewise-affine convex function on R^n.
class MaxAffine {
 public:
  struct Piece {
    Vec a;
    double b;
  };

  static MaxAffine from_pieces(const std::vector<Piece>& pieces);

  int dim() const { return env_->dim(); }
  std::size_t piece_count() const { return env_->points().size(); }
  std::vector<Piece> pieces() const;

  double eval(const Vec& x) const;

  EpiPolyhedral conjugate() const;
  bool same(const MaxAffine& o, double eps = tol::rep) const {
    return env_->same(*o.env_, eps);
  }

  const detail::Envelope& envelope() const { return *env_; }

 private:
  explicit MaxAffine(std::shared_ptr<const detail::Envelope> e)
      : env_(std::move(e)) {}
  std::shared_ptr<const detail::Envelope> env_;
  friend class EpiPolyhedral;
  friend MaxAffine add(const MaxAffine&, const MaxAffine&);
  friend MaxAffine rotate(const MaxAffine&, const Rotation&);
};

// Proper lsc convex function with compact polyhedral domain, given as the
// lower convex envelope of (location, value) points.
class EpiPolyhedral {
 public:
  struct Point {
    Vec p;
    double c;
  };

  static EpiPolyhedral make(const std::vector<Point>& points);

  int dim() const { return env_->dim(); }
  std::size_t point_count() const { return env_->points().size(); }
  std::vector<Point> points() const;

  double eval(const Vec& x) const { return env_->eval(x); }

  MaxAffine conjugate() const;
  bool same(const EpiPolyhedral& o, double eps = tol::rep) const {
    return env_->same(*o.env_, eps);
  }

  const detail::Envelope& envelope() const { return *env_; }

 private:
  explicit EpiPolyhedral(std::shared_ptr<const detail::Envelope> e)
      : env_(std::move(e)) {}
  std::shared_ptr<const detail::Envelope> env_;
  friend class MaxAffine;
  friend EpiPolyhedral inf_convolve(const EpiPolyhedral&, const EpiPolyhedral&);
  friend EpiPolyhedral epi_scale(double, const EpiPolyhedral&);
  friend EpiPolyhedral rotate(const EpiPolyhedral&, const Rotation&);
  friend EpiPolyhedral project(const EpiPolyhedral&, const std::vector<Vec>&);
  friend EpiPolyhedral floor_body(const Polytope&);
  friend EpiPolyhedral indicator(const Polytope&);
};

// Pointwise sum (pieces are pairwise sums, pruned).
MaxAffine add(const MaxAffine& v, const MaxAffine& w);

// Epi-sum: the epigraph is the Minkowski sum of epigraphs (exact).
EpiPolyhedral inf_convolve(const EpiPolyhedral& u, const EpiPolyhedral& v);

// (lambda # u)(x) = lambda u(x / lambda); lambda = 0 gives I_{{o}}.
EpiPolyhedral epi_scale(double lambda, const EpiPolyhedral& u);

// f composed with theta^{-1}, for either representation.
MaxAffine rotate(const MaxAffine& f, const Rotation& r);
EpiPolyhedral rotate(const EpiPolyhedral& u, const Rotation& r);

EpiPolyhedral indicator(const Polytope& k);
MaxAffine support_fn(const Polytope& k);

// Lower boundary of K over the last coordinate, as a function on R^{n-1}.
EpiPolyhedral floor_body(const Polytope& k);

// Partial minimization over the orthogonal complement of span(basis);
// the result lives on E in the coordinates of the given orthonormal basis.
EpiPolyhedral project(const EpiPolyhedral& u, const std::vector<Vec>& basis);

// Inf-deconvolution: the w with w epi-sum v = u, if it exists.
// Throws NotDeconvolvable when u* - v* fails convexity.
struct NotDeconvolvable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
EpiPolyhedral inf_deconvolve(const EpiPolyhedral& u, const EpiPolyhedral& v);

// Radially symmetric element of Conv_sc: u(x) = phi(|x|) + I_{RB^n}.
class RadialProfile {
 public:
  static RadialProfile make(int dim, std::vector<double> breaks,
                            std::vector<double> values);

  int dim() const { return dim_; }
  double radius() const { return breaks_.back(); }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return vals_; }

  double profile(double r) const;          // +infinity beyond the radius
  double eval(const Vec& x) const { return profile(x.norm()); }
  double slope(std::size_t segment) const;
  std::size_t segment_count() const { return breaks_.size() - 1; }

  RadialProfile inf_convolve(const RadialProfile& other) const;
  RadialProfile epi_scale(double lambda) const;  // lambda > 0

  // Envelope of graph samples at the given sphere directions.
  EpiPolyhedral discretize(int directions) const;

 private:
  int dim_ = 0;
  std::vector<double> breaks_;
  std::vector<double> vals_;
};

// u_t scaled: profile t*r on [0, lambda].
RadialProfile cone_function(int dim, double t, double lambda = 1.0);

}  // namespace kinvol
