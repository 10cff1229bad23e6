#include "kinvol/convex.hpp"

#include <algorithm>
#include <limits>

namespace kinvol {

namespace detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using SmallSquare =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxLift, kMaxLift>;

double coord_scale(const std::vector<Vec>& pts) {
  double s = 1.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

// Merge cells with coincident gradients (adjacent coplanar hull facets).
std::vector<EnvelopeCell> merge_cells(std::vector<EnvelopeCell> cells) {
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
    return lex_less(a.grad, b.grad);
  });
  std::vector<EnvelopeCell> out;
  for (const auto& c : cells) {
    bool merged = false;
    for (int k = int(out.size()) - 1; k >= 0; --k) {
      double eps = tol::geom * std::max(1.0, out[k].grad.cwiseAbs().maxCoeff());
      if (c.grad[0] - out[k].grad[0] > eps) break;
      if ((c.grad - out[k].grad).norm() < eps) {
        out[k].mass += c.mass;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(c);
  }
  return out;
}

}  // namespace

Envelope Envelope::build(std::vector<Vec> points, std::vector<double> heights) {
  require(!points.empty(), "envelope: empty point set");
  require(points.size() == heights.size(), "envelope: size mismatch");
  const int n = int(points[0].size());
  require(n >= 1 && n <= kMaxDim, "envelope: dimension out of range");

  // Dedupe coincident locations, keeping the lowest lift.
  std::vector<int> order(points.size());
  for (int i = 0; i < int(order.size()); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (lex_less(points[a], points[b])) return true;
    if (lex_less(points[b], points[a])) return false;
    return heights[a] < heights[b];
  });
  const double scale = coord_scale(points);
  const double eps = tol::geom * scale;
  std::vector<int> keep;
  for (int id : order) {
    bool dup = false;
    for (int k = int(keep.size()) - 1; k >= 0; --k) {
      if (points[id][0] - points[keep[k]][0] > eps) break;
      if ((points[id] - points[keep[k]]).norm() < eps) {
        if (heights[id] < heights[keep[k]]) keep[k] = id;
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(id);
  }

  Envelope env;
  env.dim_ = n;
  std::vector<Vec> locs;
  std::vector<double> hts;
  locs.reserve(keep.size());
  hts.reserve(keep.size());
  for (int id : keep) {
    locs.push_back(points[id]);
    hts.push_back(heights[id]);
  }
  env.loc_span_ = affine_span(locs);
  const int d = env.loc_span_.dim;
  const bool full = (d == n);

  if (d == 0) {
    env.pts_ = {locs[0]};
    env.hts_ = {hts[0]};
    return env;
  }

  std::vector<Vec> work;
  if (full) {
    work = locs;
  } else {
    work.reserve(locs.size());
    for (const auto& p : locs) work.push_back(to_span_coords(env.loc_span_, p));
  }

  // Lift by height and take the lower hull.
  std::vector<Vec> lift;
  lift.reserve(work.size());
  for (size_t i = 0; i < work.size(); ++i) {
    Vec q(d + 1);
    q.head(d) = work[i];
    q[d] = hts[i];
    lift.push_back(q);
  }

  std::vector<int> retained;
  AffineSpan lift_span = affine_span(lift);
  if (lift_span.dim <= d) {
    // Heights are affine over the domain: one cell, domain vertices retained.
    Hull dom = quickhull(work);
    retained = dom.vertices;
    SmallSquare sys(d + 1, d + 1);
    Vec rhs(d + 1);
    for (int i = 0; i <= d; ++i) {
      int w = env.loc_span_.witnesses[i];
      sys.row(i).head(d) = work[w].transpose();
      sys(i, d) = 1.0;
      rhs[i] = hts[w];
    }
    Vec sol = sys.fullPivLu().solve(rhs);
    EnvelopeCell cell;
    cell.grad = sol.head(d);
    cell.off = sol[d];
    cell.mass = hull_volume(work, dom);
    env.work_cells_ = {cell};
    env.dom_.emplace();
    for (const auto& f : dom.facets) env.dom_->push_back({f.normal, f.offset});
  } else {
    Hull hull = quickhull(lift);
    std::vector<char> used(work.size(), 0);
    for (const auto& f : hull.facets) {
      if (f.normal[d] >= -tol::geom) continue;  // upper facet or vertical wall
      EnvelopeCell cell;
      cell.grad = -f.normal.head(d) / f.normal[d];
      cell.off = f.offset / f.normal[d];
      // cell volume = projected simplex volume
      SmallSquare m(d, d);
      for (int i = 1; i <= d; ++i)
        m.col(i - 1) = (lift[f.v[i]] - lift[f.v[0]]).head(d);
      double fac = 1.0;
      for (int i = 2; i <= d; ++i) fac *= double(i);
      cell.mass = std::abs(m.determinant()) / fac;
      env.work_cells_.push_back(cell);
      for (int i = 0; i <= d; ++i) used[f.v[i]] = 1;
    }
    env.work_cells_ = merge_cells(std::move(env.work_cells_));
    for (int i = 0; i < int(work.size()); ++i)
      if (used[i]) retained.push_back(i);
  }

  // Canonical order: lexicographic by ambient location.
  std::sort(retained.begin(), retained.end(),
            [&](int a, int b) { return lex_less(locs[a], locs[b]); });
  env.pts_.reserve(retained.size());
  env.hts_.reserve(retained.size());
  for (int id : retained) {
    env.pts_.push_back(locs[id]);
    env.hts_.push_back(hts[id]);
    if (!full) env.work_pts_.push_back(work[id]);
  }
  if (full) env.amb_cells_ = env.work_cells_;
  return env;
}

const std::vector<EnvelopeCell>& Envelope::cells() const { return amb_cells_; }

const std::vector<HalfSpace>& Envelope::domain_facets() const {
  if (dom_) return *dom_;
  dom_.emplace();
  const auto& w = working_points();
  if (loc_span_.dim >= 1) {
    Hull h = quickhull(w);
    for (const auto& f : h.facets) dom_->push_back({f.normal, f.offset});
  }
  return *dom_;
}

double Envelope::eval(const Vec& x) const {
  require(int(x.size()) == dim_, "eval: dimension mismatch");
  const int d = loc_span_.dim;
  Vec xw;
  if (d == dim_) {
    xw = x;
  } else {
    // must lie in the affine hull of the domain
    xw = to_span_coords(loc_span_, x);
    Vec back = loc_span_.origin;
    for (int i = 0; i < d; ++i) back += xw[i] * loc_span_.basis[i];
    double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    if ((x - back).norm() > tol::geom * scale) return kInf;
  }
  if (d == 0) return hts_[0];

  double scale = std::max(1.0, coord_scale(working_points()));
  for (const auto& h : domain_facets())
    if (h.normal.dot(xw) > h.offset + tol::geom * scale) return kInf;
  double v = -kInf;
  for (const auto& c : work_cells_) v = std::max(v, c.grad.dot(xw) + c.off);
  return v;
}

bool Envelope::same(const Envelope& other, double eps) const {
  if (other.dim_ != dim_ || other.pts_.size() != pts_.size()) return false;
  for (size_t i = 0; i < pts_.size(); ++i) {
    if ((pts_[i] - other.pts_[i]).norm() > eps) return false;
    if (std::abs(hts_[i] - other.hts_[i]) > eps) return false;
  }
  return true;
}

Envelope Envelope::summed_with(const Envelope& other) const {
  require(other.dim_ == dim_, "sum: dimension mismatch");
  std::vector<Vec> pts;
  std::vector<double> hts;
  pts.reserve(pts_.size() * other.pts_.size());
  hts.reserve(pts_.size() * other.pts_.size());
  for (size_t i = 0; i < pts_.size(); ++i)
    for (size_t j = 0; j < other.pts_.size(); ++j) {
      pts.push_back(pts_[i] + other.pts_[j]);
      hts.push_back(hts_[i] + other.hts_[j]);
    }
  return build(std::move(pts), std::move(hts));
}

Envelope Envelope::scaled(double lambda) const {
  require(lambda > 0.0, "scale: nonpositive factor");
  Envelope e = *this;
  for (auto& p : e.pts_) p *= lambda;
  for (auto& h : e.hts_) h *= lambda;
  for (auto& p : e.work_pts_) p *= lambda;
  e.loc_span_.origin *= lambda;
  const int d = e.loc_span_.dim;
  for (auto& c : e.work_cells_) {
    c.off *= lambda;
    c.mass *= std::pow(lambda, d);
  }
  e.amb_cells_ = (d == e.dim_) ? e.work_cells_ : std::vector<EnvelopeCell>{};
  if (e.dom_)
    for (auto& h : *e.dom_) h.offset *= lambda;
  return e;
}

Envelope Envelope::rotated(const Rotation& r) const {
  require(r.dim() == dim_, "rotate: dimension mismatch");
  Envelope e = *this;
  for (auto& p : e.pts_) p = r.apply(p);
  e.loc_span_.origin = r.apply(e.loc_span_.origin);
  for (auto& b : e.loc_span_.basis) b = r.apply(b);
  const bool full = (e.loc_span_.dim == dim_);
  if (full) {
    for (auto& c : e.work_cells_) c.grad = r.apply(c.grad);
    if (e.dom_)
      for (auto& h : *e.dom_) h.normal = r.apply(h.normal);
    e.amb_cells_ = e.work_cells_;
  }
  // restore canonical order
  std::vector<int> order(e.pts_.size());
  for (int i = 0; i < int(order.size()); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return lex_less(e.pts_[a], e.pts_[b]); });
  Envelope out = e;
  for (size_t i = 0; i < order.size(); ++i) {
    out.pts_[i] = e.pts_[order[i]];
    out.hts_[i] = e.hts_[order[i]];
    if (!e.work_pts_.empty()) out.work_pts_[i] = e.work_pts_[order[i]];
  }
  return out;
}

Envelope Envelope::projected(const std::vector<Vec>& basis) const {
  const int k = int(basis.size());
  require(k >= 1 && k <= dim_, "project: bad subspace dimension");
  for (int i = 0; i < k; ++i) {
    require(std::abs(basis[i].norm() - 1.0) < 1e-9, "project: basis not unit");
    for (int j = i + 1; j < k; ++j)
      require(std::abs(basis[i].dot(basis[j])) < 1e-9,
              "project: basis not orthogonal");
  }
  std::vector<Vec> pts;
  pts.reserve(pts_.size());
  for (const auto& p : pts_) {
    Vec q(k);
    for (int i = 0; i < k; ++i) q[i] = basis[i].dot(p);
    pts.push_back(q);
  }
  return build(std::move(pts), hts_);
}

}  // namespace detail

using detail::Envelope;

MaxAffine MaxAffine::from_pieces(const std::vector<Piece>& pieces) {
  require(!pieces.empty(), "max_affine: no pieces");
  std::vector<Vec> pts;
  std::vector<double> hts;
  pts.reserve(pieces.size());
  for (const auto& p : pieces) {
    pts.push_back(p.a);
    hts.push_back(-p.b);
  }
  return MaxAffine(std::make_shared<const Envelope>(
      Envelope::build(std::move(pts), std::move(hts))));
}

std::vector<MaxAffine::Piece> MaxAffine::pieces() const {
  std::vector<Piece> out;
  out.reserve(env_->points().size());
  for (size_t i = 0; i < env_->points().size(); ++i)
    out.push_back({env_->points()[i], -env_->heights()[i]});
  return out;
}

double MaxAffine::eval(const Vec& x) const {
  double v = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < env_->points().size(); ++i)
    v = std::max(v, env_->points()[i].dot(x) - env_->heights()[i]);
  return v;
}

EpiPolyhedral MaxAffine::conjugate() const { return EpiPolyhedral(env_); }

EpiPolyhedral EpiPolyhedral::make(const std::vector<Point>& points) {
  require(!points.empty(), "epi_polyhedral: no points");
  std::vector<Vec> pts;
  std::vector<double> hts;
  pts.reserve(points.size());
  std::vector<double> h;
  for (const auto& p : points) {
    pts.push_back(p.p);
    h.push_back(p.c);
  }
  return EpiPolyhedral(std::make_shared<const Envelope>(
      Envelope::build(std::move(pts), std::move(h))));
}

std::vector<EpiPolyhedral::Point> EpiPolyhedral::points() const {
  std::vector<Point> out;
  out.reserve(env_->points().size());
  for (size_t i = 0; i < env_->points().size(); ++i)
    out.push_back({env_->points()[i], env_->heights()[i]});
  return out;
}

MaxAffine EpiPolyhedral::conjugate() const { return MaxAffine(env_); }

MaxAffine add(const MaxAffine& v, const MaxAffine& w) {
  require(v.dim() == w.dim(), "add: dimension mismatch");
  return MaxAffine(
      std::make_shared<const Envelope>(v.env_->summed_with(*w.env_)));
}

EpiPolyhedral inf_convolve(const EpiPolyhedral& u, const EpiPolyhedral& v) {
  require(u.dim() == v.dim(), "inf_convolve: dimension mismatch");
  return EpiPolyhedral(
      std::make_shared<const Envelope>(u.env_->summed_with(*v.env_)));
}

EpiPolyhedral epi_scale(double lambda, const EpiPolyhedral& u) {
  require(lambda >= 0.0, "epi_scale: negative factor");
  if (lambda == 0.0) {
    Vec o = Vec::Zero(u.dim());
    return EpiPolyhedral::make({{o, 0.0}});
  }
  return EpiPolyhedral(std::make_shared<const Envelope>(u.env_->scaled(lambda)));
}

MaxAffine rotate(const MaxAffine& f, const Rotation& r) {
  return MaxAffine(std::make_shared<const Envelope>(f.env_->rotated(r)));
}

EpiPolyhedral rotate(const EpiPolyhedral& u, const Rotation& r) {
  return EpiPolyhedral(std::make_shared<const Envelope>(u.env_->rotated(r)));
}

EpiPolyhedral indicator(const Polytope& k) {
  std::vector<Vec> pts = k.vertices();
  std::vector<double> hts(pts.size(), 0.0);
  return EpiPolyhedral(std::make_shared<const Envelope>(
      Envelope::build(std::move(pts), std::move(hts))));
}

MaxAffine support_fn(const Polytope& k) { return indicator(k).conjugate(); }

EpiPolyhedral floor_body(const Polytope& k) {
  const int n = k.dim();
  require(n >= 2, "floor_body: dimension must be at least 2");
  std::vector<Vec> pts;
  std::vector<double> hts;
  pts.reserve(k.vertices().size());
  for (const auto& v : k.vertices()) {
    pts.push_back(v.head(n - 1));
    hts.push_back(v[n - 1]);
  }
  return EpiPolyhedral(std::make_shared<const Envelope>(
      Envelope::build(std::move(pts), std::move(hts))));
}

EpiPolyhedral project(const EpiPolyhedral& u, const std::vector<Vec>& basis) {
  return EpiPolyhedral(std::make_shared<const Envelope>(u.env_->projected(basis)));
}

EpiPolyhedral inf_deconvolve(const EpiPolyhedral& u, const EpiPolyhedral& v) {
  require(u.dim() == v.dim(), "inf_deconvolve: dimension mismatch");
  MaxAffine vs = v.conjugate();
  auto pu = u.conjugate().pieces();
  auto pv = vs.pieces();

  // The full-dimensional cells of the common refinement of the u* and v*
  // complexes are the active pieces of the pointwise sum u* + v*.
  std::vector<Vec> pts;
  std::vector<double> hts;
  pts.reserve(pu.size() * pv.size());
  for (int i = 0; i < int(pu.size()); ++i)
    for (int k = 0; k < int(pv.size()); ++k) {
      pts.push_back(pu[i].a + pv[k].a);
      hts.push_back(-(pu[i].b + pv[k].b));
    }
  Envelope sum = Envelope::build(pts, hts);

  double scale = 1.0;
  for (const auto& p : pu)
    scale = std::max({scale, p.a.cwiseAbs().maxCoeff(), std::abs(p.b)});
  const double eps = tol::geom * scale;

  // Candidate pieces for w* = d: per realized envelope cell, the witnesses
  // (i,k) coinciding with it give pieces a_i - a_k, b_i - b_k; keep those
  // that minorize d, i.e. v* + piece <= u*, i.e. u(a + a_k') <= -(b + b_k')
  // for every k'.
  std::vector<MaxAffine::Piece> w_pieces;
  for (size_t c = 0; c < sum.points().size(); ++c) {
    const Vec& loc = sum.points()[c];
    const double ht = sum.heights()[c];
    for (int i = 0; i < int(pu.size()); ++i) {
      for (int k = 0; k < int(pv.size()); ++k) {
        if ((pu[i].a + pv[k].a - loc).norm() > eps) continue;
        if (std::abs(-(pu[i].b + pv[k].b) - ht) > eps) continue;
        Vec a = pu[i].a - pv[k].a;
        double b = pu[i].b - pv[k].b;
        bool ok = true;
        for (const auto& q : pv) {
          Vec s = a + q.a;
          double e = b + q.b;
          if (!(u.eval(s) <= -e + eps)) {
            ok = false;
            break;
          }
        }
        if (ok) w_pieces.push_back({a, b});
      }
    }
  }
  if (w_pieces.empty())
    throw NotDeconvolvable(
        "not deconvolvable: conjugate difference fails convexity");

  // d is convex iff the collected minorants reconstruct it: v* + W = u*.
  // v* + W <= u* holds by construction; the converse is checked piecewise
  // (a max-affine piece (a,b) minorizes h iff h*(a) <= -b).
  MaxAffine w_star = MaxAffine::from_pieces(w_pieces);
  EpiPolyhedral vw_conj = add(vs, w_star).conjugate();
  for (const auto& p : pu)
    if (!(vw_conj.eval(p.a) <= -p.b + eps))
      throw NotDeconvolvable(
          "not deconvolvable: conjugate difference fails convexity");
  return w_star.conjugate();
}

RadialProfile RadialProfile::make(int dim, std::vector<double> breaks,
                                  std::vector<double> values) {
  require(dim >= 1 && dim <= kMaxDim, "radial: dimension out of range");
  require(breaks.size() >= 2 && breaks.size() == values.size(),
          "radial: need matching breaks and values");
  require(breaks.front() == 0.0, "radial: breaks must start at 0");
  for (size_t i = 1; i < breaks.size(); ++i)
    require(breaks[i] > breaks[i - 1], "radial: breaks must increase");
  RadialProfile r;
  r.dim_ = dim;
  r.breaks_ = std::move(breaks);
  r.vals_ = std::move(values);
  double prev = 0.0;
  for (size_t s = 0; s + 1 < r.breaks_.size(); ++s) {
    double sl = r.slope(s);
    require(sl >= prev - tol::rep, "radial: profile is not convex nondecreasing");
    prev = sl;
  }
  return r;
}

double RadialProfile::profile(double r) const {
  if (r < 0 || r > breaks_.back() + tol::rep)
    return std::numeric_limits<double>::infinity();
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
  size_t hi = std::min(size_t(it - breaks_.begin()), breaks_.size() - 1);
  if (hi == 0) hi = 1;
  size_t lo = hi - 1;
  double t = (r - breaks_[lo]) / (breaks_[hi] - breaks_[lo]);
  return vals_[lo] + t * (vals_[hi] - vals_[lo]);
}

double RadialProfile::slope(std::size_t s) const {
  return (vals_[s + 1] - vals_[s]) / (breaks_[s + 1] - breaks_[s]);
}

RadialProfile RadialProfile::inf_convolve(const RadialProfile& other) const {
  require(other.dim_ == dim_, "radial inf_convolve: dimension mismatch");
  // 1-D epi-sum of convex profiles: concatenate segments sorted by slope
  struct Seg {
    double slope, len;
  };
  std::vector<Seg> segs;
  for (size_t s = 0; s + 1 < breaks_.size(); ++s)
    segs.push_back({slope(s), breaks_[s + 1] - breaks_[s]});
  for (size_t s = 0; s + 1 < other.breaks_.size(); ++s)
    segs.push_back({other.slope(s), other.breaks_[s + 1] - other.breaks_[s]});
  std::stable_sort(segs.begin(), segs.end(),
                   [](const Seg& a, const Seg& b) { return a.slope < b.slope; });
  std::vector<double> breaks = {0.0};
  std::vector<double> vals = {vals_[0] + other.vals_[0]};
  for (const auto& s : segs) {
    breaks.push_back(breaks.back() + s.len);
    vals.push_back(vals.back() + s.slope * s.len);
  }
  RadialProfile r;
  r.dim_ = dim_;
  r.breaks_ = std::move(breaks);
  r.vals_ = std::move(vals);
  return r;
}

RadialProfile RadialProfile::epi_scale(double lambda) const {
  require(lambda > 0.0, "radial epi_scale: factor must be positive");
  RadialProfile r = *this;
  for (auto& b : r.breaks_) b *= lambda;
  for (auto& v : r.vals_) v *= lambda;
  return r;
}

EpiPolyhedral RadialProfile::discretize(int directions) const {
  Polytope sphere = polytopal_ball(dim_, directions);
  std::vector<EpiPolyhedral::Point> pts;
  Vec o = Vec::Zero(dim_);
  pts.push_back({o, vals_[0]});
  for (size_t i = 1; i < breaks_.size(); ++i)
    for (const auto& z : sphere.vertices())
      pts.push_back({Vec(breaks_[i] * z), vals_[i]});
  return EpiPolyhedral::make(pts);
}

RadialProfile cone_function(int dim, double t, double lambda) {
  require(t >= 0.0 && lambda > 0.0, "cone_function: bad parameters");
  return RadialProfile::make(dim, {0.0, lambda}, {0.0, t * lambda});
}

}  // namespace kinvol
