#include "kinvol/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

namespace kinvol {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= double(i);
  return f;
}

double coord_scale(const std::vector<Vec>& pts) {
  double s = 1.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

}  // namespace

Polytope Polytope::hull(std::vector<Vec> points) {
  require(!points.empty(), "empty point set");
  const int n = int(points[0].size());
  require(n >= 1 && n <= kMaxDim, "dimension out of range");
  for (const auto& p : points)
    require(int(p.size()) == n, "inconsistent point dimensions");

  Polytope out;
  out.dim_ = n;
  out.span_ = detail::affine_span(points);
  out.aff_dim_ = out.span_.dim;

  if (out.aff_dim_ == 0) {
    out.verts_ = {points[out.span_.witnesses[0]]};
    out.rel_volume_ = 1.0;  // counting measure of a point
    return out;
  }

  const bool full = (out.aff_dim_ == n);
  std::vector<Vec> work;
  if (full) {
    work = points;
  } else {
    work.reserve(points.size());
    for (const auto& p : points) work.push_back(detail::to_span_coords(out.span_, p));
  }

  detail::Hull h = detail::quickhull(work);
  out.rel_volume_ = detail::hull_volume(work, h);

  std::vector<int> order = h.vertices;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return lex_less(points[a], points[b]); });
  std::vector<int> remap(points.size(), -1);
  for (int i = 0; i < int(order.size()); ++i) remap[order[i]] = i;

  out.verts_.reserve(order.size());
  for (int id : order) out.verts_.push_back(points[id]);
  if (!full) {
    out.rel_verts_.reserve(order.size());
    for (int id : order) out.rel_verts_.push_back(work[id]);
  }
  out.facets_.reserve(h.facets.size());
  for (auto f : h.facets) {
    for (int i = 0; i < out.aff_dim_; ++i) f.v[i] = remap[f.v[i]];
    out.facets_.push_back(f);
  }
  return out;
}

double Polytope::support(const Vec& dir) const {
  double s = -std::numeric_limits<double>::infinity();
  for (const auto& v : verts_) s = std::max(s, dir.dot(v));
  return s;
}

Vec Polytope::centroid() const {
  Vec c = Vec::Zero(dim_);
  for (const auto& v : verts_) c += v;
  return c / double(verts_.size());
}

const std::vector<MergedFacet>& Polytope::facets() const {
  require(aff_dim_ == dim_, "facets: polytope is lower-dimensional");
  if (merged_) return *merged_;
  std::vector<MergedFacet> groups;
  const double scale = coord_scale(verts_);
  for (const auto& f : facets_) {
    MergedFacet* hit = nullptr;
    for (auto& g : groups) {
      if ((g.normal - f.normal).norm() < 1e-8 &&
          std::abs(g.offset - f.offset) < 1e-8 * scale) {
        hit = &g;
        break;
      }
    }
    if (!hit) {
      MergedFacet g;
      g.normal = f.normal;
      g.offset = f.offset;
      groups.push_back(g);
      hit = &groups.back();
    }
    hit->area += detail::facet_area(verts_, f);
  }
  for (auto& g : groups) {
    for (int i = 0; i < int(verts_.size()); ++i)
      if (std::abs(g.normal.dot(verts_[i]) - g.offset) <= tol::geom * scale)
        g.verts.push_back(i);
  }
  merged_ = std::move(groups);
  return *merged_;
}

Polytope Polytope::scaled(double c) const {
  require(c >= 0.0, "scaled: negative factor");
  if (c == 0.0) {
    std::vector<Vec> pt = {Vec(Vec::Zero(dim_))};
    return hull(pt);
  }
  Polytope out = *this;
  out.merged_.reset();
  for (auto& v : out.verts_) v *= c;
  for (auto& v : out.rel_verts_) v *= c;
  out.span_.origin *= c;
  for (auto& f : out.facets_) f.offset *= c;
  out.rel_volume_ *= std::pow(c, aff_dim_);
  return out;
}

Polytope Polytope::translated(const Vec& t) const {
  Polytope out = *this;
  out.merged_.reset();
  for (auto& v : out.verts_) v += t;
  out.span_.origin += t;
  if (aff_dim_ == dim_)
    for (auto& f : out.facets_) f.offset += f.normal.dot(t);
  return out;
}

bool Polytope::same_vertices(const Polytope& other, double eps) const {
  if (other.dim_ != dim_ || other.verts_.size() != verts_.size()) return false;
  for (size_t i = 0; i < verts_.size(); ++i)
    if ((verts_[i] - other.verts_[i]).norm() > eps) return false;
  return true;
}

Rotation Rotation::inverse() const {
  Rotation r;
  r.reflect_last = reflect_last;
  if (!reflect_last) {
    r.m = m.transpose();
  } else {
    // (rotate * reflect)^-1 = reflect * rotate^T = (sigma m^T sigma) * reflect
    Mat mt = m.transpose();
    const int n = int(m.rows());
    Mat s = Mat::Identity(n, n);
    s(n - 1, n - 1) = -1.0;
    r.m = s * mt * s;
  }
  return r;
}

Rotation sample_rotation(int n, Rng& rng) {
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  if (q.determinant() < 0) q.col(n - 1) = -q.col(n - 1);
  Rotation out;
  out.m = q;
  return out;
}

Rotation identity_rotation(int n) {
  Rotation r;
  r.m = Mat::Identity(n, n);
  return r;
}

double AtomicSphereMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.mass;
  return s;
}

Vec AtomicSphereMeasure::weighted_sum() const {
  Vec s = Vec::Zero(dim);
  for (const auto& a : atoms) s += a.mass * a.z;
  return s;
}

std::vector<AtomicSphereMeasure::Atom> merge_atoms(
    std::vector<AtomicSphereMeasure::Atom> atoms, double eps) {
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return lex_less(a.z, b.z); });
  std::vector<AtomicSphereMeasure::Atom> out;
  double mass_scale = 0.0;
  for (const auto& a : atoms) {
    mass_scale += std::abs(a.mass);
    bool merged = false;
    for (int k = int(out.size()) - 1; k >= 0; --k) {
      if (a.z[0] - out[k].z[0] > eps) break;
      if ((a.z - out[k].z).norm() < eps) {
        out[k].mass += a.mass;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(a);
  }
  const double floor_mass = 1e-13 * std::max(mass_scale, 1.0);
  std::erase_if(out, [&](const auto& a) { return std::abs(a.mass) < floor_mass; });
  return out;
}

Polytope convex_hull(const std::vector<Vec>& points) {
  return Polytope::hull(points);
}

Polytope minkowski_sum(const Polytope& p, const Polytope& q) {
  require(p.dim() == q.dim(), "minkowski_sum: dimension mismatch");
  std::vector<Vec> cand;
  cand.reserve(p.vertices().size() * q.vertices().size());
  for (const auto& a : p.vertices())
    for (const auto& b : q.vertices()) cand.push_back(a + b);
  return Polytope::hull(std::move(cand));
}

double volume(const Polytope& p) { return p.volume(); }

namespace {

double halton(int i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

}  // namespace

Polytope polytopal_ball(int n, int m) {
  require(n >= 1 && n <= kMaxDim, "polytopal_ball: dimension out of range");
  require(m >= n + 1, "polytopal_ball: resolution too small");
  std::vector<Vec> pts;
  pts.reserve(m);
  if (n == 1) {
    Vec a(1), b(1);
    a[0] = -1.0;
    b[0] = 1.0;
    pts = {a, b};
  } else if (n == 2) {
    for (int k = 0; k < m; ++k) {
      double t = 2.0 * M_PI * k / m;
      Vec v(2);
      v[0] = std::cos(t);
      v[1] = std::sin(t);
      pts.push_back(v);
    }
  } else if (n == 3) {
    const double ga = M_PI * (3.0 - std::sqrt(5.0));  // golden angle
    for (int k = 0; k < m; ++k) {
      double z = 1.0 - (2.0 * k + 1.0) / m;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double t = ga * k;
      Vec v(3);
      v[0] = r * std::cos(t);
      v[1] = r * std::sin(t);
      v[2] = z;
      pts.push_back(v);
    }
  } else {
    // Hopf coordinates with a Halton sequence: uniform on S^3
    for (int k = 1; k <= m; ++k) {
      double u1 = halton(k, 2), u2 = halton(k, 3), u3 = halton(k, 5);
      double eta = std::asin(std::sqrt(u1));
      double a = 2.0 * M_PI * u2, b = 2.0 * M_PI * u3;
      Vec v(4);
      v[0] = std::cos(eta) * std::cos(a);
      v[1] = std::cos(eta) * std::sin(a);
      v[2] = std::sin(eta) * std::cos(b);
      v[3] = std::sin(eta) * std::sin(b);
      pts.push_back(v);
    }
  }
  return Polytope::hull(std::move(pts));
}

Polytope polytopal_disk_in_hyperplane(int n, int m) {
  require(n >= 2, "disk: dimension out of range");
  Polytope d = polytopal_ball(n - 1, m);
  std::vector<Vec> pts;
  pts.reserve(d.vertices().size());
  for (const auto& v : d.vertices()) {
    Vec w = Vec::Zero(n);
    w.head(n - 1) = v;
    pts.push_back(w);
  }
  return Polytope::hull(std::move(pts));
}

AtomicSphereMeasure surface_area_measure(const Polytope& p) {
  const int n = p.dim();
  AtomicSphereMeasure s;
  s.dim = n;
  if (p.affine_dim() < n - 1) return s;

  if (p.affine_dim() == n - 1) {
    // the two sides of the affine hull, each carrying H^{n-1}(P)
    Vec nu;
    if (n == 1) {
      nu = Vec(1);
      nu[0] = 1.0;
    } else {
      Mat b(n - 1, n);
      for (int i = 0; i < n - 1; ++i) b.row(i) = p.span().basis[i].transpose();
      Eigen::FullPivLU<Mat> lu(b);
      Mat ker = lu.kernel();
      nu = ker.col(0);
      nu.normalize();
    }
    s.atoms.push_back({nu, p.relative_volume()});
    s.atoms.push_back({Vec(-nu), p.relative_volume()});
    s.atoms = merge_atoms(std::move(s.atoms));
    return s;
  }

  for (const auto& f : p.simplicial_facets())
    s.atoms.push_back({f.normal, detail::facet_area(p.vertices(), f)});
  s.atoms = merge_atoms(std::move(s.atoms));
  return s;
}

namespace {

// Distinct bodies with multiplicities; polarization terms depend only on
// the multiplicity vector of each argument subset.
struct BodyGroups {
  std::vector<const Polytope*> body;
  std::vector<int> mult;
};

BodyGroups group_bodies(const std::vector<Polytope>& bodies) {
  BodyGroups g;
  for (const auto& b : bodies) {
    bool found = false;
    for (size_t i = 0; i < g.body.size(); ++i) {
      if (g.body[i]->same_vertices(b, 0.0)) {
        ++g.mult[i];
        found = true;
        break;
      }
    }
    if (!found) {
      g.body.push_back(&b);
      g.mult.push_back(1);
    }
  }
  return g;
}

// Candidate vertex set of sum_g c_g * B_g (repeated summands dilate).
std::vector<Vec> sum_candidates(const BodyGroups& g, const std::vector<int>& c,
                                int n) {
  std::vector<Vec> cand = {Vec(Vec::Zero(n))};
  for (size_t i = 0; i < g.body.size(); ++i) {
    if (c[i] == 0) continue;
    std::vector<Vec> next;
    next.reserve(cand.size() * g.body[i]->vertices().size());
    for (const auto& a : cand)
      for (const auto& v : g.body[i]->vertices()) next.push_back(a + double(c[i]) * v);
    cand.swap(next);
  }
  return cand;
}

void enumerate_counts(const std::vector<int>& mult, std::vector<int>& c, size_t i,
                      const std::function<void(const std::vector<int>&)>& fn) {
  if (i == mult.size()) {
    fn(c);
    return;
  }
  for (int k = 0; k <= mult[i]; ++k) {
    c[i] = k;
    enumerate_counts(mult, c, i + 1, fn);
  }
}

}  // namespace

double mixed_volume(const std::vector<Polytope>& bodies) {
  require(!bodies.empty(), "mixed_volume: no bodies");
  const int n = bodies[0].dim();
  require(int(bodies.size()) == n, "mixed_volume: expected n bodies");
  for (const auto& b : bodies)
    require(b.dim() == n, "mixed_volume: dimension mismatch");

  BodyGroups g = group_bodies(bodies);

  struct Term {
    std::vector<int> c;
    double coeff;
    int sign;
  };
  std::vector<Term> terms;
  std::vector<int> c(g.body.size(), 0);
  enumerate_counts(g.mult, c, 0, [&](const std::vector<int>& cc) {
    int s = 0;
    for (int k : cc) s += k;
    if (s == 0) return;
    double coeff = 1.0;
    for (size_t i = 0; i < cc.size(); ++i) coeff *= binom(g.mult[i], cc[i]);
    terms.push_back({cc, coeff, ((n - s) % 2) ? -1 : 1});
  });

  std::vector<double> vals(terms.size(), 0.0);
#pragma omp parallel for schedule(dynamic) if (terms.size() > 3)
  for (int t = 0; t < int(terms.size()); ++t) {
    std::vector<Vec> cand = sum_candidates(g, terms[t].c, n);
    auto sp = detail::affine_span(cand);
    if (sp.dim < n) {
      vals[t] = 0.0;
    } else {
      detail::Hull h = detail::quickhull(cand);
      vals[t] = detail::hull_volume(cand, h);
    }
  }
  double total = 0.0;
  for (size_t t = 0; t < terms.size(); ++t)
    total += terms[t].sign * terms[t].coeff * vals[t];
  return total / factorial(n);
}

AtomicSphereMeasure mixed_area_measure(const std::vector<Polytope>& bodies) {
  require(!bodies.empty(), "mixed_area_measure: no bodies");
  const int n = bodies[0].dim();
  require(int(bodies.size()) == n - 1, "mixed_area_measure: expected n-1 bodies");
  for (const auto& b : bodies)
    require(b.dim() == n, "mixed_area_measure: dimension mismatch");

  BodyGroups g = group_bodies(bodies);
  AtomicSphereMeasure acc;
  acc.dim = n;
  std::vector<int> c(g.body.size(), 0);
  enumerate_counts(g.mult, c, 0, [&](const std::vector<int>& cc) {
    int s = 0;
    for (int k : cc) s += k;
    if (s == 0) return;
    double coeff = 1.0;
    for (size_t i = 0; i < cc.size(); ++i) coeff *= binom(g.mult[i], cc[i]);
    double sgn = ((n - 1 - s) % 2) ? -1.0 : 1.0;
    std::vector<Vec> cand = sum_candidates(g, cc, n);
    AtomicSphereMeasure sm = surface_area_measure(Polytope::hull(std::move(cand)));
    for (auto& a : sm.atoms) acc.atoms.push_back({a.z, sgn * coeff * a.mass});
  });

  acc.atoms = merge_atoms(std::move(acc.atoms));
  const double fac = factorial(n - 1);
  int clamped = 0;
  for (auto& a : acc.atoms) {
    a.mass /= fac;
    if (a.mass < 0) {
      if (a.mass < -tol::geom) ++clamped;
      a.mass = 0.0;
    }
  }
  if (clamped > 0)
    std::fprintf(stderr,
                 "kinvol: mixed_area_measure clamped %d negative atom(s)\n",
                 clamped);
  std::erase_if(acc.atoms, [](const auto& a) { return a.mass == 0.0; });
  return acc;
}

double intrinsic_volume_mixed_path(const Polytope& p, int j, int m,
                                   bool extrapolate) {
  const int n = p.dim();
  require(j >= 0 && j <= n, "intrinsic_volume: j out of range");
  if (j == 0) return 1.0;
  auto one = [&](int mm) {
    Polytope ball = polytopal_ball(n, mm);
    std::vector<Polytope> bodies;
    bodies.reserve(n);
    for (int i = 0; i < j; ++i) bodies.push_back(p);
    for (int i = j; i < n; ++i) bodies.push_back(ball);
    return binom(n, j) * mixed_volume(bodies) / kappa(n - j);
  };
  if (j == n || !extrapolate) return one(m);
  // inscribed-ball bias is O(m^{-2/(n-1)}); extrapolate over m and 2m
  const double order = 2.0 / double(n - 1);
  const double f = std::pow(2.0, order);
  return (f * one(2 * m) - one(m)) / (f - 1.0);
}

double intrinsic_volume(const Polytope& p, int j, int ball_resolution) {
  const int n = p.dim();
  require(j >= 0 && j <= n, "intrinsic_volume: j out of range");
  if (j == 0) return 1.0;
  if (j == n) return p.volume();
  if (j == n - 1) return surface_area_measure(p).total_mass() / 2.0;
  return intrinsic_volume_mixed_path(p, j, ball_resolution, true);
}

Polytope rotate(const Polytope& p, const Rotation& r) {
  std::vector<Vec> pts;
  pts.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) pts.push_back(r.apply(v));
  return Polytope::hull(std::move(pts));
}

}  // namespace kinvol
