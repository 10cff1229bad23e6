#include "kinvol/hull.hpp"

#include <algorithm>
#include <map>

namespace kinvol::detail {

namespace {

double scale_of(const std::vector<Vec>& pts) {
  double s = 1.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

using SmallMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxLift, kMaxLift>;

}  // namespace

AffineSpan affine_span(const std::vector<Vec>& pts, double eps) {
  require(!pts.empty(), "affine_span: empty point set");
  const int d = int(pts[0].size());
  const double eeff = eps * scale_of(pts);

  AffineSpan sp;
  sp.origin = pts[0];
  sp.witnesses.push_back(0);
  while (int(sp.basis.size()) < d) {
    // farthest-residual point keeps the basis well conditioned
    int best = -1;
    double best_norm = eeff;
    Vec best_res;
    for (int i = 0; i < int(pts.size()); ++i) {
      Vec r = pts[i] - sp.origin;
      for (const auto& b : sp.basis) r -= b.dot(r) * b;
      double nr = r.norm();
      if (nr > best_norm) {
        best_norm = nr;
        best = i;
        best_res = r;
      }
    }
    if (best < 0) break;
    sp.basis.push_back(best_res / best_norm);
    sp.witnesses.push_back(best);
  }
  sp.dim = int(sp.basis.size());
  return sp;
}

Vec to_span_coords(const AffineSpan& sp, const Vec& p) {
  Vec c(sp.dim);
  for (int i = 0; i < sp.dim; ++i) c[i] = sp.basis[i].dot(p - sp.origin);
  return c;
}

namespace {

// 1-D "hull": a segment (or a point, which callers exclude via affine_span).
Hull hull_1d(const std::vector<Vec>& pts) {
  int lo = 0, hi = 0;
  for (int i = 1; i < int(pts.size()); ++i) {
    if (pts[i][0] < pts[lo][0]) lo = i;
    if (pts[i][0] > pts[hi][0]) hi = i;
  }
  Hull h;
  h.vertices = {std::min(lo, hi), std::max(lo, hi)};
  Facet fl, fh;
  fl.v[0] = lo;
  fl.normal = Vec(1);
  fl.normal[0] = -1.0;
  fl.offset = -pts[lo][0];
  fh.v[0] = hi;
  fh.normal = Vec(1);
  fh.normal[0] = 1.0;
  fh.offset = pts[hi][0];
  h.facets = {fl, fh};
  return h;
}

// 2-D hull via monotone chain; facets are edges with outward normals.
Hull hull_2d(const std::vector<Vec>& pts, double eeff) {
  std::vector<int> idx(pts.size());
  for (int i = 0; i < int(idx.size()); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pts[a][0] != pts[b][0]) return pts[a][0] < pts[b][0];
    return pts[a][1] < pts[b][1];
  });
  auto cross = [&](int o, int a, int b) {
    return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) -
           (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0]);
  };
  const double area_eps = eeff * scale_of(pts);
  std::vector<int> ring;  // counterclockwise
  for (int pass = 0; pass < 2; ++pass) {
    size_t base = ring.size();
    auto at = [&](size_t k) { return pass == 0 ? idx[k] : idx[idx.size() - 1 - k]; };
    for (size_t k = 0; k < idx.size(); ++k) {
      int p = at(k);
      while (ring.size() >= base + 2 &&
             cross(ring[ring.size() - 2], ring.back(), p) <= area_eps)
        ring.pop_back();
      ring.push_back(p);
    }
    ring.pop_back();  // endpoint repeats as the next pass's start
  }
  Hull h;
  h.vertices = ring;
  std::sort(h.vertices.begin(), h.vertices.end());
  const int k = int(ring.size());
  for (int i = 0; i < k; ++i) {
    int a = ring[i], b = ring[(i + 1) % k];
    Vec e = pts[b] - pts[a];
    Vec n(2);
    n[0] = e[1];
    n[1] = -e[0];
    n.normalize();
    Facet f;
    f.v[0] = a;
    f.v[1] = b;
    f.normal = n;
    f.offset = n.dot(pts[a]);
    h.facets.push_back(f);
  }
  return h;
}

// Quickhull with conflict lists for d >= 3.
struct QuickHullND {
  const std::vector<Vec>& pts;
  const int d;
  const double eps;
  Vec interior;

  struct F {
    std::array<int, kMaxLift> v{};
    std::array<int, kMaxLift> adj{};  // neighbor across ridge omitting v[i]
    Vec normal;
    double offset = 0.0;
    std::vector<int> out;  // conflict list
    int far_pt = -1;
    double far_dist = 0.0;
    bool alive = true;
  };
  std::vector<F> fs;
  std::vector<int> pending;

  QuickHullND(const std::vector<Vec>& p, int dim, double e)
      : pts(p), d(dim), eps(e) {}

  double dist(const F& f, int p) const { return f.normal.dot(pts[p]) - f.offset; }

  bool plane_of(const std::array<int, kMaxLift>& vv, Vec& n, double& off) const {
    SmallMat a(d - 1, d);
    for (int i = 1; i < d; ++i)
      a.row(i - 1) = (pts[vv[i]] - pts[vv[0]]).transpose();
    Eigen::FullPivLU<SmallMat> lu(a);
    lu.setThreshold(1e-12);
    if (lu.dimensionOfKernel() != 1) return false;
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxLift, 1> ker =
        lu.kernel();
    n = ker.col(0);
    double nn = n.norm();
    if (!(nn > 0)) return false;
    n /= nn;
    off = n.dot(pts[vv[0]]);
    return true;
  }

  int make_facet(const std::array<int, kMaxLift>& vv) {
    F f;
    f.v = vv;
    if (!plane_of(vv, f.normal, f.offset)) return -1;
    if (f.normal.dot(interior) > f.offset) {
      f.normal = -f.normal;
      f.offset = -f.offset;
      // keep vertex order irrelevant; orientation is carried by the normal
    }
    fs.push_back(std::move(f));
    return int(fs.size()) - 1;
  }

  void assign_point(int p) {
    // first facet that sees p; farthest-point bookkeeping per facet
    for (int fi = 0; fi < int(fs.size()); ++fi) {
      if (!fs[fi].alive) continue;
      double dd = dist(fs[fi], p);
      if (dd > eps) {
        fs[fi].out.push_back(p);
        if (dd > fs[fi].far_dist) {
          fs[fi].far_dist = dd;
          fs[fi].far_pt = p;
        }
        return;
      }
    }
  }

  void assign_points(const std::vector<int>& candidates,
                     const std::vector<int>& new_facets) {
    for (int p : candidates) {
      double best = eps;
      int best_f = -1;
      for (int fi : new_facets) {
        double dd = dist(fs[fi], p);
        if (dd > best) {
          best = dd;
          best_f = fi;
        }
      }
      if (best_f >= 0) {
        fs[best_f].out.push_back(p);
        if (best > fs[best_f].far_dist) {
          fs[best_f].far_dist = best;
          fs[best_f].far_pt = p;
        }
      }
    }
  }

  Hull run() {
    AffineSpan sp = affine_span(pts, tol::geom);
    require(sp.dim == d, "quickhull: input does not span the ambient dimension");
    const auto& w = sp.witnesses;

    interior = Vec::Zero(d);
    for (int i = 0; i <= d; ++i) interior += pts[w[i]];
    interior /= double(d + 1);

    // initial simplex: facet i omits witness i
    for (int i = 0; i <= d; ++i) {
      std::array<int, kMaxLift> vv{};
      int k = 0;
      for (int j = 0; j <= d; ++j)
        if (j != i) vv[k++] = w[j];
      int id = make_facet(vv);
      require(id >= 0, "quickhull: degenerate initial simplex");
    }
    for (int i = 0; i <= d; ++i) {
      // adjacency: facet i and facet j share the ridge omitting w[i], w[j];
      // slot of facet i holding w[j] points to facet j
      for (int s = 0; s < d; ++s) {
        int vtx = fs[i].v[s];
        for (int j = 0; j <= d; ++j) {
          if (j == i) continue;
          bool has = false;
          for (int t = 0; t < d; ++t) has |= (fs[j].v[t] == vtx);
          if (!has) {
            fs[i].adj[s] = j;
            break;
          }
        }
      }
    }

    std::vector<char> in_simplex(pts.size(), 0);
    for (int i = 0; i <= d; ++i) in_simplex[w[i]] = 1;
    for (int p = 0; p < int(pts.size()); ++p)
      if (!in_simplex[p]) assign_point(p);
    for (int fi = 0; fi < int(fs.size()); ++fi)
      if (!fs[fi].out.empty()) pending.push_back(fi);

    std::vector<int> visible, horizon_f, horizon_slot, new_ids, orphan;
    while (!pending.empty()) {
      int fi = pending.back();
      pending.pop_back();
      if (!fs[fi].alive || fs[fi].out.empty()) continue;
      int p = fs[fi].far_pt;

      // BFS for the visible set
      visible.assign(1, fi);
      fs[fi].alive = false;
      horizon_f.clear();
      horizon_slot.clear();
      for (size_t qi = 0; qi < visible.size(); ++qi) {
        int g = visible[qi];
        for (int s = 0; s < d; ++s) {
          int h = fs[g].adj[s];
          if (!fs[h].alive) continue;  // already visible (or being replaced)
          if (dist(fs[h], p) > eps) {
            fs[h].alive = false;
            visible.push_back(h);
          } else {
            horizon_f.push_back(g);
            horizon_slot.push_back(s);
          }
        }
      }

      // cone of new facets over the horizon ridges
      new_ids.clear();
      std::map<std::vector<int>, std::pair<int, int>> ridge_map;
      std::vector<std::array<int, 3>> undo_adj;  // (facet, slot, old target)
      bool degenerate = false;
      for (size_t e = 0; e < horizon_f.size() && !degenerate; ++e) {
        int g = horizon_f[e], s = horizon_slot[e];
        int h = fs[g].adj[s];
        std::array<int, kMaxLift> vv{};
        int k = 0;
        for (int t = 0; t < d; ++t)
          if (t != s) vv[k++] = fs[g].v[t];
        vv[d - 1] = p;
        int nid = make_facet(vv);
        if (nid < 0) {
          degenerate = true;
          break;
        }
        new_ids.push_back(nid);
        // across the old ridge: neighbor is the hidden facet h
        fs[nid].adj[d - 1] = h;
        for (int t = 0; t < d; ++t)
          if (fs[h].adj[t] == g) {
            undo_adj.push_back({h, t, g});
            fs[h].adj[t] = nid;
          }
        // ridges through p: match pairs of new facets
        for (int t = 0; t < d - 1; ++t) {
          std::vector<int> key;
          key.reserve(d - 2);
          for (int u = 0; u < d - 1; ++u)
            if (u != t) key.push_back(fs[nid].v[u]);
          std::sort(key.begin(), key.end());
          auto it = ridge_map.find(key);
          if (it == ridge_map.end()) {
            ridge_map.emplace(std::move(key), std::make_pair(nid, t));
          } else if (it->second.first < 0) {
            degenerate = true;  // same ridge seen three times
            break;
          } else {
            fs[nid].adj[t] = it->second.first;
            fs[it->second.first].adj[it->second.second] = nid;
            it->second.first = -1;
          }
        }
      }

      if (degenerate) {
        // p is numerically on the boundary: roll back and drop it
        for (auto it = undo_adj.rbegin(); it != undo_adj.rend(); ++it)
          fs[(*it)[0]].adj[(*it)[1]] = (*it)[2];
        for (int g : visible) fs[g].alive = true;
        for (int nid : new_ids) fs[nid].alive = false;
        auto& out = fs[fi].out;
        out.erase(std::remove(out.begin(), out.end(), p), out.end());
        fs[fi].far_dist = 0.0;
        fs[fi].far_pt = -1;
        for (int q : out) {
          double dd = dist(fs[fi], q);
          if (dd > fs[fi].far_dist) {
            fs[fi].far_dist = dd;
            fs[fi].far_pt = q;
          }
        }
        if (!out.empty()) pending.push_back(fi);
        continue;
      }

      orphan.clear();
      for (int g : visible) {
        for (int q : fs[g].out)
          if (q != p) orphan.push_back(q);
        fs[g].out.clear();
      }
      assign_points(orphan, new_ids);
      for (int nid : new_ids)
        if (!fs[nid].out.empty()) pending.push_back(nid);
    }

    Hull h;
    std::vector<char> used(pts.size(), 0);
    for (const auto& f : fs) {
      if (!f.alive) continue;
      Facet out;
      for (int i = 0; i < d; ++i) {
        out.v[i] = f.v[i];
        used[f.v[i]] = 1;
      }
      out.normal = f.normal;
      out.offset = f.offset;
      h.facets.push_back(out);
    }
    for (int i = 0; i < int(pts.size()); ++i)
      if (used[i]) h.vertices.push_back(i);
    return h;
  }
};

}  // namespace

Hull quickhull(const std::vector<Vec>& pts, double eps) {
  require(!pts.empty(), "quickhull: empty point set");
  const int d = int(pts[0].size());
  const double eeff = eps * scale_of(pts);
  if (d == 1) return hull_1d(pts);
  if (d == 2) return hull_2d(pts, eeff);
  QuickHullND qh(pts, d, eeff);
  return qh.run();
}

double facet_area(const std::vector<Vec>& pts, const Facet& f) {
  const int d = int(pts[f.v[0]].size());
  if (d == 1) return 1.0;  // 0-dimensional counting measure
  SmallMat e(d, d - 1);
  for (int i = 1; i < d; ++i) e.col(i - 1) = pts[f.v[i]] - pts[f.v[0]];
  double g = (e.transpose() * e).determinant();
  if (g <= 0) return 0.0;
  double fac = 1.0;
  for (int i = 2; i < d; ++i) fac *= double(i);
  return std::sqrt(g) / fac;
}

double hull_volume(const std::vector<Vec>& pts, const Hull& h) {
  if (h.facets.empty()) return 0.0;
  const int d = int(pts[0].size());
  if (d == 1) return pts[h.vertices[1]][0] - pts[h.vertices[0]][0];
  Vec ref = Vec::Zero(d);
  for (int id : h.vertices) ref += pts[id];
  ref /= double(h.vertices.size());
  double vol = 0.0;
  for (const auto& f : h.facets) {
    double height = f.normal.dot(pts[f.v[0]] - ref);
    vol += height * facet_area(pts, f);
  }
  return vol / double(d);
}

}  // namespace kinvol::detail
