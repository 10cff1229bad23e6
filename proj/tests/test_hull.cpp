#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kinvol/hull.hpp"

#include <algorithm>

using namespace kinvol;
using namespace kinvol::detail;

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

std::vector<Vec> random_points(int n, int count, std::uint64_t seed,
                               double radius = 1.0) {
  Rng rng(seed);
  std::vector<Vec> pts;
  for (int i = 0; i < count; ++i) {
    // rejection sample the ball
    while (true) {
      Vec p(n);
      for (int k = 0; k < n; ++k) p[k] = rng.uniform(-1.0, 1.0);
      if (p.norm() <= 1.0) {
        pts.push_back(radius * p);
        break;
      }
    }
  }
  return pts;
}

// Monte Carlo rejection-sampling volume oracle for a hull given by facets.
double mc_volume(const std::vector<Vec>& pts, const Hull& h, double box,
                 int n_samples, std::uint64_t seed) {
  const int d = int(pts[0].size());
  Rng rng(seed);
  int inside = 0;
  for (int s = 0; s < n_samples; ++s) {
    Vec p(d);
    for (int k = 0; k < d; ++k) p[k] = rng.uniform(-box, box);
    bool in = true;
    for (const auto& f : h.facets) {
      if (f.normal.dot(p) > f.offset) {
        in = false;
        break;
      }
    }
    inside += in ? 1 : 0;
  }
  return std::pow(2.0 * box, d) * double(inside) / double(n_samples);
}

}  // namespace

TEST_CASE("affine span detects degenerate sets") {
  std::vector<Vec> seg = {v2(0, 0), v2(1, 1), v2(0.5, 0.5)};
  auto sp = affine_span(seg);
  CHECK(sp.dim == 1);
  std::vector<Vec> tri = {v2(0, 0), v2(1, 0), v2(0, 1)};
  CHECK(affine_span(tri).dim == 2);
  std::vector<Vec> pt = {v3(2, 3, 4), v3(2, 3, 4)};
  CHECK(affine_span(pt).dim == 0);
}

TEST_CASE("2d hull prunes interior points") {
  std::vector<Vec> pts = {v2(0, 0), v2(1, 0), v2(0, 1), v2(0.2, 0.2)};
  Hull h = quickhull(pts);
  CHECK(h.vertices.size() == 3);
  CHECK(std::find(h.vertices.begin(), h.vertices.end(), 3) == h.vertices.end());
  CHECK(hull_volume(pts, h) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("square facets have axis normals") {
  std::vector<Vec> pts = {v2(1, 1), v2(-1, 1), v2(1, -1), v2(-1, -1)};
  Hull h = quickhull(pts);
  CHECK(h.vertices.size() == 4);
  CHECK(h.facets.size() == 4);
  for (const auto& f : h.facets) {
    CHECK(f.normal.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    CHECK(f.offset == doctest::Approx(1.0));
  }
  CHECK(hull_volume(pts, h) == doctest::Approx(4.0));
}

TEST_CASE("3d cube hull") {
  std::vector<Vec> pts;
  for (int i = 0; i < 8; ++i)
    pts.push_back(v3(i & 1 ? 1 : 0, i & 2 ? 1 : 0, i & 4 ? 1 : 0));
  pts.push_back(v3(0.5, 0.5, 0.5));
  Hull h = quickhull(pts);
  CHECK(h.vertices.size() == 8);
  CHECK(hull_volume(pts, h) == doctest::Approx(1.0).epsilon(1e-12));
  // every point is inside every facet halfspace
  for (const auto& f : h.facets)
    for (const auto& p : pts) CHECK(f.normal.dot(p) <= f.offset + 1e-9);
}

TEST_CASE("random 3d hulls match the Monte Carlo volume oracle") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    auto pts = random_points(3, 100, seed);
    Hull h = quickhull(pts);
    double vol = hull_volume(pts, h);
    CHECK(vol <= kappa(3) + 1e-9);
    double mc = mc_volume(pts, h, 1.0, 200000, seed * 7 + 1);
    CHECK(vol == doctest::Approx(mc).epsilon(0.03));
    for (int id : h.vertices) CHECK(pts[id].norm() <= 1.0 + 1e-12);
  }
}

TEST_CASE("random 4d hull is consistent") {
  auto pts = random_points(4, 120, 99);
  Hull h = quickhull(pts);
  double vol = hull_volume(pts, h);
  CHECK(vol > 0.0);
  CHECK(vol <= kappa(4) + 1e-9);
  for (const auto& f : h.facets)
    for (const auto& p : pts) CHECK(f.normal.dot(p) <= f.offset + 1e-8);
  double mc = mc_volume(pts, h, 1.0, 200000, 5);
  CHECK(vol == doctest::Approx(mc).epsilon(0.05));
}

TEST_CASE("5d simplex hull (lifted-space dimension)") {
  std::vector<Vec> pts;
  Vec z = Vec::Zero(5);
  pts.push_back(z);
  for (int i = 0; i < 5; ++i) {
    Vec e = Vec::Zero(5);
    e[i] = 1.0;
    pts.push_back(e);
  }
  Vec inner = Vec::Constant(5, 0.1);
  pts.push_back(inner);
  Hull h = quickhull(pts);
  CHECK(h.vertices.size() == 6);
  CHECK(hull_volume(pts, h) == doctest::Approx(1.0 / 120.0).epsilon(1e-10));
}

TEST_CASE("hull idempotence on the vertex set") {
  auto pts = random_points(3, 60, 21);
  Hull h = quickhull(pts);
  std::vector<Vec> verts;
  for (int id : h.vertices) verts.push_back(pts[id]);
  Hull h2 = quickhull(verts);
  CHECK(h2.vertices.size() == verts.size());
  CHECK(hull_volume(verts, h2) ==
        doctest::Approx(hull_volume(pts, h)).epsilon(1e-10));
}
