#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kinvol/convex.hpp"

#include "test_util.hpp"

using namespace kinvol;
using namespace kinvol::testutil;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

EpiPolyhedral origin_indicator(int n) {
  return EpiPolyhedral::make({{Vec(Vec::Zero(n)), 0.0}});
}

}  // namespace

TEST_CASE("conjugate of a point indicator is the zero function") {
  EpiPolyhedral io = origin_indicator(2);
  MaxAffine z = io.conjugate();
  CHECK(z.piece_count() == 1);
  CHECK(z.eval(v2(3, -2)) == doctest::Approx(0.0));
}

TEST_CASE("support function and indicator are conjugate") {
  Polytope sq = square_sym();
  MaxAffine h = support_fn(sq);
  CHECK(h.piece_count() == 4);
  CHECK(h.eval(v2(0.3, -0.7)) == doctest::Approx(0.3 + 0.7));  // |x1|+|x2|
  CHECK(h.eval(v2(-2, 1)) == doctest::Approx(3.0));

  EpiPolyhedral ik = h.conjugate();
  CHECK(ik.point_count() == 4);
  CHECK(ik.eval(v2(0.5, 0.5)) == doctest::Approx(0.0));
  CHECK(ik.eval(v2(1.5, 0.0)) == kInf);
  CHECK(indicator(sq).same(ik));
}

TEST_CASE("double conjugation is the identity on canonical forms") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    MaxAffine f = random_max_affine(2, 10, seed);
    MaxAffine g = f.conjugate().conjugate();
    CHECK(g.same(f, 1e-12));

    EpiPolyhedral u = random_epi(2, 12, seed + 50);
    CHECK(u.conjugate().conjugate().same(u, 1e-12));
  }
}

TEST_CASE("max-affine pruning keeps only active pieces") {
  // the third piece lies below the other two everywhere
  MaxAffine f = MaxAffine::from_pieces(
      {{v2(1, 0), 0.0}, {v2(-1, 0), 0.0}, {v2(0, 0), -5.0}});
  CHECK(f.piece_count() == 2);
}

TEST_CASE("inf convolution basics") {
  EpiPolyhedral u = random_epi(2, 10, 9);
  EpiPolyhedral e = inf_convolve(u, origin_indicator(2));
  CHECK(e.same(u, 1e-12));

  Polytope k = square01(), l = square_sym(0.5);
  EpiPolyhedral both = inf_convolve(indicator(k), indicator(l));
  EpiPolyhedral direct = indicator(minkowski_sum(k, l));
  CHECK(both.same(direct, 1e-12));
  auto g = grid(v2(-1, -1), v2(2, 2), 21);
  CHECK(grid_max_dev(g, [&](const Vec& p) { return both.eval(p); },
                     [&](const Vec& p) { return direct.eval(p); }) == 0.0);
}

TEST_CASE("conjugate exchanges pointwise sum and epi-sum") {
  for (std::uint64_t seed : {21u, 22u}) {
    MaxAffine v1m = random_max_affine(2, 6, seed);
    MaxAffine v2m = random_max_affine(2, 7, seed + 100);
    EpiPolyhedral lhs = add(v1m, v2m).conjugate();
    EpiPolyhedral rhs = inf_convolve(v1m.conjugate(), v2m.conjugate());
    CHECK(lhs.same(rhs, 1e-12));
    auto g = grid(v2(-2, -2), v2(2, 2));
    CHECK(grid_max_dev(g, [&](const Vec& p) { return lhs.eval(p); },
                       [&](const Vec& p) { return rhs.eval(p); }) < 1e-9);
  }
}

TEST_CASE("epi scaling") {
  EpiPolyhedral u = random_epi(2, 10, 77);
  CHECK(epi_scale(1.0, u).same(u, 1e-12));
  CHECK(epi_scale(0.0, u).same(origin_indicator(2), 1e-12));
  CHECK_THROWS(epi_scale(-0.5, u));

  Polytope b = polytopal_ball(2, 16);
  EpiPolyhedral doubled = epi_scale(2.0, indicator(b));
  EpiPolyhedral direct = indicator(b.scaled(2.0));
  CHECK(doubled.same(direct, 1e-12));

  // (lambda # u)(x) = lambda u(x/lambda) at interior grid points
  EpiPolyhedral u2 = epi_scale(2.0, u);
  auto g = grid(v2(-0.8, -0.8), v2(0.8, 0.8), 9);
  for (const auto& p : g) {
    double a = u2.eval(Vec(2.0 * p)), b2 = u.eval(p);
    if (std::isinf(b2)) continue;
    CHECK(a == doctest::Approx(2.0 * b2).epsilon(1e-9));
  }
}

TEST_CASE("pointwise sum of max-affine functions") {
  MaxAffine v = random_max_affine(2, 5, 31);
  MaxAffine zero = MaxAffine::from_pieces({{Vec(Vec::Zero(2)), 0.0}});
  CHECK(add(v, zero).same(v, 1e-12));

  Polytope k = square01(), l = square_sym(0.7);
  MaxAffine hsum = add(support_fn(k), support_fn(l));
  MaxAffine hdirect = support_fn(minkowski_sum(k, l));
  for (int i = 0; i < 32; ++i) {
    double t = 2.0 * M_PI * i / 32;
    Vec d = v2(std::cos(t), std::sin(t));
    CHECK(hsum.eval(d) == doctest::Approx(hdirect.eval(d)).epsilon(1e-12));
  }

  MaxAffine w = random_max_affine(2, 7, 32);
  CHECK(add(v, w).piece_count() <= v.piece_count() * w.piece_count());
}

TEST_CASE("rotation commutes with conjugation") {
  Rng rng(5);
  Rotation r = sample_rotation(2, rng);
  EpiPolyhedral u = random_epi(2, 11, 41);

  CHECK(rotate(u, identity_rotation(2)).same(u, 1e-12));
  EpiPolyhedral lhs = rotate(u, r).conjugate().conjugate();  // sanity
  CHECK(lhs.same(rotate(u, r), 1e-12));

  MaxAffine a = rotate(u, r).conjugate();
  MaxAffine b = rotate(u.conjugate(), r);
  CHECK(a.same(b, 1e-12));

  EpiPolyhedral back = rotate(rotate(u, r), r.inverse());
  CHECK(back.same(u, 1e-9));
}

TEST_CASE("floor of a body") {
  // floor of the in-hyperplane disk is the indicator of the lower-dim ball
  Polytope disk = polytopal_disk_in_hyperplane(2, 8);  // segment in R^2
  EpiPolyhedral f = floor_body(disk);
  CHECK(f.dim() == 1);
  CHECK(f.eval(v1(0.5)) == doctest::Approx(0.0));
  CHECK(f.eval(v1(1.5)) == kInf);

  // floor of the unit simplex in R^2: zero on [0,1]
  Polytope simplex = Polytope::hull({v2(0, 0), v2(1, 0), v2(0, 1)});
  EpiPolyhedral fs = floor_body(simplex);
  CHECK(fs.point_count() == 2);
  CHECK(fs.eval(v1(0.3)) == doctest::Approx(0.0));
  CHECK(fs.eval(v1(1.0 + 1e-6)) == kInf);

  // floor(K + L) = floor(K) epi-sum floor(L)
  for (std::uint64_t seed : {61u, 62u}) {
    Polytope k = random_polytope(3, 8, seed);
    Polytope l = random_polytope(3, 8, seed + 10);
    EpiPolyhedral lhs = floor_body(minkowski_sum(k, l));
    EpiPolyhedral rhs = inf_convolve(floor_body(k), floor_body(l));
    CHECK(lhs.same(rhs, 1e-9));
    auto g = grid(v2(-2, -2), v2(2, 2), 21);
    CHECK(grid_max_dev(g, [&](const Vec& p) { return lhs.eval(p); },
                       [&](const Vec& p) { return rhs.eval(p); }) < 1e-9);
  }
}

TEST_CASE("projection") {
  EpiPolyhedral u = random_epi(2, 12, 71);
  std::vector<Vec> full = {v2(1, 0), v2(0, 1)};
  CHECK(project(u, full).same(u, 1e-12));

  Polytope k = square01();
  EpiPolyhedral pk = project(indicator(k), {v2(1, 0)});
  CHECK(pk.eval(v1(0.5)) == doctest::Approx(0.0));
  CHECK(pk.eval(v1(-0.5)) == kInf);

  CHECK_THROWS(project(u, {v2(1, 1)}));  // not orthonormal

  // projection of a radial function keeps the profile
  RadialProfile phi = RadialProfile::make(2, {0, 0.25, 0.5, 0.75, 1.0},
                                          {0.0, 0.1, 0.35, 0.8, 1.5});
  EpiPolyhedral disc = phi.discretize(64);
  EpiPolyhedral proj = project(disc, {v2(1, 0)});
  for (double x : {-0.9, -0.5, -0.25, 0.0, 0.3, 0.75, 0.99}) {
    CHECK(proj.eval(v1(x)) ==
          doctest::Approx(phi.profile(std::abs(x))).epsilon(1e-9));
  }
  // 1-D minimization oracle: min over a fine slice
  for (double x : {0.2, 0.6}) {
    double oracle = kInf;
    for (int i = 0; i <= 400; ++i) {
      double t = -1.0 + 2.0 * i / 400;
      oracle = std::min(oracle, disc.eval(v2(x, t)));
    }
    CHECK(proj.eval(v1(x)) <= oracle + 1e-9);
    CHECK(proj.eval(v1(x)) >= oracle - 1e-2);
  }
}

TEST_CASE("inf deconvolution") {
  // (u epi+ v) deconvolved by v returns u
  for (std::uint64_t seed : {81u, 82u, 83u}) {
    EpiPolyhedral u = random_epi(2, 8, seed);
    EpiPolyhedral v = random_epi(2, 6, seed + 7);
    EpiPolyhedral w = inf_deconvolve(inf_convolve(u, v), v);
    CHECK(w.same(u, 1e-9));
  }

  Polytope b = polytopal_ball(2, 16);
  EpiPolyhedral w2 = inf_deconvolve(indicator(b.scaled(2.0)), indicator(b));
  CHECK(w2.same(indicator(b), 1e-9));

  CHECK_THROWS_AS(
      inf_deconvolve(indicator(square_sym(0.5)), indicator(square_sym(1.0))),
      NotDeconvolvable);
}

TEST_CASE("inf convolution is commutative, associative, scale-distributive") {
  EpiPolyhedral a = random_epi(2, 7, 91);
  EpiPolyhedral b = random_epi(2, 6, 92);
  EpiPolyhedral c = random_epi(2, 5, 93);

  CHECK(inf_convolve(a, b).same(inf_convolve(b, a), 1e-12));

  EpiPolyhedral l = inf_convolve(inf_convolve(a, b), c);
  EpiPolyhedral r = inf_convolve(a, inf_convolve(b, c));
  auto g = grid(v2(-3, -3), v2(3, 3));
  CHECK(grid_max_dev(g, [&](const Vec& p) { return l.eval(p); },
                     [&](const Vec& p) { return r.eval(p); }) < 1e-9);

  EpiPolyhedral s1 = epi_scale(1.7, inf_convolve(a, b));
  EpiPolyhedral s2 = inf_convolve(epi_scale(1.7, a), epi_scale(1.7, b));
  CHECK(grid_max_dev(g, [&](const Vec& p) { return s1.eval(p); },
                     [&](const Vec& p) { return s2.eval(p); }) < 1e-9);
}

TEST_CASE("radial profiles") {
  RadialProfile ib = cone_function(2, 0.0, 1.0);
  CHECK(ib.profile(0.7) == doctest::Approx(0.0));
  CHECK(std::isinf(ib.profile(1.2)));

  // cone pair: slopes sorted, lengths lambda then mu (s <= t)
  double lam = 0.8, mu = 0.5, s = 0.3, t = 0.9;
  RadialProfile pair =
      cone_function(2, s, lam).inf_convolve(cone_function(2, t, mu));
  CHECK(pair.radius() == doctest::Approx(lam + mu));
  CHECK(pair.profile(0.5 * lam) == doctest::Approx(s * 0.5 * lam));
  CHECK(pair.profile(lam + 0.5 * mu) ==
        doctest::Approx(s * lam + t * 0.5 * mu));

  CHECK_THROWS(RadialProfile::make(2, {0.0, 1.0, 2.0}, {0.0, 1.0, 1.5}));

  // epi-scaling agrees with the EpiPolyhedral discretization
  RadialProfile phi = RadialProfile::make(2, {0, 0.5, 1.0}, {0.0, 0.2, 0.9});
  RadialProfile scaled = phi.epi_scale(1.5);
  EpiPolyhedral disc = epi_scale(1.5, phi.discretize(128));
  for (double x : {0.1, 0.4, 0.8, 1.2, 1.45}) {
    CHECK(disc.eval(v2(x, 0)) ==
          doctest::Approx(scaled.profile(x)).epsilon(1e-6));
  }
}
