#include "doctest.h"

#include "deltakit/frames.hpp"
#include "deltakit/theorems.hpp"
#include "deltakit/rng.hpp"
#include "oracles.hpp"

using namespace dk;

namespace {

BoundaryPoint boundary_at(const DomainSpec& s, const Vec& z) {
  return project_to_boundary(s, z);
}

std::vector<BoundaryPoint> boundary_samples(const DomainSpec& s, int count, uint64_t seed) {
  int amb = 0, inacc = 0;
  auto pts = ShellSampler::draw(s, s.shell_width, "inside", count, seed, 1, &amb, &inacc);
  std::vector<BoundaryPoint> out;
  for (auto& p : pts) out.push_back(std::move(p.boundary));
  return out;
}

}  // namespace

TEST_CASE("tangent frames of flat and round boundaries") {
  DomainSpec hs = make_catalog_domain("half-space");
  BoundaryPoint p = boundary_at(hs, Vec{0.1, 0.2, -0.3, 0.4});
  TangentFrame fr = tangent_frame(hs, p);
  CHECK(norm2(vsub(fr.normal, Vec{0, 0, 1, 0})) < 1e-12);
  CHECK(norm2(vsub(fr.i_normal, Vec{0, 0, 0, 1})) < 1e-12);
  REQUIRE(fr.ct_basis.size() == 1);
  CHECK(std::abs(std::abs(fr.ct_basis[0][0]) - 1.0) < 1e-12);  // span{e1}
  CHECK(std::abs(fr.ct_basis[0][1]) < 1e-12);

  DomainSpec ball = make_catalog_domain("ball");
  BoundaryPoint pb = boundary_at(ball, Vec{0.5, 0, 0, 0});
  TangentFrame fb = tangent_frame(ball, pb);
  CHECK(norm2(vsub(fb.normal, Vec{1, 0, 0, 0})) < 1e-10);
  CHECK(norm2(vsub(fb.i_normal, Vec{0, 1, 0, 0})) < 1e-10);
  REQUIRE(fb.ct_basis.size() == 1);
  CHECK(std::abs(fb.ct_basis[0][0]) < 1e-10);  // span{e2}
  CHECK(std::abs(std::abs(fb.ct_basis[0][1]) - 1.0) < 1e-10);
  CHECK(fb.rt_basis.size() == 3);
}

TEST_CASE("tangent frame residuals are tiny on random catalog points") {
  for (const char* name : {"ball", "real-ellipsoid", "sheared-ball", "model"}) {
    DomainSpec s = make_catalog_domain(name);
    for (const BoundaryPoint& p : boundary_samples(s, 5, 51)) {
      TangentFrame fr = tangent_frame(s, p);
      CHECK(fr.defining_residual <= 1e-10);
      CHECK(fr.gram_residual <= 1e-10);
    }
  }
}

TEST_CASE("boundary delta forms agree with the interior shell limit") {
  // classification uses the exact boundary formula; the one-sided shell
  // limit at offset 1e-4 scale must reproduce it within FD noise
  for (const char* name : {"ball", "parabolic-slab", "model"}) {
    DomainSpec s = make_catalog_domain(name);
    int done = 0;
    for (const BoundaryPoint& p : boundary_samples(s, 4, 61)) {
      HessianForms exact = boundary_delta_forms(s, p);
      Vec inside = vsub(p.q, scaled(p.normal, 1e-4 * s.scale));
      HessianForms limit;
      try {
        limit = delta_hessian(s, inside);
      } catch (const Error&) {
        continue;
      }
      double scale = 1.0 + max_abs(exact.H);
      for (int i = 0; i < exact.H.rows; ++i)
        for (int j = 0; j < exact.H.cols; ++j)
          CHECK(std::fabs(exact.H(i, j) - limit.H(i, j)) < 5e-3 * scale);
      ++done;
    }
    CHECK(done >= 2);
  }
}

TEST_CASE("boundary delta forms on the ball match the closed form") {
  DomainSpec ball = make_catalog_domain("ball");
  BoundaryPoint p = boundary_at(ball, Vec{0.5, 0, 0, 0});
  HessianForms f = boundary_delta_forms(ball, p);
  Mat Hexp = oracles::ball_hessian_delta(p.q);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::fabs(f.H(i, j) - Hexp(i, j)) < 1e-10);
}

TEST_CASE("cone membership: aperture zero, equality case, cap") {
  DomainSpec ball = make_catalog_domain("ball");
  BoundaryPoint p = boundary_at(ball, Vec{0.5, 0, 0, 0});  // q = (1,0)
  TangentFrame fr = tangent_frame(ball, p);

  CVec e2 = {cplx(0.0), cplx(1.0)};
  CVec ie1 = {cplx(0.0, 1.0), cplx(0.0)};
  CHECK(cone_membership(fr, e2, ConeSpec{0.0}));        // complex tangent
  CHECK_FALSE(cone_membership(fr, ie1, ConeSpec{0.0}));  // i nu only
  // equality case on the cone boundary at gamma = 1
  CVec mix = {cplx(0.0, M_SQRT1_2), cplx(M_SQRT1_2)};
  CHECK(cone_membership(fr, mix, ConeSpec{1.0}));
  // cap: everything in the real tangent is a member
  CHECK(cone_membership(fr, ie1, ConeSpec{1e3}));
  // normal component is an argument error
  CVec e1 = {cplx(1.0), cplx(0.0)};
  CHECK_THROWS_AS(cone_membership(fr, e1, ConeSpec{1.0}), Error);
}

TEST_CASE("restricted minimal eigenvalues") {
  DomainSpec ball = make_catalog_domain("ball");
  BoundaryPoint p = boundary_at(ball, Vec{0.5, 0, 0, 0});
  TangentFrame fr = tangent_frame(ball, p);
  HessianForms f = boundary_delta_forms(ball, p);

  CHECK(restricted_min_eig(f, FormKind::L, fr.ct_basis) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(restricted_min_eig(f, FormKind::L, fr.rt_basis) == doctest::Approx(0.25).epsilon(1e-9));

  // zero form
  HessianForms zero = assemble_forms(Mat(4, 4), p.q, "zero");
  CHECK(restricted_min_eig(zero, FormKind::H, fr.rt_basis) == 0.0);

  // slab at 0: Levi form on the real tangent dips to -1/2
  DomainSpec slab = make_catalog_domain("parabolic-slab");
  BoundaryPoint p0 = boundary_at(slab, Vec{0.0, 0.0, -0.02, 0.0});
  TangentFrame fslab = tangent_frame(slab, p0);
  HessianForms r0 = hessian_forms(slab, p0.q);  // graph-normalized at 0
  CHECK(restricted_min_eig(r0, FormKind::L, fslab.rt_basis) == doctest::Approx(-0.5).epsilon(1e-9));

  // orthonormality is checked
  std::vector<Vec> crooked = {Vec{1, 0, 0, 0}, Vec{0.9, 0.1, 0, 0}};
  CHECK_THROWS_AS(restricted_min_eig(f, FormKind::H, crooked), Error);
}

TEST_CASE("cone minimum: slab analytic values and aperture-zero consistency") {
  DomainSpec slab = make_catalog_domain("parabolic-slab");
  BoundaryPoint p0 = boundary_at(slab, Vec{0.0, 0.0, -0.02, 0.0});
  TangentFrame fr = tangent_frame(slab, p0);
  HessianForms f = boundary_delta_forms(slab, p0);

  CHECK(cone_min(f, fr, ConeSpec{0.0}) == doctest::Approx(0.0).epsilon(1e-10));
  for (double g : {0.5, 1.0, 2.0}) {
    double expect = -g * g / (2.0 * (1.0 + g * g));
    CHECK(cone_min(f, fr, ConeSpec{g}) == doctest::Approx(expect).epsilon(1e-6));
  }
  CHECK(std::fabs(cone_min(f, fr, ConeSpec{0.0}) -
                  restricted_min_eig(f, FormKind::L, fr.ct_basis)) <= 1e-8);

  // ball: positive at every aperture (>= 1/4 at radius 1)
  DomainSpec ball = make_catalog_domain("ball");
  BoundaryPoint pb = boundary_at(ball, Vec{0.5, 0, 0, 0});
  TangentFrame fb = tangent_frame(ball, pb);
  HessianForms ff = boundary_delta_forms(ball, pb);
  for (double g : {0.1, 1.0, 10.0, 1e3}) CHECK(cone_min(ff, fb, ConeSpec{g}) >= 0.25 - 1e-9);
}

TEST_CASE("cone minima are nested in the aperture") {
  for (const char* name : {"parabolic-slab", "model", "sheared-ball"}) {
    DomainSpec s = make_catalog_domain(name);
    for (const BoundaryPoint& p : boundary_samples(s, 4, 71)) {
      TangentFrame fr = tangent_frame(s, p);
      HessianForms f = boundary_delta_forms(s, p);
      double prev = 1e300;
      for (double g : {0.0, 0.25, 0.5, 1.0, 2.0, 8.0, 1e3}) {
        double v = cone_min(f, fr, ConeSpec{g});
        CHECK(v <= prev + 1e-9);
        prev = v;
      }
    }
  }
}

TEST_CASE("cone minimum refines under doubled resolution") {
  DomainSpec slab = make_catalog_domain("parabolic-slab");
  BoundaryPoint p0 = boundary_at(slab, Vec{0.0, 0.0, -0.02, 0.0});
  TangentFrame fr = tangent_frame(slab, p0);
  HessianForms f = boundary_delta_forms(slab, p0);
  double norm = spectral_norm(f.L);
  for (int res : {16, 32, 64}) {
    double a = cone_min(f, fr, ConeSpec{1.0}, res);
    double b = cone_min(f, fr, ConeSpec{1.0}, 2 * res);
    double bound = 2.0 * norm / (res * res);  // documented O(res^-2)
    CHECK(std::fabs(a - b) <= 4.0 * bound);
  }
  CHECK_THROWS_AS(cone_min(f, fr, ConeSpec{1.0}, 8), Error);
}

TEST_CASE("max_gamma: ball saturates, slab collapses, model hits sqrt(2/beta)") {
  DomainSpec ball = make_catalog_domain("ball");
  BoundaryPoint pb = boundary_at(ball, Vec{0.5, 0, 0, 0});
  CHECK(max_gamma(ball, pb) == doctest::Approx(1e3));

  DomainSpec slab = make_catalog_domain("parabolic-slab");
  BoundaryPoint ps = boundary_at(slab, Vec{0.0, 0.0, -0.02, 0.0});
  CHECK(max_gamma(slab, ps) == 0.0);

  for (double beta : {0.5, 2.0, 8.0}) {
    char params[48];
    std::snprintf(params, sizeof params, "{\"beta\": %g}", beta);
    DomainSpec m = make_catalog_domain("model", params);
    Vec z(4, 0.0);
    z[2] = -0.3 * m.shell_width;
    BoundaryPoint p0 = boundary_at(m, z);
    CHECK(max_gamma(m, p0) == doctest::Approx(std::sqrt(2.0 / beta)).epsilon(1e-3));
  }
}

TEST_CASE("classification flags on the catalog landmarks") {
  DomainSpec ball = make_catalog_domain("ball");
  PositivityReport rb = classify_boundary(ball, boundary_at(ball, Vec{0.5, 0, 0, 0}), 1.0);
  CHECK(rb.convex);
  CHECK(rb.pseudoconvex);
  CHECK(rb.c_convex);
  CHECK(rb.gamma_psh);
  CHECK(rb.max_gamma == doctest::Approx(1e3));

  DomainSpec nonpsc = make_catalog_domain("nonpsc-graph");
  PositivityReport rn =
      classify_boundary(nonpsc, boundary_at(nonpsc, Vec{0.0, 0.0, -0.02, 0.0}), 0.0);
  CHECK_FALSE(rn.pseudoconvex);
  CHECK(rn.min_eig_L_CT == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(rn.max_gamma == 0.0);

  DomainSpec slab = make_catalog_domain("parabolic-slab");
  PositivityReport rs =
      classify_boundary(slab, boundary_at(slab, Vec{0.0, 0.0, -0.02, 0.0}), 0.1);
  CHECK(rs.pseudoconvex);       // Levi-flat complex tangent
  CHECK_FALSE(rs.gamma_psh);    // fails already at aperture 0.1
  CHECK_FALSE(rs.convex);
  CHECK(rs.c_convex);           // H vanishes on the complex tangent
}

TEST_CASE("rotation property: real-tangent levi bound extends to all directions") {
  for (const char* name : {"ball", "half-space", "complex-ellipsoid", "parabolic-slab"}) {
    DomainSpec s = make_catalog_domain(name);
    for (const BoundaryPoint& p : boundary_samples(s, 4, 81)) {
      TangentFrame fr = tangent_frame(s, p);
      HessianForms f = boundary_delta_forms(s, p);
      double rt_min = restricted_min_eig(f, FormKind::L, fr.rt_basis);
      double full_min = jacobi_eigen(levi_real_matrix(f.H)).values[0];
      // the rotation argument makes these equal at boundary points
      CHECK(full_min >= rt_min - 1e-8);
      CHECK(full_min <= rt_min + 1e-8);
    }
  }
}

TEST_CASE("classification is invariant under unitary transforms") {
  Rng rng(91);
  DomainSpec m = make_catalog_domain("model");
  Vec z(4, 0.0);
  z[2] = -0.3 * m.shell_width;
  BoundaryPoint p = boundary_at(m, z);
  PositivityReport base = classify_boundary(m, p, 1.0);

  // random unitary from orthonormalizing a random complex matrix
  std::vector<CVec> cols;
  for (int j = 0; j < 2; ++j) {
    CVec c(2);
    for (int i = 0; i < 2; ++i) c[i] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    cols.push_back(c);
  }
  auto onb = orthonormalize(cols);
  REQUIRE(onb.size() == 2);
  CMat U(2, 2);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) U(i, j) = onb[j][i];
  CVec shift = {cplx(0.01, -0.02), cplx(0.005, 0.0)};

  DomainSpec moved = unitary_transform(m, U, shift);
  // map the boundary point into the new coordinates
  Vec w = moved.map->apply_inverse(p.q);
  BoundaryPoint pw = boundary_at(moved, w);
  PositivityReport got = classify_boundary(moved, pw, 1.0);

  CHECK(got.min_eig_L_CT == doctest::Approx(base.min_eig_L_CT).epsilon(1e-6));
  CHECK(got.min_eig_H_RT == doctest::Approx(base.min_eig_H_RT).epsilon(1e-6));
  CHECK(got.min_eig_H_CT == doctest::Approx(base.min_eig_H_CT).epsilon(1e-6));
  CHECK(std::fabs(got.cone_min_at_query - base.cone_min_at_query) < 1e-6);
  CHECK(std::fabs(got.max_gamma - base.max_gamma) < 1e-6);
  CHECK(got.convex == base.convex);
  CHECK(got.pseudoconvex == base.pseudoconvex);
  CHECK(got.c_convex == base.c_convex);
  CHECK(got.gamma_psh == base.gamma_psh);
}

TEST_CASE("flag chain convex => c-convex => pseudoconvex across the catalog") {
  for (const CatalogEntry& entry : catalog()) {
    DomainSpec s = make_catalog_domain(entry.name);
    for (const BoundaryPoint& p : boundary_samples(s, 5, 101)) {
      PositivityReport r = classify_boundary(s, p, 1.0);
      if (r.convex) CHECK(r.c_convex);
      if (r.c_convex) CHECK(r.pseudoconvex);
    }
  }
}
