#include "doctest.h"

#include "deltakit/distance.hpp"
#include "deltakit/theorems.hpp"
#include "deltakit/rng.hpp"
#include "oracles.hpp"

using namespace dk;

TEST_CASE("ball projection, signed distance, normals") {
  DomainSpec ball = make_catalog_domain("ball");
  Vec z = {0.5, 0.0, 0.0, 0.0};
  BoundaryPoint bp = project_to_boundary(ball, z);
  CHECK(norm2(vsub(bp.q, Vec{1, 0, 0, 0})) < 1e-10);
  CHECK(norm2(vsub(bp.normal, Vec{1, 0, 0, 0})) < 1e-12);
  CHECK(signed_distance(ball, z) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(signed_distance(ball, Vec{1.5, 0, 0, 0}) == doctest::Approx(0.5).epsilon(1e-12));
  Vec g = delta_gradient(ball, z);
  CHECK(norm2(vsub(g, Vec{1, 0, 0, 0})) < 1e-12);
}

TEST_CASE("half-space projection drops the Re z_n coordinate") {
  DomainSpec hs = make_catalog_domain("half-space");
  Vec z = {0.3, 0.2, -0.4, 0.5};
  BoundaryPoint bp = project_to_boundary(hs, z);
  CHECK(norm2(vsub(bp.q, Vec{0.3, 0.2, 0.0, 0.5})) < 1e-10);
  CHECK(signed_distance(hs, z) == doctest::Approx(-0.4).epsilon(1e-12));
  Vec g = delta_gradient(hs, z);
  CHECK(norm2(vsub(g, Vec{0, 0, 1, 0})) < 1e-12);
  HessianForms f = delta_hessian(hs, z);
  CHECK(max_abs(f.H) < 1e-9);
}

TEST_CASE("ellipsoid projection matches the dense-grid oracle") {
  DomainSpec ell = make_catalog_domain("complex-ellipsoid");
  Vec z = {0.3, 0.0, 0.3, 0.0};
  BoundaryPoint bp = project_to_boundary(ell, z);
  auto brute = oracles::brute_force_project_ellipsoid(z);
  double newton_dist = norm2(vsub(z, bp.q));
  CHECK(std::fabs(newton_dist - brute.dist) < 1e-6);
  CHECK(norm2(vsub(bp.q, brute.q)) < 1e-5);

  int amb = 0, inacc = 0;
  auto pts = ShellSampler::draw(ell, 0.05, "inside", 10, 8, 1, &amb, &inacc);
  for (const auto& p : pts) {
    auto b2 = oracles::brute_force_project_ellipsoid(p.z);
    CHECK(std::fabs(-p.delta - b2.dist) < 1e-6);
  }
}

TEST_CASE("ball delta-hessian matches the closed form") {
  DomainSpec ball = make_catalog_domain("ball");
  Vec z = {0.5, 0.0, 0.0, 0.0};
  HessianForms f = delta_hessian(ball, z);
  Mat Hexp = oracles::ball_hessian_delta(z);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::fabs(f.H(i, j) - Hexp(i, j)) < 1e-6);
  EigenSystem es = jacobi_eigen(f.H);
  CHECK(es.values[0] == doctest::Approx(0.0).epsilon(1e-6));  // radial
  CHECK(es.values[3] == doctest::Approx(2.0).epsilon(1e-6));  // tangential 1/rho
  CMat Lexp = oracles::ball_levi_delta(z);                    // diag(0.5, 1.0) here
  CHECK(std::abs(Lexp(0, 0) - cplx(0.5)) < 1e-14);
  CHECK(std::abs(Lexp(1, 1) - cplx(1.0)) < 1e-14);
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) CHECK(std::abs(f.L(k, l) - Lexp(k, l)) < 1e-6);
}

TEST_CASE("projection is idempotent and lands on the zero set") {
  for (const char* name : {"ball", "real-ellipsoid", "sheared-ball"}) {
    DomainSpec s = make_catalog_domain(name);
    Rng rng(3);
    int done = 0;
    for (int t = 0; t < 60 && done < 6; ++t) {
      Vec z = rng.point_in_box(s.bbox.lo, s.bbox.hi);
      BoundaryPoint bp;
      try {
        bp = project_to_boundary(s, z);
      } catch (const Error&) {
        continue;
      }
      CHECK(bp.residual <= 1e-11 * (1.0 + s.scale));
      BoundaryPoint bp2 = project_to_boundary(s, bp.q);
      CHECK(norm2(vsub(bp2.q, bp.q)) < 1e-10);
      double dq = norm2(vsub(bp.q, z));
      double delta = signed_distance(s, z);
      CHECK(std::fabs(std::fabs(delta) - dq) < 1e-8);   // |z-b| = |delta|
      Vec recon = vadd(bp.q, scaled(bp.normal, delta));  // z = b + delta nu
      CHECK(norm2(vsub(recon, z)) < 1e-8);
      ++done;
    }
    CHECK(done >= 4);
  }
}

TEST_CASE("delta gradient agrees with finite differences of delta") {
  for (const char* name : {"ball", "complex-ellipsoid", "parabolic-slab"}) {
    DomainSpec s = make_catalog_domain(name);
    int amb = 0, inacc = 0;
    auto pts = ShellSampler::draw(s, 0.8 * s.shell_width, "inside", 5, 19, 1, &amb, &inacc);
    for (const auto& p : pts) {
      Vec g = delta_gradient(s, p.z);
      CHECK(std::fabs(norm2(g) - 1.0) < 1e-12);  // unit by construction
      Vec gfd = oracles::fd_gradient([&](const Vec& x) { return signed_distance(s, x); }, p.z,
                                     1e-5 * s.scale);
      CHECK(norm2(vsub(g, gfd)) < 1e-6);
    }
  }
}

TEST_CASE("D-forms: flat boundary identity and ball levi value") {
  DomainSpec hs = make_catalog_domain("half-space");
  Vec z = {0.1, -0.2, -0.3, 0.25};
  DForms df = d_forms(hs, z);
  CHECK(df.D == doctest::Approx(0.09).epsilon(1e-10));
  Rng rng(23);
  for (int t = 0; t < 8; ++t) {
    CVec V = rng.unit_complex_vector(2);
    Vec v = to_real(V);
    double lhs = dot(v, matvec(df.f_D.H, v));
    double grad_term = dot(df.grad_D, v);
    CHECK(lhs == doctest::Approx(grad_term * grad_term / (2.0 * df.D)).epsilon(1e-8));
    CHECK(lhs == doctest::Approx(2.0 * v[2] * v[2]).epsilon(1e-8));
  }

  DomainSpec ball = make_catalog_domain("ball");
  DForms db = d_forms(ball, Vec{0.9, 0, 0, 0});
  CVec e2 = {cplx(0.0), cplx(1.0)};
  double val = std::real(apply_form(db.f_D, FormKind::L, e2, e2));
  CHECK(val == doctest::Approx(-2.0 * 0.1 / 1.8).epsilon(1e-5));  // -0.1111...
}

TEST_CASE("D-forms chain rule matches finite differences of grad D") {
  for (const char* name : {"ball", "real-ellipsoid"}) {
    DomainSpec s = make_catalog_domain(name);
    int amb = 0, inacc = 0;
    auto pts = ShellSampler::draw(s, 0.8 * s.shell_width, "inside", 4, 29, 1, &amb, &inacc);
    for (const auto& p : pts) {
      DForms df = d_forms(s, p.z);
      // central differences of the exact field grad D = 2 delta grad delta
      const double h = 1e-5 * s.scale;
      Mat Hfd(4, 4);
      for (int j = 0; j < 4; ++j) {
        Vec zp = p.z, zm = p.z;
        zp[j] += h;
        zm[j] -= h;
        double dp = signed_distance(s, zp), dm = signed_distance(s, zm);
        Vec gp = scaled(delta_gradient(s, zp), 2.0 * dp);
        Vec gm = scaled(delta_gradient(s, zm), 2.0 * dm);
        for (int i = 0; i < 4; ++i) Hfd(i, j) = (gp[i] - gm[i]) / (2.0 * h);
      }
      double scale = 1.0 + max_abs(df.f_D.H);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(std::fabs(df.f_D.H(i, j) - Hfd(i, j)) < 1e-5 * scale);
    }
  }
}

TEST_CASE("D-forms at the zero set is a singular-point error") {
  DomainSpec ball = make_catalog_domain("ball");
  Vec on_boundary = {1.0, 0.0, 0.0, 0.0};
  try {
    d_forms(ball, on_boundary);
    FAIL_CHECK("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Err::singular);
  }
}

TEST_CASE("ambiguous projection at the ball center is an explicit error") {
  // widen the shell so the center clears the depth guard; every boundary
  // point is then nearest, which must surface as ambiguity
  DomainSpec s = parse_domain_spec_json(R"({"catalog": "ball", "shell_width": 1.2})");
  try {
    project_to_boundary(s, Vec(4, 0.0));
    FAIL_CHECK("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Err::ambiguity);
  }
}

TEST_CASE("shell invariants hold down to width 1e-3 scale") {
  for (const char* name : {"ball", "complex-ellipsoid"}) {
    DomainSpec s = make_catalog_domain(name);
    for (double w : {0.1 * s.scale, 0.01 * s.scale, 1e-3 * s.scale}) {
      int amb = 0, inacc = 0;
      auto pts = ShellSampler::draw(s, w, "inside", 5, 37, 1, &amb, &inacc);
      for (const auto& p : pts) {
        Vec g = delta_gradient(s, p.z);
        CHECK(std::fabs(norm2(g) - 1.0) < 1e-8);
        BoundaryPoint bp = project_to_boundary(s, p.z);
        BoundaryPoint bp2 = project_to_boundary(s, bp.q);
        CHECK(norm2(vsub(bp2.q, bp.q)) < 1e-10);
      }
    }
  }
}

TEST_CASE("adapted frame: half-space is already adapted, ball needs a swap") {
  DomainSpec hs = make_catalog_domain("half-space");
  Vec q = {0.2, -0.1, -0.4, 0.3};
  AdaptedFrame fr = adapted_frame(hs, q);
  // normal already points along Re z_2: the unitary fixes the normal slot
  CHECK(std::abs(fr.U(1, 1) - cplx(1.0)) < 1e-12);
  CHECK(fr.residual_gradient < 1e-8);
  CHECK(fr.residual_distance < 1e-8);

  DomainSpec ball = make_catalog_domain("ball");
  AdaptedFrame fb = adapted_frame(ball, Vec{0.6, 0, 0, 0});
  // b(q) = (1,0): normal is the z1 direction, so columns swap
  CHECK(std::abs(fb.U(0, 1) - cplx(1.0)) < 1e-10);
  CHECK(std::abs(std::abs(fb.U(1, 0)) - 1.0) < 1e-10);
  CHECK(fb.residual_gradient < 1e-8);
  CHECK(fb.residual_distance < 1e-8);

  DomainSpec ell = make_catalog_domain("real-ellipsoid");
  AdaptedFrame fe = adapted_frame(ell, Vec{0.2, 0.1, 0.45, -0.05});
  CHECK(fe.residual_gradient < 1e-8);
  CHECK(fe.residual_distance < 1e-8);
  // interior points on the normal line have adapted form (0', a) with a < 0
  double a = signed_distance(ell, Vec{0.2, 0.1, 0.45, -0.05});
  CHECK(a < 0.0);
}
