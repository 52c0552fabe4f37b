#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "betalab/complex_structure.hpp"
#include "betalab/errors.hpp"
#include "betalab/geometry.hpp"
#include "betalab/rotational.hpp"
#include "betalab/surfaces.hpp"

using namespace betalab;

namespace {

const double kPi = std::numbers::pi;

Mat42 columns(const Vec4& a, const Vec4& b) {
  Mat42 m;
  m.col(0) = a;
  m.col(1) = b;
  return m;
}

void check_invariants(const SurfaceGeometry& geo) {
  CHECK((geo.g * geo.g_inv - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(geo.H.dot(geo.e1)) < 1e-10 * std::max(1.0, geo.H.norm() * geo.e1.norm()));
  CHECK(std::abs(geo.H.dot(geo.e2)) < 1e-10 * std::max(1.0, geo.H.norm() * geo.e2.norm()));
  CHECK(std::abs(geo.cos_alpha * geo.cos_alpha + geo.y * geo.y + geo.z * geo.z - 1.0) < 1e-10);
  const std::array<Vec4, 4> f{geo.u1, geo.u2, geo.e3, geo.e4};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      CHECK(std::abs(f[a].dot(f[b]) - (a == b ? 1.0 : 0.0)) < 1e-12);
  Mat4 m;
  for (int a = 0; a < 4; ++a) m.col(a) = f[a];
  CHECK(m.determinant() > 0.0);
}

}  // namespace

TEST_SUITE("complex_structure") {
  TEST_CASE("standard J is an orthogonal complex structure") {
    const auto& J = standard_complex_structure();
    CHECK(J.is_valid());
    const Mat4 M = J.matrix();
    CHECK((M * M + Mat4::Identity()).norm() < 1e-15);
    CHECK((J(Vec4::Unit(0)) - Vec4::Unit(1)).norm() == 0.0);
    CHECK((J(Vec4::Unit(2)) - Vec4::Unit(3)).norm() == 0.0);
  }

  TEST_CASE("a non-complex matrix is rejected") {
    Mat4 M = Mat4::Identity();
    CHECK_THROWS_AS(ComplexStructure{M}, InvalidArgument);
    Mat4 skew = standard_complex_structure().matrix();
    skew(0, 1) *= 2.0;
    CHECK_THROWS_AS(ComplexStructure{skew}, InvalidArgument);
  }

  TEST_CASE("frame matrix of omega is the self-dual form") {
    const Immersion imm = oracle::wavy(1.0);
    for (const Vec2 p : {Vec2(0.1, -0.2), Vec2(-0.4, 0.5), Vec2(0.55, 0.3)}) {
      const SurfaceGeometry geo = evaluate_geometry(imm, p);
      const Mat4 expected = self_dual_frame_form(geo.cos_alpha, geo.y, geo.z);
      CHECK((geo.frame_form() - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_SUITE("geometry") {
  TEST_CASE("flat complex plane") {
    const SurfaceGeometry geo = evaluate_geometry(plane({0, 1, 0, 1}, 2.0), Vec2(0.3, 0.7));
    CHECK((geo.g - Mat2::Identity()).norm() == 0.0);
    CHECK(geo.H.norm() == 0.0);
    CHECK(geo.cos_alpha == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(geo.y) < 1e-15);
    CHECK(std::abs(geo.z) < 1e-15);
    check_invariants(geo);
  }

  TEST_CASE("rotational point with f' = g' = 1/sqrt2 at r = 1") {
    const double s = 1.0 / std::sqrt(2.0);
    auto lin = [s](double r) { return std::array<double, 3>{s * r, s, 0.0}; };
    const Immersion imm = rotational_surface(lin, lin, {0.5, 2, 0, 2 * kPi, true}, 1.0);
    const SurfaceGeometry geo = evaluate_geometry(imm, Vec2(1.0, 0.4));
    CHECK(geo.det_g == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(geo.cos_alpha == doctest::Approx(s).epsilon(1e-14));
    CHECK(kahler_angle(geo) == doctest::Approx(s).epsilon(1e-14));
    check_invariants(geo);
  }

  TEST_CASE("linear graph (x1, x2, x1, 0)") {
    const Immersion imm = linear_immersion(columns({1, 0, 1, 0}, {0, 1, 0, 0}), {-1, 1, -1, 1}, 0.0);
    const SurfaceGeometry geo = evaluate_geometry(imm, Vec2(0.2, -0.3));
    CHECK(geo.cos_alpha == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(geo.H.norm() < 1e-15);
  }

  TEST_CASE("Lagrangian plane is flagged, not rejected") {
    const Immersion imm = linear_immersion(columns({1, 0, 0, 0}, {0, 0, 1, 0}), {-1, 1, -1, 1}, 1.0);
    const SurfaceGeometry geo = evaluate_geometry(imm, Vec2(0.1, 0.1));
    CHECK(std::abs(geo.cos_alpha) < 1e-15);
    CHECK(geo.lagrangian);
    CHECK_THROWS_AS(el_residual(imm, Vec2(0.1, 0.1)), LagrangianPoint);
  }

  TEST_CASE("J-compatible rotation of a complex line keeps cos = 1") {
    // Columns u and J u span a complex line for any unit u.
    const Vec4 u = Vec4(0.3, -0.5, 0.7, 0.2).normalized();
    const Vec4 ju = standard_complex_structure()(u);
    const Immersion imm = linear_immersion(columns(u, ju), {-1, 1, -1, 1}, 3.0);
    const SurfaceGeometry geo = evaluate_geometry(imm, Vec2(0.0, 0.0));
    CHECK(geo.cos_alpha == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(el_residual(imm, Vec2(0.2, 0.1)).operator_form.norm() < 1e-14);
  }

  TEST_CASE("degenerate immersion is rejected") {
    const Immersion imm = linear_immersion(columns({1, 0, 0, 0}, {2, 0, 0, 0}), {-1, 1, -1, 1}, 0.0);
    CHECK_THROWS_AS(evaluate_geometry(imm, Vec2(0, 0)), DegenerateImmersion);
  }

  TEST_CASE("invariants on a generic surface") {
    const Immersion imm = oracle::wavy(2.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int k = 0; k < 20; ++k) check_invariants(evaluate_geometry(imm, Vec2(u(rng), u(rng))));
    const Immersion rot = oracle::generic_rotational(1.0);
    for (double r : {0.6, 1.3, 2.7}) check_invariants(evaluate_geometry(rot, Vec2(r, 1.1)));
  }

  TEST_CASE("mean curvature matches the rotational component formula") {
    // H = a3 n3 + a4 n4 with the non-orthonormal normals
    // n3 = (-f' cos t, -f' sin t, 1, 0), n4 = (-g' cos t, -g' sin t, 0, 1).
    const Immersion imm = oracle::generic_rotational(0.0);
    for (double r : {0.6, 1.1, 1.9, 2.8})
      for (double t : {0.0, 0.9, 4.0}) {
        const auto f = oracle::f_generic(r), g = oracle::g_generic(r);
        const double fp = f[1], fpp = f[2], gp = g[1], gpp = g[2];
        const double A = 1 + fp * fp + gp * gp;
        const double a3 = (r * (1 + gp * gp) * fpp - r * fp * gp * gpp + A * fp) / (r * A * A);
        const double a4 = (r * (1 + fp * fp) * gpp - r * fp * gp * fpp + A * gp) / (r * A * A);
        const Vec4 n3(-fp * std::cos(t), -fp * std::sin(t), 1, 0);
        const Vec4 n4(-gp * std::cos(t), -gp * std::sin(t), 0, 1);
        const Vec4 expected = a3 * n3 + a4 * n4;
        const Vec4 H = mean_curvature(imm, Vec2(r, t));
        CHECK((H - expected).norm() <= 1e-10 * expected.norm());
      }
  }

  TEST_CASE("catenoid is minimal") {
    const Immersion imm = oracle::catenoid();
    for (double r : {1.7, 2.5, 5.0}) CHECK(mean_curvature(imm, Vec2(r, 0.3)).norm() < 1e-8);
    const RotationalProfile p = solve_profile(0.0, 1, 1, 2.0, 10.0, 257);
    const Immersion solved = profile_immersion(p);
    for (double r : {2.1, 4.0, 9.5}) CHECK(mean_curvature(solved, Vec2(r, 1.0)).norm() < 1e-8);
  }

  TEST_CASE("partials of cos(alpha): closed form, exact jet and finite differences") {
    const Immersion imm = oracle::generic_rotational(1.0);
    for (double r : {0.7, 1.5, 2.6}) {
      const auto f = oracle::f_generic(r), g = oracle::g_generic(r);
      const double A = 1 + f[1] * f[1] + g[1] * g[1];
      const double dr = -(f[1] * f[2] + g[1] * g[2]) / std::pow(A, 1.5);
      const Vec2 p(r, 2.0);
      const Vec2 exact = cos_alpha_partials_exact(imm(p));
      CHECK(exact[0] == doctest::Approx(dr).epsilon(1e-13));
      CHECK(std::abs(exact[1]) < 1e-14);
      const Vec2 rich = cos_alpha_partials(imm, p);
      CHECK(std::abs(rich[0] - dr) < 1e-9);
      const Vec2 central = cos_alpha_partials(imm, p, default_tolerances(), Stencil::Central);
      CHECK(std::abs(central[0] - dr) < 1e-8);
    }
    const Immersion w = oracle::wavy(1.0);
    for (const Vec2 p : {Vec2(0.2, 0.3), Vec2(-0.5, 0.1)}) {
      const Vec2 e = cos_alpha_partials_exact(w(p));
      CHECK((cos_alpha_partials(w, p) - e).norm() < 1e-9);
    }
  }

  TEST_CASE("minimal surfaces at beta = 0: residual is cos^2 H") {
    const Immersion cat = oracle::catenoid(0.0);
    const ElResidual res = el_residual(cat, Vec2(2.0, 0.5));
    CHECK(res.operator_form.norm() < 1e-8);
    const Immersion w = oracle::wavy(0.0);
    const Vec2 p(0.3, -0.2);
    const SurfaceGeometry geo = evaluate_geometry(w, p);
    const ElResidual r0 = el_residual(w, p);
    CHECK((r0.operator_form - geo.cos_alpha * geo.cos_alpha * geo.H).norm() < 1e-15);
  }

  TEST_CASE("two routes of the Euler-Lagrange operator agree") {
    for (double beta : {0.5, 2.0, 5.0}) {
      const Immersion w = oracle::wavy(beta);
      for (const Vec2 p : {Vec2(0.2, 0.3), Vec2(-0.5, 0.1), Vec2(0.4, -0.45)}) {
        const ElResidual res = el_residual(w, p);
        CHECK(res.cos_alpha > 1e-6);
        CHECK(res.two_route_error() < 1e-9);
      }
    }
  }

  TEST_CASE("|P| does not depend on the seed of the normal frame") {
    const Immersion w = oracle::wavy(2.0);
    const Vec2 p(0.25, -0.35);
    const Vec2 d = cos_alpha_partials(w, p);
    const std::array<double, 2> dd{d[0], d[1]};
    double ref = -1.0;
    for (double angle : {0.0, 0.4, 1.3, 2.9, 5.0}) {
      const SurfaceGeometry geo = evaluate_geometry(w, p, NormalSeed::rotated(angle));
      const Vec2 grad(geo.along(dd, 0), geo.along(dd, 1));
      const double n = el_residual(geo, grad).operator_form.norm();
      if (ref < 0) ref = n;
      CHECK(std::abs(n - ref) <= 1e-10 * std::max(1.0, ref));
    }
  }

  TEST_CASE("solved profiles close the Euler-Lagrange equation") {
    const RotationalProfile p = solve_profile(2.0, 1, 1, 0.05, 50.0, 513);
    const Immersion imm = profile_immersion(p);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); i += 8)
      worst = std::max(worst, el_residual(imm, Vec2(p.r[i], 0.7)).operator_form.norm());
    CHECK(worst < 1e-8);
  }

  TEST_CASE("adapted frame at the beta = 2 reference point") {
    const RotationalProfile p = solve_profile(2.0, 1, 1, 0.5, 2.0, 65);
    const Immersion imm = profile_immersion(p);
    const SurfaceGeometry geo = evaluate_geometry(imm, Vec2(1.0, 0.8));
    const SurfaceGeometry ad = adapted_frame(geo);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(ad.y == doctest::Approx(s).epsilon(1e-10));
    CHECK(std::abs(ad.z) < 1e-10);
    const auto& J = standard_complex_structure();
    CHECK(J.omega(ad.e3, ad.e4) == doctest::Approx(ad.cos_alpha).epsilon(1e-10));
    CHECK(ad.sin_alpha() == doctest::Approx(s).epsilon(1e-10));
    // Idempotent.
    const SurfaceGeometry again = adapted_frame(ad);
    CHECK((again.e3 - ad.e3).norm() < 1e-14);
    CHECK((again.e4 - ad.e4).norm() < 1e-14);
  }

  TEST_CASE("adapted frame is undefined at complex points") {
    const SurfaceGeometry geo = evaluate_geometry(plane({0, 1, 0, 1}, 1.0), Vec2(0.5, 0.5));
    CHECK_THROWS_AS(adapted_frame(geo), ComplexPoint);
  }

  TEST_CASE("gradient of alpha from h agrees with the gradient of cos") {
    const Immersion w = oracle::wavy(1.0);
    for (const Vec2 p : {Vec2(0.2, 0.3), Vec2(-0.5, 0.1), Vec2(0.1, -0.4)}) {
      const SurfaceGeometry geo = evaluate_geometry(w, p);
      const Vec2 d = cos_alpha_partials_exact(w(p));
      const std::array<double, 2> dd{d[0], d[1]};
      const Vec2 grad(geo.along(dd, 0), geo.along(dd, 1));
      const Vec2 a = alpha_gradient(geo, grad);
      const Vec2 b = alpha_gradient_from_h(adapted_frame(geo));
      CHECK((a - b).norm() < 1e-12 * std::max(1.0, a.norm()));
    }
  }

  TEST_CASE("V-identity on critical profiles, and H = 0 for the catenoid") {
    for (double beta : {0.5, 2.0, 5.0}) {
      const RotationalProfile p = solve_profile(beta, 1, 1, 0.1, 20.0, 257);
      const Immersion imm = profile_immersion(p);
      for (double r : {0.2, 1.0, 7.0}) CHECK(v_identity_residual(imm, Vec2(r, 0.5)).norm() < 1e-7);
    }
    CHECK(v_identity_residual(oracle::catenoid(0.0), Vec2(2.5, 0.5)).norm() < 1e-8);
  }

  TEST_CASE("radial Laplace-Beltrami") {
    std::vector<double> r, c, q, one;
    for (int i = 0; i <= 100; ++i) {
      r.push_back(1.0 + 0.02 * i);
      c.push_back(3.0);
      q.push_back(r.back() * r.back());
      one.push_back(1.0);
    }
    for (double v : laplace_beltrami_radial(r, c, one)) CHECK(std::abs(v) < 1e-12);
    for (double v : laplace_beltrami_radial(r, q, one)) CHECK(v == doctest::Approx(4.0).epsilon(1e-10));
    const std::vector<double> four{1, 2, 3, 4};
    CHECK_THROWS_AS(laplace_beltrami_radial(four, four, four), GridTooCoarse);
  }
}
