#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "oracles.hpp"

#include "betalab/errors.hpp"
#include "betalab/geometry.hpp"
#include "betalab/rotational.hpp"
#include "betalab/surfaces.hpp"
#include "betalab/variation.hpp"

using namespace betalab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool three_routes_agree(const VariationReport& r) {
  const double tol = std::max(1e-6, 1e-4 * std::abs(r.dL_fd));
  return r.first_formula_vs_prestokes() <= tol && r.first_formula_vs_fd() <= tol;
}

// Classical second variation of a minimal surface in flat space,
// int |nabla^perp X|^2 - sum_ij <A(e_i, e_j), X>^2, built only from jets.
double classical_minimal_second_variation(const VariationProblem& prob, const VariationField& X) {
  double total = 0.0;
  for (const auto& node : prob.nodes()) {
    const Jet& F = node.jet;
    const Jet x = X(node.point);
    Mat2 g;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = F.d1[i].dot(F.d1[j]);
    const Mat2 gi = g.inverse();
    auto normal = [&](const Vec4& v) {
      Vec4 out = v;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out -= gi(i, j) * v.dot(F.d1[i]) * F.d1[j];
      return out;
    };
    const Vec4 n0 = normal(x.d1[0]), n1 = normal(x.d1[1]);
    const double grad = gi(0, 0) * n0.squaredNorm() + 2 * gi(0, 1) * n0.dot(n1) + gi(1, 1) * n1.squaredNorm();
    Mat2 a;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) a(i, j) = F.second(i, j).dot(x.value);
    const double shape = (gi * a * gi * a).trace();
    total += node.weight * std::sqrt(g.determinant()) * (grad - shape);
  }
  return total;
}

VariationField constant_field(const Domain& d, const Vec4& v) {
  return VariationField{[v](const Vec2&) {
                          Jet j;
                          j.value = v;
                          return j;
                        },
                        d, true, "constant"};
}

}  // namespace

TEST_SUITE("variation") {
  TEST_CASE("functional closed forms") {
    const Domain unit{0, 1, 0, 1, false};
    CHECK(functional(plane(unit, 0.0)) == doctest::Approx(1.0).epsilon(1e-14));
    // A complex line is holomorphic: L equals the area for every beta.
    for (double beta : {0.5, 2.0, 7.0}) CHECK(functional(plane(unit, beta)) == doctest::Approx(1.0).epsilon(1e-14));
    Mat42 M = Mat42::Zero();
    M(0, 0) = M(2, 0) = M(1, 1) = 1.0;  // cos alpha = 1/sqrt2, det g = 2
    for (double beta : {0.0, 1.0, 3.0})
      CHECK(functional(linear_immersion(M, unit, beta)) ==
            doctest::Approx(std::sqrt(2.0) * std::pow(std::sqrt(2.0), beta)).epsilon(1e-14));
  }

  TEST_CASE("rotational annulus reduces to a radial integral") {
    using boost::math::quadrature::gauss_kronrod;
    for (double beta : {0.0, 0.5, 2.0}) {
      const Immersion imm = oracle::generic_rotational(beta, {1.0, 2.0, 0.0, kTwoPi, true});
      const double ref = kTwoPi * gauss_kronrod<double, 61>::integrate(
                                      [beta](double r) {
                                        const double A = 1 + std::pow(oracle::f_generic(r)[1], 2) +
                                                         std::pow(oracle::g_generic(r)[1], 2);
                                        return r * std::sqrt(A) * std::pow(A, beta / 2);
                                      },
                                      1.0, 2.0, 10, 1e-15);
      CHECK(functional(imm) == doctest::Approx(ref).epsilon(1e-10));
    }
  }

  TEST_CASE("Lagrangian patch is rejected") {
    Mat42 M = Mat42::Zero();
    M(0, 0) = M(2, 1) = 1.0;
    CHECK_THROWS_AS(functional(linear_immersion(M, {0, 1, 0, 1, false}, 1.0)), LagrangianPoint);
    CHECK(functional(linear_immersion(M, {0, 1, 0, 1, false}, 0.0)) == doctest::Approx(1.0));
  }

  TEST_CASE("quadrature settings validation and convergence") {
    CHECK_THROWS_AS(VariationProblem(oracle::wavy(1.0), {-0.6, 0.6, -0.6, 0.6, false}, {256, 16}),
                    InvalidArgument);
    const QuadratureConvergence qc = quadrature_convergence(oracle::generic_rotational(2.0), {33, 16});
    CHECK(qc.ratio >= 4.0);
    const QuadratureConvergence qw = quadrature_convergence(oracle::wavy(2.0), {17, 17});
    CHECK(qw.ratio >= 4.0);
  }

  TEST_CASE("three first-variation routes on non-critical surfaces") {
    const Immersion w = oracle::wavy(2.0);
    const BumpWeight bw{{-0.4, 0.5, -0.5, 0.3, false}};
    const VariationReport a = variation_report(w, normal_bump_field(w, bw, Vec4(0.2, -0.1, 1.0, 0.4)));
    CHECK(three_routes_agree(a));
    CHECK(a.first_prestokes_vs_fd() <= 1e-9 * std::abs(a.dL_fd));
    CHECK_FALSE(a.d2L_formula.has_value());
    // The post-Stokes gap is quadrature error: fourth order in the node spacing.
    {
      const VariationField X = normal_bump_field(w, bw, Vec4(0.2, -0.1, 1.0, 0.4));
      double prev = 0.0;
      for (const QuadratureSpec q : {QuadratureSpec{129, 32}, QuadratureSpec{257, 64}, QuadratureSpec{513, 128}}) {
        const VariationProblem P(w, bw.support, q);
        const auto s = P.sample(X);
        const double gap = std::abs(P.first_variation_formula(s) - P.first_variation_prestokes(s));
        if (prev > 0.0) CHECK(prev / gap > 12.0);
        prev = gap;
      }
    }

    // Slopes scaled by 1.01 off the solved profile: clearly non-critical.
    const RadialFunction scaled = [](double r) {
      const Slope sl = solve_slope(r, 2.0, 1, 1);
      return std::array<double, 3>{0.0, 1.01 * sl.fp, 1.01 * slope_derivative(r, 2.0, sl.rho) / std::sqrt(2.0)};
    };
    const Immersion pert = rotational_surface(scaled, scaled, {0.2, 5.0, 0.0, kTwoPi, true}, 2.0);
    const VariationReport b = variation_report(pert, random_normal_field(pert, {0.5, 3.0, 0.0, kTwoPi, true}, 3));
    CHECK(std::abs(b.dL_fd) > 1e-2);
    CHECK(b.first_formula_vs_fd() <= 1e-4 * std::abs(b.dL_fd));
    CHECK(b.first_formula_vs_prestokes() <= 1e-4 * std::abs(b.dL_fd));
    CHECK_FALSE(b.d2L_formula.has_value());

    const Immersion g = oracle::generic_rotational(0.5);
    for (std::uint64_t seed : {1u, 2u}) {
      const VariationReport r = variation_report(g, random_normal_field(g, {0.8, 2.5, 0.0, kTwoPi, true}, seed));
      CHECK(three_routes_agree(r));
      CHECK(r.first_formula_vs_prestokes() <= 1e-6 * std::max(1.0, std::abs(r.dL_fd)));
    }
  }

  TEST_CASE("tangential fields only reparametrize") {
    const Immersion w = oracle::wavy(1.5);
    const VariationField T = tangent_bump_field(w, BumpWeight{{-0.5, 0.4, -0.3, 0.5, false}}, 0.7, -0.4);
    CHECK(std::abs(first_variation_fd(w, T)) < 1e-8);
    CHECK(std::abs(first_variation_prestokes(w, T)) < 1e-8);
    CHECK_THROWS_AS(first_variation_formula(w, T), InvalidVariationField);
  }

  TEST_CASE("critical profiles have vanishing first variation") {
    for (double beta : {0.5, 2.0}) {
      const Immersion imm = profile_immersion(solve_profile(beta, 1, 1, 0.2, 5.0));
      for (std::uint64_t seed = 10; seed < 13; ++seed) {
        const VariationField X = random_normal_field(imm, {0.5, 3.0, 0.0, kTwoPi, true}, seed);
        const VariationReport r = variation_report(imm, X);
        CHECK(std::abs(r.dL_fd) <= 1e-6 * r.field_norm);
        CHECK(std::abs(r.dL_formula) <= 1e-6 * r.field_norm);
        CHECK(std::abs(r.dL_prestokes) <= 1e-6 * r.field_norm);
        CHECK(r.criticality < 1e-7);
      }
    }
  }

  TEST_CASE("linearity, sign and quadratic scaling") {
    const Immersion g = oracle::generic_rotational(2.0);
    const VariationField X = random_normal_field(g, {0.8, 2.5, 0.0, kTwoPi, true}, 5);
    const double d1 = first_variation_fd(g, X);
    CHECK(first_variation_fd(g, field_scale(X, 2.0)) == doctest::Approx(2 * d1).epsilon(1e-7));
    CHECK(first_variation_fd(g, field_scale(X, -1.0)) == doctest::Approx(-d1).epsilon(1e-9));
    CHECK(first_variation_formula(g, field_scale(X, -1.0)) == doctest::Approx(-first_variation_formula(g, X)).epsilon(1e-14));
    const double s1 = second_variation_fd(g, X);
    CHECK(second_variation_fd(g, field_scale(X, 2.0)) == doctest::Approx(4 * s1).epsilon(1e-6));

    const VariationField Z = zero_field({0.8, 2.5, 0.0, kTwoPi, true});
    CHECK(first_variation_fd(g, Z) == 0.0);
    CHECK(first_variation_prestokes(g, Z) == 0.0);
    CHECK(second_variation_fd(g, Z) == 0.0);
    const Immersion p = profile_immersion(solve_profile(2.0, 1, 1, 0.2, 5.0));
    CHECK(second_variation_formula(p, zero_field({0.5, 3.0, 0.0, kTwoPi, true})) == 0.0);
  }

  TEST_CASE("invalid fields and the criticality gate") {
    const Immersion w = oracle::wavy(2.0);
    const VariationField X = normal_bump_field(w, BumpWeight{{-0.4, 0.4, -0.4, 0.4, false}}, Vec4(0, 0, 1, 0));
    CHECK_THROWS_AS(second_variation_formula(w, X), NotCritical);
    CHECK_THROWS_AS(second_variation_pair(w, X), NotCritical);
    CHECK_NOTHROW(second_variation_fd(w, X));

    CHECK_THROWS_AS(normal_bump_field(w, BumpWeight{{-0.6, 0.4, -0.4, 0.4, false}}, Vec4(0, 0, 1, 0)),
                    InvalidVariationField);
    VariationField edge = X;
    edge.support = {-0.6, 0.4, -0.4, 0.4, false};
    CHECK_THROWS_AS(first_variation_formula(w, edge), InvalidVariationField);
    const VariationField blunt = constant_field({-0.4, 0.4, -0.4, 0.4, false}, Vec4(0, 0, 1, 0));
    CHECK_THROWS_AS(first_variation_fd(w, blunt), InvalidVariationField);
    VariationField lying = tangent_bump_field(w, BumpWeight{{-0.4, 0.4, -0.4, 0.4, false}}, 1.0, 0.0);
    lying.normal = true;
    CHECK_THROWS_AS(first_variation_formula(w, lying), InvalidVariationField);
  }

  TEST_CASE("catenoid: classical second variation and instability") {
    const Immersion cat = oracle::catenoid(0.0);
    const Domain s{1.7, 5.5, 0.0, kTwoPi, true};
    const VariationProblem prob(cat, s);
    CHECK(prob.criticality_residual() < 1e-12);
    const Vec4 axis_normal = Vec4(0, 0, 1, 1) / std::sqrt(2.0);
    const VariationField N = normal_bump_field(cat, BumpWeight{s}, axis_normal, true);
    const VariationField R = random_normal_field(cat, s, 3);
    for (const VariationField* X : {&N, &R}) {
      const double classical = classical_minimal_second_variation(prob, *X);
      const double formula = prob.second_variation_formula(prob.sample(*X));
      CHECK(formula == doctest::Approx(classical).epsilon(1e-10));
      const double fd = prob.second_variation_fd(prob.sample(*X), 1e-3);
      CHECK(fd == doctest::Approx(formula).epsilon(1e-6));
    }
  }

  TEST_CASE("catenoid instability through the neck") {
    // Unit catenoid normal (-cos t, -sin t, sinh u Z) / cosh u with u = s/sqrt2,
    // Z = (E3 + E4)/sqrt2. The neck s = 0 is a Lagrangian circle.
    auto catenoid_normal = [](const Domain& s) {
      const BumpWeight bw{s};
      return VariationField{[bw](const Vec2& p) {
                              const double k = 1 / std::sqrt(2.0), u = k * p.x();
                              const double ch = std::cosh(u), sh = std::sinh(u);
                              const double c = std::cos(p.y()), sn = std::sin(p.y());
                              const Vec4 z(0, 0, k, k);
                              const Vec4 nu = (Vec4(-c, -sn, 0, 0) + sh * z) / ch;
                              const Vec4 nu_s = k * (Vec4(c, sn, 0, 0) * sh + z) / (ch * ch);
                              const Vec4 nu_t = Vec4(sn, -c, 0, 0) / ch;
                              const auto w = bw(p);
                              Jet j;
                              j.value = w[0] * nu;
                              j.d1[0] = w[1] * nu + w[0] * nu_s;
                              j.d1[1] = w[2] * nu + w[0] * nu_t;
                              return j;
                            },
                            s, true, "catenoid normal"};
    };
    const Immersion cat = full_catenoid({-6, 6, 0, kTwoPi, true}, 0.0);
    std::vector<double> values;
    for (double S : {1.5, 4.0}) {
      const Domain s{-S, S, 0, kTwoPi, true};
      const VariationProblem prob(cat, s);
      const VariationField N = catenoid_normal(s);
      const auto X = prob.sample(N);
      const double formula = prob.second_variation_formula(X);
      CHECK(formula == doctest::Approx(classical_minimal_second_variation(prob, N)).epsilon(1e-10));
      CHECK(prob.second_variation_fd(X, 1e-3) == doctest::Approx(formula).epsilon(1e-6));
      const double rotated = prob.second_variation_formula(prob.sample(rotated_field(cat, N)));
      CHECK(prob.second_variation_pair(X) == doctest::Approx(formula + rotated).epsilon(1e-6));
      values.push_back(formula);
    }
    CHECK(values[0] > 0.0);  // short collar around the neck: stable
    CHECK(values[1] < 0.0);  // long collar: area decreases
  }

  TEST_CASE("second variation and the pair identity on critical surfaces") {
    struct Case {
      Immersion imm;
      Domain s;
    };
    const std::vector<Case> cases{
        {oracle::catenoid(0.0), {1.7, 5.5, 0.0, kTwoPi, true}},
        {profile_immersion(solve_profile(2.0, 1, 1, 0.2, 5.0)), {0.5, 3.0, 0.0, kTwoPi, true}},
    };
    for (const auto& c : cases) {
      for (std::uint64_t seed : {7u, 8u}) {
        const VariationField X = random_normal_field(c.imm, c.s, seed);
        const VariationReport r = variation_report(c.imm, X);
        REQUIRE(r.d2L_formula.has_value());
        CHECK(*r.second_formula_vs_fd() < 1e-3);
        CHECK(*r.pair_vs_sum() < 1e-6);
        const VariationField JX = rotated_field(c.imm, X);
        CHECK(*r.d2L_rotated == doctest::Approx(second_variation_formula(c.imm, JX)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("rotated field convention") {
    const Immersion imm = oracle::generic_rotational(1.0);
    const VariationField X = random_normal_field(imm, {0.8, 2.5, 0.0, kTwoPi, true}, 4);
    const VariationField JX = rotated_field(imm, X);
    for (const Vec2& p : {Vec2(1.2, 0.4), Vec2(2.0, 3.5)}) {
      const SurfaceGeometry geo = evaluate_geometry(imm, p);
      const Vec4 x = X(p).value;
      const double x3 = x.dot(geo.e3), x4 = x.dot(geo.e4);
      CHECK((JX(p).value - (x4 * geo.e3 - x3 * geo.e4)).norm() < 1e-14);
      CHECK(JX.normal);
    }
  }

  TEST_CASE("constant normal field on a holomorphic plane") {
    const Domain d{0, 1, 0, 1, false};
    const VariationProblem prob(plane(d, 2.0), d, {33, 33});
    const auto X = prob.sample(constant_field(d, Vec4(0, 0, 0.3, -1.2)));
    CHECK(prob.second_variation_pair(X) == 0.0);
    CHECK(prob.second_variation_formula(X) == 0.0);
    CHECK(prob.first_variation_formula(X) == 0.0);
  }

  TEST_CASE("mixed bilinear form") {
    const Immersion imm = profile_immersion(solve_profile(2.0, 1, 1, 0.2, 5.0));
    const Domain s{0.5, 3.0, 0.0, kTwoPi, true};
    const VariationProblem prob(imm, s);
    const auto X = prob.sample(random_normal_field(imm, s, 21));
    const auto Y = prob.sample(random_normal_field(imm, s, 22));
    const double bxy = prob.bilinear_form(X, Y), byx = prob.bilinear_form(Y, X);
    CHECK(std::abs(bxy - byx) <= 1e-8 * std::max(1.0, std::abs(bxy)));
    CHECK(prob.bilinear_form(X, X) == doctest::Approx(prob.second_variation_formula(X)).epsilon(1e-11));
    CHECK(bxy == doctest::Approx(prob.mixed_fd(X, Y, 1e-3)).epsilon(1e-4));
  }

  TEST_CASE("reports are deterministic") {
    const Immersion imm = oracle::generic_rotational(2.0);
    const VariationField X = random_normal_field(imm, {0.8, 2.5, 0.0, kTwoPi, true}, 99);
    const VariationReport a = variation_report(imm, X), b = variation_report(imm, X);
    CHECK(a.dL_formula == b.dL_formula);
    CHECK(a.dL_prestokes == b.dL_prestokes);
    CHECK(a.dL_fd == b.dL_fd);
    CHECK(a.d2L_fd == b.d2L_fd);
    const VariationField Y = random_normal_field(imm, {0.8, 2.5, 0.0, kTwoPi, true}, 99);
    CHECK(first_variation_formula(imm, Y) == a.dL_formula);
  }
}
