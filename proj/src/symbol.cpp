#include "betalab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "betalab/errors.hpp"

namespace betalab {

double symbol_quadratic(const SurfaceGeometry& geo, const Vec4& G, const Vec2& xi) {
  return symbol_quadratic(geo, geo.beta, G, xi);
}

double symbol_quadratic(const SurfaceGeometry& geo, double beta, const Vec4& G, const Vec2& xi) {
  const auto& J = standard_complex_structure();
  const Vec4 gp = geo.normal_part(G);
  const Vec4 j1 = J(geo.u1), j2 = J(geo.u2);
  const double c = geo.cos_alpha;
  const double c12 = j1.dot(geo.u2);
  const double p1 = j1.dot(gp), p2 = j2.dot(gp);  // <J u_i, G^perp>
  const double q1 = j1.dot(G), q2 = j2.dot(G);    // <J u_i, G>
  const double t1 = G.dot(geo.u1), t2 = G.dot(geo.u2);

  const double k11 = -p2 * q2 - c12 * t1 * p2;
  const double k22 = -p1 * q1 + c12 * t2 * p1;
  const double k12 = p2 * q1 + p1 * q2 + c12 * t1 * p1 - c12 * t2 * p2;
  const double x1 = xi[0], x2 = xi[1];
  return c * c * xi.squaredNorm() * gp.squaredNorm() -
         beta * (k11 * x1 * x1 + k22 * x2 * x2 + k12 * x1 * x2);
}

SymbolData symbol_matrix(const SurfaceGeometry& geo, const Vec4& G) {
  return symbol_matrix(geo, geo.beta, G);
}

SymbolData symbol_matrix(const SurfaceGeometry& geo, double beta, const Vec4& G) {
  const auto& J = standard_complex_structure();
  SymbolData s;
  s.beta = beta;
  s.cos_alpha = geo.cos_alpha;
  const Vec4 gp = geo.normal_part(G);
  s.g_perp_norm2 = gp.squaredNorm();
  s.jg1 = gp.dot(J(geo.u1));
  s.jg2 = gp.dot(J(geo.u2));
  const double c2 = geo.cos_alpha * geo.cos_alpha;
  const double base = c2 * s.g_perp_norm2;
  s.O(0, 0) = base + beta * s.jg2 * s.jg2;
  s.O(1, 1) = base + beta * s.jg1 * s.jg1;
  s.O(0, 1) = s.O(1, 0) = -beta * s.jg1 * s.jg2;
  s.det_direct = s.O(0, 0) * s.O(1, 1) - s.O(0, 1) * s.O(1, 0);
  s.det_factored = base * (base + beta * (s.jg1 * s.jg1 + s.jg2 * s.jg2));
  return s;
}

EllipticityReport ellipticity_check(const SurfaceGeometry& geo, double beta, int samples,
                                    std::uint64_t seed, const Tolerances& tol) {
  if (beta < 0.0) throw InvalidBeta("beta must be >= 0, got " + std::to_string(beta));
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  EllipticityReport rep;
  rep.samples = samples;
  rep.beta = beta;
  rep.cos_alpha = geo.cos_alpha;
  rep.min_det = std::numeric_limits<double>::infinity();
  rep.min_det_nondegenerate = std::numeric_limits<double>::infinity();
  constexpr double kDegenerate = 1e-6;  // cos |G^perp| below this counts as degenerate

  bool ok = true;
  for (int k = 0; k < samples; ++k) {
    Vec4 G;
    for (int a = 0; a < 4; ++a) G[a] = normal(rng);
    G.normalize();
    const SymbolData s = symbol_matrix(geo, beta, G);
    if (s.det_direct < tol.det_violation)
      throw EllipticityViolation("det O = " + std::to_string(s.det_direct) + " for sample " +
                                 std::to_string(k));
    rep.min_det = std::min(rep.min_det, s.det_direct);
    // The direct 2x2 determinant can only be trusted relative to the size of
    // the products it subtracts; near Lagrangian points those are O(beta^2)
    // while det O is O(cos^2).
    const double scale = std::max({std::abs(s.det_direct), std::abs(s.det_factored),
                                   std::abs(s.O(0, 0) * s.O(1, 1)), s.O(0, 1) * s.O(0, 1),
                                   std::numeric_limits<double>::min()});
    rep.max_factorization_error =
        std::max(rep.max_factorization_error, std::abs(s.det_direct - s.det_factored) / scale);
    if (std::abs(geo.cos_alpha) * std::sqrt(s.g_perp_norm2) < kDegenerate) {
      ++rep.degenerate_samples;
      rep.max_abs_det_degenerate = std::max(rep.max_abs_det_degenerate, std::abs(s.det_direct));
      ok = ok && std::abs(s.det_direct) < -tol.det_floor;
    } else {
      rep.min_det_nondegenerate = std::min(rep.min_det_nondegenerate, s.det_direct);
      ok = ok && s.det_direct > 0.0;
    }
    ok = ok && s.det_direct >= tol.det_floor;
  }
  ok = ok && rep.max_factorization_error <= tol.symbol_rel;
  rep.passed = ok;
  return rep;
}

}  // namespace betalab
