#include "betalab/geometry.hpp"

#include <cmath>
#include <string>

#include "betalab/errors.hpp"

namespace betalab {

namespace {

const Vec4 kE1{1, 0, 0, 0};
const Vec4 kE2{0, 1, 0, 0};

Mat2 metric(const Jet& jet) {
  Mat2 g;
  g(0, 0) = jet.d1[0].dot(jet.d1[0]);
  g(0, 1) = g(1, 0) = jet.d1[0].dot(jet.d1[1]);
  g(1, 1) = jet.d1[1].dot(jet.d1[1]);
  return g;
}

double det2(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

Mat2 inverse2(const Mat2& m, double det) {
  Mat2 inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / det;
}

std::string where(const Vec2& p) {
  return "(" + std::to_string(p.x()) + ", " + std::to_string(p.y()) + ")";
}

double det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
  Mat4 m;
  m << a, b, c, d;
  return m.determinant();
}

double step_for(double coord, double rel) { return std::max(rel, rel * std::abs(coord)); }

}  // namespace

NormalSeed NormalSeed::rotated(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return NormalSeed{Vec4(0, 0, c, s), Vec4(0, 0, -s, c)};
}

double SurfaceGeometry::sin_alpha() const { return std::sqrt(y * y + z * z); }

Vec4 SurfaceGeometry::tangent_part(const Vec4& v) const {
  return v.dot(u1) * u1 + v.dot(u2) * u2;
}

Vec4 SurfaceGeometry::normal_part(const Vec4& v) const {
  return v.dot(e3) * e3 + v.dot(e4) * e4;
}

Mat4 SurfaceGeometry::frame_form() const {
  const auto& J = standard_complex_structure();
  const std::array<Vec4, 4> f{u1, u2, e3, e4};
  Mat4 m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m(a, b) = J.omega(f[a], f[b]);
  return m;
}

double kahler_cos(const Jet& jet) {
  const double det = det2(metric(jet));
  if (!(det > 0.0)) throw DegenerateImmersion("det g = " + std::to_string(det));
  return standard_complex_structure().omega(jet.d1[0], jet.d1[1]) / std::sqrt(det);
}

Vec4 mean_curvature(const Jet& jet) {
  const Mat2 g = metric(jet);
  const double det = det2(g);
  if (!(det >= default_tolerances().degenerate_det))
    throw DegenerateImmersion("det g = " + std::to_string(det));
  const Mat2 gi = inverse2(g, det);
  Vec4 H = Vec4::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Vec4 fij = jet.second(i, j);
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) fij -= gi(k, l) * jet.second(i, j).dot(jet.d1[l]) * jet.d1[k];
      H += gi(i, j) * fij;
    }
  }
  return H;
}

Vec4 mean_curvature(const Immersion& imm, const Vec2& p) { return mean_curvature(imm(p)); }

SurfaceGeometry geometry_from_jet(const Jet& jet, const Vec2& p, double beta,
                                  const NormalSeed& seed, const Tolerances& tol) {
  SurfaceGeometry geo;
  geo.point = p;
  geo.beta = beta;
  geo.position = jet.value;
  geo.e1 = jet.d1[0];
  geo.e2 = jet.d1[1];
  geo.second_partials = jet.d2;
  geo.g = metric(jet);
  geo.det_g = det2(geo.g);
  if (!(geo.det_g >= tol.degenerate_det))
    throw DegenerateImmersion("det g = " + std::to_string(geo.det_g) + " at " + where(p));
  geo.g_inv = inverse2(geo.g, geo.det_g);

  const double n1 = std::sqrt(geo.g(0, 0));
  const double wn = std::sqrt(geo.det_g / geo.g(0, 0));  // |e2 - proj_{e1} e2|
  geo.frame << 1.0 / n1, 0.0, -geo.g(0, 1) / (geo.g(0, 0) * wn), 1.0 / wn;
  geo.u1 = geo.frame(0, 0) * geo.e1;
  geo.u2 = geo.frame(1, 0) * geo.e1 + geo.frame(1, 1) * geo.e2;

  auto project = [&](const Vec4& v) { return Vec4(v - v.dot(geo.u1) * geo.u1 - v.dot(geo.u2) * geo.u2); };
  const std::array<Vec4, 4> candidates{seed.first, seed.second, kE1, kE2};
  std::size_t next = 0;
  bool have3 = false, have4 = false;
  for (; next < candidates.size() && !have3; ++next) {
    Vec4 n = project(candidates[next]);
    if (n.norm() >= tol.seed_projection) {
      // Second pass: a short residual has lost digits to cancellation.
      geo.e3 = project(n).normalized();
      have3 = true;
    }
  }
  for (; next < candidates.size() && !have4; ++next) {
    Vec4 n = project(candidates[next]);
    n -= n.dot(geo.e3) * geo.e3;
    if (n.norm() >= tol.seed_projection) {
      n = project(n);
      n -= n.dot(geo.e3) * geo.e3;
      geo.e4 = n.normalized();
      have4 = true;
    }
  }
  if (!have3 || !have4) throw DegenerateImmersion("normal frame seeding failed at " + where(p));
  if (det4(geo.u1, geo.u2, geo.e3, geo.e4) < 0.0) geo.e4 = -geo.e4;

  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Vec4 d = Vec4::Zero();
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) d += geo.frame(i, k) * geo.frame(j, l) * jet.second(k, l);
      geo.h[0](i, j) = d.dot(geo.e3);
      geo.h[1](i, j) = d.dot(geo.e4);
    }
  }
  geo.H = mean_curvature(jet);

  const auto& J = standard_complex_structure();
  const Vec4 ju1 = J(geo.u1);
  geo.cos_alpha = ju1.dot(geo.u2);
  geo.y = ju1.dot(geo.e3);
  geo.z = ju1.dot(geo.e4);
  geo.lagrangian = geo.cos_alpha < tol.lagrangian_cos;
  return geo;
}

SurfaceGeometry evaluate_geometry(const Immersion& imm, const Vec2& p, const NormalSeed& seed,
                                  const Tolerances& tol) {
  return geometry_from_jet(imm(p), p, imm.beta(), seed, tol);
}

double kahler_angle(const SurfaceGeometry& geo) {
  return standard_complex_structure().omega(geo.e1, geo.e2) / std::sqrt(geo.det_g);
}

Vec2 cos_alpha_partials(const Immersion& imm, const Vec2& p, const Tolerances& tol,
                        Stencil stencil) {
  Vec2 out;
  for (int k = 0; k < 2; ++k) {
    const double h = step_for(p[k], tol.fd_step);
    auto central = [&](double s) {
      Vec2 a = p, b = p;
      a[k] += s;
      b[k] -= s;
      return (kahler_cos(imm(a)) - kahler_cos(imm(b))) / (2.0 * s);
    };
    if (stencil == Stencil::Central) {
      out[k] = central(h);
    } else {
      out[k] = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    }
  }
  return out;
}

ElResidual el_residual(const SurfaceGeometry& geo, const Vec2& grad_cos, const Tolerances& tol) {
  if (geo.cos_alpha < tol.lagrangian_cos)
    throw LagrangianPoint("cos(alpha) = " + std::to_string(geo.cos_alpha) + " at " + where(geo.point));
  const auto& J = standard_complex_structure();
  const double c = geo.cos_alpha;
  const double a1 = grad_cos[0], a2 = grad_cos[1];

  ElResidual res;
  res.cos_alpha = c;
  res.grad_cos = grad_cos;
  res.operator_form = c * c * geo.H - geo.beta * geo.normal_part(J(a1 * geo.u2 - a2 * geo.u1));

  const Vec4 grad = a1 * geo.u1 + a2 * geo.u2;
  const Vec4 jt = geo.tangent_part(J(grad));
  const Vec4 angle_term = geo.beta * geo.normal_part(J(jt));
  res.equation_form = c * c * c * geo.H - angle_term;
  res.scale = std::max((c * c * c * geo.H).norm(), angle_term.norm());
  return res;
}

ElResidual el_residual(const Immersion& imm, const Vec2& p, const Tolerances& tol, Stencil stencil) {
  const SurfaceGeometry geo = evaluate_geometry(imm, p, {}, tol);
  if (geo.lagrangian)
    throw LagrangianPoint("cos(alpha) = " + std::to_string(geo.cos_alpha) + " at " + where(p));
  const Vec2 d = cos_alpha_partials(imm, p, tol, stencil);
  return el_residual(geo, Vec2(geo.along(std::array<double, 2>{d[0], d[1]}, 0),
                               geo.along(std::array<double, 2>{d[0], d[1]}, 1)),
                     tol);
}

double ElResidual::two_route_error() const {
  const double diff = (equation_form - cos_alpha * operator_form).norm();
  return scale > 0.0 ? diff / scale : diff;
}

Vec2 cos_alpha_partials_exact(const Jet& jet) {
  const auto& J = standard_complex_structure();
  const Mat2 g = metric(jet);
  const double det = det2(g);
  if (!(det > 0.0)) throw DegenerateImmersion("det g = " + std::to_string(det));
  const Mat2 gi = inverse2(g, det);
  const double w = J.omega(jet.d1[0], jet.d1[1]);
  Vec2 out;
  for (int k = 0; k < 2; ++k) {
    // d_k omega(F_1, F_2) and d_k log sqrt(det g) = g^{ij} <F_ki, F_j>
    const double dw = J.omega(jet.second(k, 0), jet.d1[1]) + J.omega(jet.d1[0], jet.second(k, 1));
    double dlog = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) dlog += gi(i, j) * jet.second(k, i).dot(jet.d1[j]);
    out[k] = (dw - w * dlog) / std::sqrt(det);
  }
  return out;
}

SurfaceGeometry adapted_frame(const SurfaceGeometry& geo, const Tolerances& tol) {
  const double s = geo.sin_alpha();
  if (!(s > tol.complex_sin))
    throw ComplexPoint("sin(alpha) = " + std::to_string(s) + " at " + where(geo.point));
  const double cy = geo.y / s, cz = geo.z / s;
  SurfaceGeometry out = geo;
  out.e3 = cy * geo.e3 + cz * geo.e4;
  out.e4 = -cz * geo.e3 + cy * geo.e4;
  out.h[0] = cy * geo.h[0] + cz * geo.h[1];
  out.h[1] = -cz * geo.h[0] + cy * geo.h[1];
  const Vec4 ju1 = standard_complex_structure()(out.u1);
  out.y = ju1.dot(out.e3);
  out.z = ju1.dot(out.e4);
  return out;
}

Vec2 alpha_gradient(const SurfaceGeometry& geo, const Vec2& grad_cos, const Tolerances& tol) {
  const double s = std::sqrt(std::max(0.0, 1.0 - geo.cos_alpha * geo.cos_alpha));
  if (!(s > tol.complex_sin))
    throw ComplexPoint("sin(alpha) = " + std::to_string(s) + " at " + where(geo.point));
  return -grad_cos / s;
}

Vec2 alpha_gradient_from_h(const SurfaceGeometry& adapted) {
  const Mat2& h3 = adapted.h[0];
  const Mat2& h4 = adapted.h[1];
  return Vec2(-(h4(0, 0) + h3(1, 0)), -(h4(0, 1) + h3(1, 1)));
}

Vec4 v_field(const SurfaceGeometry& adapted, const Vec2& grad_alpha) {
  return grad_alpha[1] * adapted.e3 + grad_alpha[0] * adapted.e4;
}

Vec4 v_identity_residual(const Immersion& imm, const Vec2& p, const Tolerances& tol) {
  const SurfaceGeometry geo = evaluate_geometry(imm, p, {}, tol);
  const SurfaceGeometry ad = adapted_frame(geo, tol);
  const Vec2 d = cos_alpha_partials(imm, p, tol);
  const Vec2 gc(geo.along(std::array<double, 2>{d[0], d[1]}, 0),
                geo.along(std::array<double, 2>{d[0], d[1]}, 1));
  const Vec2 ga = alpha_gradient(ad, gc, tol);
  const double c = geo.cos_alpha, s2 = 1.0 - c * c;
  return geo.H - geo.beta * (s2 / (c * c)) * v_field(ad, ga);
}

std::vector<double> laplace_beltrami_radial(std::span<const double> r, std::span<const double> u,
                                            std::span<const double> A) {
  const std::size_t n = r.size();
  if (n < 5) throw GridTooCoarse("need at least 5 nodes, got " + std::to_string(n));
  if (u.size() != n || A.size() != n) throw InvalidArgument("grid arrays differ in length");
  std::vector<double> flux(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dr = r[i + 1] - r[i];
    if (!(dr > 0.0)) throw InvalidArgument("r grid must be strictly increasing");
    const double rh = 0.5 * (r[i] + r[i + 1]);
    const double ah = 0.5 * (A[i] + A[i + 1]);
    flux[i] = rh * (u[i + 1] - u[i]) / dr / std::sqrt(ah);
  }
  std::vector<double> out(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double span = 0.5 * (r[i + 1] - r[i - 1]);
    out[i - 1] = (flux[i] - flux[i - 1]) / span / (r[i] * std::sqrt(A[i]));
  }
  return out;
}

}  // namespace betalab
