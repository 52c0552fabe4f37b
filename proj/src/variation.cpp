#include "betalab/variation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "betalab/errors.hpp"

namespace betalab {

namespace {

// (1 - s^2)^3 on [-1, 1] mapped to [a, b]; returns {w, dw/dx}.
std::array<double, 2> bump(double x, double a, double b) {
  const double half = 0.5 * (b - a);
  const double s = (x - 0.5 * (a + b)) / half;
  if (!(std::abs(s) < 1.0)) return {0.0, 0.0};
  const double q = 1.0 - s * s;
  return {q * q * q, -6.0 * s * q * q / half};
}

Mat2 metric_of(const std::array<Vec4, 2>& d) {
  Mat2 g;
  g(0, 0) = d[0].dot(d[0]);
  g(0, 1) = g(1, 0) = d[0].dot(d[1]);
  g(1, 1) = d[1].dot(d[1]);
  return g;
}

Vec4 cross3(const Vec4& a, const Vec4& b, const Vec4& c) {
  Vec4 out;
  for (int k = 0; k < 4; ++k) {
    Mat4 m;
    m.col(0) = Vec4::Unit(k);
    m.col(1) = a;
    m.col(2) = b;
    m.col(3) = c;
    out[k] = m.determinant();
  }
  return out;
}

void validate_support(const Immersion& imm, const VariationField& X) {
  if (!X.support.strictly_inside(imm.domain()))
    throw InvalidVariationField("support of '" + X.label + "' is not strictly inside the domain");
  // The field and its first partials must vanish on the edge of the support.
  const Domain& s = X.support;
  double worst = 0.0;
  constexpr int kEdge = 16;
  for (int k = 0; k <= kEdge; ++k) {
    const double t = static_cast<double>(k) / kEdge;
    const double x1 = s.a1 + t * (s.b1 - s.a1);
    const double x2 = s.a2 + t * (s.b2 - s.a2);
    std::vector<Vec2> pts{{s.a1, x2}, {s.b1, x2}};
    if (!s.periodic2) {
      pts.emplace_back(x1, s.a2);
      pts.emplace_back(x1, s.b2);
    }
    for (const Vec2& p : pts) {
      const Jet j = X(p);
      worst = std::max({worst, j.value.norm(), j.d1[0].norm(), j.d1[1].norm()});
    }
  }
  if (worst > 1e-14)
    throw InvalidVariationField("field '" + X.label + "' does not vanish on its support edge (" +
                                std::to_string(worst) + ")");
}

struct FieldDerivs {
  Vec4 x;
  std::array<Vec4, 2> D;  // D_{u_i} X
  double div;
  double omega_sum;  // omega(D_1 X, u2) + omega(u1, D_2 X)
};

FieldDerivs derivs(const SurfaceGeometry& geo, const Jet& X) {
  const auto& J = standard_complex_structure();
  FieldDerivs d;
  d.x = X.value;
  d.D[0] = geo.along(X.d1, 0);
  d.D[1] = geo.along(X.d1, 1);
  d.div = d.D[0].dot(geo.u1) + d.D[1].dot(geo.u2);
  d.omega_sum = J.omega(d.D[0], geo.u2) + J.omega(geo.u1, d.D[1]);
  return d;
}

}  // namespace

Jet VariationField::operator()(const Vec2& p) const {
  if (!support.contains(p)) return Jet{};
  return eval(p);
}

Jet VariationField::with_second(const Vec2& p, double h) const {
  Jet j = (*this)(p);
  auto shifted = [&](int k, double s) {
    Vec2 q = p;
    q[k] += s;
    return (*this)(q);
  };
  const Jet p1 = shifted(0, h), m1 = shifted(0, -h), p2 = shifted(1, h), m2 = shifted(1, -h);
  j.d2[0] = (p1.d1[0] - m1.d1[0]) / (2.0 * h);
  j.d2[2] = (p2.d1[1] - m2.d1[1]) / (2.0 * h);
  j.d2[1] = 0.5 * ((p2.d1[0] - m2.d1[0]) + (p1.d1[1] - m1.d1[1])) / (2.0 * h);
  return j;
}

std::array<double, 3> BumpWeight::operator()(const Vec2& p) const {
  const auto u = bump(p.x(), support.a1, support.b1);
  if (support.periodic2) {
    const double c = std::cos(p.y()), s = std::sin(p.y());
    const double v = a0 + a1 * c + b1 * s;
    const double dv = -a1 * s + b1 * c;
    return {u[0] * v, u[1] * v, u[0] * dv};
  }
  const auto v = bump(p.y(), support.a2, support.b2);
  return {u[0] * v[0], u[1] * v[0], u[0] * v[1]};
}

VariationField zero_field(const Domain& support) {
  return VariationField{[](const Vec2&) { return Jet{}; }, support, true, "zero"};
}

VariationField normal_bump_field(const Immersion& imm, const BumpWeight& w, const Vec4& V, bool unit) {
  auto eval = [imm, w, V, unit](const Vec2& p) {
    const auto wv = w(p);
    Jet out;
    if (wv[0] == 0.0 && wv[1] == 0.0 && wv[2] == 0.0) return out;
    const Jet F = imm(p);
    const Mat2 g = metric_of(F.d1);
    const Mat2 gi = g.inverse();
    Vec2 vf(V.dot(F.d1[0]), V.dot(F.d1[1]));
    Vec4 n = V;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) n -= gi(i, j) * vf[i] * F.d1[j];
    std::array<Vec4, 2> dn;
    for (int k = 0; k < 2; ++k) {
      Mat2 dg;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) dg(a, b) = F.second(a, k).dot(F.d1[b]) + F.d1[a].dot(F.second(b, k));
      const Mat2 dgi = -gi * dg * gi;
      const Vec2 dvf(V.dot(F.second(0, k)), V.dot(F.second(1, k)));
      Vec4 acc = Vec4::Zero();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          acc += dgi(i, j) * vf[i] * F.d1[j] + gi(i, j) * dvf[i] * F.d1[j] +
                 gi(i, j) * vf[i] * F.second(j, k);
      dn[k] = -acc;
    }
    if (unit) {
      const double len = n.norm();
      if (!(len > 0.0)) throw InvalidVariationField("direction is tangent to the surface");
      const Vec4 m = n / len;
      for (auto& d : dn) d = (d - m * m.dot(d)) / len;
      n = m;
    }
    out.value = wv[0] * n;
    for (int k = 0; k < 2; ++k) out.d1[k] = wv[1 + k] * n + wv[0] * dn[k];
    return out;
  };
  VariationField X{eval, w.support, true, "normal bump"};
  validate_support(imm, X);
  return X;
}

VariationField tangent_bump_field(const Immersion& imm, const BumpWeight& w, double a, double b) {
  auto eval = [imm, w, a, b](const Vec2& p) {
    const auto wv = w(p);
    Jet out;
    if (wv[0] == 0.0 && wv[1] == 0.0 && wv[2] == 0.0) return out;
    const Jet F = imm(p);
    const Vec4 t = a * F.d1[0] + b * F.d1[1];
    out.value = wv[0] * t;
    for (int k = 0; k < 2; ++k)
      out.d1[k] = wv[1 + k] * t + wv[0] * (a * F.second(0, k) + b * F.second(1, k));
    return out;
  };
  VariationField X{eval, w.support, false, "tangent bump"};
  validate_support(imm, X);
  return X;
}

VariationField rotated_field(const Immersion& imm, const VariationField& X) {
  auto eval = [imm, X](const Vec2& p) {
    const Jet x = X(p);
    Jet out;
    if (x.value.isZero(0.0) && x.d1[0].isZero(0.0) && x.d1[1].isZero(0.0)) return out;
    const Jet F = imm(p);
    const Mat2 g = metric_of(F.d1);
    const Mat2 gi = g.inverse();
    const double sq = std::sqrt(g.determinant());
    const Vec4 c = cross3(F.d1[0], F.d1[1], x.value);
    out.value = c / sq;
    for (int k = 0; k < 2; ++k) {
      double dlog = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) dlog += gi(i, j) * F.second(k, i).dot(F.d1[j]);
      const Vec4 dc = cross3(F.second(0, k), F.d1[1], x.value) +
                      cross3(F.d1[0], F.second(1, k), x.value) + cross3(F.d1[0], F.d1[1], x.d1[k]);
      out.d1[k] = dc / sq - out.value * dlog;
    }
    return out;
  };
  return VariationField{eval, X.support, true, "rotated " + X.label};
}

VariationField field_sum(const VariationField& X, const VariationField& Y) {
  if (X.support.a1 != Y.support.a1 || X.support.b1 != Y.support.b1 ||
      X.support.a2 != Y.support.a2 || X.support.b2 != Y.support.b2)
    throw InvalidVariationField("fields must share a support to be added");
  return VariationField{[X, Y](const Vec2& p) { return X(p) + Y(p); }, X.support,
                        X.normal && Y.normal, X.label + " + " + Y.label};
}

VariationField field_scale(const VariationField& X, double s) {
  return VariationField{[X, s](const Vec2& p) { return s * X(p); }, X.support, X.normal,
                        std::to_string(s) + " * " + X.label};
}

VariationField random_normal_field(const Immersion& imm, const Domain& support, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  Vec4 V;
  for (int a = 0; a < 4; ++a) V[a] = normal(rng);
  V.normalize();
  BumpWeight w{support, 1.0 + uni(rng), uni(rng), uni(rng)};
  VariationField X = normal_bump_field(imm, w, V);
  X.label = "random normal bump #" + std::to_string(seed);
  return X;
}

Immersion perturb(const Immersion& imm, const VariationField& X, double t) {
  return Immersion(
      [imm, X, t](const Vec2& p) {
        Jet j = imm(p);
        j += t * X.with_second(p);
        return j;
      },
      imm.domain(), imm.beta());
}

std::optional<double> VariationReport::second_formula_vs_fd() const {
  if (!d2L_formula) return std::nullopt;
  return std::abs(*d2L_formula - d2L_fd) / std::max(std::abs(d2L_fd), 1e-300);
}

std::optional<double> VariationReport::pair_vs_sum() const {
  if (!d2L_pair || !d2L_formula || !d2L_rotated) return std::nullopt;
  return std::abs(*d2L_pair - (*d2L_formula + *d2L_rotated)) / std::max(std::abs(*d2L_pair), 1e-300);
}

// --- VariationProblem -------------------------------------------------------

VariationProblem::VariationProblem(Immersion imm, const Domain& region, QuadratureSpec quad,
                                   Tolerances tol)
    : imm_(std::move(imm)), region_(region), quad_(quad), tol_(tol) {
  if (quad.n1 < 3 || quad.n1 % 2 == 0) throw InvalidArgument("n1 must be odd and >= 3");
  if (quad.n2 < 1) throw InvalidArgument("n2 must be >= 1");
  auto simpson = [](double a, double b, int n) {
    std::vector<std::pair<double, double>> w(static_cast<std::size_t>(n));
    const double h = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      w[static_cast<std::size_t>(i)] = {a + i * h, c * h / 3.0};
    }
    return w;
  };
  const auto w1 = simpson(region.a1, region.b1, quad.n1);
  std::vector<std::pair<double, double>> w2;
  if (region.periodic2) {
    const double h = (region.b2 - region.a2) / quad.n2;
    for (int j = 0; j < quad.n2; ++j) w2.emplace_back(region.a2 + (j + 0.5) * h, h);
  } else {
    w2 = simpson(region.a2, region.b2, quad.n2 % 2 == 1 ? std::max(quad.n2, 3) : quad.n2 + 1);
  }
  nodes_.reserve(w1.size() * w2.size());
  for (const auto& [x1, c1] : w1)
    for (const auto& [x2, c2] : w2) {
      const Vec2 p(x1, x2);
      nodes_.push_back(Node{p, c1 * c2, imm_(p)});
    }
}

double VariationProblem::sum(const std::vector<double>& values) const {
  // Neumaier compensated summation in node order.
  double s = 0.0, c = 0.0;
  for (double v : values) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return s + c;
}

const std::vector<VariationProblem::Geometry>& VariationProblem::geometry() const {
  if (geometry_.empty()) {
    geometry_.reserve(nodes_.size());
    for (const Node& n : nodes_) {
      SurfaceGeometry geo = geometry_from_jet(n.jet, n.point, imm_.beta(), {}, tol_);
      const Vec2 d = cos_alpha_partials(imm_, n.point, tol_);
      const std::array<double, 2> dd{d[0], d[1]};
      const Vec2 grad(geo.along(dd, 0), geo.along(dd, 1));
      geometry_.push_back(Geometry{std::move(geo), grad});
    }
  }
  return geometry_;
}

VariationProblem::Samples VariationProblem::sample(const VariationField& X) const {
  Samples s;
  s.normal = X.normal;
  s.x.reserve(nodes_.size());
  for (const Node& n : nodes_) {
    Jet j = X(n.point);
    if (X.normal && !j.value.isZero(0.0)) {
      const double scale = std::max(1.0, j.value.norm());
      const double t0 = std::abs(j.value.dot(n.jet.d1[0])) / n.jet.d1[0].norm();
      const double t1 = std::abs(j.value.dot(n.jet.d1[1])) / n.jet.d1[1].norm();
      if (std::max(t0, t1) > 1e-10 * scale)
        throw InvalidVariationField("field '" + X.label + "' is flagged normal but has a tangential part");
    }
    s.x.push_back(std::move(j));
  }
  return s;
}

void VariationProblem::require_normal(const Samples& X, const char* what) const {
  if (!X.normal) throw InvalidVariationField(std::string(what) + " needs a normal field");
}

double VariationProblem::criticality_residual() const {
  if (!criticality_) {
    double worst = 0.0;
    for (const Geometry& g : geometry()) {
      double p;
      if (imm_.beta() == 0.0) {
        p = g.geo.cos_alpha * g.geo.cos_alpha * g.geo.H.norm();
      } else {
        p = el_residual(g.geo, g.grad_cos, tol_).operator_form.norm();
      }
      worst = std::max(worst, p);
    }
    criticality_ = worst;
  }
  return *criticality_;
}

void VariationProblem::require_critical() const {
  const double r = criticality_residual();
  if (!(r < tol_.criticality_gate))
    throw NotCritical("max |P| = " + std::to_string(r) + " exceeds the criticality gate");
}

double VariationProblem::field_norm(const Samples& X) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Jet& F = nodes_[i].jet;
    const SurfaceGeometry geo = geometry_from_jet(F, nodes_[i].point, imm_.beta(), {}, tol_);
    worst = std::max({worst, X.x[i].value.norm(), geo.along(X.x[i].d1, 0).norm(),
                      geo.along(X.x[i].d1, 1).norm()});
  }
  return worst;
}

double VariationProblem::functional() const { return functional_along(Samples{}, 0.0); }

double VariationProblem::functional_along(const Samples& X, double t) const {
  const auto& J = standard_complex_structure();
  const double beta = imm_.beta();
  std::vector<double> terms(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Jet& F = nodes_[i].jet;
    std::array<Vec4, 2> d = F.d1;
    if (!X.x.empty()) {
      d[0] += t * X.x[i].d1[0];
      d[1] += t * X.x[i].d1[1];
    }
    const double det = metric_of(d).determinant();
    if (!(det > tol_.degenerate_det)) throw DegenerateImmersion("det g = " + std::to_string(det));
    const double sq = std::sqrt(det);
    double nu = sq;
    if (beta != 0.0) {
      const double c = J.omega(d[0], d[1]) / sq;
      if (!(c > tol_.lagrangian_cos))
        throw LagrangianPoint("cos(alpha) = " + std::to_string(c) + " on the quadrature grid");
      nu = sq * std::pow(c, -beta);
    }
    terms[i] = nodes_[i].weight * nu;
  }
  return sum(terms);
}

double VariationProblem::mixed_fd(const Samples& X, const Samples& Y, double h) const {
  Samples s;
  s.x.resize(nodes_.size());
  auto L = [&](double a, double b) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) s.x[i] = a * X.x[i] + b * Y.x[i];
    return functional_along(s, 1.0);
  };
  return (L(h, h) - L(h, -h) - L(-h, h) + L(-h, -h)) / (4.0 * h * h);
}

double VariationProblem::first_variation_prestokes(const Samples& X) const {
  const double beta = imm_.beta();
  const auto& G = geometry();
  std::vector<double> terms(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const SurfaceGeometry& geo = G[i].geo;
    const FieldDerivs d = derivs(geo, X.x[i]);
    const double c = geo.cos_alpha;
    double integrand = (beta + 1.0) * d.div * std::pow(c, -beta);
    if (beta != 0.0) integrand -= beta * d.omega_sum * std::pow(c, -beta - 1.0);
    terms[i] = nodes_[i].weight * std::sqrt(geo.det_g) * integrand;
  }
  return sum(terms);
}

double VariationProblem::first_variation_formula(const Samples& X) const {
  require_normal(X, "first_variation_formula");
  const auto& J = standard_complex_structure();
  const double beta = imm_.beta();
  const auto& G = geometry();
  std::vector<double> terms(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const SurfaceGeometry& geo = G[i].geo;
    const Vec4 grad = G[i].grad_cos[0] * geo.u1 + G[i].grad_cos[1] * geo.u2;
    const Vec4 Q = geo.normal_part(J(geo.tangent_part(J(grad))));
    const double c = geo.cos_alpha;
    const Vec4& x = X.x[i].value;
    double integrand = -(beta + 1.0) * x.dot(geo.H) * std::pow(c, -beta);
    if (beta != 0.0) integrand += beta * (beta + 1.0) * x.dot(Q) * std::pow(c, -beta - 3.0);
    terms[i] = nodes_[i].weight * std::sqrt(geo.det_g) * integrand;
  }
  return sum(terms);
}

double VariationProblem::first_variation_fd(const Samples& X, double h, bool richardson) const {
  auto central = [&](double s) { return (functional_along(X, s) - functional_along(X, -s)) / (2.0 * s); };
  return richardson ? (4.0 * central(0.5 * h) - central(h)) / 3.0 : central(h);
}

double VariationProblem::second_variation_fd(const Samples& X, double h, bool richardson) const {
  const double L0 = functional_along(X, 0.0);
  auto second = [&](double s) {
    return (functional_along(X, s) - 2.0 * L0 + functional_along(X, -s)) / (s * s);
  };
  return richardson ? (4.0 * second(0.5 * h) - second(h)) / 3.0 : second(h);
}

double VariationProblem::second_variation_formula(const Samples& X, bool critical) const {
  require_normal(X, "second_variation_formula");
  if (critical) require_critical();
  const auto& J = standard_complex_structure();
  const double beta = imm_.beta(), b1 = beta + 1.0;
  const auto& G = geometry();
  std::vector<double> terms(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const SurfaceGeometry& geo = G[i].geo;
    const FieldDerivs d = derivs(geo, X.x[i]);
    const double c = geo.cos_alpha;
    const double a1 = G[i].grad_cos[0], a2 = G[i].grad_cos[1];
    double grad_perp2 = 0.0;
    for (const Vec4& v : d.D) grad_perp2 += geo.normal_part(v).squaredNorm();
    const double x3 = d.x.dot(geo.e3), x4 = d.x.dot(geo.e4);
    double A2 = 0.0;
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) {
        const double v = x3 * geo.h[0](p, q) + x4 * geo.h[1](p, q);
        A2 += v * v;
      }
    const double xh = d.x.dot(geo.H);
    const double cb = std::pow(c, -beta);
    double integrand = b1 * grad_perp2 * cb - b1 * A2 * cb + b1 * b1 * xh * xh * cb;
    if (beta != 0.0)
      integrand += 2.0 * beta * b1 * xh * d.omega_sum * cb / c -
                   beta * b1 * (J.omega(d.x, d.D[1]) * a1 + J.omega(d.D[0], d.x) * a2) * cb / (c * c) +
                   beta * b1 * d.omega_sum * d.omega_sum * cb / (c * c);
    terms[i] = nodes_[i].weight * std::sqrt(geo.det_g) * integrand;
  }
  return sum(terms);
}

double VariationProblem::bilinear_form(const Samples& X, const Samples& Y) const {
  const auto& J = standard_complex_structure();
  const double beta = imm_.beta(), b1 = beta + 1.0;
  const auto& G = geometry();
  std::vector<double> terms(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const SurfaceGeometry& geo = G[i].geo;
    const FieldDerivs dx = derivs(geo, X.x[i]);
    const FieldDerivs dy = derivs(geo, Y.x[i]);
    const std::array<Vec4, 2> u{geo.u1, geo.u2};
    const double c = geo.cos_alpha;
    double perp = 0.0, cross = 0.0;
    for (int p = 0; p < 2; ++p) {
      perp += geo.normal_part(dx.D[p]).dot(geo.normal_part(dy.D[p]));
      for (int q = 0; q < 2; ++q) cross += u[p].dot(dx.D[q]) * u[q].dot(dy.D[p]);
    }
    const double cb = std::pow(c, -beta);
    double integrand = b1 * perp * cb + b1 * b1 * dx.div * dy.div * cb - b1 * cross * cb;
    if (beta != 0.0)
      integrand += -beta * b1 * (dx.div * dy.omega_sum + dy.div * dx.omega_sum) * cb / c -
                   beta * (J.omega(dx.D[0], dy.D[1]) + J.omega(dy.D[0], dx.D[1])) * cb / c +
                   beta * b1 * dx.omega_sum * dy.omega_sum * cb / (c * c);
    terms[i] = nodes_[i].weight * std::sqrt(geo.det_g) * integrand;
  }
  return sum(terms);
}

double VariationProblem::second_variation_pair(const Samples& X, bool critical) const {
  require_normal(X, "second_variation_pair");
  if (critical) require_critical();
  const double beta = imm_.beta(), b1 = beta + 1.0;
  const auto& G = geometry();
  std::vector<double> terms(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const SurfaceGeometry& geo = G[i].geo;
    const double c = geo.cos_alpha;
    const double s2 = std::max(0.0, 1.0 - c * c);
    const double grad2 = G[i].grad_cos.squaredNorm();
    // The anti-holomorphic norm is invariant under oriented frame changes, so
    // at a complex point with vanishing angle gradient the seed frame serves.
    SurfaceGeometry frame = geo;
    double alpha2 = 0.0;
    if (std::sqrt(s2) > tol_.complex_sin) {
      frame = adapted_frame(geo, tol_);
      alpha2 = grad2 / s2;
    } else if (grad2 > 1e-24) {
      throw ComplexPoint("complex point with nonzero angle gradient at (" +
                         std::to_string(geo.point.x()) + ", " + std::to_string(geo.point.y()) + ")");
    }
    const FieldDerivs d = derivs(frame, X.x[i]);
    const double x31 = d.D[0].dot(frame.e3), x32 = d.D[1].dot(frame.e3);
    const double x41 = d.D[0].dot(frame.e4), x42 = d.D[1].dot(frame.e4);
    const double dbar2 = (x32 + x41) * (x32 + x41) + (x42 - x31) * (x42 - x31);
    // (2 cos^2 + beta sin^2) / cos^2 and (cos^2 + beta sin^2) / cos^2, kept
    // finite at Lagrangian points when beta = 0.
    const double t = beta != 0.0 ? beta * s2 / (c * c) : 0.0;
    const double k2 = 2.0 + t, k1 = 1.0 + t;
    const double cb = std::pow(c, -beta);
    const double integrand = b1 * dbar2 * k2 * cb - b1 * k2 * k1 * cb * d.x.squaredNorm() * alpha2;
    terms[i] = nodes_[i].weight * std::sqrt(geo.det_g) * integrand;
  }
  return sum(terms);
}

// --- free functions ---------------------------------------------------------

double functional(const Immersion& imm, const QuadratureSpec& quad, const Tolerances& tol) {
  return VariationProblem(imm, imm.domain(), quad, tol).functional();
}

namespace {
VariationProblem problem_for(const Immersion& imm, const VariationField& X, const QuadratureSpec& quad,
                             const Tolerances& tol) {
  validate_support(imm, X);
  return VariationProblem(imm, X.support, quad, tol);
}
}  // namespace

double first_variation_formula(const Immersion& imm, const VariationField& X, const QuadratureSpec& quad,
                               const Tolerances& tol) {
  auto P = problem_for(imm, X, quad, tol);
  return P.first_variation_formula(P.sample(X));
}

double first_variation_prestokes(const Immersion& imm, const VariationField& X,
                                 const QuadratureSpec& quad, const Tolerances& tol) {
  auto P = problem_for(imm, X, quad, tol);
  return P.first_variation_prestokes(P.sample(X));
}

double first_variation_fd(const Immersion& imm, const VariationField& X, double h, bool richardson,
                          const QuadratureSpec& quad, const Tolerances& tol) {
  if (!(h > 0.0)) throw InvalidArgument("step must be positive");
  auto P = problem_for(imm, X, quad, tol);
  return P.first_variation_fd(P.sample(X), h, richardson);
}

double second_variation_formula(const Immersion& imm, const VariationField& X,
                                const QuadratureSpec& quad, const Tolerances& tol) {
  auto P = problem_for(imm, X, quad, tol);
  return P.second_variation_formula(P.sample(X));
}

double second_variation_pair(const Immersion& imm, const VariationField& X, const QuadratureSpec& quad,
                             const Tolerances& tol) {
  auto P = problem_for(imm, X, quad, tol);
  return P.second_variation_pair(P.sample(X));
}

double second_variation_fd(const Immersion& imm, const VariationField& X, double h, bool richardson,
                           const QuadratureSpec& quad, const Tolerances& tol) {
  if (!(h > 0.0)) throw InvalidArgument("step must be positive");
  auto P = problem_for(imm, X, quad, tol);
  return P.second_variation_fd(P.sample(X), h, richardson);
}

double bilinear_form(const Immersion& imm, const VariationField& X, const VariationField& Y,
                     const QuadratureSpec& quad, const Tolerances& tol) {
  auto P = problem_for(imm, X, quad, tol);
  validate_support(imm, Y);
  return P.bilinear_form(P.sample(X), P.sample(Y));
}

VariationReport variation_report(const Immersion& imm, const VariationField& X,
                                 const QuadratureSpec& quad, double h1, double h2,
                                 const Tolerances& tol) {
  auto P = problem_for(imm, X, quad, tol);
  const auto sx = P.sample(X);
  VariationReport rep;
  rep.L_value = P.functional();
  rep.dL_prestokes = P.first_variation_prestokes(sx);
  rep.dL_formula = X.normal ? P.first_variation_formula(sx) : rep.dL_prestokes;
  rep.dL_fd = P.first_variation_fd(sx, h1);
  rep.d2L_fd = P.second_variation_fd(sx, h2);
  rep.criticality = P.criticality_residual();
  rep.field_norm = P.field_norm(sx);
  if (X.normal && rep.criticality < tol.criticality_gate) {
    const auto sy = P.sample(rotated_field(imm, X));
    rep.d2L_formula = P.second_variation_formula(sx);
    rep.d2L_rotated = P.second_variation_formula(sy);
    rep.d2L_pair = P.second_variation_pair(sx);
  }
  return rep;
}

QuadratureConvergence quadrature_convergence(const Immersion& imm, const QuadratureSpec& quad,
                                             const Tolerances& tol) {
  QuadratureConvergence out;
  QuadratureSpec q = quad;
  for (auto& v : out.values) {
    v = functional(imm, q, tol);
    q = q.refined();
  }
  const double d1 = std::abs(out.values[0] - out.values[1]);
  const double d2 = std::abs(out.values[1] - out.values[2]);
  out.ratio = d2 > 0.0 ? d1 / d2 : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace betalab
