#pragma once

#include <array>
#include <functional>
#include <utility>

#include <Eigen/Dense>

namespace betalab {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

/// Value of a map R^2 -> R^4 together with its partial derivatives up to
/// second order. Mixed partials are stored once, so symmetry holds exactly.
struct Jet {
  Vec4 value = Vec4::Zero();
  std::array<Vec4, 2> d1{Vec4::Zero(), Vec4::Zero()};
  /// d2[0] = d^2/dx1^2, d2[1] = d^2/dx1dx2, d2[2] = d^2/dx2^2
  std::array<Vec4, 3> d2{Vec4::Zero(), Vec4::Zero(), Vec4::Zero()};

  const Vec4& second(int i, int j) const { return d2[static_cast<std::size_t>(i + j)]; }

  Jet& operator+=(const Jet& o) {
    value += o.value;
    for (std::size_t k = 0; k < 2; ++k) d1[k] += o.d1[k];
    for (std::size_t k = 0; k < 3; ++k) d2[k] += o.d2[k];
    return *this;
  }
  Jet& operator*=(double s) {
    value *= s;
    for (auto& v : d1) v *= s;
    for (auto& v : d2) v *= s;
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
};

/// Parameter rectangle [a1,b1] x [a2,b2]. When `periodic2` is set the second
/// parameter is an angle and the x2 edges are identified.
struct Domain {
  double a1 = 0.0, b1 = 1.0, a2 = 0.0, b2 = 1.0;
  bool periodic2 = false;

  bool contains(const Vec2& p) const {
    return p.x() >= a1 && p.x() <= b1 && p.y() >= a2 && p.y() <= b2;
  }
  bool strictly_inside(const Domain& outer) const {
    bool inside1 = a1 > outer.a1 && b1 < outer.b1;
    bool inside2 = periodic2 ? (a2 == outer.a2 && b2 == outer.b2)
                             : (a2 > outer.a2 && b2 < outer.b2);
    return inside1 && inside2;
  }
};

/// Parametric surface in C^2 = R^4 paired with the exponent beta of the
/// functional it is tested against.
class Immersion {
 public:
  using Evaluator = std::function<Jet(const Vec2&)>;

  Immersion(Evaluator eval, Domain domain, double beta)
      : eval_(std::move(eval)), domain_(domain), beta_(beta) {}

  Jet operator()(const Vec2& p) const { return eval_(p); }
  Jet operator()(double x1, double x2) const { return eval_(Vec2(x1, x2)); }

  const Domain& domain() const { return domain_; }
  double beta() const { return beta_; }

  Immersion with_beta(double beta) const { return Immersion(eval_, domain_, beta); }
  Immersion with_domain(const Domain& d) const { return Immersion(eval_, d, beta_); }

 private:
  Evaluator eval_;
  Domain domain_;
  double beta_;
};

}  // namespace betalab
