#pragma once

#include <array>
#include <functional>

#include <Eigen/Dense>

#include "betalab/types.hpp"

namespace betalab {

using Mat42 = Eigen::Matrix<double, 4, 2>;

/// Scalar radial function with derivatives: returns {u(r), u'(r), u''(r)}.
using RadialFunction = std::function<std::array<double, 3>(double)>;

/// F(x) = offset + M x.
Immersion linear_immersion(const Mat42& M, const Domain& domain, double beta,
                           const Vec4& offset = Vec4::Zero());

/// F = (x1, x2, 0, 0): a complex line.
Immersion plane(const Domain& domain, double beta);

/// F(r, theta) = (r cos theta, r sin theta, f(r), g(r)).
Immersion rotational_surface(RadialFunction f, RadialFunction g, const Domain& domain,
                             double beta);

/// Catenoid through its neck, parametrized by arclength-like s:
/// (sqrt2 cosh(s/sqrt2) cos t, sqrt2 cosh(s/sqrt2) sin t, s/sqrt2, s/sqrt2).
/// Its Kahler angle is Lagrangian on the neck s = 0.
Immersion full_catenoid(const Domain& domain, double beta);

/// G(y) = F(x0 + M y): the same surface in new affine coordinates.
Immersion affine_reparametrization(const Immersion& imm, const Vec2& x0, const Mat2& M,
                                   const Domain& domain);

}  // namespace betalab
