#include "betalab/surfaces.hpp"

#include <cmath>
#include <numbers>

namespace betalab {

Immersion linear_immersion(const Mat42& M, const Domain& domain, double beta, const Vec4& offset) {
  return Immersion(
      [M, offset](const Vec2& p) {
        Jet j;
        j.value = offset + M * p;
        j.d1 = {M.col(0), M.col(1)};
        return j;
      },
      domain, beta);
}

Immersion plane(const Domain& domain, double beta) {
  Mat42 M = Mat42::Zero();
  M(0, 0) = 1.0;
  M(1, 1) = 1.0;
  return linear_immersion(M, domain, beta);
}

Immersion rotational_surface(RadialFunction f, RadialFunction g, const Domain& domain, double beta) {
  return Immersion(
      [f = std::move(f), g = std::move(g)](const Vec2& p) {
        const double r = p.x(), c = std::cos(p.y()), s = std::sin(p.y());
        const auto fv = f(r);
        const auto gv = g(r);
        Jet j;
        j.value = Vec4(r * c, r * s, fv[0], gv[0]);
        j.d1[0] = Vec4(c, s, fv[1], gv[1]);
        j.d1[1] = Vec4(-r * s, r * c, 0.0, 0.0);
        j.d2[0] = Vec4(0.0, 0.0, fv[2], gv[2]);
        j.d2[1] = Vec4(-s, c, 0.0, 0.0);
        j.d2[2] = Vec4(-r * c, -r * s, 0.0, 0.0);
        return j;
      },
      domain, beta);
}

Immersion full_catenoid(const Domain& domain, double beta) {
  return Immersion(
      [](const Vec2& p) {
        constexpr double k = std::numbers::sqrt2 / 2.0;  // 1/sqrt2
        const double u = k * p.x();
        const double rho = std::numbers::sqrt2 * std::cosh(u);
        const double drho = std::sinh(u);
        const double ddrho = k * std::cosh(u);
        const double c = std::cos(p.y()), s = std::sin(p.y());
        Jet j;
        j.value = Vec4(rho * c, rho * s, u, u);
        j.d1[0] = Vec4(drho * c, drho * s, k, k);
        j.d1[1] = Vec4(-rho * s, rho * c, 0.0, 0.0);
        j.d2[0] = Vec4(ddrho * c, ddrho * s, 0.0, 0.0);
        j.d2[1] = Vec4(-drho * s, drho * c, 0.0, 0.0);
        j.d2[2] = Vec4(-rho * c, -rho * s, 0.0, 0.0);
        return j;
      },
      domain, beta);
}

Immersion affine_reparametrization(const Immersion& imm, const Vec2& x0, const Mat2& M,
                                   const Domain& domain) {
  return Immersion(
      [imm, x0, M](const Vec2& q) {
        const Jet src = imm(x0 + M * q);
        Jet j;
        j.value = src.value;
        for (int a = 0; a < 2; ++a) j.d1[a] = M(0, a) * src.d1[0] + M(1, a) * src.d1[1];
        for (int a = 0; a < 2; ++a) {
          for (int b = a; b < 2; ++b) {
            Vec4 v = Vec4::Zero();
            for (int k = 0; k < 2; ++k)
              for (int l = 0; l < 2; ++l) v += M(k, a) * M(l, b) * src.second(k, l);
            j.d2[a + b] = v;
          }
        }
        return j;
      },
      domain, imm.beta());
}

}  // namespace betalab
