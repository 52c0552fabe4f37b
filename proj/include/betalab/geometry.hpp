#pragma once

#include <array>
#include <span>
#include <vector>

#include "betalab/complex_structure.hpp"
#include "betalab/tolerances.hpp"
#include "betalab/types.hpp"

namespace betalab {

/// Seed vectors for the normal frame. They are projected onto the normal
/// plane and orthonormalized; E1/E2 serve as fallbacks when a seed is nearly
/// tangent.
struct NormalSeed {
  Vec4 first{0.0, 0.0, 1.0, 0.0};
  Vec4 second{0.0, 0.0, 0.0, 1.0};

  /// Standard seeds rotated by `angle` inside span{E3, E4}.
  static NormalSeed rotated(double angle);
};

/// Pointwise geometry of an immersion at a parameter point.
struct SurfaceGeometry {
  Vec2 point = Vec2::Zero();
  double beta = 0.0;
  Vec4 position = Vec4::Zero();

  Vec4 e1 = Vec4::Zero(), e2 = Vec4::Zero();  // coordinate tangents dF/dx_i
  std::array<Vec4, 3> second_partials{};      // F_11, F_12, F_22
  Mat2 g = Mat2::Identity(), g_inv = Mat2::Identity();
  double det_g = 1.0;

  // Orthonormal tangent frame u_i = sum_k frame(i,k) e_k (Gram-Schmidt of e1, e2).
  Vec4 u1 = Vec4::Zero(), u2 = Vec4::Zero();
  Mat2 frame = Mat2::Identity();

  // Oriented orthonormal normal frame: det[u1,u2,e3,e4] > 0.
  Vec4 e3 = Vec4::Zero(), e4 = Vec4::Zero();
  // h[0](i,j) = <D_{u_i} D_{u_j} F, e3>, h[1] likewise with e4.
  std::array<Mat2, 2> h{Mat2::Zero(), Mat2::Zero()};
  Vec4 H = Vec4::Zero();

  double cos_alpha = 1.0;
  double y = 0.0, z = 0.0;  // <J u1, e3>, <J u1, e4>
  bool lagrangian = false;

  double sin_alpha() const;
  Vec4 tangent_part(const Vec4& v) const;
  Vec4 normal_part(const Vec4& v) const;
  /// Derivative along u_i of a quantity whose coordinate partials are d.
  template <class T>
  T along(const std::array<T, 2>& d, int i) const {
    return frame(i, 0) * d[0] + frame(i, 1) * d[1];
  }
  /// Matrix of <J e_A, e_B> in the frame (u1, u2, e3, e4).
  Mat4 frame_form() const;
};

SurfaceGeometry geometry_from_jet(const Jet& jet, const Vec2& p, double beta,
                                  const NormalSeed& seed = {},
                                  const Tolerances& tol = default_tolerances());
SurfaceGeometry evaluate_geometry(const Immersion& imm, const Vec2& p,
                                  const NormalSeed& seed = {},
                                  const Tolerances& tol = default_tolerances());

/// cos(alpha) = omega(F_1, F_2) / sqrt(det g).
double kahler_angle(const SurfaceGeometry& geo);
double kahler_cos(const Jet& jet);

/// H = g^{ij} (F_ij - g^{kl} <F_ij, F_l> F_k).
Vec4 mean_curvature(const Jet& jet);
Vec4 mean_curvature(const Immersion& imm, const Vec2& p);

enum class Stencil { Central, Richardson };

/// Coordinate partials of cos(alpha) by finite differences with step
/// max(fd_step, fd_step*|p|) per direction. Richardson combines h and h/2.
Vec2 cos_alpha_partials(const Immersion& imm, const Vec2& p,
                        const Tolerances& tol = default_tolerances(),
                        Stencil stencil = Stencil::Richardson);
/// Exact coordinate partials of cos(alpha) from the 2-jet of F.
Vec2 cos_alpha_partials_exact(const Jet& jet);

struct ElResidual {
  Vec4 operator_form = Vec4::Zero();  // cos^2 H - beta (J(a1 u2 - a2 u1))^perp
  Vec4 equation_form = Vec4::Zero();  // cos^3 H - beta (J (J grad cos)^T)^perp
  Vec2 grad_cos = Vec2::Zero();       // (D_{u1} cos, D_{u2} cos)
  double cos_alpha = 1.0;
  double scale = 0.0;  // max(|cos^3 H|, |beta (J (J grad cos)^T)^perp|)

  /// |equation_form - cos * operator_form| / scale.
  double two_route_error() const;
};

/// Both forms of the Euler-Lagrange operator. Throws LagrangianPoint when
/// cos(alpha) is below the symplectic threshold.
ElResidual el_residual(const SurfaceGeometry& geo, const Vec2& grad_cos,
                       const Tolerances& tol = default_tolerances());
ElResidual el_residual(const Immersion& imm, const Vec2& p,
                       const Tolerances& tol = default_tolerances(),
                       Stencil stencil = Stencil::Richardson);

/// Rotates (e3, e4) so that <J u1, e3> = sin(alpha) and <J u1, e4> = 0.
/// Throws ComplexPoint when sin(alpha) is too small.
SurfaceGeometry adapted_frame(const SurfaceGeometry& geo,
                              const Tolerances& tol = default_tolerances());

/// (D_{u1} alpha, D_{u2} alpha) from the gradient of cos(alpha).
Vec2 alpha_gradient(const SurfaceGeometry& geo, const Vec2& grad_cos,
                    const Tolerances& tol = default_tolerances());
/// The same gradient read off the second fundamental form in an adapted frame.
Vec2 alpha_gradient_from_h(const SurfaceGeometry& adapted);

/// V = D_{u2}alpha e3 + D_{u1}alpha e4 in an adapted frame.
Vec4 v_field(const SurfaceGeometry& adapted, const Vec2& grad_alpha);

/// H - beta sin^2/cos^2 V at a point (adapted frame built internally).
Vec4 v_identity_residual(const Immersion& imm, const Vec2& p,
                         const Tolerances& tol = default_tolerances());

/// (1/(r sqrt A)) d/dr (r u' / sqrt A) at the interior nodes 1..n-2 of a
/// strictly increasing grid (flux form, second order).
std::vector<double> laplace_beltrami_radial(std::span<const double> r,
                                            std::span<const double> u,
                                            std::span<const double> A);

}  // namespace betalab
