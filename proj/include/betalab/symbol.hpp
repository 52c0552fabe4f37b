#pragma once

#include <cstdint>

#include "betalab/geometry.hpp"

namespace betalab {

/// Coefficient matrix of the principal symbol of the linearized
/// Euler-Lagrange operator in a direction G, plus two determinant routes.
struct SymbolData {
  Mat2 O = Mat2::Zero();
  double det_direct = 0.0;    // O11 O22 - O12^2
  double det_factored = 0.0;  // cos^2 |G^perp|^2 [cos^2 |G^perp|^2 + beta (jg1^2 + jg2^2)]
  double g_perp_norm2 = 0.0;
  double jg1 = 0.0;  // <G^perp, J u1>
  double jg2 = 0.0;  // <G^perp, J u2>
  double cos_alpha = 1.0;
  double beta = 0.0;
};

/// <sigma(x, xi) G, G> assembled term by term from the unsimplified
/// expression (projections of G and of J u_i kept separate).
double symbol_quadratic(const SurfaceGeometry& geo, const Vec4& G, const Vec2& xi);
double symbol_quadratic(const SurfaceGeometry& geo, double beta, const Vec4& G, const Vec2& xi);

SymbolData symbol_matrix(const SurfaceGeometry& geo, const Vec4& G);
SymbolData symbol_matrix(const SurfaceGeometry& geo, double beta, const Vec4& G);

struct EllipticityReport {
  int samples = 0;
  double beta = 0.0;
  double cos_alpha = 1.0;
  double min_det = 0.0;             // over all samples
  double min_det_nondegenerate = 0.0;  // over samples with cos |G^perp| >= threshold
  double max_abs_det_degenerate = 0.0;  // over samples with cos |G^perp| < threshold
  int degenerate_samples = 0;
  double max_factorization_error = 0.0;  // relative to max(|det|, |O11 O22|, O12^2)
  bool passed = false;
};

/// Samples unit G (seeded) and checks det O >= floor, strict positivity off
/// the degenerate set, and the determinant factorization. Throws
/// EllipticityViolation on det O < det_violation.
EllipticityReport ellipticity_check(const SurfaceGeometry& geo, double beta, int samples,
                                    std::uint64_t seed = 42,
                                    const Tolerances& tol = default_tolerances());

}  // namespace betalab
