#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "betalab/geometry.hpp"

namespace betalab {

/// Smooth vector field along an immersion, compactly supported in `support`.
/// The evaluator returns value and first partials; second partials are
/// filled in by finite differences only when requested.
struct VariationField {
  std::function<Jet(const Vec2&)> eval;
  Domain support;
  bool normal = false;
  std::string label;

  Jet operator()(const Vec2& p) const;
  /// Value, first partials and central-difference second partials.
  Jet with_second(const Vec2& p, double h = 1e-5) const;
};

/// Weight supported on a rectangle: the C^2 bump (1-s^2)^3 in x1 and, in x2,
/// either the same bump or (periodic support) a0 + a1 cos x2 + b1 sin x2.
struct BumpWeight {
  Domain support;
  double a0 = 1.0, a1 = 0.0, b1 = 0.0;

  /// {w, dw/dx1, dw/dx2}
  std::array<double, 3> operator()(const Vec2& p) const;
};

VariationField zero_field(const Domain& support);
/// X = w P_N V, or w P_N V / |P_N V| when `unit`.
VariationField normal_bump_field(const Immersion& imm, const BumpWeight& w, const Vec4& V,
                                 bool unit = false);
/// X = w (a F_1 + b F_2): purely tangential.
VariationField tangent_bump_field(const Immersion& imm, const BumpWeight& w, double a, double b);
/// Normal field rotated by a right angle inside the normal plane:
/// x3 e3 + x4 e4  ->  x4 e3 - x3 e4 (oriented frames).
VariationField rotated_field(const Immersion& imm, const VariationField& X);
VariationField field_sum(const VariationField& X, const VariationField& Y);
VariationField field_scale(const VariationField& X, double s);

/// Seeded normal bump field with random direction and angular modes.
VariationField random_normal_field(const Immersion& imm, const Domain& support, std::uint64_t seed);

/// F + t X as an immersion (second partials of X by finite differences).
Immersion perturb(const Immersion& imm, const VariationField& X, double t);

/// Composite Simpson in x1 (n1 odd) times composite midpoint in x2 when the
/// x2 direction is periodic, Simpson otherwise.
struct QuadratureSpec {
  int n1 = 257;
  int n2 = 64;

  QuadratureSpec refined() const { return {2 * (n1 - 1) + 1, 2 * n2}; }
};

struct VariationReport {
  double L_value = 0.0;
  double dL_formula = 0.0, dL_prestokes = 0.0, dL_fd = 0.0;
  std::optional<double> d2L_formula, d2L_rotated, d2L_pair;
  double d2L_fd = 0.0;
  double criticality = 0.0;  // max |P| on the quadrature nodes
  double field_norm = 0.0;   // max over nodes of |X|, |D_{u_i} X|

  double first_formula_vs_prestokes() const { return std::abs(dL_formula - dL_prestokes); }
  double first_formula_vs_fd() const { return std::abs(dL_formula - dL_fd); }
  double first_prestokes_vs_fd() const { return std::abs(dL_prestokes - dL_fd); }
  /// |formula - fd| / |fd|; empty when the formula was not evaluated.
  std::optional<double> second_formula_vs_fd() const;
  /// |pair - (II(X) + II(rotated X))| / |pair|.
  std::optional<double> pair_vs_sum() const;
};

/// Precomputed geometry on the quadrature nodes of a region, shared by all
/// fields evaluated on that region.
class VariationProblem {
 public:
  VariationProblem(Immersion imm, const Domain& region, QuadratureSpec quad = {},
                   Tolerances tol = default_tolerances());

  struct Node {
    Vec2 point;
    double weight;  // quadrature weight in parameter space
    Jet jet;
  };
  struct Samples {
    std::vector<Jet> x;  // value + first partials at each node
    bool normal = false;
  };

  const Immersion& immersion() const { return imm_; }
  const Domain& region() const { return region_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  double beta() const { return imm_.beta(); }

  Samples sample(const VariationField& X) const;

  double functional() const;
  /// L(F + t X) over the region, same nodes.
  double functional_along(const Samples& X, double t) const;
  /// d^2/dt ds L(F + t X + s Y) at 0 by finite differences.
  double mixed_fd(const Samples& X, const Samples& Y, double h) const;

  double first_variation_formula(const Samples& X) const;
  double first_variation_prestokes(const Samples& X) const;
  double first_variation_fd(const Samples& X, double h, bool richardson = true) const;

  double second_variation_formula(const Samples& X, bool require_critical = true) const;
  double second_variation_pair(const Samples& X, bool require_critical = true) const;
  double second_variation_fd(const Samples& X, double h, bool richardson = true) const;
  double bilinear_form(const Samples& X, const Samples& Y) const;

  /// max |P| over the nodes (operator form).
  double criticality_residual() const;
  /// max over nodes of |X| and |D_{u_i} X|.
  double field_norm(const Samples& X) const;

 private:
  struct Geometry {
    SurfaceGeometry geo;
    Vec2 grad_cos;  // (D_{u1} cos, D_{u2} cos)
  };
  const std::vector<Geometry>& geometry() const;
  void require_normal(const Samples& X, const char* what) const;
  void require_critical() const;
  double sum(const std::vector<double>& values) const;

  Immersion imm_;
  Domain region_;
  QuadratureSpec quad_;
  Tolerances tol_;
  std::vector<Node> nodes_;
  mutable std::vector<Geometry> geometry_;
  mutable std::optional<double> criticality_;
};

/// Region integrated for a field: its support. The immersion's own domain for L.
double functional(const Immersion& imm, const QuadratureSpec& quad = {},
                  const Tolerances& tol = default_tolerances());
double first_variation_formula(const Immersion& imm, const VariationField& X,
                               const QuadratureSpec& quad = {},
                               const Tolerances& tol = default_tolerances());
double first_variation_prestokes(const Immersion& imm, const VariationField& X,
                                 const QuadratureSpec& quad = {},
                                 const Tolerances& tol = default_tolerances());
double first_variation_fd(const Immersion& imm, const VariationField& X, double h = 1e-4,
                          bool richardson = true, const QuadratureSpec& quad = {},
                          const Tolerances& tol = default_tolerances());
double second_variation_formula(const Immersion& imm, const VariationField& X,
                                const QuadratureSpec& quad = {},
                                const Tolerances& tol = default_tolerances());
double second_variation_pair(const Immersion& imm, const VariationField& X,
                             const QuadratureSpec& quad = {},
                             const Tolerances& tol = default_tolerances());
double second_variation_fd(const Immersion& imm, const VariationField& X, double h = 1e-3,
                           bool richardson = true, const QuadratureSpec& quad = {},
                           const Tolerances& tol = default_tolerances());
/// Mixed second variation B(X, Y) with no ambient curvature and Z = 0.
double bilinear_form(const Immersion& imm, const VariationField& X, const VariationField& Y,
                     const QuadratureSpec& quad = {},
                     const Tolerances& tol = default_tolerances());

/// Functional value, all three first-variation routes and, when the surface
/// passes the criticality gate and X is normal, the second-variation routes.
VariationReport variation_report(const Immersion& imm, const VariationField& X,
                                 const QuadratureSpec& quad = {}, double h1 = 1e-4,
                                 double h2 = 1e-3, const Tolerances& tol = default_tolerances());

struct QuadratureConvergence {
  std::array<double, 3> values{};  // n, 2n, 4n
  double ratio = 0.0;              // |L_n - L_2n| / |L_2n - L_4n|
};
QuadratureConvergence quadrature_convergence(const Immersion& imm, const QuadratureSpec& quad = {},
                                             const Tolerances& tol = default_tolerances());

}  // namespace betalab
