#pragma once

#include <map>
#include <string>

namespace betalab {

/// Numerical thresholds used across the library. Defaults are the documented
/// values; the CLI can override any entry by name.
struct Tolerances {
  // geometry
  double degenerate_det = 1e-14;
  double lagrangian_cos = 1e-12;
  double complex_sin = 1e-10;
  double seed_projection = 1e-6;
  double fd_step = 1e-5;
  double el_two_route_rel = 1e-9;
  double v_identity = 1e-7;

  // rotational family
  double first_integral_rel = 1e-10;
  double el_closure = 1e-8;
  double closed_form_log = 1e-10;
  double closed_form_catenoid = 1e-8;
  double far_threshold = 0.01;
  double near_rel = 1e-3;
  double pde_residual = 1e-5;
  double pde_order_ratio = 3.5;
  double root_rel = 1e-13;

  // variations
  double first_variation_abs = 1e-6;
  double first_variation_rel = 1e-4;
  double second_variation_rel = 1e-3;
  double pair_rel = 1e-6;
  double criticality_gate = 1e-7;
  double bilinear_symmetry = 1e-8;

  // symbol
  double symbol_rel = 1e-12;
  double det_floor = -1e-12;
  double det_violation = -1e-9;

  /// Sets the entry `name`; returns false when no such entry exists.
  bool set(const std::string& name, double value);
  /// All entries by name, in a stable order.
  std::map<std::string, double> entries() const;
};

const Tolerances& default_tolerances();

}  // namespace betalab
