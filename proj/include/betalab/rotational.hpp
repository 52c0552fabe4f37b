#pragma once

#include <optional>
#include <string>
#include <vector>

#include "betalab/tolerances.hpp"
#include "betalab/types.hpp"

namespace betalab {

/// Slopes of a rotational critical profile at one radius.
struct Slope {
  double fp = 0.0;
  double gp = 0.0;
  double rho = 0.0;  // sqrt(fp^2 + gp^2)
};

/// Unique root of r rho (1+rho^2)^((beta-1)/2) = sqrt(c1^2+c2^2), split
/// along (c1, c2). Throws InvalidBeta for beta < 0 and NoSolution inside the
/// catenoid neck at beta = 0.
Slope solve_slope(double r, double beta, double c1, double c2,
                  const Tolerances& tol = default_tolerances());

/// d rho / d r along a solution branch (from differentiating the first integral).
double slope_derivative(double r, double beta, double rho);

/// r-grid used by solve_profile: geometric when r_max/eps > 100, else uniform.
std::vector<double> profile_grid(double eps, double r_max, int n);

struct ProfileInvariants {
  double max_first_integral_rel = 0.0;  // worst of the c1 and c2 relations
  double max_proportionality = 0.0;     // |c2 fp - c1 gp|
  double max_cos_error = 0.0;           // |cos_alpha - 1/sqrt A|
  bool cos_in_range = true;
  bool passed = false;
};

struct RotationalProfile {
  double beta = 0.0, c1 = 0.0, c2 = 0.0;
  double eps = 0.0, f0 = 0.0, g0 = 0.0;
  std::vector<double> r, fp, gp, f, g, cos_alpha;

  std::size_t size() const { return r.size(); }
  double A(std::size_t i) const { return 1.0 + fp[i] * fp[i] + gp[i] * gp[i]; }
  /// Relative first-integral residual at node i (max over both components).
  double first_integral_residual(std::size_t i) const;
  ProfileInvariants invariants(const Tolerances& tol = default_tolerances()) const;
};

/// Slopes at every node and f, g by cumulative Simpson integration anchored
/// at f(eps) = f0, g(eps) = g0.
RotationalProfile solve_profile(double beta, double c1, double c2, double eps, double r_max,
                                int n = 4097, double f0 = 0.0, double g0 = 0.0,
                                const Tolerances& tol = default_tolerances());

/// Surface (r cos t, r sin t, f(r), g(r)) over [eps, r_max] x [0, 2 pi].
/// Slopes and curvatures come from the slope solver; positions are cubic
/// Hermite interpolants of the sampled profile.
Immersion profile_immersion(const RotationalProfile& profile,
                            const Tolerances& tol = default_tolerances());

/// Two-term expansions of f' for c1 = c2 = 1.
double asymptotic_far(double r, double beta);
double asymptotic_near(double r, double beta);
/// Coefficient of r^(1/beta) in the near expansion.
double near_coefficient(double beta);

/// Far remainder r^3 (f' - 1/r + (beta-1)/r^3) and near remainder
/// (f' - near truncation) / r^(1/beta), both evaluated without cancellation.
double far_remainder(double r, double beta);
double near_remainder(double r, double beta);

struct AsymptoticProbe {
  double r = 0.0;
  double fp = 0.0;         // exact slope
  double truncation = 0.0;
  double remainder = 0.0;  // E_far or E_near
  double rel_error = 0.0;  // |fp - truncation| / fp
};

struct AsymptoticReport {
  double beta = 0.0;
  bool far_applicable = false, near_applicable = false;
  std::vector<AsymptoticProbe> far, near;  // far: increasing r; near: decreasing r
  double far_threshold = 0.0, near_threshold = 0.0;
  double near_coefficient = 0.0;
  double fitted_near_coefficient = 0.0;  // (f' - leading term)/r^(1/beta) at smallest probe
  double profile_far_consistency = 0.0;  // |nodal fp - exact| at r_max, relative
  bool far_passed = true, near_passed = true;
  std::string message;
  bool passed() const { return far_passed && near_passed; }
};

/// Far probes r_max/4, r_max/2, r_max (needs r_max >= 1e3); near probes
/// 1e-2, 10^-2.5, 1e-3 (needs eps <= 1e-3, beta > 0). Throws
/// AsymptoticMismatch when `strict` and a check fails.
AsymptoticReport verify_asymptotics(const RotationalProfile& profile, bool strict = false,
                                    const Tolerances& tol = default_tolerances());

struct PdeResidual {
  int nodes = 0;
  double cos_identity = 0.0;      // max |Delta cos - rhs|
  double inv_cos_identity = 0.0;  // max |Delta (1/cos) - rhs|
};

struct PdeReport {
  PdeResidual base, refined;  // refined: 2n-1 nodes on the same interval
  double cos_ratio = 0.0, inv_cos_ratio = 0.0;
  double threshold = 0.0, ratio_threshold = 0.0;
  bool passed = false;
};

PdeResidual angle_pde_residual(const RotationalProfile& profile);
/// Residuals on the profile grid and on a grid with halved spacing.
PdeReport angle_pde_check(const RotationalProfile& profile,
                          const Tolerances& tol = default_tolerances());

struct LimitBoundsReport {
  struct Upper {
    double beta = 0.0, max_ratio = 0.0;  // max fp / ((beta-1) r)^(-1/3)
    double worst_r = 0.0;
    bool passed = true;
  };
  struct Catenoid {
    double beta = 0.0, sup_distance = 0.0, max_fp2 = 0.0, fp_at_r0 = 0.0;
  };
  double a = 0.0, b = 0.0, r0 = 1.0;
  double fp2_bound = 0.0;  // 3/(a^2 - 2)
  std::vector<Upper> upper;
  std::vector<Catenoid> catenoid;  // ordered by decreasing beta
  bool upper_passed = true, distance_decreasing = true, fp2_bounded = true,
       divergence_increasing = true;
  bool passed() const {
    return upper_passed && distance_decreasing && fp2_bounded && divergence_increasing;
  }
};

/// Bounds from the two limiting regimes. Entries with beta > 1 are checked
/// against ((beta-1) r)^(-1/3) on [upper_a, upper_b]; entries in [0, 1) are
/// compared with the catenoid on [a, b] (a > sqrt 2) and at r0 <= sqrt 2.
/// Throws BoundViolation when `strict` and a bound fails.
LimitBoundsReport limit_bounds_check(const std::vector<double>& betas, double a, double b,
                                     double upper_a = 0.5, double upper_b = 50.0,
                                     int n = 4097, double r0 = 1.0, bool strict = false,
                                     const Tolerances& tol = default_tolerances());

struct SweepResult {
  std::vector<RotationalProfile> profiles;
  std::vector<double> continuity;  // sup |fp_{k+1} - fp_k| per step
  double max_continuity = 0.0;
};

SweepResult beta_sweep(const std::vector<double>& betas, double c1, double c2, double eps,
                       double r_max, int n = 4097, double f0 = 0.0, double g0 = 0.0,
                       const Tolerances& tol = default_tolerances());

}  // namespace betalab
