#include "betalab/rotational.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "betalab/errors.hpp"
#include "betalab/geometry.hpp"
#include "betalab/surfaces.hpp"

namespace betalab {

namespace {

constexpr double kLn2 = std::numbers::ln2;

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// log(1 + e^{2u}) without overflow.
double log1p_exp2(double u) {
  return u > 0.0 ? 2.0 * u + std::log1p(std::exp(-2.0 * u)) : std::log1p(std::exp(2.0 * u));
}

// Root of a strictly increasing function: bracket growth from x0 in steps of
// `step` (doubling), geometric bisection down to `xtol`, then Newton polish
// kept inside the bracket.
double increasing_root(const std::function<double(double)>& f,
                       const std::function<double(double)>& df, double x0, double step,
                       double xtol) {
  double f0 = f(x0);
  if (f0 == 0.0) return x0;
  double lo = x0, hi = x0;
  double d = step;
  for (int it = 0;; ++it) {
    if (it > 2000) throw NumericalFailure("root bracket did not close");
    if (f0 < 0.0) {
      lo = hi;
      hi = x0 + d;
      if (f(hi) >= 0.0) break;
    } else {
      hi = lo;
      lo = x0 - d;
      if (f(lo) <= 0.0) break;
    }
    d *= 2.0;
  }
  for (int it = 0; it < 400 && hi - lo > xtol * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    (fm < 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double fx = f(x);
    const double dx = df(x);
    if (fx == 0.0 || !(dx > 0.0)) break;
    const double next = x - fx / dx;
    if (!(next >= lo && next <= hi)) break;
    x = next;
  }
  return x;
}

bool strictly_decreasing_abs(const std::vector<double>& v, double floor) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double a = std::abs(v[i - 1]), b = std::abs(v[i]);
    if (a <= floor && b <= floor) continue;
    if (!(b < a)) return false;
  }
  return true;
}

double hermite(double x, double x0, double x1, double y0, double y1, double d0, double d1) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

}  // namespace

Slope solve_slope(double r, double beta, double c1, double c2, const Tolerances& tol) {
  if (!(beta >= 0.0)) throw InvalidBeta("beta must be >= 0, got " + num(beta));
  if (!(r > 0.0)) throw InvalidArgument("r must be positive, got " + num(r));
  const double C = std::hypot(c1, c2);
  if (C == 0.0) return {};
  const double log_t = std::log(C) - std::log(r);
  if (beta == 0.0 && log_t >= 0.0)
    throw NoSolution("beta = 0 requires r > sqrt(c1^2 + c2^2) = " + num(C) + ", got r = " + num(r));

  const double k = 0.5 * (beta - 1.0);
  auto phi = [&](double u) { return u + k * log1p_exp2(u) - log_t; };
  auto dphi = [&](double u) {
    if (u > 0.0) {
      const double e = std::exp(-2.0 * u);
      return (e + beta) / (e + 1.0);
    }
    const double e = std::exp(2.0 * u);
    return (1.0 + beta * e) / (1.0 + e);
  };
  const double u = increasing_root(phi, dphi, 0.0, kLn2, tol.root_rel);
  const double rho = std::exp(u);
  return Slope{c1 * rho / C, c2 * rho / C, rho};
}

double slope_derivative(double r, double beta, double rho) {
  return -rho * (1.0 + rho * rho) / (r * (1.0 + beta * rho * rho));
}

std::vector<double> profile_grid(double eps, double r_max, int n) {
  if (!(eps > 0.0 && eps < r_max)) throw InvalidArgument("need 0 < eps < r_max");
  if (n < 9) throw GridTooCoarse("need at least 9 nodes, got " + std::to_string(n));
  std::vector<double> r(static_cast<std::size_t>(n));
  const bool geometric = r_max / eps > 100.0;
  const double m = n - 1;
  for (int i = 0; i < n; ++i) {
    const double t = i / m;
    r[static_cast<std::size_t>(i)] =
        geometric ? std::exp(std::log(eps) + t * (std::log(r_max) - std::log(eps)))
                  : eps + t * (r_max - eps);
  }
  r.front() = eps;
  r.back() = r_max;
  return r;
}

double RotationalProfile::first_integral_residual(std::size_t i) const {
  const double w = r[i] * std::exp(0.5 * (beta - 1.0) * std::log1p(fp[i] * fp[i] + gp[i] * gp[i]));
  auto rel = [](double got, double want) {
    return want != 0.0 ? std::abs(got - want) / std::abs(want) : std::abs(got);
  };
  return std::max(rel(w * fp[i], c1), rel(w * gp[i], c2));
}

ProfileInvariants RotationalProfile::invariants(const Tolerances& tol) const {
  ProfileInvariants inv;
  for (std::size_t i = 0; i < size(); ++i) {
    inv.max_first_integral_rel = std::max(inv.max_first_integral_rel, first_integral_residual(i));
    const double scale = std::max(1.0, std::hypot(c1, c2) * std::hypot(fp[i], gp[i]));
    inv.max_proportionality =
        std::max(inv.max_proportionality, std::abs(c2 * fp[i] - c1 * gp[i]) / scale);
    inv.max_cos_error = std::max(inv.max_cos_error, std::abs(cos_alpha[i] - 1.0 / std::sqrt(A(i))));
    inv.cos_in_range = inv.cos_in_range && cos_alpha[i] > 0.0 && cos_alpha[i] <= 1.0;
  }
  inv.passed = inv.max_first_integral_rel <= tol.first_integral_rel &&
               inv.max_proportionality <= 1e-12 && inv.max_cos_error <= 1e-12 && inv.cos_in_range;
  return inv;
}

RotationalProfile solve_profile(double beta, double c1, double c2, double eps, double r_max, int n,
                                double f0, double g0, const Tolerances& tol) {
  if (!(beta >= 0.0)) throw InvalidBeta("beta must be >= 0, got " + num(beta));
  RotationalProfile p;
  p.beta = beta;
  p.c1 = c1;
  p.c2 = c2;
  p.eps = eps;
  p.f0 = f0;
  p.g0 = g0;
  p.r = profile_grid(eps, r_max, n);
  const std::size_t m = p.r.size();
  p.fp.resize(m);
  p.gp.resize(m);
  p.f.resize(m);
  p.g.resize(m);
  p.cos_alpha.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Slope s = solve_slope(p.r[i], beta, c1, c2, tol);
    p.fp[i] = s.fp;
    p.gp[i] = s.gp;
    p.cos_alpha[i] = 1.0 / std::sqrt(p.A(i));
  }
  p.f[0] = f0;
  p.g[0] = g0;
  // Simpson in s = log r on every interval, so r f'(r) is the integrand: it is
  // constant for beta = 1 and stays tame near small eps on uniform grids too.
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double a = p.r[i], b = p.r[i + 1];
    const double mid = std::sqrt(a * b);
    const Slope s = solve_slope(mid, beta, c1, c2, tol);
    const double w = std::log(b / a) / 6.0;
    p.f[i + 1] = p.f[i] + w * (p.fp[i] * a + 4.0 * s.fp * mid + p.fp[i + 1] * b);
    p.g[i + 1] = p.g[i] + w * (p.gp[i] * a + 4.0 * s.gp * mid + p.gp[i + 1] * b);
  }
  return p;
}

Immersion profile_immersion(const RotationalProfile& profile, const Tolerances& tol) {
  const double beta = profile.beta, c1 = profile.c1, c2 = profile.c2;
  const double C = std::hypot(c1, c2);
  auto position = [](const std::vector<double>& r, const std::vector<double>& u,
                     const std::vector<double>& du, double x) {
    if (x <= r.front()) return u.front() + du.front() * (x - r.front());
    if (x >= r.back()) return u.back() + du.back() * (x - r.back());
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - r.begin()) - 1;
    return hermite(x, r[k], r[k + 1], u[k], u[k + 1], du[k], du[k + 1]);
  };
  auto shared = std::make_shared<const RotationalProfile>(profile);
  auto eval = [shared, beta, c1, c2, C, tol, position](const Vec2& p) {
    const RotationalProfile& profile = *shared;
    const double r = p.x(), c = std::cos(p.y()), s = std::sin(p.y());
    const Slope sl = solve_slope(r, beta, c1, c2, tol);
    const double drho = C > 0.0 ? slope_derivative(r, beta, sl.rho) / C : 0.0;
    const double f = position(profile.r, profile.f, profile.fp, r);
    const double g = position(profile.r, profile.g, profile.gp, r);
    Jet j;
    j.value = Vec4(r * c, r * s, f, g);
    j.d1[0] = Vec4(c, s, sl.fp, sl.gp);
    j.d1[1] = Vec4(-r * s, r * c, 0.0, 0.0);
    j.d2[0] = Vec4(0.0, 0.0, c1 * drho, c2 * drho);
    j.d2[1] = Vec4(-s, c, 0.0, 0.0);
    j.d2[2] = Vec4(-r * c, -r * s, 0.0, 0.0);
    return j;
  };
  Domain d{profile.r.front(), profile.r.back(), 0.0, 2.0 * std::numbers::pi, true};
  return Immersion(eval, d, beta);
}

double asymptotic_far(double r, double beta) { return 1.0 / r - (beta - 1.0) / (r * r * r); }

double near_coefficient(double beta) {
  if (!(beta > 0.0)) throw InvalidBeta("near expansion needs beta > 0, got " + num(beta));
  return -((beta - 1.0) / beta) * std::pow(2.0, -(3.0 * beta + 1.0) / (2.0 * beta));
}

double asymptotic_near(double r, double beta) {
  if (!(beta > 0.0)) throw InvalidBeta("near expansion needs beta > 0, got " + num(beta));
  return std::pow(2.0, (1.0 - beta) / (2.0 * beta)) * std::pow(r, -1.0 / beta) +
         near_coefficient(beta) * std::pow(r, 1.0 / beta);
}

namespace {

// f' = (1 + psi)/r with t = log(1 + psi) solving
// t + ((beta-1)/2) log(1 + 2 e^{2t}/r^2) = 0.
double far_log_factor(double r, double beta) {
  const double k = 0.5 * (beta - 1.0);
  const double lr2 = std::log(2.0) - 2.0 * std::log(r);
  auto f = [&](double t) { return t + k * std::log1p(std::exp(2.0 * t + lr2)); };
  auto df = [&](double t) {
    const double x = std::exp(2.0 * t + lr2);
    return (1.0 + beta * x) / (1.0 + x);
  };
  const double t0 = -(beta - 1.0) / (r * r);
  return increasing_root(f, df, t0, std::max(std::abs(t0), 1e-300), 1e-17);
}

// f' = L (1 + delta) with L the leading near term and t = log(1 + delta)
// solving beta t + ((beta-1)/2) log(1 + e^{-2t}/(2 L^2)) = 0.
double near_log_factor(double r, double beta, double L) {
  const double k = 0.5 * (beta - 1.0);
  const double l = -std::log(2.0) - 2.0 * std::log(L);
  auto f = [&](double t) { return beta * t + k * std::log1p(std::exp(-2.0 * t + l)); };
  auto df = [&](double t) {
    const double y = std::exp(-2.0 * t + l);
    return (beta + y) / (1.0 + y);
  };
  const double t0 = -(beta - 1.0) / (4.0 * beta * L * L);
  (void)r;
  return increasing_root(f, df, t0, std::max(std::abs(t0), 1e-300), 1e-17);
}

double near_leading(double r, double beta) {
  return std::pow(2.0, (1.0 - beta) / (2.0 * beta)) * std::pow(r, -1.0 / beta);
}

// e^t - 1 - t and log(1 + x) - x without cancellation for small arguments.
double expm1_minus_x(double t) {
  if (std::abs(t) > 1e-2) return std::expm1(t) - t;
  double term = 0.5 * t * t, sum = 0.0;
  for (int n = 3; term != 0.0 && std::abs(term) > 1e-20 * std::abs(sum); ++n) {
    sum += term;
    term *= t / n;
  }
  return sum;
}

double log1p_minus_x(double x) {
  if (std::abs(x) > 1e-2) return std::log1p(x) - x;
  double pw = x * x, sum = 0.0;
  for (int n = 2; n < 40; ++n, pw *= x) {
    const double term = (n % 2 == 0 ? -pw : pw) / n;
    sum += term;
    if (std::abs(term) <= 1e-20 * std::abs(sum)) break;
  }
  return sum;
}

// The remainders subtract the first correction analytically: with t1 the
// leading-order t, e^t - 1 - t1 = (e^t - 1 - t) + (t - t1), and t - t1 is
// expanded through log1p(y) - y and y - y0 so no digits cancel.
AsymptoticProbe far_probe(double r, double beta) {
  const double k = 0.5 * (beta - 1.0);
  const double t = far_log_factor(r, beta);
  const double x0 = 2.0 / (r * r);
  const double x = x0 * std::exp(2.0 * t);
  const double t_minus_t1 = -k * (log1p_minus_x(x) + x0 * std::expm1(2.0 * t));
  const double psi = std::expm1(t);
  AsymptoticProbe p;
  p.r = r;
  p.fp = (1.0 + psi) / r;
  p.truncation = asymptotic_far(r, beta);
  p.remainder = r * r * (expm1_minus_x(t) + t_minus_t1);
  p.rel_error = std::abs(p.remainder / (r * r)) / (1.0 + psi);
  return p;
}

AsymptoticProbe near_probe(double r, double beta, double* fitted) {
  if (!(beta > 0.0)) throw InvalidBeta("near expansion needs beta > 0, got " + num(beta));
  const double k = 0.5 * (beta - 1.0);
  const double L = near_leading(r, beta);
  const double t = near_log_factor(r, beta, L);
  const double y0 = 1.0 / (2.0 * L * L);
  const double y = y0 * std::exp(-2.0 * t);
  const double t_minus_t1 = -(k / beta) * (log1p_minus_x(y) + y0 * std::expm1(-2.0 * t));
  const double delta = std::expm1(t);
  const double r1b = std::pow(r, 1.0 / beta);
  AsymptoticProbe p;
  p.r = r;
  p.fp = L * (1.0 + delta);
  p.truncation = asymptotic_near(r, beta);
  const double diff = L * (expm1_minus_x(t) + t_minus_t1);  // f' - truncation
  p.remainder = diff / r1b;
  p.rel_error = std::abs(diff) / p.fp;
  if (fitted) *fitted = L * delta / r1b;
  return p;
}

}  // namespace

double far_remainder(double r, double beta) { return far_probe(r, beta).remainder; }

double near_remainder(double r, double beta) { return near_probe(r, beta, nullptr).remainder; }

AsymptoticReport verify_asymptotics(const RotationalProfile& profile, bool strict,
                                    const Tolerances& tol) {
  AsymptoticReport rep;
  rep.beta = profile.beta;
  rep.far_threshold = tol.far_threshold;
  rep.near_threshold = tol.near_rel;
  if (profile.c1 != 1.0 || profile.c2 != 1.0) {
    rep.message = "expansions are normalized to c1 = c2 = 1";
    rep.far_passed = rep.near_passed = false;
    if (strict) throw AsymptoticMismatch(rep.message);
    return rep;
  }
  constexpr double kExact = 1e-14;
  std::ostringstream msg;
  const double r_max = profile.r.back();
  rep.far_applicable = r_max >= 1e3;
  if (rep.far_applicable) {
    std::vector<double> e;
    for (double r : {r_max / 4.0, r_max / 2.0, r_max}) {
      rep.far.push_back(far_probe(r, profile.beta));
      e.push_back(rep.far.back().remainder);
    }
    const double exact_fp = rep.far.back().fp;
    rep.profile_far_consistency = std::abs(profile.fp.back() - exact_fp) / exact_fp;
    const bool decreasing = strictly_decreasing_abs(e, kExact);
    const bool small = profile.beta > 5.0 || std::abs(e.back()) < tol.far_threshold;
    rep.far_passed = decreasing && small && rep.profile_far_consistency <= 1e-12;
    if (!decreasing) msg << "far remainder not decreasing; ";
    if (!small) msg << "far remainder " << num(e.back()) << " >= " << num(tol.far_threshold) << "; ";
  }
  rep.near_applicable = profile.beta > 0.0 && profile.r.front() <= 1e-3 * (1.0 + 1e-12);
  if (rep.near_applicable) {
    std::vector<double> e;
    const double coef = near_coefficient(profile.beta);
    rep.near_coefficient = coef;
    for (double r : {1e-2, std::pow(10.0, -2.5), 1e-3}) {
      rep.near.push_back(near_probe(r, profile.beta, &rep.fitted_near_coefficient));
      if (coef != 0.0) rep.near.back().remainder /= std::abs(coef);
      e.push_back(rep.near.back().remainder);
    }
    const bool decreasing = strictly_decreasing_abs(e, kExact);
    const bool small = rep.near.front().rel_error < tol.near_rel;
    rep.near_passed = decreasing && small;
    if (!decreasing) msg << "near remainder not decreasing; ";
    if (!small)
      msg << "near relative error " << num(rep.near.front().rel_error) << " >= " << num(tol.near_rel)
          << "; ";
  }
  rep.message = msg.str();
  if (strict && !rep.passed()) throw AsymptoticMismatch(rep.message);
  return rep;
}

PdeResidual angle_pde_residual(const RotationalProfile& profile) {
  const std::size_t n = profile.size();
  if (n < 5) throw GridTooCoarse("need at least 5 nodes, got " + std::to_string(n));
  std::vector<double> A(n), cosv(n), inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    A[i] = profile.A(i);
    cosv[i] = 1.0 / std::sqrt(A[i]);
    inv[i] = std::sqrt(A[i]);
  }
  const auto lap_cos = laplace_beltrami_radial(profile.r, cosv, A);
  const auto lap_inv = laplace_beltrami_radial(profile.r, inv, A);
  PdeResidual res;
  res.nodes = static_cast<int>(n);
  const double beta = profile.beta;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double rho = std::hypot(profile.fp[i], profile.gp[i]);
    const double r = profile.r[i];
    const double dalpha = -rho / (r * (1.0 + beta * rho * rho));
    const double grad2 = dalpha * dalpha / A[i];
    const double c = cosv[i];
    const double s2 = rho * rho / A[i];
    const double denom = c * (c * c + beta * s2);
    const double rhs_cos = 2.0 * beta * s2 / denom * grad2 - 2.0 * c * grad2;
    const double rhs_inv = 2.0 * grad2 / denom;
    res.cos_identity = std::max(res.cos_identity, std::abs(lap_cos[i - 1] - rhs_cos));
    res.inv_cos_identity = std::max(res.inv_cos_identity, std::abs(lap_inv[i - 1] - rhs_inv));
  }
  return res;
}

PdeReport angle_pde_check(const RotationalProfile& profile, const Tolerances& tol) {
  PdeReport rep;
  rep.threshold = tol.pde_residual;
  rep.ratio_threshold = tol.pde_order_ratio;
  rep.base = angle_pde_residual(profile);
  const RotationalProfile fine =
      solve_profile(profile.beta, profile.c1, profile.c2, profile.r.front(), profile.r.back(),
                    2 * static_cast<int>(profile.size()) - 1, profile.f0, profile.g0, tol);
  rep.refined = angle_pde_residual(fine);
  constexpr double kFloor = 1e-13;  // below this the residual is pure rounding
  auto ratio = [&](double coarse, double refined) {
    if (coarse <= kFloor && refined <= kFloor) return std::numeric_limits<double>::infinity();
    return coarse / std::max(refined, std::numeric_limits<double>::min());
  };
  rep.cos_ratio = ratio(rep.base.cos_identity, rep.refined.cos_identity);
  rep.inv_cos_ratio = ratio(rep.base.inv_cos_identity, rep.refined.inv_cos_identity);
  rep.passed = rep.base.cos_identity < tol.pde_residual &&
               rep.base.inv_cos_identity < tol.pde_residual &&
               rep.cos_ratio >= tol.pde_order_ratio && rep.inv_cos_ratio >= tol.pde_order_ratio;
  return rep;
}

LimitBoundsReport limit_bounds_check(const std::vector<double>& betas, double a, double b,
                                     double upper_a, double upper_b, int n, double r0, bool strict,
                                     const Tolerances& tol) {
  LimitBoundsReport rep;
  rep.a = a;
  rep.b = b;
  rep.r0 = r0;
  const double sqrt2 = std::numbers::sqrt2;
  if (!(a > sqrt2 && b > a)) throw InvalidArgument("catenoid interval needs sqrt2 < a < b");
  if (!(r0 > 0.0 && r0 <= sqrt2)) throw InvalidArgument("r0 must lie in (0, sqrt2]");
  rep.fp2_bound = 3.0 / (a * a - 2.0);
  std::ostringstream msg;

  std::vector<double> small;
  for (double beta : betas) {
    if (!(beta >= 0.0)) throw InvalidBeta("beta must be >= 0, got " + num(beta));
    if (beta > 1.0) {
      const RotationalProfile p = solve_profile(beta, 1.0, 1.0, upper_a, upper_b, n, 0, 0, tol);
      LimitBoundsReport::Upper u;
      u.beta = beta;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double bound = std::cbrt(1.0 / ((beta - 1.0) * p.r[i]));
        const double ratio = p.fp[i] / bound;
        if (ratio > u.max_ratio) {
          u.max_ratio = ratio;
          u.worst_r = p.r[i];
        }
        if (p.fp[i] > bound) u.passed = false;
      }
      rep.upper_passed = rep.upper_passed && u.passed;
      if (!u.passed) msg << "upper bound violated at beta=" << num(beta) << " r=" << num(u.worst_r) << "; ";
      rep.upper.push_back(u);
    } else if (beta < 1.0) {
      small.push_back(beta);
    }
  }
  std::sort(small.begin(), small.end(), std::greater<>());
  for (double beta : small) {
    const RotationalProfile p = solve_profile(beta, 1.0, 1.0, a, b, n, 0, 0, tol);
    LimitBoundsReport::Catenoid c;
    c.beta = beta;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double cat = 1.0 / std::sqrt(p.r[i] * p.r[i] - 2.0);
      c.sup_distance = std::max(c.sup_distance, std::abs(p.fp[i] - cat));
      c.max_fp2 = std::max(c.max_fp2, p.fp[i] * p.fp[i]);
    }
    c.fp_at_r0 = beta > 0.0 ? solve_slope(r0, beta, 1.0, 1.0, tol).fp
                            : std::numeric_limits<double>::infinity();
    if (c.max_fp2 > rep.fp2_bound) {
      rep.fp2_bounded = false;
      msg << "(f')^2 bound violated at beta=" << num(beta) << "; ";
    }
    if (!rep.catenoid.empty()) {
      const auto& prev = rep.catenoid.back();
      if (!(c.sup_distance < prev.sup_distance)) {
        rep.distance_decreasing = false;
        msg << "catenoid distance not decreasing at beta=" << num(beta) << "; ";
      }
      if (!(c.fp_at_r0 > prev.fp_at_r0)) {
        rep.divergence_increasing = false;
        msg << "f'(r0) not increasing at beta=" << num(beta) << "; ";
      }
    }
    rep.catenoid.push_back(c);
  }
  if (strict && !rep.passed()) throw BoundViolation(msg.str());
  return rep;
}

SweepResult beta_sweep(const std::vector<double>& betas, double c1, double c2, double eps,
                       double r_max, int n, double f0, double g0, const Tolerances& tol) {
  if (betas.empty()) throw InvalidArgument("beta grid is empty");
  for (std::size_t k = 0; k < betas.size(); ++k) {
    if (!(betas[k] >= 0.0)) throw InvalidBeta("beta must be >= 0, got " + num(betas[k]));
    if (k > 0 && !(betas[k] > betas[k - 1])) throw InvalidArgument("beta grid must be increasing");
  }
  SweepResult out;
  for (double beta : betas) out.profiles.push_back(solve_profile(beta, c1, c2, eps, r_max, n, f0, g0, tol));
  for (std::size_t k = 0; k + 1 < out.profiles.size(); ++k) {
    double sup = 0.0;
    const auto& p = out.profiles[k];
    const auto& q = out.profiles[k + 1];
    for (std::size_t i = 0; i < p.size(); ++i) sup = std::max(sup, std::abs(q.fp[i] - p.fp[i]));
    out.continuity.push_back(sup);
    out.max_continuity = std::max(out.max_continuity, sup);
  }
  return out;
}

}  // namespace betalab
