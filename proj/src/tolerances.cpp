#include "betalab/tolerances.hpp"

#include <utility>
#include <vector>

namespace betalab {
namespace {

using Member = double Tolerances::*;

const std::vector<std::pair<std::string, Member>>& table() {
  static const std::vector<std::pair<std::string, Member>> t = {
      {"degenerate_det", &Tolerances::degenerate_det},
      {"lagrangian_cos", &Tolerances::lagrangian_cos},
      {"complex_sin", &Tolerances::complex_sin},
      {"seed_projection", &Tolerances::seed_projection},
      {"fd_step", &Tolerances::fd_step},
      {"el_two_route_rel", &Tolerances::el_two_route_rel},
      {"v_identity", &Tolerances::v_identity},
      {"first_integral_rel", &Tolerances::first_integral_rel},
      {"el_closure", &Tolerances::el_closure},
      {"closed_form_log", &Tolerances::closed_form_log},
      {"closed_form_catenoid", &Tolerances::closed_form_catenoid},
      {"far_threshold", &Tolerances::far_threshold},
      {"near_rel", &Tolerances::near_rel},
      {"pde_residual", &Tolerances::pde_residual},
      {"pde_order_ratio", &Tolerances::pde_order_ratio},
      {"root_rel", &Tolerances::root_rel},
      {"first_variation_abs", &Tolerances::first_variation_abs},
      {"first_variation_rel", &Tolerances::first_variation_rel},
      {"second_variation_rel", &Tolerances::second_variation_rel},
      {"pair_rel", &Tolerances::pair_rel},
      {"criticality_gate", &Tolerances::criticality_gate},
      {"bilinear_symmetry", &Tolerances::bilinear_symmetry},
      {"symbol_rel", &Tolerances::symbol_rel},
      {"det_floor", &Tolerances::det_floor},
      {"det_violation", &Tolerances::det_violation},
  };
  return t;
}

}  // namespace

bool Tolerances::set(const std::string& name, double value) {
  for (const auto& [key, member] : table()) {
    if (key == name) {
      this->*member = value;
      return true;
    }
  }
  return false;
}

std::map<std::string, double> Tolerances::entries() const {
  std::map<std::string, double> out;
  for (const auto& [key, member] : table()) out.emplace(key, this->*member);
  return out;
}

const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace betalab
