#pragma once

#include "betalab/types.hpp"

namespace betalab {

/// Orthogonal complex structure on R^4. The default instance is the standard
/// structure J E_{2k-1} = E_{2k}, J E_{2k} = -E_{2k-1}.
class ComplexStructure {
 public:
  ComplexStructure();
  explicit ComplexStructure(const Mat4& matrix);

  Vec4 operator()(const Vec4& v) const { return matrix_ * v; }
  /// Kahler form omega(u, v) = <J u, v>.
  double omega(const Vec4& u, const Vec4& v) const { return (matrix_ * u).dot(v); }
  const Mat4& matrix() const { return matrix_; }

  /// J^2 = -I, J^T J = I and J^T = -J, each to `tol` in max-norm.
  bool is_valid(double tol = 1e-12) const;

 private:
  Mat4 matrix_;
};

const ComplexStructure& standard_complex_structure();

/// Matrix of <J e_A, e_B> in an oriented orthonormal frame whose Kahler-angle
/// data are x = cos(alpha), y = <J e1, e3>, z = <J e1, e4>; requires
/// x^2 + y^2 + z^2 = 1.
Mat4 self_dual_frame_form(double x, double y, double z);

}  // namespace betalab
