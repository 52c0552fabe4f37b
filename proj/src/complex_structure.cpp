#include "betalab/complex_structure.hpp"

#include "betalab/errors.hpp"

namespace betalab {

ComplexStructure::ComplexStructure() {
  matrix_ << 0, -1, 0, 0,
             1, 0, 0, 0,
             0, 0, 0, -1,
             0, 0, 1, 0;
}

ComplexStructure::ComplexStructure(const Mat4& matrix) : matrix_(matrix) {
  if (!is_valid(1e-10)) {
    throw InvalidArgument("matrix is not an orthogonal complex structure");
  }
}

bool ComplexStructure::is_valid(double tol) const {
  const Mat4 id = Mat4::Identity();
  return (matrix_ * matrix_ + id).cwiseAbs().maxCoeff() <= tol &&
         (matrix_.transpose() * matrix_ - id).cwiseAbs().maxCoeff() <= tol &&
         (matrix_.transpose() + matrix_).cwiseAbs().maxCoeff() <= tol;
}

const ComplexStructure& standard_complex_structure() {
  static const ComplexStructure j{};
  return j;
}

Mat4 self_dual_frame_form(double x, double y, double z) {
  Mat4 m;
  m << 0, x, y, z,
       -x, 0, z, -y,
       -y, -z, 0, x,
       -z, y, -x, 0;
  return m;
}

}  // namespace betalab
