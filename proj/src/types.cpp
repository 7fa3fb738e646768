#include "ptdyn/types.hpp"

#include <Eigen/SVD>

namespace ptdyn {

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double matrix_norm(const Matrix& a, NormKind kind) {
  return kind == NormKind::Spectral ? spectral_norm(a) : a.norm();
}

}  // namespace ptdyn
