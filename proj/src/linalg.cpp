#include "landau/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace landau {

CMat hermitian_part(const CMat& m) { return 0.5 * (m + m.adjoint()); }

double hermitian_defect(const CMat& m) {
  if (m.size() == 0) return 0.0;
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

Vec hermitian_eigenvalues(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::numeric, "Hermitian eigensolve failed");
  return es.eigenvalues();
}

CMat hermitian_power(const CMat& m, double t, double max_defect) {
  const double defect = hermitian_defect(m);
  if (defect > max_defect)
    throw Error(ErrorKind::quantization_quality, "Hermitian defect " + std::to_string(defect) + " exceeds the gate");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m));
  if (es.info() != Eigen::Success) throw Error(ErrorKind::numeric, "Hermitian eigensolve failed");
  const Vec& w = es.eigenvalues();
  const bool integer = t == std::round(t);
  if (!integer && w.minCoeff() <= 0.0) throw Error(ErrorKind::precondition, "fractional power of a matrix that is not positive definite");
  if (t < 0.0 && w.cwiseAbs().minCoeff() == 0.0) throw Error(ErrorKind::precondition, "negative power of a singular matrix");
  Vec p(w.size());
  for (Index i = 0; i < w.size(); ++i) p(i) = integer ? std::pow(w(i), t) : std::exp(t * std::log(w(i)));
  return es.eigenvectors() * p.asDiagonal() * es.eigenvectors().adjoint();
}

double spectral_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

double sigma_min(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<CMat> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double generalized_lambda_max(const CMat& A, const CMat& B) {
  Eigen::GeneralizedSelfAdjointEigenSolver<CMat> es(hermitian_part(A), hermitian_part(B), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::numeric, "generalized eigensolve failed (B not positive definite?)");
  return es.eigenvalues().maxCoeff();
}

CMat expm(const CMat& m) { return m.exp(); }

}  // namespace landau
