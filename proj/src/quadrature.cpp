#include "landau/quadrature.hpp"

#include <Eigen/Eigenvalues>

namespace landau {
namespace {

// Golub–Welsch: nodes are the eigenvalues of the Jacobi matrix, weights the
// squared first eigenvector components times the total mass.
GaussRule golub_welsch(const Vec& diag, const Vec& offdiag, double mass) {
  Eigen::SelfAdjointEigenSolver<Mat> es;
  es.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::quadrature, "Jacobi matrix eigensolve failed");
  GaussRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights = mass * es.eigenvectors().row(0).transpose().array().square();
  return rule;
}

void check_order(int n) {
  if (n < 1 || n > 400) throw Error(ErrorKind::invalid_input, "quadrature order out of range [1,400]");
}

TensorRule tensorize(const GaussRule& g, int dim, double scale, double norm) {
  const Index n = g.nodes.size();
  Index total = 1;
  for (int k = 0; k < dim; ++k) total *= n;
  TensorRule t;
  t.nodes.resize(dim, total);
  t.weights.resize(total);
  for (Index q = 0; q < total; ++q) {
    Index r = q;
    double w = norm;
    for (int k = dim - 1; k >= 0; --k) {
      const Index i = r % n;
      r /= n;
      t.nodes(k, q) = scale * g.nodes(i);
      w *= g.weights(i);
    }
    t.weights(q) = w;
  }
  return t;
}

}  // namespace

GaussRule gauss_hermite(int n) {
  check_order(n);
  Vec a = Vec::Zero(n), b(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) b(k - 1) = std::sqrt(0.5 * k);
  return golub_welsch(a, b, std::sqrt(M_PI));
}

GaussRule gauss_legendre(int n, double lo, double hi) {
  check_order(n);
  Vec a = Vec::Zero(n), b(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) b(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  GaussRule g = golub_welsch(a, b, 2.0);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  g.nodes = (mid + half * g.nodes.array()).matrix();
  g.weights *= half;
  return g;
}

GaussRule gauss_laguerre(int n, double alpha) {
  check_order(n);
  if (!(alpha > -1.0)) throw Error(ErrorKind::invalid_input, "Laguerre exponent must exceed -1");
  Vec a(n), b(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) a(k) = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) b(k - 1) = std::sqrt(k * (k + alpha));
  return golub_welsch(a, b, std::tgamma(alpha + 1.0));
}

TensorRule maxwellian_rule(int dim, int n) {
  return tensorize(gauss_hermite(n), dim, std::sqrt(2.0), std::pow(M_PI, -0.5 * dim));
}

TensorRule unit_gaussian_rule(int dim, int n) {
  return tensorize(gauss_hermite(n), dim, 1.0, std::pow(M_PI, -0.5 * dim));
}

}  // namespace landau
