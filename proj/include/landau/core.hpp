#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace landau {

using Index = Eigen::Index;
using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

enum class ErrorKind {
  invalid_input,
  quadrature,
  kernel_assembly,
  unreachable_target,
  derivative_estimation,
  aliasing,
  quantization_quality,
  precondition,
  numeric,
  geometry,
  singular_point,
  enclosure_violation,
  io
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct Metric {
  std::string name;
  double value;
};

// Outcome of one verification: named metrics in insertion order, tolerances
// included as ordinary metrics prefixed "tol_".
struct CheckReport {
  std::string name;
  std::string paper_ref;
  bool pass = true;
  std::vector<Metric> metrics;
  std::vector<std::string> notes;

  CheckReport() = default;
  CheckReport(std::string n, std::string ref) : name(std::move(n)), paper_ref(std::move(ref)) {}

  void add(std::string key, double value) { metrics.push_back({std::move(key), value}); }
  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      notes.push_back(why);
    }
  }
  bool has(const std::string& key) const;
  double get(const std::string& key) const;
};

// <v> = sqrt(1 + |v|^2)
template <typename Derived>
typename Derived::Scalar japanese(const Eigen::MatrixBase<Derived>& v) {
  using std::sqrt;
  return sqrt(typename Derived::Scalar(1) + v.squaredNorm());
}

inline double japanese(double t) { return std::sqrt(1.0 + t * t); }

// Wedge norm |v ^ w|^2 for d = 2 or 3 (d = 1 gives 0).
template <typename A, typename B>
typename A::Scalar wedge_sq(const Eigen::MatrixBase<A>& v, const Eigen::MatrixBase<B>& w) {
  const auto d = v.size();
  if (d == 2) {
    const auto s = v(0) * w(1) - v(1) * w(0);
    return s * s;
  }
  if (d == 3) {
    const auto a = v(1) * w(2) - v(2) * w(1);
    const auto b = v(2) * w(0) - v(0) * w(2);
    const auto c = v(0) * w(1) - v(1) * w(0);
    return a * a + b * b + c * c;
  }
  return typename A::Scalar(0);
}

// h(x) = exp(-1/x) for x > 0, else 0; building block of the smooth bumps.
inline double smooth_step_h(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

int worker_count();

void require_finite(const Vec& v, const char* what);

}  // namespace landau
