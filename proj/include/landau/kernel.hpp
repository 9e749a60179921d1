#pragma once

#include "landau/core.hpp"
#include "landau/quadrature.hpp"

#include <memory>
#include <utility>

namespace landau {

// a(v) = |v|^{γ+2} (I − v vᵀ/|v|²), with a(0) = 0.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> eval_a(
    const Eigen::MatrixBase<Derived>& v, typename Derived::Scalar gamma) {
  using S = typename Derived::Scalar;
  using M = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  const Index d = v.size();
  const S r2 = v.squaredNorm();
  if (r2 == S(0)) return M::Zero(d, d);
  using std::pow;
  const S scale = pow(r2, S(0.5) * gamma);  // |v|^γ
  return scale * (r2 * M::Identity(d, d) - v * v.transpose());
}

struct KernelOptions {
  int order = 40;          // Gauss points per axis (and per radial/angle factor)
  double M = 0.0;          // cutoff amplitude
  double R = 1.0;          // cutoff radius
  bool self_check = true;  // compare orders q and q+10 on every pointwise call
};

// Immutable evaluator for the regularized collision matrix and derived fields.
class KernelField {
 public:
  KernelField(double gamma, int dim, KernelOptions opts = {});

  double gamma() const { return gamma_; }
  int dim() const { return dim_; }
  int order() const { return opts_.order; }
  double M() const { return opts_.M; }
  double R() const { return opts_.R; }
  bool self_check() const { return opts_.self_check; }
  const KernelOptions& options() const { return opts_; }

  KernelField with_cutoff(double M, double R) const;
  KernelField with_order(int order) const;
  KernelField unchecked() const;

  // ā(v) and the vector Σ_j ∂_j ā_ij(v), both from the same rule. Route
  // selection: polar around v for |v| < polar_radius, tensor Hermite beyond.
  struct Moments {
    Mat abar;
    Vec div;
  };
  Moments moments(const Vec& v, bool fine = false) const;

  static constexpr double polar_radius = 5.0;

  struct Rules;

 private:
  double gamma_;
  int dim_;
  KernelOptions opts_;
  std::shared_ptr<const Rules> coarse_, fine_;
};

// Moments with the order q / q+10 self-check applied when enabled.
KernelField::Moments eval_moments(const Vec& v, const KernelField& kf);
Mat eval_abar(const Vec& v, const KernelField& kf);
// Relative max-entry disagreement of ā between orders q and q+10.
double abar_consistency(const Vec& v, const KernelField& kf);

struct EigSplit {
  double ell1 = 0.0;
  double ell2 = 0.0;
  Mat frame;  // column 0 is the ℓ1 eigenvector
};

std::pair<EigSplit, Mat> spectral_split(const Vec& v, const KernelField& kf);
EigSplit split_matrix(const Mat& abar, const Vec& v);
Mat principal_sqrt(const Mat& spd);

// χ(r) on radius R: 1 for r ≤ R, 0 for r ≥ 2R, smooth in between.
double chi_R(double r, double R);

// F(v) = ā(v/2)·(v/2) − (1/2)[tr ā + Σ v_i ∂_j ā_ij] + Mχ_R, and the same
// expression without the cutoff term.
double eval_F(const Vec& v, const KernelField& kf);
double eval_F0(const Vec& v, const KernelField& kf);

struct Calibration {
  double M;
  double R;
  double asymptotic_ratio;  // F/⟨v⟩^{γ+2} far out
  double worst_margin;      // min over probes of F − c0⟨v⟩^{γ+2}
};

Calibration calibrate_MR(double c0, const KernelField& kf, double box = 6.0);

struct KernelProbeSet {
  std::vector<Vec> v;
  std::vector<Vec> eta;
};

KernelProbeSet make_kernel_probes(int dim, int count, double vmax, std::uint64_t seed);

CheckReport verify_kernel_bounds(const KernelField& kf, const KernelProbeSet& probes);

}  // namespace landau
