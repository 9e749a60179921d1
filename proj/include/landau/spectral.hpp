#pragma once

#include "landau/core.hpp"
#include "landau/operator.hpp"

#include <string>
#include <vector>

namespace landau {

// Eigenvalues from a complex Schur form, sorted by real part then imaginary
// part. On non-convergence the matrix is written to dump_on_failure (when
// given) and a numeric error is thrown.
CVec compute_spectrum(const CMat& P, const std::string& dump_on_failure = "");

// 1/σ_min(zI − P) by singular value decomposition.
double resolvent_norm(const CMat& P, cplx z);

// Resolvent norms from one Schur factorization P = Q T Q†: σ_min(zI − T) by
// Lanczos on ((zI − T)†(zI − T))⁻¹ with triangular solves.
class SchurResolvent {
 public:
  explicit SchurResolvent(const CMat& P);
  double norm(cplx z) const;
  const CVec& eigenvalues() const { return eig_; }
  const CMat& triangular() const { return T_; }

 private:
  CMat T_;
  CVec eig_;
};

// |z+1|^{1/3}/(Re z + 1); Re z + 1 ≤ 0 is an enclosure violation.
double enclosure_ratio(cplx z);
double fit_enclosure(const std::vector<CVec>& spectra);

// Boundary |z+1|^{1/3} = C (Re z + 1) from the cusp tip to Re z = re_max,
// lower branch first, as (re, im) pairs.
std::vector<std::pair<double, double>> enclosure_polyline(double C, double re_max, int points = 200);

// ξ-set refined by inserting the midpoint of every consecutive pair.
std::vector<double> doubled_xi_set(const std::vector<double>& xs);

struct SpectrumEntry {
  Vec xi;
  CVec eigenvalues;
  double norm_P = 0.0;
  double tol_spec = 0.0;
  double min_re = 0.0;
};

struct SpectralReport {
  std::vector<SpectrumEntry> entries;  // primary ξ-set
  std::vector<SpectrumEntry> doubled;  // refined ξ-set
  double C_hat = 0.0;
  double C_hat_doubled = 0.0;
  double worst_re_margin = 0.0;  // min over ξ of (min Re z + tol_spec)/‖𝒫_ξ‖
  CheckReport check;
};

// ξ values are multiples of e₁.
SpectralReport spectrum_study(const CollisionParts& parts, const std::vector<double>& xs, double drift_limit = 0.25,
                              const std::string& dump_dir = "");

struct ScanGeometry {
  std::vector<double> lines = {-0.5, -0.25, -1e-3};
  double im_min = 1.0;
  double im_max = 1e4;
  int per_octave = 4;
  double margin = 0.05;
  std::vector<double> left_re = {-0.5, -1.0, -4.0, -1e6};
  std::vector<double> left_im = {0.0, 1.0, 10.0, 100.0};
};

struct ScanPoint {
  int xi_index = 0;
  cplx z;
  double norm = 0.0;
  double weighted = 0.0;  // |z+1|^{1/3}·norm
  bool left = false;      // member of the Re z ≤ −1/2 set
};

struct OctaveRow {
  int xi_index = 0;
  double line = 0.0;
  int octave = 0;  // floor(log2 |Im z|)
  double max_weighted = 0.0;
  double max_witness = 0.0;  // |z+1|^{1/2}·norm
};

struct ResolventScan {
  std::vector<ScanPoint> points;
  std::vector<OctaveRow> table;
  double Q_hat = 0.0;
  double growth = 0.0;          // largest consecutive-octave ratio, exponent 1/3
  double witness_growth = 0.0;  // same with exponent 1/2
  double left_worst = 0.0;      // max over the left set of norm·|Re z|
  int excluded_interior = 0;
  CheckReport check;
};

ResolventScan scan_resolvent(const std::vector<OperatorMatrix>& Ps, double C_hat, const ScanGeometry& geometry = {},
                             double growth_limit = 1.15);

struct HypoValue {
  double xi = 0.0;
  double kappa = 0.0;
  int N = 0;
  std::string name;  // W4, M142 or N111
  double value = 0.0;
};

// C_M142(κ) = λmax(W^{2/3}, (P − iκ)†(P − iκ) + I), C_W4 = C_M142(0),
// C_N111 = λmax(P†P, W²).
std::vector<HypoValue> hypo_constants(const CMat& P, const CMat& W, const std::vector<double>& kappas);

struct HypoReport {
  std::vector<HypoValue> values;
  CheckReport check;
};

struct HypoStudy {
  std::vector<int> Ns = {16, 24};
  double L = 6.0;
  std::vector<double> xs = {0, 1, 2, 5, 10, 20};
  std::vector<double> kappas = {0, 10, -10, 100, -100};
  double K = 0.0;  // 0 selects default_majorant_K
  double drift_limit = 0.2;
  double kappa_factor = 2.0;
};

HypoReport hypo_study(const KernelField& kf, const HypoStudy& study);

// ‖e^{−t𝒫}‖ ≤ e^{‖𝒦‖t}(1 + 1e−6) and ‖e^{−t𝒜}‖ ≤ 1 + 1e−8 for each t.
CheckReport semigroup_bound(const OperatorMatrix& P, const OperatorMatrix& K, const OperatorMatrix& A,
                            const std::vector<double>& times);

}  // namespace landau
