#include "landau/spectral.hpp"

#include "landau/anchors.hpp"
#include "landau/linalg.hpp"
#include "landau/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <filesystem>
#include <limits>
#include <map>

namespace landau {
namespace {

void sort_spectrum(CVec& e) {
  std::sort(e.data(), e.data() + e.size(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
}

Vec along_e1(double x, int dim) {
  Vec xi = Vec::Zero(dim);
  xi(0) = x;
  return xi;
}

std::string xi_label(double x) {
  std::string s = std::to_string(x);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

CVec compute_spectrum(const CMat& P, const std::string& dump_on_failure) {
  if (P.rows() != P.cols() || P.rows() == 0) throw Error(ErrorKind::invalid_input, "spectrum needs a non-empty square matrix");
  if (P.rows() > 5000) throw Error(ErrorKind::invalid_input, "matrix larger than 5000 rows");
  Eigen::ComplexSchur<CMat> schur(P, false);
  if (schur.info() != Eigen::Success) {
    if (!dump_on_failure.empty()) {
      OperatorMatrix op;
      op.matrix = P;
      op.tag = OperatorTag::P_xi;
      write_matrix_dump(dump_on_failure, op);
    }
    throw Error(ErrorKind::numeric, "Schur iteration did not converge");
  }
  CVec e = schur.matrixT().diagonal();
  sort_spectrum(e);
  return e;
}

double resolvent_norm(const CMat& P, cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error(ErrorKind::invalid_input, "z is not finite");
  CMat M = -P;
  M.diagonal().array() += z;
  const double s = sigma_min(M);
  if (!(s > std::numeric_limits<double>::epsilon() * spectral_norm(M))) throw Error(ErrorKind::singular_point, "z is an eigenvalue to working precision");
  return 1.0 / s;
}

SchurResolvent::SchurResolvent(const CMat& P) {
  Eigen::ComplexSchur<CMat> schur(P, false);
  if (schur.info() != Eigen::Success) throw Error(ErrorKind::numeric, "Schur iteration did not converge");
  T_ = schur.matrixT();
  eig_ = T_.diagonal();
  sort_spectrum(eig_);
}

double SchurResolvent::norm(cplx z) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error(ErrorKind::invalid_input, "z is not finite");
  const Index n = T_.rows();
  CMat M = -T_;
  M.diagonal().array() += z;
  const double scale = M.cwiseAbs().maxCoeff();
  if (M.diagonal().cwiseAbs().minCoeff() <= std::numeric_limits<double>::epsilon() * scale)
    throw Error(ErrorKind::singular_point, "z is an eigenvalue to working precision");
  const auto upper = M.triangularView<Eigen::Upper>();
  const auto apply = [&](const CVec& x) {
    CVec y = upper.adjoint().solve(x);
    return CVec(upper.solve(y));
  };
  const Index m_max = std::min<Index>(n, 80);
  CMat Q(n, m_max + 1);
  Vec alpha(m_max), beta(m_max);
  CVec q(n);
  for (Index i = 0; i < n; ++i) q(i) = cplx(1.0 / (1.0 + i), 0.5 / (2.0 + i));
  Q.col(0) = q.normalized();
  double theta = 0.0;
  for (Index k = 0; k < m_max; ++k) {
    CVec w = apply(Q.col(k));
    alpha(k) = Q.col(k).dot(w).real();
    for (int pass = 0; pass < 2; ++pass) w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).adjoint() * w);
    beta(k) = w.norm();
    Eigen::SelfAdjointEigenSolver<Mat> tri;
    tri.computeFromTridiagonal(alpha.head(k + 1), beta.head(k), Eigen::ComputeEigenvectors);
    theta = tri.eigenvalues()(k);
    const double residual = beta(k) * std::abs(tri.eigenvectors()(k, k));
    if (residual <= 1e-12 * theta || beta(k) <= 1e-300 || k + 1 == n) break;
    Q.col(k + 1) = w / beta(k);
  }
  return std::sqrt(theta);
}

double enclosure_ratio(cplx z) {
  const double x = z.real() + 1.0;
  if (!(x > 0.0)) throw Error(ErrorKind::enclosure_violation, "eigenvalue with Re z + 1 <= 0");
  return std::cbrt(std::abs(z + 1.0)) / x;
}

double fit_enclosure(const std::vector<CVec>& spectra) {
  double C = 0.0;
  for (const CVec& e : spectra)
    for (Index i = 0; i < e.size(); ++i) C = std::max(C, enclosure_ratio(e(i)));
  return C;
}

std::vector<std::pair<double, double>> enclosure_polyline(double C, double re_max, int points) {
  if (!(C > 0.0) || !std::isfinite(C)) throw Error(ErrorKind::invalid_input, "enclosure constant must be finite and > 0");
  if (points < 2) throw Error(ErrorKind::invalid_input, "points must be >= 2");
  const double X0 = std::pow(C, -1.5), X1 = std::max(re_max + 1.0, X0);
  std::vector<double> X(static_cast<size_t>(points));
  for (int j = 0; j < points; ++j) X[static_cast<size_t>(j)] = X0 * std::pow(X1 / X0, static_cast<double>(j) / (points - 1));
  const auto Y = [C](double x) { return std::sqrt(std::max(0.0, std::pow(C * x, 6) - x * x)); };
  std::vector<std::pair<double, double>> out;
  for (int j = points - 1; j >= 1; --j) out.emplace_back(X[static_cast<size_t>(j)] - 1.0, -Y(X[static_cast<size_t>(j)]));
  for (int j = 0; j < points; ++j) out.emplace_back(X[static_cast<size_t>(j)] - 1.0, Y(X[static_cast<size_t>(j)]));
  return out;
}

std::vector<double> doubled_xi_set(const std::vector<double>& xs) {
  std::vector<double> out;
  for (size_t i = 0; i < xs.size(); ++i) {
    out.push_back(xs[i]);
    if (i + 1 < xs.size()) out.push_back(0.5 * (xs[i] + xs[i + 1]));
  }
  return out;
}

SpectralReport spectrum_study(const CollisionParts& parts, const std::vector<double>& xs, double drift_limit,
                              const std::string& dump_dir) {
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.size() < 3)
    throw Error(ErrorKind::invalid_input, "xi needs at least 3 distinct values");
  const OperatorMatrix K = assemble_K(parts);
  const std::vector<double> fine = doubled_xi_set(xs);
  const int dim = parts.grid.dim;

  std::vector<SpectrumEntry> all(fine.size());
  parallel_for(static_cast<Index>(fine.size()), [&](Index j) {
    SpectrumEntry& e = all[static_cast<size_t>(j)];
    e.xi = along_e1(fine[static_cast<size_t>(j)], dim);
    const OperatorMatrix P = assemble_P(assemble_Axi(parts, e.xi), K);
    const std::string dump = dump_dir.empty() ? "" : (std::filesystem::path(dump_dir) / ("failed_P_xi" + xi_label(e.xi(0)) + ".bin")).string();
    e.eigenvalues = compute_spectrum(P.matrix, dump);
    e.norm_P = spectral_norm(P.matrix);
    e.tol_spec = 1e-6 * e.norm_P;
    e.min_re = e.eigenvalues(0).real();
  });

  SpectralReport rep;
  rep.check = CheckReport("spectrum", anchor::spectrum);
  for (size_t j = 0; j < fine.size(); j += 2) rep.entries.push_back(all[j]);
  rep.doubled = all;

  double worst = std::numeric_limits<double>::infinity();
  bool inside = true;
  for (const SpectrumEntry& e : all) {
    worst = std::min(worst, (e.min_re + e.tol_spec) / e.norm_P);
    inside = inside && e.min_re >= -e.tol_spec;
  }
  rep.worst_re_margin = worst;
  std::vector<CVec> s1, s2;
  for (const SpectrumEntry& e : rep.entries) s1.push_back(e.eigenvalues);
  for (const SpectrumEntry& e : rep.doubled) s2.push_back(e.eigenvalues);
  rep.C_hat = fit_enclosure(s1);
  rep.C_hat_doubled = fit_enclosure(s2);
  const double drift = std::abs(rep.C_hat_doubled - rep.C_hat) / rep.C_hat;

  CheckReport& r = rep.check;
  r.add("xi_count", static_cast<double>(rep.entries.size()));
  r.add("xi_count_doubled", static_cast<double>(rep.doubled.size()));
  r.add("worst_re_margin", worst);
  r.add("tol_spec_rel", 1e-6);
  r.add("C_hat", rep.C_hat);
  r.add("C_hat_doubled", rep.C_hat_doubled);
  r.add("C_hat_drift", drift);
  r.add("tol_C_hat_drift", drift_limit);
  r.require(inside, "eigenvalue with Re z < -tol_spec");
  r.require(std::isfinite(rep.C_hat), "enclosure constant is not finite");
  r.require(drift <= drift_limit, "enclosure constant drifts under xi-set doubling");
  return rep;
}

ResolventScan scan_resolvent(const std::vector<OperatorMatrix>& Ps, double C_hat, const ScanGeometry& g, double growth_limit) {
  if (Ps.empty()) throw Error(ErrorKind::invalid_input, "scan needs at least one operator");
  if (!(g.im_min > 0.0) || !(g.im_max > g.im_min) || g.per_octave < 1)
    throw Error(ErrorKind::geometry, "scan range needs 0 < im_min < im_max and per_octave >= 1");
  struct Site {
    cplx z;
    double line;
    bool on_line;  // false for the left set
  };
  std::vector<Site> sites;
  int excluded = 0;
  const double ratio_limit = (1.0 + g.margin) * C_hat;
  for (double x : g.lines) {
    int kept = 0;
    for (int j = 0;; ++j) {
      const double t = g.im_min * std::pow(2.0, static_cast<double>(j) / g.per_octave);
      if (t > g.im_max * (1.0 + 1e-12)) break;
      for (double sgn : {1.0, -1.0}) {
        const cplx z(x, sgn * t);
        if (x + 1.0 > 0.0 && std::cbrt(std::abs(z + 1.0)) <= ratio_limit * (x + 1.0)) {
          ++excluded;
          continue;
        }
        sites.push_back({z, x, true});
        ++kept;
      }
    }
    if (kept == 0) throw Error(ErrorKind::geometry, "scan line Re z = " + std::to_string(x) + " lies inside the fitted enclosure");
  }
  for (double x : g.left_re) {
    if (x > -0.5) throw Error(ErrorKind::geometry, "left set needs Re z <= -1/2");
    for (double y : g.left_im) {
      sites.push_back({cplx(x, y), x, false});
      if (y != 0.0) sites.push_back({cplx(x, -y), x, false});
    }
  }

  std::vector<std::vector<ScanPoint>> per(Ps.size());
  parallel_for(static_cast<Index>(Ps.size()), [&](Index k) {
    const SchurResolvent R(Ps[static_cast<size_t>(k)].matrix);
    for (const Site& s : sites) {
      ScanPoint p;
      p.xi_index = static_cast<int>(k);
      p.z = s.z;
      p.norm = R.norm(s.z);
      p.weighted = std::cbrt(std::abs(s.z + 1.0)) * p.norm;
      p.left = s.z.real() <= -0.5;
      per[static_cast<size_t>(k)].push_back(p);
    }
  });

  ResolventScan scan;
  scan.excluded_interior = excluded;
  std::map<std::tuple<int, double, int>, OctaveRow> rows;
  for (size_t k = 0; k < Ps.size(); ++k)
    for (size_t i = 0; i < sites.size(); ++i) {
      const ScanPoint& p = per[k][i];
      scan.points.push_back(p);
      if (p.left) scan.left_worst = std::max(scan.left_worst, p.norm * std::abs(p.z.real()));
      if (!sites[i].on_line) continue;
      scan.Q_hat = std::max(scan.Q_hat, p.weighted);
      const int oct = static_cast<int>(std::floor(std::log2(std::abs(p.z.imag()) / g.im_min) + 1e-9));
      OctaveRow& row = rows[{static_cast<int>(k), sites[i].line, oct}];
      row.xi_index = static_cast<int>(k);
      row.line = sites[i].line;
      row.octave = oct;
      row.max_weighted = std::max(row.max_weighted, p.weighted);
      row.max_witness = std::max(row.max_witness, std::sqrt(std::abs(p.z + 1.0)) * p.norm);
    }
  for (const auto& [key, row] : rows) scan.table.push_back(row);
  for (size_t i = 1; i < scan.table.size(); ++i) {
    const OctaveRow &a = scan.table[i - 1], &b = scan.table[i];
    if (a.xi_index != b.xi_index || a.line != b.line || b.octave != a.octave + 1) continue;
    scan.growth = std::max(scan.growth, b.max_weighted / a.max_weighted);
    scan.witness_growth = std::max(scan.witness_growth, b.max_witness / a.max_witness);
  }

  CheckReport& r = scan.check;
  r = CheckReport("resolvent", anchor::resolvent);
  r.add("points", static_cast<double>(scan.points.size()));
  r.add("excluded_interior", excluded);
  r.add("C_hat", C_hat);
  r.add("margin", g.margin);
  r.add("Q_hat", scan.Q_hat);
  r.add("octave_growth", scan.growth);
  r.add("witness_octave_growth", scan.witness_growth);
  r.add("tol_octave_growth", growth_limit);
  r.add("left_norm_times_abs_re", scan.left_worst);
  r.add("tol_left", 1.0 + 1e-6);
  r.require(std::isfinite(scan.Q_hat), "resolvent scan hit a non-finite norm");
  r.require(scan.growth <= growth_limit, "weighted resolvent grows by more than the octave limit");
  r.require(scan.witness_growth > growth_limit, "exponent 1/2 witness does not grow past the octave limit");
  r.require(scan.left_worst <= 1.0 + 1e-6, "resolvent exceeds 1/|Re z| on the left set");
  return scan;
}

std::vector<HypoValue> hypo_constants(const CMat& P, const CMat& W, const std::vector<double>& kappas) {
  if (P.rows() != W.rows()) throw Error(ErrorKind::precondition, "P and W sizes differ");
  const CMat W23 = hermitian_power(W, 2.0 / 3.0);
  std::vector<HypoValue> out;
  const auto rhs = [&](double kappa) {
    CMat shifted = P;
    shifted.diagonal().array() -= cplx(0.0, kappa);
    CMat B = shifted.adjoint() * shifted;
    B.diagonal().array() += 1.0;
    return hermitian_part(B);
  };
  const auto solve = [](const CMat& A, const CMat& B) {
    try {
      return generalized_lambda_max(A, B);
    } catch (const Error&) {
      throw Error(ErrorKind::kernel_assembly, "right-hand matrix of a hypo constant is not positive definite");
    }
  };
  out.push_back({0.0, 0.0, 0, "W4", solve(W23, rhs(0.0))});
  for (double kappa : kappas) out.push_back({0.0, kappa, 0, "M142", kappa == 0.0 ? out[0].value : solve(W23, rhs(kappa))});
  const CMat W2 = hermitian_part(W * W);
  out.push_back({0.0, 0.0, 0, "N111", solve(hermitian_part(P.adjoint() * P), W2)});
  return out;
}

HypoReport hypo_study(const KernelField& kf, const HypoStudy& study) {
  if (study.Ns.size() < 2) throw Error(ErrorKind::invalid_input, "hypo study needs two grid sizes");
  if (study.xs.empty()) throw Error(ErrorKind::invalid_input, "xi list is empty");
  const double K = study.K > 0.0 ? study.K : default_majorant_K(kf.gamma());
  HypoReport rep;
  for (int N : study.Ns) {
    const VelocityGrid grid(kf.dim(), study.L, N);
    const CollisionParts parts = assemble_parts(grid, kf, true);
    const OperatorMatrix Kop = assemble_K(parts);
    std::vector<std::vector<HypoValue>> per(study.xs.size());
    parallel_for(static_cast<Index>(study.xs.size()), [&](Index j) {
      const Vec xi = along_e1(study.xs[static_cast<size_t>(j)], kf.dim());
      const OperatorMatrix P = assemble_P(assemble_Axi(parts, xi), Kop);
      const OperatorMatrix W = assemble_majorant_W(grid, kf.gamma(), xi, K);
      per[static_cast<size_t>(j)] = hypo_constants(P.matrix, W.matrix, study.kappas);
      for (HypoValue& v : per[static_cast<size_t>(j)]) {
        v.xi = xi(0);
        v.N = N;
      }
    });
    for (const auto& vs : per) rep.values.insert(rep.values.end(), vs.begin(), vs.end());
  }

  // ξ-uniform constants (sup over ξ) per name and N; M142 also takes the sup over κ
  std::map<std::string, std::map<int, double>> sup;
  std::map<std::pair<double, int>, double> sup_kappa;  // (κ, N) → sup over ξ, per-κ diagnostic
  std::map<std::pair<double, int>, std::pair<double, double>> kappa_range;
  std::map<std::pair<double, int>, double> at_zero;
  bool positive = true;
  for (const HypoValue& v : rep.values) {
    positive = positive && std::isfinite(v.value) && v.value > 0.0;
    double& s = sup[v.name][v.N];
    s = std::max(s, v.value);
    if (v.name != "M142") continue;
    double& sk = sup_kappa[{v.kappa, v.N}];
    sk = std::max(sk, v.value);
    if (v.kappa == 0.0) at_zero[{v.xi, v.N}] = v.value;
    auto [it, fresh] = kappa_range.try_emplace({v.xi, v.N}, v.value, v.value);
    if (!fresh) it->second = {std::min(it->second.first, v.value), std::max(it->second.second, v.value)};
  }
  const int N1 = study.Ns[study.Ns.size() - 2], N2 = study.Ns.back();
  CheckReport& r = rep.check;
  r = CheckReport("hypo_constants", anchor::hypo_w4);
  r.add("K", K);
  double worst_drift = 0.0;
  for (const char* name : {"W4", "M142", "N111"}) {
    const double a = sup.at(name).at(N1), b = sup.at(name).at(N2), drift = std::abs(b - a) / a;
    worst_drift = std::max(worst_drift, drift);
    r.add(std::string(name) + "_N" + std::to_string(N1), a);
    r.add(std::string(name) + "_N" + std::to_string(N2), b);
    r.add(std::string(name) + "_drift", drift);
  }
  for (double kappa : study.kappas) {
    const double a = sup_kappa.at({kappa, N1}), b = sup_kappa.at({kappa, N2});
    r.add("M142_kappa" + xi_label(kappa) + "_drift", std::abs(b - a) / a);
  }
  double kappa_factor = 0.0, over_zero = 0.0;
  for (const auto& [key, range] : kappa_range) {
    kappa_factor = std::max(kappa_factor, range.second / range.first);
    if (at_zero.count(key)) over_zero = std::max(over_zero, range.second / at_zero.at(key));
  }
  r.add("max_drift", worst_drift);
  r.add("tol_drift", study.drift_limit);
  r.add("kappa_factor", kappa_factor);
  r.add("kappa_sup_over_zero", over_zero);
  r.add("tol_kappa_factor", study.kappa_factor);
  r.require(positive, "a hypo constant is not finite and positive");
  r.require(worst_drift <= study.drift_limit, "hypo constant drifts under grid refinement");
  r.require(kappa_factor <= study.kappa_factor, "M142 constant is not kappa-uniform");
  return rep;
}

CheckReport semigroup_bound(const OperatorMatrix& P, const OperatorMatrix& K, const OperatorMatrix& A,
                            const std::vector<double>& times) {
  CheckReport r("semigroup", anchor::semigroup);
  const double normK = spectral_norm(K.matrix);
  r.add("norm_K", normK);
  for (double t : times) {
    if (!std::isfinite(t) || t < 0.0) throw Error(ErrorKind::invalid_input, "t must be >= 0");
    const double eP = spectral_norm(expm(-t * P.matrix));
    const double eA = spectral_norm(expm(-t * A.matrix));
    const double bound = std::exp(normK * t) * (1.0 + 1e-6);
    const std::string tag = "t" + xi_label(t);
    r.add("norm_exp_P_" + tag, eP);
    r.add("bound_P_" + tag, bound);
    r.add("norm_exp_A_" + tag, eA);
    r.require(eP <= bound, "semigroup of P exceeds exp(|K| t) at t = " + xi_label(t));
    r.require(eA <= 1.0 + 1e-8, "semigroup of A is not a contraction at t = " + xi_label(t));
  }
  r.add("tol_A", 1.0 + 1e-8);
  return r;
}

}  // namespace landau
