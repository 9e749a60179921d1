#include "commands.hpp"

#include "landau/anchors.hpp"
#include "landau/kernel.hpp"
#include "landau/linalg.hpp"
#include "landau/operator.hpp"
#include "landau/quantization.hpp"
#include "landau/spectral.hpp"
#include "landau/symbols.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>

namespace landau::app {
namespace {

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

Vec along_e1(double x, int dim) {
  Vec xi = Vec::Zero(dim);
  xi(0) = x;
  return xi;
}

void require_dim(const RunConfig& c, const std::string& command) {
  if (c.dim < 2 || c.dim > 3) throw ConfigError("dim out of range [2,3] for " + command);
}

// Shared state for one run: the calibrated kernel and the ξ-independent
// collision parts are built once.
class Context {
 public:
  explicit Context(const RunConfig& c) : cfg(c) {}

  const RunConfig& cfg;

  const KernelField& kernel() {
    if (!kf_) {
      const KernelField base(cfg.gamma, cfg.dim, {.order = cfg.order});
      calibration_ = calibrate_MR(cfg.c0, base);
      kf_ = base.with_cutoff(calibration_->M, calibration_->R);
    }
    return *kf_;
  }

  const Calibration& calibration() {
    kernel();
    return *calibration_;
  }

  const CollisionParts& parts() {
    if (!parts_) parts_ = assemble_parts(VelocityGrid(cfg.dim, cfg.grid_l, cfg.grid_n), kernel(), true);
    return *parts_;
  }

  const OperatorMatrix& K() {
    if (!K_) K_ = assemble_K(parts());
    return *K_;
  }

  OperatorMatrix A(double x) { return assemble_Axi(parts(), along_e1(x, cfg.dim)); }
  OperatorMatrix P(double x) { return assemble_P(A(x), K()); }

  double majorant_K() {
    if (cfg.K > 0.0) return cfg.K;
    if (!majorant_K_) majorant_K_ = default_majorant_K(cfg.gamma);
    return *majorant_K_;
  }

  std::optional<double> C_hat;

 private:
  std::optional<KernelField> kf_;
  std::optional<Calibration> calibration_;
  std::optional<CollisionParts> parts_;
  std::optional<OperatorMatrix> K_;
  std::optional<double> majorant_K_;
};

// Runs one suite body; numerical errors become a failed report so the other
// suites still run. Invalid input propagates to the caller as exit 2.
template <typename F>
void guarded(std::vector<CheckReport>& out, const std::string& name, const char* ref, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::invalid_input || e.kind() == ErrorKind::io) throw;
    CheckReport r(name, ref);
    r.require(false, std::string(to_string(e.kind())) + ": " + e.what());
    out.push_back(r);
  }
}

CheckReport renamed(CheckReport r, const std::string& name) {
  r.name = name;
  return r;
}

// kernel-check

void kernel_suites(Context& ctx, CommandResult& res) {
  const RunConfig& c = ctx.cfg;
  require_dim(c, "kernel-check");
  const KernelField& kf = ctx.kernel();
  const int d = c.dim;

  guarded(res.reports, "abar_origin", anchor::abar_convolution, [&] {
    CheckReport r("abar_origin", anchor::abar_convolution);
    const Mat A0 = eval_abar(Vec::Zero(d), kf);
    double defect;
    if (c.gamma == 0.0) {
      // Gaussian second moment: ∫ μ(w)(|w|²I − wwᵀ) dw = (d − 1) I
      defect = (A0 - (d - 1.0) * Mat::Identity(d, d)).cwiseAbs().maxCoeff();
      r.add("reference", d - 1.0);
    } else {
      defect = abar_consistency(Vec::Zero(d), kf);
      r.add("reference_order", kf.order() + 10);
    }
    r.add("abar_00", A0(0, 0));
    r.add("defect", defect);
    r.add("tol_defect", 1e-8);
    r.require(defect <= 1e-8, "abar(0) differs from its reference");
    res.reports.push_back(r);
  });

  guarded(res.reports, "eigen_split", anchor::eigen_split, [&] {
    CheckReport r("eigen_split", anchor::eigen_split);
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> g;
    double l1_min = 1e300, l1_max = 0.0, l2_min = 1e300, l2_max = 0.0;
    for (int k = 0; k <= 12; ++k) {
      const double radius = 8.0 + k;
      for (int j = 0; j < 4; ++j) {
        Vec dir(d);
        for (int a = 0; a < d; ++a) dir(a) = g(rng);
        const Vec v = radius * dir.normalized();
        const EigSplit s = split_matrix(eval_abar(v, kf), v);
        const double jv = japanese(v);
        const double r1 = s.ell1 / std::pow(jv, c.gamma), r2 = s.ell2 / std::pow(jv, c.gamma + 2.0);
        l1_min = std::min(l1_min, r1), l1_max = std::max(l1_max, r1);
        l2_min = std::min(l2_min, r2), l2_max = std::max(l2_max, r2);
      }
    }
    const double centre = d - 1.0;
    r.add("radius_min", 8.0);
    r.add("radius_max", 20.0);
    r.add("ell1_ratio_min", l1_min);
    r.add("ell1_ratio_max", l1_max);
    r.add("tol_ell1_low", 0.9 * centre);
    r.add("tol_ell1_high", 1.1 * centre);
    r.add("ell2_ratio_min", l2_min);
    r.add("ell2_ratio_max", l2_max);
    r.require(l1_min >= 0.9 * centre && l1_max <= 1.1 * centre, "ell1/<v>^gamma outside its band");
    r.require(l2_min > 0.0 && std::isfinite(l2_max), "ell2/<v>^(gamma+2) not in a positive band");
    res.reports.push_back(r);
  });

  guarded(res.reports, "coercivity", anchor::coercivity, [&] {
    const CheckReport a = verify_kernel_bounds(kf, make_kernel_probes(d, c.probes, 10.0, c.seed));
    const CheckReport b = verify_kernel_bounds(kf, make_kernel_probes(d, 2 * c.probes, 10.0, c.seed + 1));
    CheckReport r = renamed(a, "coercivity");
    const double lo = a.get("coercivity_min"), hi = a.get("coercivity_max");
    const double lo2 = b.get("coercivity_min"), hi2 = b.get("coercivity_max");
    const double drift = std::max(std::abs(lo2 - lo) / lo, std::abs(hi2 - hi) / hi);
    r.add("coercivity_min_x2", lo2);
    r.add("coercivity_max_x2", hi2);
    r.add("band_drift", drift);
    r.add("tol_band_drift", 0.1);
    r.require(drift <= 0.1, "coercivity band moves under probe doubling");
    res.reports.push_back(r);
  });

  guarded(res.reports, "calibration", anchor::F_lower_bound, [&] {
    const Calibration& cal = ctx.calibration();
    CheckReport r("calibration", anchor::F_lower_bound);
    r.add("c0", c.c0);
    r.add("M", cal.M);
    r.add("R", cal.R);
    r.add("asymptotic_ratio", cal.asymptotic_ratio);
    r.add("worst_margin", cal.worst_margin);
    r.require(cal.worst_margin >= 0.0, "F below c0<v>^(gamma+2) on the probe box");
    res.reports.push_back(r);
  });
}

// symbol-check

void symbol_suites(Context& ctx, CommandResult& res) {
  const RunConfig& c = ctx.cfg;
  require_dim(c, "symbol-check");
  const KernelField& kf = ctx.kernel();
  const int d = c.dim;
  const double xmax = *std::max_element(c.xi.begin(), c.xi.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  const Vec xi = along_e1(xmax == 0.0 ? 1.0 : xmax, d);

  for (SymbolKind kind : {SymbolKind::lambda, SymbolKind::a_phase, SymbolKind::g1, SymbolKind::g2, SymbolKind::g3}) {
    const std::string name = std::string("admissible_") + to_string(kind);
    guarded(res.reports, name, anchor::admissible, [&] {
      const SymbolSampler s = make_sampler(kind, xi, c.gamma);
      res.reports.push_back(renamed(
          verify_weight_admissible(s, {.count = 4 * c.probes, .seed = c.seed}, default_admissibility_exponent(kind, c.gamma)), name));
    });
  }

  guarded(res.reports, "symbol_class_lambda23", anchor::symbol_class, [&] {
    const SymbolSampler lam = make_sampler(SymbolKind::lambda, xi, c.gamma);
    const auto l23 = [&](const Vec& z) { return std::cbrt(std::pow(lam(z.head(d), z.tail(d)), 2)); };
    ProbeSpec spec{.count = std::max(10, c.probes / 10), .seed = c.seed, .eta_max = 100.0};
    const auto p1 = make_phase_probes(d, spec);
    spec.count *= 2;
    const auto p2 = make_phase_probes(d, spec);
    res.reports.push_back(renamed(verify_symbol_class(l23, l23, d, 2, p1, p2), "symbol_class_lambda23"));
  });

  guarded(res.reports, "derivative_bounds", anchor::derivative_bounds, [&] {
    const SymbolSampler s = make_sampler(SymbolKind::multiplier_g, Vec::Zero(d), c.gamma, 0.0, &kf);
    res.reports.push_back(verify_derivative_bounds(s, {.count = c.probes, .seed = c.seed}));
  });

  guarded(res.reports, "m_average", anchor::m_average, [&] {
    const SymbolSampler s = make_sampler(SymbolKind::m_average, Vec::Zero(d), c.gamma, 0.0, &kf);
    res.reports.push_back(verify_m_average(s, {.count = std::max(10, c.probes / 2), .seed = c.seed}));
  });

  guarded(res.reports, "multiplier_bounded", anchor::multiplier_g, [&] {
    const SymbolSampler s = make_sampler(SymbolKind::multiplier_g, Vec::Zero(d), c.gamma, 0.0, &kf);
    res.reports.push_back(verify_multiplier_bounded(s, {.count = 10 * c.probes, .seed = c.seed, .eta_max = 100.0}));
  });
}

// quant-check

std::vector<PhaseFunction> nonnegative_symbols() {
  return {
      [](const Vec& v, const Vec& e) { return e(0) * e(0) * std::exp(-v(0) * v(0)); },
      [](const Vec& v, const Vec& e) { return std::exp(-v(0) * v(0) - e(0) * e(0)); },
      [](const Vec& v, const Vec& e) { return std::pow(v(0) * v(0) - 1.0, 2) * std::exp(-0.25 * e(0) * e(0)); },
      [](const Vec& v, const Vec& e) { return std::pow(std::sin(v(0)), 2) * std::exp(-e(0) * e(0)); },
      [](const Vec& v, const Vec& e) { return e(0) * e(0) * std::exp(-v(0) * v(0)) * std::pow(v(0) - 0.5, 2); },
  };
}

void quant_suites(Context& ctx, CommandResult& res) {
  const RunConfig& c = ctx.cfg;
  const PhaseGrid grid(c.quant_dim, c.quant_l, c.quant_n);
  const Index n = grid.size();

  guarded(res.reports, "weyl", anchor::weyl, [&] {
    CheckReport r("weyl", anchor::weyl);
    const auto one = [](const Vec&, const Vec&) { return 1.0; };
    const double id = (weyl_quantize(one, grid).matrix - CMat::Identity(n, n)).cwiseAbs().maxCoeff();
    const SymbolSampler lam = make_sampler(SymbolKind::lambda, along_e1(1.0, c.quant_dim), c.gamma);
    const QuantizedOperator L = weyl_quantize([&](const Vec& v, const Vec& e) { return lam(v, e); }, grid, "lambda",
                                              {.check_aliasing = true});
    r.add("dim", c.quant_dim);
    r.add("N", c.quant_n);
    r.add("identity_defect", id);
    r.add("tol_identity", 1e-8);
    r.add("lambda_hermitian_defect", L.hermitian_defect);
    r.add("lambda_aliasing_defect", L.aliasing_defect);
    r.add("tol_aliasing", 1e-3);
    r.require(id <= 1e-8, "1^w differs from the identity");
    r.require(L.hermitian_defect <= 1e-12, "real symbol gave a non-Hermitian matrix");
    r.require(L.aliasing_defect <= 1e-3, "eta grid under-resolves lambda");
    res.reports.push_back(r);
  });

  guarded(res.reports, "wick", anchor::wick, [&] {
    CheckReport r("wick", anchor::wick);
    const PhaseGrid g1(1, c.quant_l, c.quant_n);
    const auto one = [](const Vec&, const Vec&) { return 1.0; };
    const double id = (wick_quantize(one, g1).matrix - CMat::Identity(g1.size(), g1.size())).cwiseAbs().maxCoeff();
    double worst = 1e300;
    int k = 0;
    for (const PhaseFunction& q : nonnegative_symbols()) {
      const double e = hermitian_eigenvalues(wick_quantize(q, g1).matrix).minCoeff();
      r.add("min_eig_q" + std::to_string(++k), e);
      worst = std::min(worst, e);
    }
    r.add("N", c.quant_n);
    r.add("identity_defect", id);
    r.add("tol_identity", 1e-8);
    r.add("min_eig", worst);
    r.add("tol_min_eig", -1e-8);
    r.require(id <= 1e-8, "1^Wick differs from the identity");
    r.require(worst >= -1e-8, "Wick quantization of a nonnegative symbol is not PSD");
    res.reports.push_back(r);
  });

  guarded(res.reports, "choose_K", anchor::choose_K, [&] {
    CheckReport r("choose_K", anchor::choose_K);
    const SymbolSampler lam = make_sampler(SymbolKind::lambda, along_e1(1.0, c.quant_dim), c.gamma);
    const PhaseFunction p = [lam](const Vec& v, const Vec& e) { return lam(v, e); };
    for (double tau : c.tau) {
      const KChoice k = choose_K(p, tau, grid, regularizer_exponent(SymbolKind::lambda, c.gamma));
      r.add("K_tau" + label(tau), k.K);
      r.add("defect_tau" + label(tau), k.defect);
      r.require(k.defect <= 0.5, "choose_K did not reach defect 1/2");
    }
    r.add("tol_defect", 0.5);
    res.reports.push_back(r);
  });
}

// m36-check

void m36_suites(Context& ctx, CommandResult& res) {
  const RunConfig& c = ctx.cfg;
  const PhaseGrid grid(c.quant_dim, c.quant_l, c.quant_n), fine(c.quant_dim, c.quant_l, 2 * c.quant_n);
  const SymbolSampler g1 = make_sampler(SymbolKind::g1, along_e1(0.0, c.quant_dim), c.gamma);
  const PhaseFunction p = [g1](const Vec& v, const Vec& e) { return g1(v, e); };
  for (double tau : c.tau) {
    const std::string name = "M36_tau" + label(tau);
    guarded(res.reports, name, anchor::basic_theorem, [&] {
      M36Params prm;
      prm.tau = tau;
      prm.seed = c.seed;
      prm.K = choose_K(p, tau, grid).K;
      const CheckReport a = verify_M36(p, p, prm, grid);
      const CheckReport b = verify_M36(p, p, prm, fine);
      CheckReport r = renamed(a, name);
      double worst = 0.0;
      for (const char* band : {"band_IV", "band_V"}) {
        const double x = a.get(band), y = b.get(band), drift = std::abs(y - x) / x;
        r.add(std::string(band) + "_2N", y);
        r.add(std::string(band) + "_drift", drift);
        worst = std::max(worst, drift);
      }
      r.add("tol_drift", 0.25);
      r.require(b.pass, "basic theorem fails on the refined grid");
      r.require(worst <= 0.25, "equivalence band drifts under N -> 2N");
      res.reports.push_back(r);
    });
  }
}

// assemble

double collision_residual(const CollisionParts& parts) {
  const Mat L = parts.L1 + parts.L2;
  Vec m(parts.grid.size());
  for (Index i = 0; i < m.size(); ++i) m(i) = std::exp(-0.25 * parts.v.col(i).squaredNorm());
  return (L * m).norm() / (spectral_norm(L.cast<cplx>()) * m.norm());
}

void assemble_suites(Context& ctx, CommandResult& res) {
  const RunConfig& c = ctx.cfg;
  require_dim(c, "assemble");
  const CollisionParts& parts = ctx.parts();

  guarded(res.reports, "structure", anchor::p_xi, [&] {
    CheckReport r("structure", anchor::p_xi);
    const OperatorMatrix A0 = ctx.A(0.0);
    double accretive = 1e300, shift = 0.0;
    for (double x : c.xi) {
      const OperatorMatrix A = ctx.A(x);
      const OperatorMatrix P = assemble_P(A, ctx.K());
      accretive = std::min(accretive, hermitian_eigenvalues(P.matrix).minCoeff() / spectral_norm(P.matrix));
      CMat diff = A.matrix - A0.matrix;
      diff.diagonal() -= (cplx(0.0, 1.0) * (parts.v.transpose() * along_e1(x, c.dim))).eval();
      shift = std::max(shift, diff.cwiseAbs().maxCoeff());
      if (c.dump) {
        const std::string stem = (std::filesystem::path(c.out) / ("P_xi" + label(x))).string();
        write_matrix_dump(stem + ".bin", P);
        res.binaries.push_back(stem + ".bin");
      }
    }
    if (c.dump) {
      const std::string path = (std::filesystem::path(c.out) / "K.bin").string();
      write_matrix_dump(path, ctx.K());
      res.binaries.push_back(path);
    }
    r.add("N", c.grid_n);
    r.add("h", parts.grid.h());
    r.add("resolved", parts.grid.resolved() ? 1.0 : 0.0);
    r.add("norm_K", spectral_norm(ctx.K().matrix));
    r.add("M", ctx.kernel().M());
    r.add("M_chi_max", parts.M_chi.maxCoeff());
    r.add("numerical_range_min_rel", accretive);
    r.add("tol_numerical_range", -1e-10);
    r.add("transport_shift_defect", shift);
    r.require(accretive >= -1e-10, "numerical range of P leaves the right half-plane");
    r.require(shift <= 1e-12 * A0.matrix.cwiseAbs().maxCoeff(), "A_xi - A_0 is not i diag(v.xi)");
    r.require(parts.M_chi.maxCoeff() <= ctx.kernel().M() * (1.0 + 1e-15), "cutoff diagonal exceeds M");
    res.reports.push_back(r);
  });

  guarded(res.reports, "collision_invariant", anchor::collision_invariant, [&] {
    CheckReport r("collision_invariant", anchor::collision_invariant);
    const double r1 = collision_residual(parts);
    const CollisionParts other = assemble_parts(VelocityGrid(c.dim, c.grid_l, c.collision_n), ctx.kernel(), true);
    const double r2 = collision_residual(other);
    r.add("N", c.grid_n);
    r.add("residual", r1);
    r.add("N_refined", c.collision_n);
    r.add("residual_refined", r2);
    r.add("tol_residual", 1e-3);
    r.require(r1 <= 1e-3, "(L1 + L2) sqrt(mu) residual above 1e-3");
    r.require(r2 < r1, "residual does not decrease strictly under refinement");
    res.reports.push_back(r);
  });

  guarded(res.reports, "dissipation", anchor::dissipation, [&] {
    double x = 1.0;
    for (double v : c.xi)
      if (v != 0.0) {
        x = v;
        break;
      }
    const Vec xi = along_e1(x, c.dim);
    DissipationOptions coarse{.samples = 20, .seed = c.seed, .times = c.t};
    const CheckReport a = verify_dissipation(parts.grid, ctx.kernel(), xi, coarse);
    DissipationOptions fine{.samples = 20, .seed = c.seed, .times = {}, .accretivity = false};
    const CheckReport b = verify_dissipation(VelocityGrid(c.dim, c.grid_l, c.refine_n), ctx.kernel(), xi, fine);
    CheckReport r = renamed(a, "dissipation");
    const double e1 = a.get("identity_defect_max"), e2 = b.get("identity_defect_max");
    const double order = std::log(e1 / e2) / std::log(b.get("N") / a.get("N"));
    r.add("xi", x);
    r.add("N_refined", c.refine_n);
    r.add("identity_defect_refined", e2);
    r.add("observed_order", order);
    r.add("tol_order", 1.8);
    r.require(b.pass, "dissipation check fails on the refined grid");
    r.require(order >= 1.8, "dissipation identity converges below second order");
    res.reports.push_back(r);
  });
}

// spectrum and resolvent-scan

void spectrum_suites(Context& ctx, CommandResult& res) {
  const RunConfig& c = ctx.cfg;
  require_dim(c, "spectrum");
  guarded(res.reports, "spectrum", anchor::spectrum, [&] {
    const SpectralReport rep = spectrum_study(ctx.parts(), c.xi, 0.25, c.out);
    ctx.C_hat = rep.C_hat;
    res.reports.push_back(rep.check);
    Table eig{"eigenvalues", {"xi", "re", "im"}, {}}, dbl{"eigenvalues_doubled", {"xi", "re", "im"}, {}};
    double re_max = 0.0;
    for (const SpectrumEntry& e : rep.entries)
      for (Index i = 0; i < e.eigenvalues.size(); ++i) {
        eig.rows.push_back({e.xi(0), e.eigenvalues(i).real(), e.eigenvalues(i).imag()});
        re_max = std::max(re_max, e.eigenvalues(i).real());
      }
    for (const SpectrumEntry& e : rep.doubled)
      for (Index i = 0; i < e.eigenvalues.size(); ++i) dbl.rows.push_back({e.xi(0), e.eigenvalues(i).real(), e.eigenvalues(i).imag()});
    Table poly{"enclosure", {"re", "im"}, {}};
    for (const auto& [re, im] : enclosure_polyline(rep.C_hat, re_max)) poly.rows.push_back({re, im});
    res.tables.push_back(std::move(eig));
    res.tables.push_back(std::move(dbl));
    res.tables.push_back(std::move(poly));
  });
}

void resolvent_suites(Context& ctx, CommandResult& res) {
  const RunConfig& c = ctx.cfg;
  require_dim(c, "resolvent-scan");
  guarded(res.reports, "resolvent", anchor::resolvent, [&] {
    std::vector<OperatorMatrix> Ps;
    for (double x : c.xi) Ps.push_back(ctx.P(x));
    if (!ctx.C_hat) {
      std::vector<CVec> spectra;
      for (const OperatorMatrix& P : Ps) spectra.push_back(compute_spectrum(P.matrix));
      ctx.C_hat = fit_enclosure(spectra);
    }
    ScanGeometry g;
    g.lines = c.scan_lines;
    g.im_min = c.scan_im_min;
    g.im_max = c.scan_im_max;
    g.per_octave = c.scan_per_octave;
    g.margin = c.scan_margin;
    const ResolventScan scan = scan_resolvent(Ps, *ctx.C_hat, g);
    res.reports.push_back(scan.check);
    std::map<int, Table> per;
    for (const ScanPoint& p : scan.points) {
      Table& t = per[p.xi_index];
      if (t.name.empty()) t = {"resolvent_xi" + label(c.xi[static_cast<size_t>(p.xi_index)]), {"re", "im", "norm", "weighted"}, {}};
      t.rows.push_back({p.z.real(), p.z.imag(), p.norm, p.weighted});
    }
    for (auto& [k, t] : per) res.tables.push_back(std::move(t));
    Table oct{"resolvent_octaves", {"xi", "line", "octave", "max_weighted", "max_witness"}, {}};
    for (const OctaveRow& o : scan.table)
      oct.rows.push_back({c.xi[static_cast<size_t>(o.xi_index)], o.line, static_cast<double>(o.octave), o.max_weighted, o.max_witness});
    res.tables.push_back(std::move(oct));
  });
}

// hypo-constant

void hypo_suites(Context& ctx, CommandResult& res) {
  const RunConfig& c = ctx.cfg;
  require_dim(c, "hypo-constant");
  guarded(res.reports, "hypo_constants", anchor::hypo_w4, [&] {
    HypoStudy st;
    st.Ns = c.hypo_n;
    st.L = c.grid_l;
    st.xs = c.xi;
    st.kappas = c.kappa;
    st.K = ctx.majorant_K();
    const HypoReport rep = hypo_study(ctx.kernel(), st);
    res.reports.push_back(rep.check);
    std::map<std::string, Table> per;
    for (const HypoValue& v : rep.values) {
      Table& t = per[v.name];
      if (t.name.empty()) t = {"hypo_" + v.name, {"xi", "kappa", "N", "value"}, {}};
      t.rows.push_back({v.xi, v.kappa, static_cast<double>(v.N), v.value});
    }
    for (const char* name : {"W4", "M142", "N111"})
      if (per.count(name)) res.tables.push_back(std::move(per[name]));
  });
}

// semigroup-check and m164-check

void semigroup_suites(Context& ctx, CommandResult& res) {
  const RunConfig& c = ctx.cfg;
  require_dim(c, "semigroup-check");
  for (double x : c.xi) {
    const std::string name = "semigroup_xi" + label(x);
    guarded(res.reports, name, anchor::semigroup, [&] {
      const OperatorMatrix A = ctx.A(x);
      CheckReport r = renamed(semigroup_bound(assemble_P(A, ctx.K()), ctx.K(), A, c.t), name);
      r.add("xi", x);
      res.reports.push_back(r);
    });
  }
}

void m164_suites(Context& ctx, CommandResult& res) {
  const RunConfig& c = ctx.cfg;
  require_dim(c, "m164-check");
  for (double x : c.xi) {
    const std::string name = "M164_xi" + label(x);
    guarded(res.reports, name, anchor::m164, [&] {
      CheckReport r = renamed(verify_M164(ctx.A(x).matrix, {.eta = 1.0 / 3.0, .samples = c.samples, .seed = c.seed}), name);
      r.add("xi", x);
      res.reports.push_back(r);
    });
  }
}

using Suite = void (*)(Context&, CommandResult&);

const std::vector<std::pair<std::string, Suite>>& suites() {
  static const std::vector<std::pair<std::string, Suite>> s = {
      {"kernel-check", kernel_suites},       {"symbol-check", symbol_suites},
      {"quant-check", quant_suites},         {"m36-check", m36_suites},
      {"assemble", assemble_suites},         {"spectrum", spectrum_suites},
      {"resolvent-scan", resolvent_suites},  {"hypo-constant", hypo_suites},
      {"semigroup-check", semigroup_suites}, {"m164-check", m164_suites},
  };
  return s;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : suites()) n.push_back(name);
    n.push_back("all");
    return n;
  }();
  return names;
}

CommandResult run_command(const std::string& command, const RunConfig& config) {
  CommandResult res;
  res.command = command;
  Context ctx(config);
  if (command == "all") {
    for (const auto& [name, fn] : suites()) {
      const size_t before = res.reports.size();
      fn(ctx, res);
      for (size_t i = before; i < res.reports.size(); ++i) res.reports[i].name = name + "/" + res.reports[i].name;
    }
    return res;
  }
  for (const auto& [name, fn] : suites())
    if (name == command) {
      fn(ctx, res);
      return res;
    }
  throw ConfigError("command: unknown command '" + command + "'");
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Numerical checks for the linearized Landau operator"};
  std::string command, config_path;
  app.add_option("command", command, "one of: kernel-check symbol-check quant-check m36-check assemble spectrum "
                                     "resolvent-scan hypo-constant semigroup-check m164-check all")
      ->required();
  app.add_option("--config", config_path, "flat key = value file; command-line flags override it");
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& [key, def] : config_keys()) opts[key] = app.add_option("--" + key, flags[key], "default " + def);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  RunConfig config;
  try {
    KeyValues kv;
    if (!config_path.empty()) kv = read_config_file(config_path);
    for (const auto& [key, def] : config_keys())
      if (opts[key]->count() > 0) kv.emplace_back(key, flags[key]);
    config = build_config(kv);
    if (std::find(command_names().begin(), command_names().end(), command) == command_names().end())
      throw ConfigError("command: unknown command '" + command + "'");
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    std::filesystem::create_directories(config.out);
    const CommandResult res = run_command(command, config);
    const std::vector<std::string> files = emit_result(res, config);
    for (const CheckReport& r : res.reports) std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "\n";
    for (const std::string& f : files) std::cout << "wrote " << f << "\n";
    for (const std::string& f : res.binaries) std::cout << "wrote " << f << "\n";
    return res.pass() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == ErrorKind::invalid_input || e.kind() == ErrorKind::io ? 2 : 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "out: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace landau::app
