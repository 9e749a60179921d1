#include "landau/kernel.hpp"

#include "landau/anchors.hpp"
#include "landau/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>

namespace landau {

struct KernelField::Rules {
  // polar route around v: per direction ω the radial integral runs over
  // r ∈ [0, |ω·v| + radial_span] with Gauss–Legendre nodes
  GaussRule radial;  // on [0, 1], rescaled per direction
  Mat directions;    // unit vectors on a half sphere, columns
  Vec direction_w;   // surface weights on the half sphere
  TensorRule tensor;
};

namespace {

constexpr double radial_span = 12.0;

std::shared_ptr<const KernelField::Rules> build_rules(int dim, int order) {
  auto rules = std::make_shared<KernelField::Rules>();
  rules->radial = gauss_legendre(2 * order, 0.0, 1.0);
  const int nphi = 2 * order;
  const double wphi = M_PI / nphi;
  if (dim == 2) {
    rules->directions.resize(2, nphi);
    rules->direction_w = Vec::Constant(nphi, wphi);
    for (int j = 0; j < nphi; ++j) {
      const double phi = j * wphi;
      rules->directions.col(j) << std::cos(phi), std::sin(phi);
    }
  } else {
    const GaussRule cth = gauss_legendre(order);
    rules->directions.resize(3, order * nphi);
    rules->direction_w.resize(order * nphi);
    Index q = 0;
    for (int i = 0; i < order; ++i) {
      const double c = cth.nodes(i), s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int j = 0; j < nphi; ++j, ++q) {
        const double phi = j * wphi;
        rules->directions.col(q) << c, s * std::cos(phi), s * std::sin(phi);
        rules->direction_w(q) = cth.weights(i) * wphi;
      }
    }
  }
  rules->tensor = maxwellian_rule(dim, order);
  return rules;
}

// ā(v) = ∫ a(u) μ(v − u) du with u = rω. Pairing ±ω gives, per direction,
// ∫_0^∞ r^{γ+d+1} [e^{−(r−c)²/2} + e^{−(r+c)²/2}] dr · e^{−(|v|²−c²)/2}, c = ω·v.
KernelField::Moments polar_moments(const Vec& v, double gamma, const KernelField::Rules& r) {
  const Index d = v.size();
  const double p = gamma + static_cast<double>(d) + 1.0;
  const double v2 = v.squaredNorm();
  const double norm = std::pow(2.0 * M_PI, -0.5 * static_cast<double>(d));
  double total = 0.0;
  Mat outer = Mat::Zero(d, d);
  Vec div = Vec::Zero(d);
  const Index nd = r.directions.cols();
  for (Index j = 0; j < nd; ++j) {
    const auto w = r.directions.col(j);
    const double c = w.dot(v);
    const double len = std::abs(c) + radial_span;
    double s = 0.0;
    for (Index k = 0; k < r.radial.nodes.size(); ++k) {
      const double rr = len * r.radial.nodes(k);
      s += r.radial.weights(k) * std::pow(rr, p) *
           (std::exp(-0.5 * (rr - c) * (rr - c)) + std::exp(-0.5 * (rr + c) * (rr + c)));
    }
    s *= len * r.direction_w(j) * std::exp(-0.5 * (v2 - c * c));
    total += s;
    outer.noalias() += s * w * w.transpose();
    // a(±rω)(−(v ∓ rω)) = −r^{γ+2}(I − ωωᵀ)v for both members of the pair
    div.noalias() -= s * (v - w * c);
  }
  KernelField::Moments m;
  m.abar = norm * (total * Mat::Identity(d, d) - outer);
  m.div = norm * div;
  return m;
}

KernelField::Moments tensor_moments(const Vec& v, double gamma, const TensorRule& t) {
  const Index d = v.size();
  Mat abar = Mat::Zero(d, d);
  Vec div = Vec::Zero(d);
  Vec u(d);
  for (Index q = 0; q < t.weights.size(); ++q) {
    u = v - t.nodes.col(q);
    const double r2 = u.squaredNorm();
    if (r2 == 0.0) continue;
    const double s = t.weights(q) * std::pow(r2, 0.5 * gamma);
    abar.noalias() += s * (r2 * Mat::Identity(d, d) - u * u.transpose());
    // ∂_j μ(w) = −w_j μ(w)
    const double uw = u.dot(t.nodes.col(q));
    div.noalias() -= s * (r2 * t.nodes.col(q) - u * uw);
  }
  return {abar, div};
}

}  // namespace

KernelField::KernelField(double gamma, int dim, KernelOptions opts) : gamma_(gamma), dim_(dim), opts_(opts) {
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0)
    throw Error(ErrorKind::invalid_input, "gamma out of range [0,1]");
  if (dim != 2 && dim != 3) throw Error(ErrorKind::invalid_input, "dim must be 2 or 3 for the kernel");
  if (opts.order < 20 || opts.order > 120) throw Error(ErrorKind::invalid_input, "quadrature order out of range [20,120]");
  if (!std::isfinite(opts.M) || opts.M < 0.0) throw Error(ErrorKind::invalid_input, "M must be >= 0");
  if (!std::isfinite(opts.R) || opts.R < 1.0) throw Error(ErrorKind::invalid_input, "R must be >= 1");
  coarse_ = build_rules(dim, opts.order);
  if (opts.self_check) fine_ = build_rules(dim, opts.order + 10);
}

KernelField KernelField::with_cutoff(double M, double R) const {
  KernelOptions o = opts_;
  o.M = M;
  o.R = R;
  return KernelField(gamma_, dim_, o);
}

KernelField KernelField::with_order(int order) const {
  KernelOptions o = opts_;
  o.order = order;
  return KernelField(gamma_, dim_, o);
}

KernelField KernelField::unchecked() const {
  KernelOptions o = opts_;
  o.self_check = false;
  return KernelField(gamma_, dim_, o);
}

KernelField::Moments KernelField::moments(const Vec& v, bool fine) const {
  if (v.size() != dim_) throw Error(ErrorKind::invalid_input, "velocity dimension mismatch");
  require_finite(v, "velocity");
  const Rules& r = fine ? *fine_ : *coarse_;
  if (v.norm() < polar_radius) return polar_moments(v, gamma_, r);
  return tensor_moments(v, gamma_, r.tensor);
}

double abar_consistency(const Vec& v, const KernelField& kf) {
  const KernelField::Moments a = kf.moments(v, false);
  const KernelField::Moments b =
      kf.self_check() ? kf.moments(v, true) : kf.with_order(kf.order() + 10).moments(v, false);
  const double scale = std::max(b.abar.cwiseAbs().maxCoeff(), 1e-300);
  return (a.abar - b.abar).cwiseAbs().maxCoeff() / scale;
}

KernelField::Moments eval_moments(const Vec& v, const KernelField& kf) {
  KernelField::Moments a = kf.moments(v, false);
  if (kf.self_check()) {
    const KernelField::Moments b = kf.moments(v, true);
    const double scale = std::max(b.abar.cwiseAbs().maxCoeff(), 1e-300);
    const double rel = (a.abar - b.abar).cwiseAbs().maxCoeff() / scale;
    if (rel > 1e-6)
      throw Error(ErrorKind::quadrature, "abar orders q and q+10 disagree (rel " + std::to_string(rel) + ")");
  }
  return a;
}

Mat eval_abar(const Vec& v, const KernelField& kf) { return eval_moments(v, kf).abar; }

Mat principal_sqrt(const Mat& spd) {
  Eigen::SelfAdjointEigenSolver<Mat> es(spd);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw Error(ErrorKind::kernel_assembly, "matrix is not symmetric positive definite");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

EigSplit split_matrix(const Mat& abar, const Vec& v) {
  Eigen::SelfAdjointEigenSolver<Mat> es(abar);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw Error(ErrorKind::kernel_assembly, "abar is not symmetric positive definite");
  const Index d = abar.rows();
  EigSplit s;
  if (v.norm() < 1e-8) {
    s.ell1 = s.ell2 = es.eigenvalues()(0);
    s.frame = Mat::Identity(d, d);
    return s;
  }
  const Vec vhat = v.normalized();
  Index best = 0;
  double cmax = -1.0;
  for (Index j = 0; j < d; ++j) {
    const double c = std::abs(es.eigenvectors().col(j).dot(vhat));
    if (c > cmax) {
      cmax = c;
      best = j;
    }
  }
  s.frame.resize(d, d);
  s.frame.col(0) = es.eigenvectors().col(best);
  s.ell1 = es.eigenvalues()(best);
  double rest = 0.0;
  for (Index j = 0, c = 1; j < d; ++j) {
    if (j == best) continue;
    s.frame.col(c++) = es.eigenvectors().col(j);
    rest += es.eigenvalues()(j);
  }
  s.ell2 = rest / static_cast<double>(d - 1);
  return s;
}

std::pair<EigSplit, Mat> spectral_split(const Vec& v, const KernelField& kf) {
  const Mat abar = eval_abar(v, kf);
  return {split_matrix(abar, v), principal_sqrt(abar)};
}

double chi_R(double r, double R) {
  const double x = r / R;
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double a = smooth_step_h(2.0 - x), b = smooth_step_h(x - 1.0);
  return a / (a + b);
}

double eval_F0(const Vec& v, const KernelField& kf) {
  const KernelField::Moments m = eval_moments(v, kf);
  return 0.25 * v.dot(m.abar * v) - 0.5 * (m.abar.trace() + v.dot(m.div));
}

double eval_F(const Vec& v, const KernelField& kf) { return eval_F0(v, kf) + kf.M() * chi_R(v.norm(), kf.R()); }

Calibration calibrate_MR(double c0, const KernelField& kf, double box) {
  if (!std::isfinite(c0) || c0 <= 0.0) throw Error(ErrorKind::invalid_input, "c0 must be > 0");
  if (!std::isfinite(box) || box <= 0.0) throw Error(ErrorKind::invalid_input, "probe box must be > 0");
  const int d = kf.dim();
  const double gp2 = kf.gamma() + 2.0;

  Vec far = Vec::Zero(d);
  far(0) = 1e3;
  const double asym = eval_F0(far, kf) / std::pow(japanese(far), gp2);
  if (c0 >= asym)
    throw Error(ErrorKind::unreachable_target,
                "c0 exceeds the asymptotic ratio F/<v>^(gamma+2) = " + std::to_string(asym));

  const int nr = 97;
  std::vector<Vec> probes;
  Vec diag = Vec::Ones(d).normalized();
  Vec axis = Vec::Zero(d);
  axis(0) = 1.0;
  for (int k = 0; k < nr; ++k) {
    const double r = 4.0 * box * k / (nr - 1);
    probes.push_back(r * axis);
    probes.push_back(r * diag);
  }
  const Index np = static_cast<Index>(probes.size());
  Vec f0(np), target(np), radius(np);
  parallel_for(np, [&](Index i) {
    f0(i) = eval_F0(probes[i], kf);
    target(i) = c0 * std::pow(japanese(probes[i]), gp2);
    radius(i) = probes[i].norm();
  });

  for (int em = 0; em <= 16; ++em) {
    const double M = std::ldexp(1.0, em);
    for (int er = 0; er <= 16; ++er) {
      const double R = std::ldexp(1.0, er);
      double worst = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < np; ++i) worst = std::min(worst, f0(i) + M * chi_R(radius(i), R) - target(i));
      if (worst >= 0.0) return {M, R, asym, worst};
    }
  }
  throw Error(ErrorKind::unreachable_target, "no (M,R) up to 2^16 satisfies the F lower bound");
}

KernelProbeSet make_kernel_probes(int dim, int count, double vmax, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  KernelProbeSet p;
  for (int k = 0; k < count; ++k) {
    Vec dir(dim), eta(dim);
    for (int j = 0; j < dim; ++j) dir(j) = gauss(rng);
    for (int j = 0; j < dim; ++j) eta(j) = gauss(rng);
    const double r = vmax * uni(rng);
    p.v.push_back(r * dir.normalized());
    p.eta.push_back(eta.normalized());
  }
  return p;
}

CheckReport verify_kernel_bounds(const KernelField& kf, const KernelProbeSet& probes) {
  CheckReport rep("kernel_bounds", anchor::coercivity);
  const Index n = static_cast<Index>(probes.v.size());
  Vec coer(n), l1(n), l2(n), sym(n), sqrt_err(n);
  parallel_for(n, [&](Index i) {
    const Vec& v = probes.v[i];
    const Vec& eta = probes.eta[i];
    const Mat A = eval_abar(v, kf);
    const double wg = std::pow(japanese(v), kf.gamma());
    coer(i) = eta.dot(A * eta) / (wg * (eta.squaredNorm() + wedge_sq(v, eta)));
    const EigSplit s = split_matrix(A, v);
    l1(i) = s.ell1 / wg;
    l2(i) = v.norm() > 1.0 ? s.ell2 / (wg * japanese(v) * japanese(v)) : std::numeric_limits<double>::quiet_NaN();
    sym(i) = (A - A.transpose()).cwiseAbs().maxCoeff() / A.cwiseAbs().maxCoeff();
    const Mat B = principal_sqrt(A);
    sqrt_err(i) = (B.transpose() * B - A).cwiseAbs().maxCoeff() / A.cwiseAbs().maxCoeff();
  });
  auto nanmin = [](const Vec& x) {
    double m = std::numeric_limits<double>::infinity();
    for (double e : x)
      if (!std::isnan(e)) m = std::min(m, e);
    return m;
  };
  auto nanmax = [](const Vec& x) {
    double m = -std::numeric_limits<double>::infinity();
    for (double e : x)
      if (!std::isnan(e)) m = std::max(m, e);
    return m;
  };
  rep.add("probes", static_cast<double>(n));
  rep.add("coercivity_min", nanmin(coer));
  rep.add("coercivity_max", nanmax(coer));
  rep.add("ell1_ratio_min", nanmin(l1));
  rep.add("ell1_ratio_max", nanmax(l1));
  rep.add("ell2_ratio_min", nanmin(l2));
  rep.add("ell2_ratio_max", nanmax(l2));
  rep.add("symmetry_defect_max", nanmax(sym));
  rep.add("sqrt_defect_max", nanmax(sqrt_err));
  rep.add("tol_sqrt_defect", 1e-12);
  rep.require(nanmin(coer) > 0.0, "coercivity ratio not bounded below by a positive constant");
  rep.require(nanmin(l2) > 0.0, "ell2/<v>^(gamma+2) not bounded below for |v| > 1");
  rep.require(nanmax(sqrt_err) <= 1e-12, "B^T B differs from abar beyond 1e-12");
  return rep;
}

}  // namespace landau
