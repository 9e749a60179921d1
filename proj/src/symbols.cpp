#include "landau/symbols.hpp"

#include "landau/anchors.hpp"
#include "landau/parallel.hpp"
#include "landau/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace landau {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double vpow(const Vec& v, double e) { return std::pow(1.0 + v.squaredNorm(), 0.5 * e); }

// (v∧η)·(v∧ξ) by the Lagrange identity, valid in every dimension.
double wedge_dot(const Vec& v, const Vec& eta, const Vec& xi) {
  return v.squaredNorm() * eta.dot(xi) - v.dot(eta) * v.dot(xi);
}

double a_value(const Vec& v, const Vec& eta, const Vec& xi) {
  return 1.0 + v.squaredNorm() + eta.squaredNorm() + xi.squaredNorm() + wedge_sq(v, eta) + wedge_sq(v, xi);
}

double lambda_sq(const Vec& v, const Vec& eta, const Vec& xi, double gamma) {
  return vpow(v, gamma) * a_value(v, eta, xi);
}

// ξ·∂_η λ² = ⟨v⟩^γ (2 ξ·η + 2 (v∧η)·(v∧ξ))
double lambda_sq_slope(const Vec& v, const Vec& eta, const Vec& xi, double gamma) {
  return vpow(v, gamma) * 2.0 * (xi.dot(eta) + wedge_dot(v, eta, xi));
}

const Vec& xi_of(const SymbolSampler& s, Index d, Vec& scratch) {
  if (s.xi.size() == d) return s.xi;
  if (s.xi.size() != 0) throw Error(ErrorKind::invalid_input, "xi dimension mismatch");
  scratch = Vec::Zero(d);
  return scratch;
}

const KernelField& need_kernel(const SymbolSampler& s) {
  if (s.kf == nullptr) throw Error(ErrorKind::invalid_input, "symbol needs a kernel field");
  return *s.kf;
}

// Derivative of a scalar function of one variable by central differences at
// steps h and h/2; the step-halving gate allows 10% plus the roundoff floor.
// Values below value_floor are treated as resolution limited.
struct Derivative {
  double value;
  double noise;
};

template <typename F>
Derivative central_slope(F&& f, double h, double value_floor = 0.0) {
  auto at = [&](double step) {
    const double fp = f(step), fm = f(-step);
    return std::pair{(fp - fm) / (2.0 * step), std::max(std::abs(fp), std::abs(fm))};
  };
  const auto [d1, s1] = at(h);
  const auto [d2, s2] = at(0.5 * h);
  const double noise = std::max(64.0 * kEps * std::max(s1, s2), value_floor) / (0.5 * h);
  if (std::abs(d1 - d2) > 0.1 * std::max(std::abs(d1), std::abs(d2)) + noise)
    throw Error(ErrorKind::derivative_estimation, "finite differences disagree between steps h and h/2");
  return {d2, noise};
}

// Central-difference stencil for ∂^m along one axis: offsets in units of h and weights.
std::vector<std::pair<int, double>> stencil(int m) {
  switch (m) {
    case 0: return {{0, 1.0}};
    case 1: return {{1, 0.5}, {-1, -0.5}};
    case 2: return {{1, 1.0}, {0, -2.0}, {-1, 1.0}};
    case 3: return {{2, 0.5}, {1, -1.0}, {-1, 1.0}, {-2, -0.5}};
    default: throw Error(ErrorKind::invalid_input, "derivative order out of range [0,3]");
  }
}

struct MixedEstimate {
  double value;
  double scale;  // max |p| over the stencil
};

MixedEstimate mixed_partial(const PhasePoint& p, const Vec& z, const std::vector<int>& alpha, const Vec& h) {
  const Index n = z.size();
  std::vector<std::vector<std::pair<int, double>>> st(static_cast<size_t>(n));
  for (Index k = 0; k < n; ++k) st[static_cast<size_t>(k)] = stencil(alpha[static_cast<size_t>(k)]);
  std::vector<size_t> pos(static_cast<size_t>(n), 0);
  double acc = 0.0, scale = 0.0;
  Vec x(n);
  while (true) {
    double w = 1.0;
    for (Index k = 0; k < n; ++k) {
      const auto& [off, c] = st[static_cast<size_t>(k)][pos[static_cast<size_t>(k)]];
      x(k) = z(k) + off * h(k);
      w *= c / std::pow(h(k), alpha[static_cast<size_t>(k)]);
    }
    const double f = p(x);
    acc += w * f;
    scale = std::max(scale, std::abs(f));
    Index k = n - 1;
    while (k >= 0 && ++pos[static_cast<size_t>(k)] == st[static_cast<size_t>(k)].size()) pos[static_cast<size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return {acc, scale};
}

void multi_indices(int n, int order, std::vector<int>& cur, int pos, std::vector<std::vector<int>>& out) {
  if (pos == n) {
    if (order == 0) out.push_back(cur);
    return;
  }
  for (int m = order; m >= 0; --m) {
    cur[static_cast<size_t>(pos)] = m;
    multi_indices(n, order - m, cur, pos + 1, out);
  }
  cur[static_cast<size_t>(pos)] = 0;
}

Vec random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Vec u(d);
  do {
    for (int k = 0; k < d; ++k) u(k) = n01(rng);
  } while (u.norm() < 1e-12);
  return u.normalized();
}

// Largest ratio between consecutive |ξ| decades from 10 upward. The |ξ| = 1
// decade is reported only: there the left sides are still linear in |ξ|.
double decade_growth(const std::vector<double>& c) {
  double worst = 0.0;
  for (size_t k = 2; k < c.size(); ++k) {
    if (c[k] == 0.0) continue;
    worst = std::max(worst, c[k - 1] > 0.0 ? c[k] / c[k - 1] : std::numeric_limits<double>::infinity());
  }
  return worst;
}

double growth(double small, double big) { return small > 0.0 ? big / small - 1.0 : (big > 0.0 ? 1.0 : 0.0); }

}  // namespace

SymbolKind parse_symbol_kind(const std::string& name) {
  for (SymbolKind k : {SymbolKind::lambda, SymbolKind::a_phase, SymbolKind::g1, SymbolKind::g2, SymbolKind::g3,
                       SymbolKind::multiplier_g, SymbolKind::m_average, SymbolKind::user})
    if (name == to_string(k)) return k;
  throw Error(ErrorKind::invalid_input, "symbol must be one of lambda,a_phase,g1,g2,g3,multiplier_g,m_average");
}

const char* to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::lambda: return "lambda";
    case SymbolKind::a_phase: return "a_phase";
    case SymbolKind::g1: return "g1";
    case SymbolKind::g2: return "g2";
    case SymbolKind::g3: return "g3";
    case SymbolKind::multiplier_g: return "multiplier_g";
    case SymbolKind::m_average: return "m_average";
    case SymbolKind::user: return "user";
  }
  return "?";
}

SymbolSampler make_sampler(SymbolKind kind, const Vec& xi, double gamma, double K, const KernelField* kf) {
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0) throw Error(ErrorKind::invalid_input, "gamma out of range [0,1]");
  if (!std::isfinite(K) || K < 0.0) throw Error(ErrorKind::invalid_input, "K must be >= 0");
  require_finite(xi, "xi");
  SymbolSampler s;
  s.kind = kind;
  s.xi = xi;
  s.gamma = gamma;
  s.K = K;
  s.kf = kf;
  return s;
}

double regularizer_exponent(SymbolKind kind, double gamma) {
  switch (kind) {
    case SymbolKind::lambda: return 0.5 * gamma + 1.0;
    case SymbolKind::a_phase: return 2.0;
    case SymbolKind::g1: return 0.0;
    case SymbolKind::g2: return gamma / 6.0 + 1.0;
    case SymbolKind::g3: return gamma / 3.0 + 1.0;
    default: return 0.0;
  }
}

double eval_lambda(const Vec& v, const Vec& eta, const SymbolSampler& s) {
  Vec z;
  return std::sqrt(lambda_sq(v, eta, xi_of(s, v.size(), z), s.gamma));
}

double eval_lambdaK(const Vec& v, const Vec& eta, const SymbolSampler& s) {
  return eval_lambda(v, eta, s) + s.K * vpow(v, regularizer_exponent(SymbolKind::lambda, s.gamma));
}

double eval_a_phase(const Vec& v, const Vec& eta, const SymbolSampler& s) {
  Vec z;
  return a_value(v, eta, xi_of(s, v.size(), z));
}

double eval_g1(const Vec& v, const Vec& eta, const SymbolSampler&) { return 1.0 + japanese(v) + japanese(eta); }

double eval_g2(const Vec& v, const Vec& eta, const SymbolSampler& s) {
  Vec z;
  return 1.0 + std::cbrt(japanese(xi_of(s, v.size(), z))) + japanese(eta);
}

double eval_g3(const Vec& v, const Vec& eta, const SymbolSampler& s) {
  Vec z;
  const double x = japanese(xi_of(s, v.size(), z));
  return 1.0 + std::cbrt(x * x) + eta.squaredNorm() + 1.0;
}

double eval_cutoff_psi(double t) {
  const double x = std::abs(t);
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double a = smooth_step_h(2.0 - x), b = smooth_step_h(x - 1.0);
  return a / (a + b);
}

double eval_cutoff_psi_prime(double t) {
  const double x = std::abs(t);
  if (x <= 1.0 || x >= 2.0) return 0.0;
  // ψ = a/(a+b) with a = h(2−x), b = h(x−1), h'(y) = h(y)/y²
  const double p = 2.0 - x, q = x - 1.0;
  const double a = smooth_step_h(p), b = smooth_step_h(q);
  const double da = -a / (p * p), db = b / (q * q);
  const double d = (da * b - a * db) / ((a + b) * (a + b));
  return t < 0.0 ? -d : d;
}

KernelPoint kernel_point(const Vec& v, const KernelField& kf) {
  const KernelField::Moments m = eval_moments(v, kf);
  KernelPoint kp;
  kp.abar = m.abar;
  kp.B = principal_sqrt(m.abar);
  kp.F = 0.25 * v.dot(m.abar * v) - 0.5 * (m.abar.trace() + v.dot(m.div)) + kf.M() * chi_R(v.norm(), kf.R());
  return kp;
}

double eval_multiplier_g(const Vec& v, const Vec& eta, const SymbolSampler& s, const KernelPoint& kp) {
  Vec z;
  const Vec& xi = xi_of(s, v.size(), z);
  const double lam = std::sqrt(lambda_sq(v, eta, xi, s.gamma));
  const Vec Beta = kp.B * eta;
  const double omega = (Beta.squaredNorm() + kp.F) / std::pow(lam, 2.0 / 3.0);
  const double psi = eval_cutoff_psi(omega);
  if (psi == 0.0) return 0.0;
  return -(kp.B * xi).dot(Beta) * std::pow(lam, -4.0 / 3.0) * psi;
}

double eval_multiplier_g(const Vec& v, const Vec& eta, const SymbolSampler& s) {
  return eval_multiplier_g(v, eta, s, kernel_point(v, need_kernel(s)));
}

BracketTerms eval_bracket_xi_v_g(const Vec& v, const Vec& eta, const SymbolSampler& s, const KernelPoint& kp) {
  Vec z;
  const Vec& xi = xi_of(s, v.size(), z);
  const double l2 = lambda_sq(v, eta, xi, s.gamma);
  const double D = lambda_sq_slope(v, eta, xi, s.gamma);
  const Vec Bxi = kp.B * xi, Beta = kp.B * eta;
  const double cross = Bxi.dot(Beta);
  const double num = Beta.squaredNorm() + kp.F;
  // ξ·∂_η λ^m = (m/2) λ^{m−2} D
  const double l_m43 = std::pow(l2, -2.0 / 3.0);
  const double l_m23 = std::pow(l2, -1.0 / 3.0);
  const double dl_m43 = (-2.0 / 3.0) * std::pow(l2, -5.0 / 3.0) * D;
  const double dl_m23 = (-1.0 / 3.0) * std::pow(l2, -4.0 / 3.0) * D;
  const double omega = num * l_m23;
  const double psi = eval_cutoff_psi(omega);
  const double dpsi = eval_cutoff_psi_prime(omega) * (2.0 * cross * l_m23 + num * dl_m23);
  BracketTerms t;
  t.psi_slope = dpsi;
  t.leading = Bxi.squaredNorm() * l_m43 * psi;
  t.bracket = cross * dl_m43 * psi + t.leading + cross * l_m43 * dpsi;
  return t;
}

namespace {

// B at the Gaussian nodes around v, reusable for many ξ.
struct AverageNodes {
  std::vector<Mat> B;
  Vec w;
};

AverageNodes average_nodes(const Vec& v, const KernelField& kf, int order) {
  const TensorRule rule = unit_gaussian_rule(static_cast<int>(v.size()), order);
  AverageNodes n;
  n.w = rule.weights;
  n.B.reserve(static_cast<size_t>(rule.weights.size()));
  for (Index q = 0; q < rule.weights.size(); ++q) n.B.push_back(principal_sqrt(eval_moments(v + rule.nodes.col(q), kf).abar));
  return n;
}

double average_value(const AverageNodes& n, const Vec& xi) {
  double acc = 0.0;
  for (size_t q = 0; q < n.B.size(); ++q) acc += n.w(static_cast<Index>(q)) * std::cbrt(1.0 + (n.B[q] * xi).squaredNorm());
  return std::sqrt(acc);
}

}  // namespace

double eval_m_average(const Vec& v, const SymbolSampler& s) {
  const KernelField& kf = need_kernel(s);
  Vec z;
  const Vec& xi = xi_of(s, v.size(), z);
  if (xi.squaredNorm() == 0.0) return 1.0;
  const KernelField fast = kf.unchecked();
  const double m = average_value(average_nodes(v, fast, s.m_order), xi);
  const double ref = average_value(average_nodes(v, fast, s.m_order + 4), xi);
  if (std::abs(m - ref) > 1e-4 * ref)
    throw Error(ErrorKind::quadrature, "m(v,xi) Gaussian rule orders disagree");
  return m;
}

double SymbolSampler::operator()(const Vec& v, const Vec& eta) const {
  double base = 0.0;
  switch (kind) {
    case SymbolKind::lambda: base = eval_lambda(v, eta, *this); break;
    case SymbolKind::a_phase: base = eval_a_phase(v, eta, *this); break;
    case SymbolKind::g1: base = eval_g1(v, eta, *this); break;
    case SymbolKind::g2: base = eval_g2(v, eta, *this); break;
    case SymbolKind::g3: base = eval_g3(v, eta, *this); break;
    case SymbolKind::multiplier_g: return eval_multiplier_g(v, eta, *this);
    case SymbolKind::m_average: return eval_m_average(v, *this);
    case SymbolKind::user:
      if (!user) throw Error(ErrorKind::invalid_input, "user symbol is empty");
      return user(v, eta);
  }
  return K > 0.0 ? base + K * vpow(v, regularizer_exponent(kind, gamma)) : base;
}

double default_admissibility_exponent(SymbolKind kind, double gamma) {
  switch (kind) {
    case SymbolKind::lambda: return 0.5 * (4.0 + gamma);
    case SymbolKind::a_phase: return 4.0;
    case SymbolKind::g3: return 2.0;
    default: return 1.0;
  }
}

CheckReport verify_weight_admissible(const SymbolSampler& s, const PairSamples& pairs, double N_exp) {
  if (pairs.count < 1) throw Error(ErrorKind::invalid_input, "pair count must be >= 1");
  if (!std::isfinite(N_exp) || N_exp < 0.0) throw Error(ErrorKind::invalid_input, "admissibility exponent must be >= 0");
  const int d = s.kf ? s.kf->dim() : static_cast<int>(std::max<Index>(1, s.xi.size()));
  const Index total = 4 * static_cast<Index>(pairs.count);
  std::vector<Vec> X(static_cast<size_t>(total)), Y(static_cast<size_t>(total));
  std::mt19937_64 rng(pairs.seed);
  std::uniform_real_distribution<double> box(-pairs.box, pairs.box), u01(0.0, 1.0);
  for (Index i = 0; i < total; ++i) {
    Vec x(2 * d), y(2 * d);
    for (int k = 0; k < 2 * d; ++k) x(k) = box(rng);
    if (i % 2 == 0) {
      const double r = std::pow(10.0, -2.0 + u01(rng) * (2.0 + std::log10(pairs.box)));
      y = x + r * random_unit(2 * d, rng);
    } else {
      for (int k = 0; k < 2 * d; ++k) y(k) = box(rng);
    }
    X[static_cast<size_t>(i)] = std::move(x);
    Y[static_cast<size_t>(i)] = std::move(y);
  }
  Vec ratio(total);
  parallel_for(total, [&](Index i) {
    const Vec& x = X[static_cast<size_t>(i)];
    const Vec& y = Y[static_cast<size_t>(i)];
    const double mx = s(x.head(d), x.tail(d)), my = s(y.head(d), y.tail(d));
    ratio(i) = mx / (my * std::pow(1.0 + (x - y).squaredNorm(), 0.5 * N_exp));
  });
  const double sup1 = ratio.head(pairs.count).maxCoeff(), sup4 = ratio.maxCoeff();
  CheckReport r("weight_admissible", anchor::admissible);
  r.add("N", N_exp);
  r.add("pairs", static_cast<double>(pairs.count));
  r.add("sup_ratio", sup1);
  r.add("sup_ratio_x4", sup4);
  r.add("growth", growth(sup1, sup4));
  r.add("tol_growth", 0.1);
  r.require(std::isfinite(sup4), "ratio not finite");
  r.require(growth(sup1, sup4) <= 0.1, "sup ratio grows by more than 10% when samples quadruple");
  return r;
}

std::vector<Vec> make_phase_probes(int dim, const ProbeSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> vb(-spec.vbox, spec.vbox), u01(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(spec.count));
  const double top = std::log10(std::max(spec.eta_max, 1e-2));
  for (int i = 0; i < spec.count; ++i) {
    Vec z(2 * dim);
    for (int k = 0; k < dim; ++k) z(k) = vb(rng);
    z.tail(dim) = std::pow(10.0, -2.0 + u01(rng) * (top + 2.0)) * random_unit(dim, rng);
    out.push_back(std::move(z));
  }
  return out;
}

CheckReport verify_symbol_class(const PhasePoint& p, const PhasePoint& weight, int dim, int max_order,
                                const std::vector<Vec>& probes, const std::vector<Vec>& probes_doubled) {
  if (max_order < 1 || max_order > 3) throw Error(ErrorKind::invalid_input, "max_order out of range [1,3]");
  const int n = 2 * dim;
  std::vector<std::vector<int>> alphas;
  std::vector<int> cur(static_cast<size_t>(n), 0);
  for (int m = 1; m <= max_order; ++m) multi_indices(n, m, cur, 0, alphas);

  auto sweep = [&](const std::vector<Vec>& zs) {
    Vec worst(static_cast<Index>(zs.size()));
    parallel_for(static_cast<Index>(zs.size()), [&](Index i) {
      const Vec& z = zs[static_cast<size_t>(i)];
      if (z.size() != n) throw Error(ErrorKind::invalid_input, "probe dimension mismatch");
      Vec h(n);
      for (int k = 0; k < n; ++k) h(k) = 1e-4 * std::max(1.0, std::abs(z(k)));
      const double w = weight(z);
      double c = 0.0;
      for (const auto& a : alphas) {
        int order = 0;
        for (int m : a) order += m;
        const MixedEstimate e1 = mixed_partial(p, z, a, h);
        const MixedEstimate e2 = mixed_partial(p, z, a, 0.5 * h);
        const double noise = 64.0 * kEps * std::max(e1.scale, e2.scale) / std::pow(0.5 * h.minCoeff(), order);
        if (std::abs(e1.value - e2.value) > 0.1 * std::max(std::abs(e1.value), std::abs(e2.value)) + noise)
          throw Error(ErrorKind::derivative_estimation, "finite differences disagree between steps h and h/2");
        // values inside the roundoff floor count as zero
        const double est = std::abs(e1.value) > noise ? std::abs(e1.value) : 0.0;
        c = std::max(c, est / w);
      }
      worst(i) = c;
    });
    return worst.size() ? worst.maxCoeff() : 0.0;
  };
  const double c1 = sweep(probes), c2 = sweep(probes_doubled);
  CheckReport r("symbol_class", anchor::symbol_class);
  r.add("max_order", max_order);
  r.add("probes", static_cast<double>(probes.size()));
  r.add("constant", c1);
  r.add("constant_x2", c2);
  r.add("drift", growth(c1, c2));
  r.add("tol_drift", 0.1);
  r.require(std::isfinite(c2), "derivative ratio not finite");
  r.require(growth(c1, c2) <= 0.1, "constant drifts by more than 10% under probe doubling");
  return r;
}

CheckReport verify_derivative_bounds(const SymbolSampler& s, const ProbeSpec& spec) {
  const KernelField& kf = need_kernel(s);
  const int d = kf.dim();
  const double gamma = s.gamma;
  constexpr int decades = 4;
  const double powers[3] = {1.0 / 3.0, 2.0 / 3.0, -4.0 / 3.0};

  ProbeSpec big = spec;
  big.count = 4 * spec.count;
  const std::vector<Vec> probes = make_phase_probes(d, big);
  std::vector<Vec> xis(probes.size());
  {
    std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    for (size_t i = 0; i < probes.size(); ++i) xis[i] = std::pow(10.0, static_cast<double>(i % decades)) * random_unit(d, rng);
  }

  // per probe: (i) worst over powers, (ii), (iii), (iv)
  Mat c(static_cast<Index>(probes.size()), 4);
  parallel_for(static_cast<Index>(probes.size()), [&](Index i) {
    const Vec v = probes[static_cast<size_t>(i)].head(d);
    const Vec eta = probes[static_cast<size_t>(i)].tail(d);
    const Vec& xi = xis[static_cast<size_t>(i)];
    const double scale = std::max(1.0, eta.norm());
    const double sh = 1e-4 * scale / std::max(1.0, xi.norm());

    double ci = 0.0;
    for (double m : powers) {
      auto f = [&](double t) { return std::pow(lambda_sq(v, eta + t * xi, xi, gamma), 0.5 * m); };
      const Derivative dv = central_slope(f, sh);
      const double val = std::abs(dv.value) > dv.noise ? std::abs(dv.value) : 0.0;
      ci = std::max(ci, val / f(0.0));
    }

    Vec grad(d);
    for (int k = 0; k < d; ++k) {
      auto f = [&](double t) {
        Vec e = eta;
        e(k) += t;
        return std::sqrt(lambda_sq(v, e, xi, gamma));
      };
      grad(k) = central_slope(f, 1e-4 * scale).value;
    }
    const double lam = std::sqrt(lambda_sq(v, eta, xi, gamma));
    const double cii = grad.norm() / (vpow(v, 0.25 * gamma + 0.5) * std::sqrt(lam));

    const KernelPoint kp = kernel_point(v, kf);
    const double rhs = 1.0 + (kp.B * eta).squaredNorm() + kp.F;
    auto psi_at = [&](double t) {
      const Vec e = eta + t * xi;
      const double om = ((kp.B * e).squaredNorm() + kp.F) / std::cbrt(lambda_sq(v, e, xi, gamma));
      return eval_cutoff_psi(om);
    };
    const Derivative dpsi = central_slope(psi_at, sh, 1e-9);
    const double ciii = (std::abs(dpsi.value) > dpsi.noise ? std::abs(dpsi.value) : 0.0) / rhs;

    SymbolSampler local = s;
    local.xi = xi;
    const BracketTerms bt = eval_bracket_xi_v_g(v, eta, local, kp);
    const double civ = std::abs(bt.bracket - bt.leading) / rhs;
    c.row(i) << ci, cii, ciii, civ;
  });

  const char* names[4] = {"i", "ii", "iii", "iv"};
  CheckReport r("derivative_bounds", anchor::derivative_bounds);
  r.add("probes", spec.count);
  r.add("tol_drift", 0.1);
  r.add("tol_decade_growth", 2.0);
  const Index n1 = spec.count;
  for (int j = 0; j < 4; ++j) {
    const double c1 = c.col(j).head(n1).maxCoeff(), c4 = c.col(j).maxCoeff();
    std::vector<double> per(decades, 0.0);
    for (Index i = 0; i < c.rows(); ++i) per[static_cast<size_t>(i % decades)] = std::max(per[static_cast<size_t>(i % decades)], c(i, j));
    const std::string k = names[j];
    r.add("C_" + k, c1);
    r.add("C_" + k + "_x4", c4);
    r.add("drift_" + k, growth(c1, c4));
    for (int q = 0; q < decades; ++q) r.add("C_" + k + "_decade" + std::to_string(q), per[static_cast<size_t>(q)]);
    r.add("decade_growth_" + k, decade_growth(per));
    r.require(std::isfinite(c4), "constant (" + k + ") not finite");
    r.require(growth(c1, c4) <= 0.1, "constant (" + k + ") drifts by more than 10% when probes quadruple");
    r.require(decade_growth(per) <= 2.0, "constant (" + k + ") grows by more than a factor 2 per xi decade");
  }
  return r;
}

CheckReport verify_m_average(const SymbolSampler& s, const ProbeSpec& spec) {
  const KernelField& kf = need_kernel(s);
  const KernelField fast = kf.unchecked();
  const int d = kf.dim();
  const int nv = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(spec.count))));
  const int per_v = std::max(1, spec.count / nv);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> vb(-spec.vbox, spec.vbox), u01(0.0, 1.0);
  std::vector<Vec> vs(static_cast<size_t>(nv));
  std::vector<std::vector<Vec>> xis(static_cast<size_t>(nv));
  const double top = std::log10(std::max(spec.xi_max, 1.0));
  for (int i = 0; i < nv; ++i) {
    Vec v(d);
    for (int k = 0; k < d; ++k) v(k) = vb(rng);
    vs[static_cast<size_t>(i)] = v;
    for (int j = 0; j < per_v; ++j)
      xis[static_cast<size_t>(i)].push_back(std::pow(10.0, -2.0 + u01(rng) * (top + 2.0)) * random_unit(d, rng));
  }
  Vec ratio(nv), mmin(nv), qdef(nv);
  parallel_for(nv, [&](Index i) {
    const Vec& v = vs[static_cast<size_t>(i)];
    const AverageNodes nodes = average_nodes(v, fast, s.m_order);
    const AverageNodes fine = average_nodes(v, fast, s.m_order + 4);
    const Mat B = principal_sqrt(eval_moments(v, fast).abar);
    double worst = 0.0, low = std::numeric_limits<double>::infinity(), def = 0.0;
    for (const Vec& xi : xis[static_cast<size_t>(i)]) {
      const double m = average_value(nodes, xi), m2 = average_value(fine, xi);
      def = std::max(def, std::abs(m - m2) / m2);
      worst = std::max(worst, std::pow(1.0 + (B * xi).squaredNorm(), 1.0 / 6.0) / m);
      low = std::min(low, m);
    }
    ratio(i) = worst;
    mmin(i) = low;
    qdef(i) = def;
  });
  CheckReport r("m_average", anchor::m_average);
  r.add("samples", static_cast<double>(nv) * per_v);
  r.add("C_hat", ratio.maxCoeff());
  r.add("m_min", mmin.minCoeff());
  r.add("quadrature_defect", qdef.maxCoeff());
  r.add("tol_quadrature_defect", 1e-4);
  r.require(std::isfinite(ratio.maxCoeff()), "ratio not finite");
  r.require(mmin.minCoeff() >= 1.0 - 1e-12, "m below 1");
  r.require(qdef.maxCoeff() <= 1e-4, "Gaussian rule orders disagree");
  return r;
}

CheckReport verify_multiplier_bounded(const SymbolSampler& s, const ProbeSpec& spec) {
  const KernelField& kf = need_kernel(s);
  const int d = kf.dim();
  const int nv = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(spec.count))));
  const int per_v = std::max(1, spec.count / nv);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> vb(-spec.vbox, spec.vbox), u01(0.0, 1.0);
  const double xtop = std::log10(std::max(spec.xi_max, 1.0));
  const double etop = std::log10(std::max(spec.eta_max, 1.0));
  std::vector<Vec> vs(static_cast<size_t>(nv));
  std::vector<std::vector<std::pair<Vec, Vec>>> pts(static_cast<size_t>(nv));
  for (int i = 0; i < nv; ++i) {
    Vec v(d);
    for (int k = 0; k < d; ++k) v(k) = vb(rng);
    vs[static_cast<size_t>(i)] = v;
    for (int j = 0; j < per_v; ++j) {
      Vec eta = std::pow(10.0, -2.0 + u01(rng) * (etop + 2.0)) * random_unit(d, rng);
      Vec xi = std::pow(10.0, u01(rng) * xtop) * random_unit(d, rng);
      pts[static_cast<size_t>(i)].emplace_back(std::move(eta), std::move(xi));
    }
  }
  Vec sup(nv), odd(nv);
  parallel_for(nv, [&](Index i) {
    const Vec& v = vs[static_cast<size_t>(i)];
    const KernelPoint kp = kernel_point(v, kf);
    SymbolSampler local = s;
    double best = 0.0, defect = 0.0;
    for (const auto& [eta, xi] : pts[static_cast<size_t>(i)]) {
      local.xi = xi;
      const double g = eval_multiplier_g(v, eta, local, kp);
      defect = std::max(defect, std::abs(g + eval_multiplier_g(v, -eta, local, kp)));
      best = std::max(best, std::abs(g));
    }
    sup(i) = best;
    odd(i) = defect;
  });
  const Index half = nv / 2;
  const double c_half = sup.head(half).maxCoeff(), c_all = sup.maxCoeff();
  CheckReport r("multiplier_bounded", anchor::multiplier_g);
  r.add("samples", static_cast<double>(nv) * per_v);
  r.add("sup_abs_g_half", c_half);
  r.add("sup_abs_g", c_all);
  r.add("drift", growth(c_half, c_all));
  r.add("oddness_defect", odd.maxCoeff());
  r.add("tol_drift", 0.1);
  r.require(std::isfinite(c_all), "sup |g| not finite");
  r.require(growth(c_half, c_all) <= 0.1, "sup |g| drifts by more than 10% under sample doubling");
  r.require(odd.maxCoeff() <= 1e-12 * std::max(1.0, c_all), "g is not odd in eta");
  return r;
}

}  // namespace landau
