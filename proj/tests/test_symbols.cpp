#include "doctest.h"

#include "landau/symbols.hpp"

#include <random>

using namespace landau;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

const KernelField& calibrated() {
  static const KernelField kf = [] {
    const KernelField base(0.0, 2, {.order = 20});
    const Calibration c = calibrate_MR(0.125, base);
    return base.with_cutoff(c.M, c.R);
  }();
  return kf;
}

// −ξ·∂_η g by a five-point stencil along ξ.
double bracket_fd(const Vec& v, const Vec& eta, const SymbolSampler& s, const KernelPoint& kp) {
  const double h = 1e-3 * std::max(1.0, eta.norm()) / std::max(1.0, s.xi.norm());
  auto g = [&](double t) { return eval_multiplier_g(v, eta + t * s.xi, s, kp); };
  return -(-g(2 * h) + 8 * g(h) - 8 * g(-h) + g(-2 * h)) / (12 * h);
}

}  // namespace

TEST_CASE("lambda and the weights at simple points") {
  for (double gamma : {0.0, 0.7}) {
    const SymbolSampler s = make_sampler(SymbolKind::lambda, Vec::Zero(3), gamma);
    CHECK(eval_lambda(Vec::Zero(3), Vec::Zero(3), s) == 1.0);
  }
  const Vec v = vec({1.0, 2.0, 0.0}), eta = vec({0.0, 1.0, 3.0}), xi = vec({2.0, 0.0, 1.0});
  const SymbolSampler s = make_sampler(SymbolKind::lambda, xi, 0.0);
  // |v∧η|² = |v|²|η|² − (v·η)² = 50 − 4, |v∧ξ|² = 25 − 4
  const double expect = 1.0 + 5.0 + 10.0 + 5.0 + 46.0 + 21.0;
  CHECK(eval_lambda(v, eta, s) * eval_lambda(v, eta, s) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(eval_a_phase(v, eta, s) == doctest::Approx(expect).epsilon(1e-14));
  const SymbolSampler k = make_sampler(SymbolKind::lambda, Vec::Zero(3), 0.5, 3.0);
  CHECK(eval_lambdaK(Vec::Zero(3), Vec::Zero(3), k) == doctest::Approx(4.0));
  CHECK(k(Vec::Zero(3), Vec::Zero(3)) == doctest::Approx(4.0));
  CHECK(eval_g1(v, eta, s) == doctest::Approx(1.0 + std::sqrt(6.0) + std::sqrt(11.0)));
  CHECK(eval_g2(v, eta, s) == doctest::Approx(1.0 + std::cbrt(std::sqrt(6.0)) + std::sqrt(11.0)));
  CHECK(eval_g3(v, eta, s) == doctest::Approx(1.0 + std::cbrt(6.0) + 11.0));
  const SymbolSampler g2 = make_sampler(SymbolKind::g2, xi, 0.6, 2.0);
  CHECK(g2(v, eta) == doctest::Approx(eval_g2(v, eta, g2) + 2.0 * std::pow(6.0, 0.5 * 1.1)));
}

TEST_CASE("weights stay above one") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    const Vec v = vec({u(rng), u(rng)}), eta = vec({u(rng), u(rng)}), xi = vec({u(rng), u(rng)});
    for (SymbolKind k : {SymbolKind::lambda, SymbolKind::g1, SymbolKind::g2, SymbolKind::g3}) {
      const SymbolSampler s = make_sampler(k, xi, 1.0);
      CHECK(s(v, eta) >= 1.0);
    }
  }
}

TEST_CASE("cutoff psi") {
  CHECK(eval_cutoff_psi(0.5) == 1.0);
  CHECK(eval_cutoff_psi(-1.0) == 1.0);
  CHECK(eval_cutoff_psi(3.0) == 0.0);
  CHECK(eval_cutoff_psi(2.0) == 0.0);
  const double mid = eval_cutoff_psi(1.5);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  double prev = 1.0;
  for (int k = 0; k <= 2000; ++k) {
    const double t = 1.0 + k / 2000.0;
    const double p = eval_cutoff_psi(t);
    CHECK(p <= prev);
    prev = p;
  }
  for (double t : {1.1, 1.5, 1.93, -1.3}) {
    const double h = 1e-6;
    const double fd = (eval_cutoff_psi(t + h) - eval_cutoff_psi(t - h)) / (2 * h);
    CHECK(eval_cutoff_psi_prime(t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("multiplier g: support, oddness and the bracket expansion") {
  const KernelField& kf = calibrated();
  const Vec xi = vec({30.0, -12.0});
  SymbolSampler s = make_sampler(SymbolKind::multiplier_g, xi, 0.0, 0.0, &kf);
  const Vec v = vec({0.8, -1.1});
  const KernelPoint kp = kernel_point(v, kf);
  // far in η the ψ-argument exceeds 2
  CHECK(eval_multiplier_g(v, vec({200.0, 50.0}), s, kp) == 0.0);
  int active = 0;
  for (double r : {0.05, 0.3, 0.8, 1.5, 2.2, 3.0}) {
    for (double th : {0.2, 1.4, 2.9}) {
      const Vec eta = r * vec({std::cos(th), std::sin(th)});
      const double g = eval_multiplier_g(v, eta, s, kp);
      CHECK(g == doctest::Approx(-eval_multiplier_g(v, -eta, s, kp)).scale(1e-300));
      const BracketTerms bt = eval_bracket_xi_v_g(v, eta, s, kp);
      const double fd = bracket_fd(v, eta, s, kp);
      CHECK(bt.bracket == doctest::Approx(fd).epsilon(1e-5).scale(1e-6));
      if (bt.psi_slope != 0.0) ++active;
    }
  }
  CHECK(active > 0);
  CHECK(s(v, vec({0.3, 0.3})) == doctest::Approx(eval_multiplier_g(v, vec({0.3, 0.3}), s, kp)));
}

TEST_CASE("average m") {
  const KernelField& kf = calibrated();
  SymbolSampler s = make_sampler(SymbolKind::m_average, Vec::Zero(2), 0.0, 0.0, &kf);
  CHECK(eval_m_average(vec({1.0, 2.0}), s) == 1.0);
  s.xi = vec({5.0, 1.0});
  const double m = eval_m_average(vec({1.0, 2.0}), s);
  CHECK(m > 1.0);
  ProbeSpec spec;
  spec.count = 400;
  const CheckReport r = verify_m_average(s, spec);
  CHECK(r.pass);
  CHECK(r.get("m_min") >= 1.0);
  CHECK(r.get("C_hat") < 10.0);
}

TEST_CASE("admissible weights") {
  const SymbolSampler lam = make_sampler(SymbolKind::lambda, vec({3.0, 1.0}), 0.5);
  const Vec x = vec({1.0, 2.0, 0.5, -4.0});
  CHECK(lam(x.head(2), x.tail(2)) / lam(x.head(2), x.tail(2)) == 1.0);
  const CheckReport r = verify_weight_admissible(lam, {.count = 4000, .seed = 5}, default_admissibility_exponent(SymbolKind::lambda, 0.5));
  CHECK(r.pass);
  CHECK(std::isfinite(r.get("sup_ratio")));
  const SymbolSampler g1 = make_sampler(SymbolKind::g1, vec({3.0, 1.0}), 0.5);
  const CheckReport r1 = verify_weight_admissible(g1, {.count = 4000, .seed = 6}, 1.0);
  CHECK(r1.pass);
  CHECK(r1.get("sup_ratio") <= 2.0);
}

TEST_CASE("symbol classes by finite differences") {
  const SymbolSampler lam = make_sampler(SymbolKind::lambda, vec({10.0, -4.0}), 0.0);
  auto l23 = [&](const Vec& z) { return std::cbrt(lam(z.head(2), z.tail(2)) * lam(z.head(2), z.tail(2))); };
  ProbeSpec spec;
  spec.count = 100;
  spec.eta_max = 100.0;
  const auto p1 = make_phase_probes(2, spec);
  spec.count = 200;
  const auto p2 = make_phase_probes(2, spec);
  const CheckReport r = verify_symbol_class(l23, l23, 2, 2, p1, p2);
  CHECK(r.pass);
  CHECK(r.get("constant") > 0.0);

  auto one = [](const Vec&) { return 1.0; };
  const CheckReport c = verify_symbol_class(one, one, 2, 3, p1, p2);
  CHECK(c.get("constant") == 0.0);

  const KernelField& kf = calibrated();
  const SymbolSampler g = make_sampler(SymbolKind::multiplier_g, vec({400.0, 300.0}), 0.0, 0.0, &kf);
  auto gz = [&](const Vec& z) { return g(z.head(2), z.tail(2)); };
  spec.count = 30;
  spec.vbox = 3.0;
  spec.eta_max = 20.0;
  const auto q1 = make_phase_probes(2, spec);
  spec.count = 60;
  const auto q2 = make_phase_probes(2, spec);
  const CheckReport rg = verify_symbol_class(gz, one, 2, 2, q1, q2);
  CHECK(rg.pass);
  CHECK(std::isfinite(rg.get("constant_x2")));
}

TEST_CASE("derivative bounds") {
  const KernelField& kf = calibrated();
  SymbolSampler s = make_sampler(SymbolKind::multiplier_g, Vec::Zero(2), 0.0, 0.0, &kf);
  ProbeSpec spec;
  spec.count = 1000;
  const CheckReport r = verify_derivative_bounds(s, spec);
  CHECK(std::isfinite(r.get("C_iv_x4")));
  CHECK(r.get("drift_ii") <= 0.1);
  CHECK(r.pass);
}

TEST_CASE("derivative bounds vanish at xi = 0") {
  const KernelField& kf = calibrated();
  SymbolSampler s = make_sampler(SymbolKind::multiplier_g, Vec::Zero(2), 0.0, 0.0, &kf);
  const Vec v = vec({0.4, 2.0}), eta = vec({0.7, -0.2});
  const BracketTerms bt = eval_bracket_xi_v_g(v, eta, s, kernel_point(v, kf));
  CHECK(bt.bracket == 0.0);
  CHECK(bt.leading == 0.0);
  CHECK(bt.psi_slope == 0.0);
}

TEST_CASE("multiplier g is bounded") {
  const KernelField& kf = calibrated();
  const SymbolSampler s = make_sampler(SymbolKind::multiplier_g, Vec::Zero(2), 0.0, 0.0, &kf);
  ProbeSpec spec;
  spec.count = 20000;
  spec.eta_max = 100.0;
  const CheckReport r = verify_multiplier_bounded(s, spec);
  CHECK(r.pass);
  CHECK(r.get("sup_abs_g") < 2.0);
  CHECK(r.get("oddness_defect") == 0.0);
}
