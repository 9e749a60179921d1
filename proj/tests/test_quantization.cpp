#include "doctest.h"

#include "landau/linalg.hpp"
#include "landau/quadrature.hpp"
#include "landau/quantization.hpp"

using namespace landau;

namespace {

PhaseFunction g1_symbol() {
  return [](const Vec& v, const Vec& eta) { return 1.0 + japanese(v) + japanese(eta); };
}

// (q ∗ π^{−1}e^{−|·|²})(v, η) by a 30-point Gauss–Hermite product rule.
PhaseFunction smoothed(const PhaseFunction& q) {
  const GaussRule g = gauss_hermite(30);
  return [q, g](const Vec& v, const Vec& eta) {
    double acc = 0.0;
    Vec a(1), b(1);
    for (Index i = 0; i < g.nodes.size(); ++i)
      for (Index j = 0; j < g.nodes.size(); ++j) {
        a(0) = v(0) - g.nodes(i);
        b(0) = eta(0) - g.nodes(j);
        acc += g.weights(i) * g.weights(j) * q(a, b);
      }
    return acc / M_PI;
  };
}

double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("weyl quantization of constants and of eta") {
  const PhaseGrid g(1, 8.0, 48);
  const auto one = [](const Vec&, const Vec&) { return 1.0; };
  CHECK(max_abs(weyl_quantize(one, g).matrix - CMat::Identity(48, 48)) <= 1e-8);
  const PhaseGrid g2(2, 6.0, 12);
  CHECK(max_abs(weyl_quantize(one, g2).matrix - CMat::Identity(144, 144)) <= 1e-8);

  const CMat D = weyl_quantize([](const Vec&, const Vec& e) { return e(0); }, g).matrix;
  CVec u(48), du(48);
  const double k = 1.3;
  for (int j = 0; j < 48; ++j) {
    const double v = g.axis_node(j);
    u(j) = std::exp(-0.5 * v * v) * std::polar(1.0, k * v);
    du(j) = cplx(k, v) * u(j);  // −i u'
  }
  CHECK(max_abs(D * u - du) <= 1e-6);

  // second axis in d = 2
  const PhaseGrid g3(2, 6.0, 24);
  const CMat D2 = weyl_quantize([](const Vec&, const Vec& e) { return e(1); }, g3).matrix;
  CVec w(576), dw(576);
  for (int a = 0; a < 24; ++a)
    for (int b = 0; b < 24; ++b) {
      const double x = g3.axis_node(a), y = g3.axis_node(b);
      w(a * 24 + b) = std::exp(-0.5 * (x * x + y * y)) * std::polar(1.0, 0.5 * y);
      dw(a * 24 + b) = cplx(0.5, y) * w(a * 24 + b);
    }
  CHECK(max_abs(D2 * w - dw) <= 1e-6);
}

TEST_CASE("real symbols give Hermitian matrices") {
  const PhaseGrid g(1, 8.0, 48);
  CHECK(weyl_quantize(g1_symbol(), g).hermitian_defect <= 1e-8);
  const PhaseGrid g2(2, 6.0, 12);
  const auto p = [](const Vec& v, const Vec& e) { return std::exp(-v.squaredNorm()) * (1.0 + e(0) * e(1)) + v(0) * e(1); };
  CHECK(weyl_quantize(p, g2).hermitian_defect <= 1e-8);
}

TEST_CASE("aliasing is detected") {
  const PhaseGrid g(1, 8.0, 16);
  const auto fast = [](const Vec& v, const Vec& e) { return std::exp(-v(0) * v(0)) * std::cos(30.0 * e(0)); };
  CHECK_THROWS_AS(weyl_quantize(fast, g, "fast", {.check_aliasing = true}), Error);
  const auto slow = [](const Vec& v, const Vec& e) { return std::exp(-v(0) * v(0) - e(0) * e(0)); };
  const QuantizedOperator op = weyl_quantize(slow, g, "slow", {.check_aliasing = true});
  CHECK(op.aliasing_defect <= 1e-3);
}

TEST_CASE("wick identity and positivity") {
  const PhaseGrid g(1, 8.0, 48);
  const auto one = [](const Vec&, const Vec&) { return 1.0; };
  CHECK(max_abs(wick_quantize(one, g).matrix - CMat::Identity(48, 48)) <= 1e-8);
  const std::vector<PhaseFunction> qs = {
      [](const Vec& v, const Vec& e) { return e(0) * e(0) * std::exp(-v(0) * v(0)); },
      [](const Vec& v, const Vec& e) { return std::exp(-v(0) * v(0) - e(0) * e(0)); },
      [](const Vec& v, const Vec& e) { return std::pow(v(0) * v(0) - 1.0, 2) * std::exp(-0.25 * e(0) * e(0)); },
      [](const Vec& v, const Vec& e) { return std::pow(std::sin(v(0)), 2) * std::exp(-e(0) * e(0)); },
      [](const Vec& v, const Vec& e) { return e(0) * e(0) * std::exp(-v(0) * v(0)) * std::pow(v(0) - 0.5, 2); },
  };
  for (const PhaseFunction& q : qs) {
    const QuantizedOperator w = wick_quantize(q, g);
    CHECK(w.hermitian_defect <= 1e-12);
    CHECK(hermitian_eigenvalues(w.matrix).minCoeff() >= -1e-8);
  }
}

TEST_CASE("wick projector integral against Gaussian smoothing") {
  const PhaseGrid g(1, 6.0, 32);
  const auto q = [](const Vec& v, const Vec& e) { return std::exp(-v(0) * v(0) - e(0) * e(0)); };
  const CMat P = wick_quantize(q, g).matrix;
  const CMat W = weyl_quantize(smoothed(q), g).matrix;
  CHECK(max_abs(P - W) <= 1e-4);
  CHECK_THROWS_AS(wick_quantize(q, PhaseGrid(2, 6.0, 8)), Error);
}

TEST_CASE("choice of K") {
  const PhaseGrid g(1, 8.0, 48);
  const KChoice k1 = choose_K(g1_symbol(), 1.0, g);
  CHECK(k1.defect <= 0.5);
  CHECK(std::isfinite(k1.K));
  const KChoice k0 = choose_K(g1_symbol(), 0.0, g);
  CHECK(k0.K == 1.0);
  CHECK(k0.defect <= 1e-12);
  // force a longer sweep with a large exponent
  const KChoice k3 = choose_K(g1_symbol(), 4.0, g);
  for (size_t i = 1; i < k3.sweep.size(); ++i) CHECK(k3.sweep[i].second <= 1.05 * k3.sweep[i - 1].second);
  const auto bad = [](const Vec&, const Vec&) { return -1.0; };
  CHECK_THROWS_AS(choose_K(bad, 0.5, g, 0.0, 4.0), Error);
}

TEST_CASE("basic theorem bands for g1") {
  const PhaseGrid g(1, 8.0, 48);
  const PhaseFunction p = g1_symbol();
  M36Params prm;
  prm.tau = 0.5;
  prm.K = choose_K(p, prm.tau, g).K;
  const CheckReport r = verify_M36(p, p, prm, g);
  CHECK(r.pass);
  CHECK(r.get("band_V") <= 3.0);
  CHECK(r.get("min_eig_p") >= 1.0 - 1e-6);
  CHECK(r.get("band_VI") == doctest::Approx(1.0));

  prm.tau = 1.0;
  prm.kappa = 1.0;
  prm.parts = {M36Part::IV, M36Part::V};
  const CheckReport same = verify_M36(p, p, prm, g);
  CHECK(std::abs(same.get("band_IV") - same.get("band_V")) <= 1e-10);
}

TEST_CASE("lemma M164 sampling") {
  CheckReport r = verify_M164(CMat::Zero(1, 1), {.eta = 1.0 / 3.0, .samples = 2000});
  CHECK(r.pass);
  CHECK(r.get("worst_margin") >= 0.0);
  CMat A = CMat::Zero(6, 6);
  for (int i = 0; i < 6; ++i) {
    A(i, i) = 0.5 * i + cplx(0.0, 3.0 * i);
    if (i) A(i, i - 1) = 1.0, A(i - 1, i) = -1.0;
  }
  CHECK(verify_M164(A, {}).pass);
  CHECK_THROWS_AS(verify_M164(-CMat::Identity(3, 3), {}), Error);
}
