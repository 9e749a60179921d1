#include "doctest.h"

#include "landau/linalg.hpp"
#include "landau/operator.hpp"

#include <cstdio>
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

const CollisionParts& parts16() {
  static const CollisionParts p = assemble_parts(VelocityGrid(2, 6.0, 16), calibrated(), true);
  return p;
}

CVec sqrt_maxwellian(const VelocityGrid& g) {
  CVec m(g.size());
  for (Index i = 0; i < g.size(); ++i) m(i) = std::exp(-0.25 * g.node(i).squaredNorm());
  return m;
}

}  // namespace

TEST_CASE("grid guards") {
  CHECK_THROWS_AS(VelocityGrid(2, 5.0, 16), Error);
  CHECK_THROWS_AS(VelocityGrid(1, 6.0, 16), Error);
  CHECK_THROWS_AS(VelocityGrid(2, 6.0, 2), Error);
  CHECK_FALSE(VelocityGrid(2, 6.0, 16).resolved());
  CHECK(VelocityGrid(2, 6.0, 24).resolved());
  const KernelField raw(0.0, 2, {.order = 20});
  CHECK_THROWS_AS(assemble_parts(VelocityGrid(2, 6.0, 8), raw), Error);
}

TEST_CASE("face gradient is exact on affine functions") {
  const VelocityGrid g(2, 6.0, 8);
  for (const FaceFamily& fam : face_families(g)) {
    Vec u(g.size());
    for (Index i = 0; i < g.size(); ++i) u(i) = 2.0 * g.node(i)(0) - 3.0 * g.node(i)(1) + 1.0;
    const Vec gu = fam.G * u;
    for (Index f = 0; f < fam.x.cols(); ++f) {
      CHECK(gu(2 * f) == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(gu(2 * f + 1) == doctest::Approx(-3.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("A_xi structure") {
  const CollisionParts& p = parts16();
  const Vec xi = vec({5.0, -2.0});
  const CMat A0 = assemble_Axi(p, Vec::Zero(2)).matrix;
  const CMat Ax = assemble_Axi(p, xi).matrix;
  CMat diff = Ax - A0;
  for (Index i = 0; i < diff.rows(); ++i) {
    CHECK(diff(i, i).imag() == doctest::Approx(p.v.col(i).dot(xi)).epsilon(1e-14));
    diff(i, i) -= cplx(0.0, p.v.col(i).dot(xi));
  }
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-14 * A0.cwiseAbs().maxCoeff());
  CHECK(hermitian_defect(A0) < 1e-14);
  const Vec ev = hermitian_eigenvalues(Ax);
  CHECK(ev.minCoeff() >= -1e-10 * ev.cwiseAbs().maxCoeff());
  CHECK(p.M_chi.maxCoeff() <= calibrated().M() + 1e-15);
  CHECK(p.M_chi.minCoeff() >= 0.0);
}

TEST_CASE("collision operator annihilates the square-root Maxwellian") {
  const CollisionParts& p = parts16();
  const CVec m = sqrt_maxwellian(p.grid);
  const OperatorMatrix P = assemble_P(assemble_Axi(p, Vec::Zero(2)), assemble_K(p));
  const double scale = spectral_norm(P.matrix) * m.norm();
  CHECK((p.L1.cast<cplx>() * m).norm() <= 1e-12 * scale);
  CHECK((p.L2.cast<cplx>() * m).norm() <= 1e-12 * scale);
  CHECK((P.matrix * m).norm() <= 1e-12 * scale);
}

TEST_CASE("K part and P = A + K") {
  const CollisionParts& p = parts16();
  const OperatorMatrix A = assemble_Axi(p, vec({1.0, 0.0}));
  const OperatorMatrix K = assemble_K(p);
  const OperatorMatrix P = assemble_P(A, K);
  CHECK(hermitian_defect(K.matrix) < 1e-14);
  CHECK((P.matrix - A.matrix - K.matrix).cwiseAbs().maxCoeff() <= 1e-14 * P.matrix.cwiseAbs().maxCoeff());
  CHECK(P.tag == OperatorTag::P_xi);
  const Vec lin = hermitian_eigenvalues((-(p.L1 + p.L2)).cast<cplx>());
  CHECK(lin.minCoeff() >= -1e-10 * lin.maxCoeff());
  // ‖𝒦‖ stays bounded under refinement
  const CollisionParts fine = assemble_parts(VelocityGrid(2, 6.0, 24), calibrated(), true);
  const double n16 = spectral_norm(K.matrix), n24 = spectral_norm(assemble_K(fine).matrix);
  CHECK(std::abs(n24 - n16) <= 0.1 * n16);
  // numerical range of P lies in the closed right half-plane
  const Vec pr = hermitian_eigenvalues(P.matrix);
  CHECK(pr.minCoeff() >= -1e-10 * spectral_norm(P.matrix));
  CHECK_THROWS_AS(assemble_P(K, A), Error);
}

TEST_CASE("majorant W") {
  const VelocityGrid g(2, 6.0, 48);
  const double K = default_majorant_K(0.0);
  CHECK(K == 1.0);
  const Vec xi = vec({2.0, 1.0});
  const OperatorMatrix W = assemble_majorant_W(g, 0.0, xi, K);
  const OperatorMatrix W0 = assemble_majorant_W(g, 0.0, Vec::Zero(2), K);
  CHECK(hermitian_defect(W.matrix) < 1e-14);
  CHECK(hermitian_eigenvalues(W.matrix).minCoeff() >= 1.0 - 1e-8);
  CMat diff = W.matrix - W0.matrix;
  diff.diagonal().setZero();
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-12 * W.matrix.cwiseAbs().maxCoeff());
  CHECK_THROWS_AS(assemble_majorant_W(g, 1.5, xi, K), Error);

  // packet oracle: ⟨Wu,u⟩ against ∫ C∇u·∇ū + (c₀ + K²⟨v⟩² − ¼∇·∇·C)|u|² at γ = 0
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const Vec c = vec({1.5 * U(rng), 1.5 * U(rng)}), k = vec({1.5 * U(rng), 1.5 * U(rng)});
    const double w = 0.9 + 0.2 * U(rng);
    CVec u(g.size());
    double oracle = 0.0;
    for (Index i = 0; i < g.size(); ++i) {
      const Vec v = g.node(i);
      u(i) = std::exp(-(v - c).squaredNorm() / (2 * w * w)) * std::polar(1.0, k.dot(v));
      const CVec du = u(i) * (-(v - c).cast<cplx>() / (w * w) + cplx(0, 1) * k.cast<cplx>());
      const double r2 = v.squaredNorm();
      const Mat C = (1 + r2) * Mat::Identity(2, 2) - v * v.transpose();
      const double V = 1 + r2 + xi.squaredNorm() + wedge_sq(v, xi) + K * K * (1 + r2) + 0.5;
      oracle += g.weight() * ((du.adjoint() * C.cast<cplx>() * du)(0).real() + V * std::norm(u(i)));
    }
    const double form = g.weight() * u.dot(W.matrix * u).real();
    CHECK(std::abs(form - oracle) <= 0.05 * oracle);
  }
}

TEST_CASE("dissipation identity converges at second order") {
  const Vec xi = vec({2.0, 0.0});
  DissipationOptions coarse;
  const CheckReport r24 = verify_dissipation(VelocityGrid(2, 6.0, 24), calibrated(), xi, coarse);
  DissipationOptions fine;
  fine.times.clear();
  fine.accretivity = false;
  const CheckReport r48 = verify_dissipation(VelocityGrid(2, 6.0, 48), calibrated(), xi, fine);
  CHECK(r24.pass);
  CHECK(r48.pass);
  const double e24 = r24.get("identity_defect_max"), e48 = r48.get("identity_defect_max");
  MESSAGE("defects " << e24 << " " << e48);
  CHECK(e48 < e24);
  CHECK(std::log2(e24 / e48) >= 1.8);
}

TEST_CASE("matrix dump round trip") {
  const OperatorMatrix A = assemble_Axi(parts16(), vec({1.0, 2.0}));
  const std::string path = "test_operator_dump.bin";
  write_matrix_dump(path, A);
  const OperatorMatrix B = read_matrix_dump(path);
  std::remove(path.c_str());
  CHECK(B.tag == OperatorTag::A_xi);
  CHECK(B.grid.N == 16);
  CHECK(B.xi(1) == 2.0);
  CHECK((A.matrix - B.matrix).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(read_matrix_dump("does_not_exist.bin"), Error);
}
