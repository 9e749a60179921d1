#include "landau/quantization.hpp"

#include "landau/anchors.hpp"
#include "landau/linalg.hpp"
#include "landau/parallel.hpp"

#include <random>

namespace landau {
namespace {

constexpr const char* kWeylConvention = "weyl: (2pi)^-d sum exp(i(v-v').eta) p((v+v')/2, eta)";
constexpr const char* kWickConvention = "wick: int q(Y) Pi_Y dY/(2pi)^d, phi_Y = pi^-1/4 exp(-(z-c)^2/2) exp(i z eta)";

// e^{i m h η_q} for m ∈ [−(N−1), N−1], row m + N − 1. With h η_q = −π + 2πq/Ne
// the phase is π(2mq − m Ne)/Ne, reduced exactly in integers.
CMat phase_table(int N, int Ne) {
  CMat E(2 * N - 1, Ne);
  const long period = 2L * Ne;
  for (int m = -(N - 1); m <= N - 1; ++m)
    for (int q = 0; q < Ne; ++q) {
      long idx = (2L * m * q - static_cast<long>(m) * Ne) % period;
      if (idx < 0) idx += period;
      E(m + N - 1, q) = std::polar(1.0, M_PI * static_cast<double>(idx) / Ne);
    }
  return E;
}

struct Midpoint {
  int lo, hi;  // valid first index j with k = s − j inside the grid
};

Midpoint midpoint_range(int s, int N) { return {std::max(0, s - N + 1), std::min(N - 1, s)}; }

CMat weyl_matrix(const PhaseFunction& p, const PhaseGrid& g, int oversample) {
  const int N = g.N, d = g.dim;
  const int Ne = oversample * N;
  const double h = g.h();
  const double L_eta = M_PI / h, h_eta = 2.0 * L_eta / Ne;
  const CMat E = phase_table(N, Ne);
  Vec eta_nodes(Ne);
  for (int q = 0; q < Ne; ++q) eta_nodes(q) = -L_eta + h_eta * q;
  const double scale = std::pow(1.0 / Ne, d);
  const Index n = g.size();
  CMat M = CMat::Zero(n, n);
  const int S = 2 * N - 1;

  if (d == 1) {
    parallel_for(S, [&](Index si) {
      const int s = static_cast<int>(si);
      const Midpoint r = midpoint_range(s, N);
      Vec c(1), e(1);
      c(0) = -g.L + 0.5 * h * s;
      CVec P(Ne);
      for (int q = 0; q < Ne; ++q) {
        e(0) = eta_nodes(q);
        P(q) = p(c, e);
      }
      for (int j = r.lo; j <= r.hi; ++j) {
        const int k = s - j;
        M(j, k) = scale * (E.row(j - k + N - 1) * P)(0);
      }
    });
    return M;
  }

  parallel_for(static_cast<Index>(S) * S, [&](Index flat) {
    const int s1 = static_cast<int>(flat / S), s2 = static_cast<int>(flat % S);
    const Midpoint r1 = midpoint_range(s1, N), r2 = midpoint_range(s2, N);
    Vec c(2), e(2);
    c << -g.L + 0.5 * h * s1, -g.L + 0.5 * h * s2;
    CMat P(Ne, Ne);
    for (int q1 = 0; q1 < Ne; ++q1)
      for (int q2 = 0; q2 < Ne; ++q2) {
        e << eta_nodes(q1), eta_nodes(q2);
        P(q1, q2) = p(c, e);
      }
    const int n1 = r1.hi - r1.lo + 1, n2 = r2.hi - r2.lo + 1;
    CMat E1(n1, Ne), E2(n2, Ne);
    for (int a = 0; a < n1; ++a) {
      const int j = r1.lo + a;
      E1.row(a) = E.row(2 * j - s1 + N - 1);
    }
    for (int b = 0; b < n2; ++b) {
      const int j = r2.lo + b;
      E2.row(b) = E.row(2 * j - s2 + N - 1);
    }
    const CMat F = E1 * (P * E2.transpose());
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < n2; ++b) {
        const int j1 = r1.lo + a, j2 = r2.lo + b;
        const int k1 = s1 - j1, k2 = s2 - j2;
        M(j1 * N + j2, k1 * N + k2) = scale * F(a, b);
      }
  });
  return M;
}

}  // namespace

PhaseGrid::PhaseGrid(int dim_, double L_, int N_, int oversample_) : dim(dim_), L(L_), N(N_), oversample(oversample_) {
  if (dim < 1 || dim > 2) throw Error(ErrorKind::invalid_input, "quantization dim must be 1 or 2");
  if (N < 2 || N % 2 != 0) throw Error(ErrorKind::invalid_input, "N must be even and >= 2");
  if (!std::isfinite(L) || L <= 0.0) throw Error(ErrorKind::invalid_input, "L must be > 0");
  if (oversample < 1) throw Error(ErrorKind::invalid_input, "oversample must be >= 1");
}

Index PhaseGrid::size() const { return dim == 1 ? N : static_cast<Index>(N) * N; }

Vec PhaseGrid::node(Index flat) const {
  Vec v(dim);
  if (dim == 1) {
    v(0) = axis_node(static_cast<int>(flat));
  } else {
    v(0) = axis_node(static_cast<int>(flat / N));
    v(1) = axis_node(static_cast<int>(flat % N));
  }
  return v;
}

QuantizedOperator weyl_quantize(const PhaseFunction& p, const PhaseGrid& grid, const std::string& name,
                                QuantizeOptions opts) {
  QuantizedOperator op;
  op.symbol = name;
  op.convention = kWeylConvention;
  op.matrix = weyl_matrix(p, grid, grid.oversample);
  if (!op.matrix.allFinite()) throw Error(ErrorKind::invalid_input, "symbol is not finite on the phase grid");
  op.hermitian_defect = hermitian_defect(op.matrix);
  if (opts.check_aliasing) {
    const CMat fine = weyl_matrix(p, grid, 2 * grid.oversample);
    const double scale = std::max(fine.cwiseAbs().maxCoeff(), 1e-300);
    op.aliasing_defect = (fine - op.matrix).cwiseAbs().maxCoeff() / scale;
    if (op.aliasing_defect > opts.aliasing_rtol)
      throw Error(ErrorKind::aliasing, "eta grid does not resolve the symbol (defect " + std::to_string(op.aliasing_defect) + ")");
  }
  return op;
}

QuantizedOperator wick_quantize(const PhaseFunction& q, const PhaseGrid& grid, const std::string& name, WickOptions opts) {
  if (grid.dim != 1) throw Error(ErrorKind::invalid_input, "wick quantization is implemented for dim 1");
  if (!(opts.center_spacing > 0.0) || !(opts.pad >= 0.0)) throw Error(ErrorKind::invalid_input, "wick center spacing must be > 0");
  const int N = grid.N, Ne = grid.eta_points();
  const CMat E = phase_table(N, Ne);
  const int nc = static_cast<int>(std::floor(2.0 * (grid.L + opts.pad) / opts.center_spacing + 1e-9)) + 1;
  std::vector<CMat> parts(static_cast<size_t>(nc));
  parallel_for(nc, [&](Index ci) {
    const double c = -grid.L - opts.pad + opts.center_spacing * static_cast<double>(ci);
    CMat Phi(N, Ne);
    Vec w(Ne);
    Vec y(1), e(1);
    y(0) = c;
    for (int k = 0; k < Ne; ++k) {
      e(0) = grid.eta_node(k);
      w(k) = opts.center_spacing * q(y, e) / Ne;
    }
    for (int j = 0; j < N; ++j) {
      const double z = grid.axis_node(j);
      const double gauss = std::pow(M_PI, -0.25) * std::exp(-0.5 * (z - c) * (z - c));
      Phi.row(j) = gauss * E.row(j + N - 1);
    }
    parts[static_cast<size_t>(ci)] = Phi * w.asDiagonal() * Phi.adjoint();
  });
  QuantizedOperator op;
  op.symbol = name;
  op.convention = kWickConvention;
  op.matrix = CMat::Zero(N, N);
  for (const CMat& m : parts) op.matrix += m;
  if (!op.matrix.allFinite()) throw Error(ErrorKind::invalid_input, "symbol is not finite on the phase grid");
  op.hermitian_defect = hermitian_defect(op.matrix);
  return op;
}

PhaseFunction regularize(const PhaseFunction& p, double K, double M_exp) {
  return [p, K, M_exp](const Vec& v, const Vec& eta) { return p(v, eta) + K * std::pow(1.0 + v.squaredNorm(), 0.5 * M_exp); };
}

PhaseFunction power_of(const PhaseFunction& p, double t) {
  return [p, t](const Vec& v, const Vec& eta) { return std::pow(p(v, eta), t); };
}

KChoice choose_K(const PhaseFunction& p, double tau, const PhaseGrid& grid, double M_exp, double K_max) {
  if (!std::isfinite(tau)) throw Error(ErrorKind::invalid_input, "tau must be finite");
  KChoice out;
  const Index n = grid.size();
  for (double K = 1.0; K <= K_max; K *= 2.0) {
    const PhaseFunction pk = regularize(p, K, M_exp);
    const CMat A = weyl_quantize(power_of(pk, tau), grid).matrix;
    const CMat B = weyl_quantize(power_of(pk, -tau), grid).matrix;
    const double defect = spectral_norm(CMat::Identity(n, n) - A * B);
    out.sweep.emplace_back(K, defect);
    if (defect <= 0.5) {
      out.K = K;
      out.defect = defect;
      return out;
    }
  }
  throw Error(ErrorKind::unreachable_target, "choose_K sweep exhausted (K > 2^20)");
}

std::vector<CVec> make_test_vectors(const PhaseGrid& grid, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> width(0.6, 1.5), center(-0.4 * grid.L, 0.4 * grid.L), wave(-2.5, 2.5),
      phase(0.0, 2.0 * M_PI);
  std::vector<CVec> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::vector<CVec> axes;
    for (int a = 0; a < grid.dim; ++a) {
      const double s = width(rng), c = center(rng), k = wave(rng), ph = phase(rng);
      CVec u(grid.N);
      for (int j = 0; j < grid.N; ++j) {
        const double v = grid.axis_node(j);
        u(j) = std::exp(-(v - c) * (v - c) / (2.0 * s * s)) * std::polar(1.0, k * v + ph);
      }
      axes.push_back(std::move(u));
    }
    CVec u = axes[0];
    if (grid.dim == 2) {
      u.resize(grid.size());
      for (int j = 0; j < grid.N; ++j)
        for (int k = 0; k < grid.N; ++k) u(j * grid.N + k) = axes[0](j) * axes[1](k);
    }
    out.push_back(u.normalized());
  }
  return out;
}

namespace {

double norm_band(const CMat& A, const CMat& B, const std::vector<CVec>& us) {
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (const CVec& u : us) {
    const double r = (A * u).squaredNorm() / (B * u).squaredNorm();
    hi = std::max(hi, r);
    lo = std::min(lo, r);
  }
  return std::max(hi, 1.0 / lo);
}

double form_band(const CMat& A, const CMat& B, const std::vector<CVec>& us) {
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (const CVec& u : us) {
    const double r = u.dot(A * u).real() / u.dot(B * u).real();
    hi = std::max(hi, r);
    lo = std::min(lo, r);
  }
  return lo > 0.0 ? std::max(hi, 1.0 / lo) : std::numeric_limits<double>::infinity();
}

}  // namespace

CheckReport verify_M36(const PhaseFunction& p, const PhaseFunction& q, const M36Params& prm, const PhaseGrid& grid) {
  if (!std::isfinite(prm.tau)) throw Error(ErrorKind::invalid_input, "tau must be finite");
  if (!std::isfinite(prm.K) || prm.K < 0.0) throw Error(ErrorKind::invalid_input, "K must be >= 0");
  if (prm.vectors < 1) throw Error(ErrorKind::invalid_input, "vectors must be >= 1");
  const PhaseFunction pk = regularize(p, prm.K, prm.M_exp), qk = regularize(q, prm.K, prm.M_exp);
  const std::vector<CVec> us = make_test_vectors(grid, prm.vectors, prm.seed);
  const QuantizedOperator Pw = weyl_quantize(pk, grid);
  if (Pw.hermitian_defect > 1e-6) throw Error(ErrorKind::quantization_quality, "Hermitian defect of p_K^w exceeds 1e-6");

  CheckReport r("m36", anchor::basic_theorem);
  r.add("tau", prm.tau);
  r.add("kappa", prm.kappa);
  r.add("K", prm.K);
  r.add("N", grid.N);
  r.add("vectors", prm.vectors);
  r.add("hermitian_defect", Pw.hermitian_defect);
  r.add("tol_band", prm.band_limit);
  const CMat Pt = weyl_quantize(power_of(pk, prm.tau), grid).matrix;
  for (M36Part part : prm.parts) {
    switch (part) {
      case M36Part::I: {
        const double smin = sigma_min(Pt);
        r.add("sigma_min_I", smin);
        r.add("cond_I", spectral_norm(Pt) / smin);
        r.require(smin > 0.0 && std::isfinite(smin), "(p_K^tau)^w is not invertible");
        break;
      }
      case M36Part::IV: {
        const CMat A = hermitian_power(weyl_quantize(power_of(pk, prm.kappa), grid).matrix, prm.tau);
        const CMat B = weyl_quantize(power_of(pk, prm.kappa * prm.tau), grid).matrix;
        const double c = norm_band(A, B, us);
        r.add("band_IV", c);
        r.require(c <= prm.band_limit, "band (IV) exceeds the limit");
        break;
      }
      case M36Part::V: {
        const double c = norm_band(hermitian_power(Pw.matrix, prm.tau), Pt, us);
        r.add("band_V", c);
        r.require(c <= prm.band_limit, "band (V) exceeds the limit");
        break;
      }
      case M36Part::VI: {
        const double c = form_band(Pw.matrix, weyl_quantize(qk, grid).matrix, us);
        r.add("band_VI", c);
        r.require(c <= prm.band_limit, "band (VI) exceeds the limit");
        break;
      }
      case M36Part::VII: {
        const double mp = hermitian_eigenvalues(Pw.matrix).minCoeff();
        const double mq = hermitian_eigenvalues(weyl_quantize(qk, grid).matrix).minCoeff();
        r.add("min_eig_p", mp);
        r.add("min_eig_q", mq);
        r.add("tol_min_eig", 1.0 - 1e-6);
        if (prm.M_exp >= 0.0) {
          r.require(mp >= 1.0 - 1e-6, "p_K^w is not >= Id");
          r.require(mq >= 1.0 - 1e-6, "q_K^w is not >= Id");
        }
        break;
      }
    }
  }
  return r;
}

CheckReport verify_M164(const CMat& A, const M164Params& prm) {
  if (!(prm.eta > 0.0 && prm.eta < 1.0)) throw Error(ErrorKind::invalid_input, "eta out of range (0,1)");
  if (prm.samples < 1) throw Error(ErrorKind::invalid_input, "samples must be >= 1");
  const Index n = A.rows();
  const double scale = std::max(1.0, spectral_norm(A));
  const double accretive = hermitian_eigenvalues(A).minCoeff();
  if (accretive < -1e-10 * scale) throw Error(ErrorKind::precondition, "operator is not accretive");
  const CMat Ap = A + CMat::Identity(n, n);
  const CMat H = hermitian_power(Ap.adjoint() * Ap, prm.eta, 1e-10);

  std::mt19937_64 rng(prm.seed);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  CMat U(n, prm.samples);
  std::vector<cplx> z(static_cast<size_t>(prm.samples));
  for (int s = 0; s < prm.samples; ++s) {
    const double theta = M_PI * (u01(rng) - 0.5);
    const double rad = s == 0 ? 0.0 : std::pow(10.0, -3.0 + 7.0 * u01(rng));
    z[static_cast<size_t>(s)] = cplx(-1.0, 0.0) + std::polar(rad, theta);
    for (Index i = 0; i < n; ++i) U(i, s) = cplx(n01(rng), n01(rng));
  }
  const CMat AU = A * U, HU = H * U;
  double worst = std::numeric_limits<double>::infinity(), worst_abs = worst;
  for (int s = 0; s < prm.samples; ++s) {
    const cplx zs = z[static_cast<size_t>(s)];
    const double uu = U.col(s).squaredNorm();
    const double lhs = std::pow(std::abs(zs + 1.0), 2.0 * prm.eta) * uu;
    const double rhs = 4.0 * U.col(s).dot(HU.col(s)).real() + 4.0 * (AU.col(s) - zs * U.col(s)).squaredNorm();
    worst = std::min(worst, (rhs - lhs) / rhs);
    worst_abs = std::min(worst_abs, (rhs - lhs) / uu);
  }
  CheckReport r("m164", anchor::m164);
  r.add("eta", prm.eta);
  r.add("samples", prm.samples);
  r.add("accretivity_min_eig", accretive);
  r.add("worst_relative_margin", worst);
  r.add("worst_margin", worst_abs);
  r.require(worst >= 0.0, "inequality violated at a sampled (z, u)");
  return r;
}

}  // namespace landau
