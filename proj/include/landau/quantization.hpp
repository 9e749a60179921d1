#pragma once

#include "landau/core.hpp"
#include "landau/symbols.hpp"

#include <functional>
#include <string>

namespace landau {

// Tensor grid v_j = −L + h j (j < N, h = 2L/N) with the η-grid
// η_k = −π/h + h_η k on oversample·N points per axis.
struct PhaseGrid {
  int dim = 1;
  double L = 8.0;
  int N = 48;
  int oversample = 2;

  PhaseGrid() = default;
  PhaseGrid(int dim, double L, int N, int oversample = 2);

  double h() const { return 2.0 * L / N; }
  double L_eta() const { return M_PI / h(); }
  int eta_points() const { return oversample * N; }
  double h_eta() const { return 2.0 * L_eta() / eta_points(); }
  Index size() const;                  // N^d
  Vec node(Index flat) const;          // v at flat index (axis 0 slowest)
  double axis_node(int j) const { return -L + h() * j; }
  double eta_node(int k) const { return -L_eta() + h_eta() * k; }
};

struct QuantizedOperator {
  CMat matrix;
  std::string symbol;
  std::string convention;
  double hermitian_defect = 0.0;
  double aliasing_defect = 0.0;  // relative change when the η-grid is refined twofold
};

struct QuantizeOptions {
  bool check_aliasing = false;
  double aliasing_rtol = 1e-3;
};

QuantizedOperator weyl_quantize(const PhaseFunction& p, const PhaseGrid& grid, const std::string& name = "p",
                                QuantizeOptions opts = {});

struct WickOptions {
  double center_spacing = 0.5;
  double pad = 7.0;  // centers extend this far beyond the v-box
};

// Projector integral ∫ q(Y) Π_Y dY/(2π) with φ_Y(z) = π^{−1/4} e^{−(z−c)²/2} e^{izη};
// the center integral is a trapezoid sum, the η integral uses the grid's η nodes.
QuantizedOperator wick_quantize(const PhaseFunction& q, const PhaseGrid& grid, const std::string& name = "q",
                                WickOptions opts = {});

// p_K = p + K⟨v⟩^M
PhaseFunction regularize(const PhaseFunction& p, double K, double M_exp);
PhaseFunction power_of(const PhaseFunction& p, double t);

struct KChoice {
  double K = 1.0;
  double defect = 0.0;
  std::vector<std::pair<double, double>> sweep;  // (K, defect)
};

// First dyadic K with ‖Id − (p_K^τ)^w (p_K^{−τ})^w‖ ≤ 1/2.
KChoice choose_K(const PhaseFunction& p, double tau, const PhaseGrid& grid, double M_exp = 0.0, double K_max = 1048576.0);

// Band-limited Gaussian packets: width in [0.6, 1.5], center within ±0.4L,
// wavenumber within ±2.5 and a random phase, per axis.
std::vector<CVec> make_test_vectors(const PhaseGrid& grid, int count, std::uint64_t seed);

enum class M36Part { I, IV, V, VI, VII };

struct M36Params {
  double tau = 0.5;
  double kappa = 2.0;
  double K = 1.0;
  double M_exp = 0.0;
  std::vector<M36Part> parts = {M36Part::I, M36Part::IV, M36Part::V, M36Part::VI, M36Part::VII};
  int vectors = 100;
  std::uint64_t seed = 1;
  double band_limit = 5.0;
};

CheckReport verify_M36(const PhaseFunction& p, const PhaseFunction& q, const M36Params& params, const PhaseGrid& grid);

struct M164Params {
  double eta = 1.0 / 3.0;
  int samples = 1000;
  std::uint64_t seed = 1;
};

// |z+1|^{2η}‖u‖² ≤ 4(((A+1)*(A+1))^η u, u) + 4‖(A−z)u‖² over z = −1 + r e^{iθ},
// |θ| ≤ π/2, r log-uniform in [1e−3, 1e4], and Gaussian random u.
CheckReport verify_M164(const CMat& A, const M164Params& params);

}  // namespace landau
