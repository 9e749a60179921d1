#pragma once

#include "landau/core.hpp"
#include "landau/kernel.hpp"

#include <functional>

namespace landau {

enum class SymbolKind { lambda, a_phase, g1, g2, g3, multiplier_g, m_average, user };

SymbolKind parse_symbol_kind(const std::string& name);
const char* to_string(SymbolKind kind);

using PhaseFunction = std::function<double(const Vec& v, const Vec& eta)>;

// Pointwise evaluator for one phase-space symbol at fixed ξ and K. With
// K > 0 the regularized weight p_K is returned (λ_K, g_{i,K}).
struct SymbolSampler {
  SymbolKind kind = SymbolKind::lambda;
  Vec xi;
  double K = 0.0;
  double gamma = 0.0;
  const KernelField* kf = nullptr;  // needed by multiplier_g and m_average
  int m_order = 10;                 // Gauss–Hermite points per axis for m(v, ξ)
  PhaseFunction user;

  double operator()(const Vec& v, const Vec& eta) const;
};

SymbolSampler make_sampler(SymbolKind kind, const Vec& xi, double gamma, double K = 0.0,
                           const KernelField* kf = nullptr);

double eval_lambda(const Vec& v, const Vec& eta, const SymbolSampler& s);
double eval_lambdaK(const Vec& v, const Vec& eta, const SymbolSampler& s);
double eval_a_phase(const Vec& v, const Vec& eta, const SymbolSampler& s);
double eval_g1(const Vec& v, const Vec& eta, const SymbolSampler& s);
double eval_g2(const Vec& v, const Vec& eta, const SymbolSampler& s);
double eval_g3(const Vec& v, const Vec& eta, const SymbolSampler& s);

// Exponent e of the regularizer K⟨v⟩^e attached to each weight.
double regularizer_exponent(SymbolKind kind, double gamma);

// ψ(t) = h(2−|t|)/(h(2−|t|)+h(|t|−1)) and its derivative.
double eval_cutoff_psi(double t);
double eval_cutoff_psi_prime(double t);

// ā, B = ā^{1/2} and F at one velocity, from a single quadrature pass.
struct KernelPoint {
  Mat abar;
  Mat B;
  double F = 0.0;
};
KernelPoint kernel_point(const Vec& v, const KernelField& kf);

double eval_multiplier_g(const Vec& v, const Vec& eta, const SymbolSampler& s);
double eval_multiplier_g(const Vec& v, const Vec& eta, const SymbolSampler& s, const KernelPoint& kp);

// {ξ·v, g} from its explicit three-term expansion with exact ξ·∂_η factors,
// and the leading part |Bξ|² λ^{-4/3} ψ.
struct BracketTerms {
  double bracket = 0.0;
  double leading = 0.0;
  double psi_slope = 0.0;  // ξ·∂_η ψ(ω)
};
BracketTerms eval_bracket_xi_v_g(const Vec& v, const Vec& eta, const SymbolSampler& s, const KernelPoint& kp);

double eval_m_average(const Vec& v, const SymbolSampler& s);

struct PairSamples {
  int count = 2000;
  std::uint64_t seed = 1;
  double box = 10.0;
};

// sup m(X)/(m(Y)⟨X−Y⟩^N) at count and 4·count nested pairs.
CheckReport verify_weight_admissible(const SymbolSampler& s, const PairSamples& pairs, double N_exp);
double default_admissibility_exponent(SymbolKind kind, double gamma);

using PhasePoint = std::function<double(const Vec& z)>;  // z = (v, η)

struct ProbeSpec {
  int count = 200;
  std::uint64_t seed = 1;
  double vbox = 6.0;
  double eta_max = 1e3;
  double xi_max = 1e3;
};

// Central-difference estimates of |∂^α p| / weight for 1 ≤ |α| ≤ max_order
// at probes (phase points of dimension 2·dim), at count and 2·count probes.
CheckReport verify_symbol_class(const PhasePoint& p, const PhasePoint& weight, int dim, int max_order,
                                const std::vector<Vec>& probes, const std::vector<Vec>& probes_doubled);

std::vector<Vec> make_phase_probes(int dim, const ProbeSpec& spec);

// Checks (i)–(iv): η-derivative bounds of powers of λ, of ψ(ω), and the
// remainder of the Poisson bracket; constants per |ξ| decade 1..10³.
CheckReport verify_derivative_bounds(const SymbolSampler& s, const ProbeSpec& spec);

// ⟨B(v)ξ⟩^{1/3} ≤ Ĉ m(v, ξ) and m ≥ 1 over random (v, ξ).
CheckReport verify_m_average(const SymbolSampler& s, const ProbeSpec& spec);

// sup |g| over random (v, η, ξ) with |ξ| up to xi_max.
CheckReport verify_multiplier_bounded(const SymbolSampler& s, const ProbeSpec& spec);

}  // namespace landau
