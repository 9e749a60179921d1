#pragma once

#include "landau/core.hpp"
#include "landau/kernel.hpp"

#include <Eigen/SparseCore>

#include <memory>
#include <string>

namespace landau {

// Cell-centered tensor grid v_i = −L + (i + 1/2) h, h = 2L/N, axis 0 slowest.
struct VelocityGrid {
  int dim = 2;
  double L = 6.0;
  int N = 24;

  VelocityGrid() = default;
  VelocityGrid(int dim, double L, int N);

  double h() const { return 2.0 * L / N; }
  Index size() const;
  double axis_node(int i) const { return -L + (i + 0.5) * h(); }
  Vec node(Index flat) const;
  Mat nodes() const;  // dim × size
  double weight() const { return std::pow(h(), dim); }
  bool resolved() const { return h() <= 0.5; }
};

enum class OperatorTag { A_xi, Kpart, P_xi, W_majorant, L1, L2 };
const char* to_string(OperatorTag tag);

struct OperatorMatrix {
  CMat matrix;
  VelocityGrid grid;
  OperatorTag tag = OperatorTag::A_xi;
  Vec xi;
  double gamma = 0.0;
  std::string scheme;
};

// Face-gradient operator for one face family: d rows per face between nodes
// i and i + e_axis; the normal row is the first difference, transverse rows
// interpolate fourth-order nodal differences to the face (lower order near
// the edges).
struct FaceFamily {
  int axis = 0;
  Mat x;                                // dim × faces
  Eigen::SparseMatrix<double> G;        // (dim·faces) × nodes
};

std::vector<FaceFamily> face_families(const VelocityGrid& grid);

// ℒ₁, ℒ₂ (real, ξ-independent) and the cutoff diagonal Mχ_R at the nodes.
// −ℒ₁ = (1/d) Σ S Gᵀ diag(μ_f ā_h(x_f)) G S and ℒ₂ = (1/d) Σ S Gᵀ C G S with
// S = μ^{−1/2}, C[f,g] = h^d μ_f μ_g a(x_f − x_g) and ā_h(x_f) = Σ_g C[f,g]/μ_f.
struct CollisionParts {
  VelocityGrid grid;
  double gamma = 0.0;
  Mat L1;
  Mat L2;  // empty when assembled without the compact part
  Vec M_chi;
  Mat v;  // dim × nodes
};

CollisionParts assemble_parts(const VelocityGrid& grid, const KernelField& kf, bool with_L2 = true);

OperatorMatrix assemble_Axi(const VelocityGrid& grid, const KernelField& kf, const Vec& xi);
OperatorMatrix assemble_K(const VelocityGrid& grid, const KernelField& kf);
OperatorMatrix assemble_P(const VelocityGrid& grid, const KernelField& kf, const Vec& xi);

OperatorMatrix assemble_Axi(const CollisionParts& parts, const Vec& xi);
OperatorMatrix assemble_K(const CollisionParts& parts);
OperatorMatrix assemble_P(const OperatorMatrix& A, const OperatorMatrix& K);

// Elliptic majorant: Weyl quantization of
// ⟨v⟩^γ(1+|v|²+|ξ|²+|v∧ξ|²) + ⟨v⟩^γ(|η|²+|v∧η|²) + K²⟨v⟩^{γ+2}.
OperatorMatrix assemble_majorant_W(const VelocityGrid& grid, double gamma, const Vec& xi, double K);

// K from choose_K on the one-dimensional λ with τ = 2/3 and regularizer ⟨v⟩^{γ/2+1}.
double default_majorant_K(double gamma);

struct DissipationOptions {
  int samples = 20;
  std::uint64_t seed = 1;
  std::vector<double> times = {0.1, 1.0};
  bool accretivity = true;  // dense Hermitian eigensolve and spectral norm of 𝒜_ξ
};

// Re⟨𝒜_ξu,u⟩ against ‖B∇u‖² + ‖√F u‖² on Gaussian packets, accretivity and
// the contraction bound ‖e^{−t𝒜_ξ}‖ ≤ 1 + 1e−8.
CheckReport verify_dissipation(const VelocityGrid& grid, const KernelField& kf, const Vec& xi,
                               const DissipationOptions& opts = {});

void write_matrix_dump(const std::string& path, const OperatorMatrix& op);
OperatorMatrix read_matrix_dump(const std::string& path);

}  // namespace landau
