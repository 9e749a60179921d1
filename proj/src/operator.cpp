#include "landau/operator.hpp"

#include "landau/anchors.hpp"
#include "landau/linalg.hpp"
#include "landau/parallel.hpp"
#include "landau/quantization.hpp"
#include "landau/symbols.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <random>

namespace landau {
namespace {

double maxwellian(const Vec& v) { return std::pow(2.0 * M_PI, -0.5 * v.size()) * std::exp(-0.5 * v.squaredNorm()); }

std::vector<int> unflatten(Index flat, int dim, int N) {
  std::vector<int> idx(static_cast<size_t>(dim));
  for (int k = dim - 1; k >= 0; --k) {
    idx[static_cast<size_t>(k)] = static_cast<int>(flat % N);
    flat /= N;
  }
  return idx;
}

Index flatten(const std::vector<int>& idx, int N) {
  Index f = 0;
  for (int i : idx) f = f * N + i;
  return f;
}

// d/dv at node j: fourth order in the interior, central next to the edge, one-sided on it.
std::vector<std::pair<int, double>> transverse_stencil(int j, int N, double h) {
  if (j >= 2 && j <= N - 3) return {{-2, 1.0 / (12 * h)}, {-1, -8.0 / (12 * h)}, {1, 8.0 / (12 * h)}, {2, -1.0 / (12 * h)}};
  if (j >= 1 && j <= N - 2) return {{-1, -0.5 / h}, {1, 0.5 / h}};
  if (j == 0) return {{0, -1.0 / h}, {1, 1.0 / h}};
  return {{-1, -1.0 / h}, {0, 1.0 / h}};
}

void require_calibrated(const KernelField& kf) {
  if (!(kf.M() > 0.0)) throw Error(ErrorKind::precondition, "kernel field is not calibrated (M = 0)");
}

void require_xi(const Vec& xi, int dim) {
  if (xi.size() != dim) throw Error(ErrorKind::invalid_input, "xi dimension mismatch");
  require_finite(xi, "xi");
}

// Block-diagonal sparse matrix with one dim × dim block per face.
Eigen::SparseMatrix<double> block_diagonal(const std::vector<Mat>& blocks, int dim) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(blocks.size() * static_cast<size_t>(dim * dim));
  for (size_t f = 0; f < blocks.size(); ++f)
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        const double x = blocks[f](a, b);
        if (x != 0.0) t.emplace_back(static_cast<Index>(f) * dim + a, static_cast<Index>(f) * dim + b, x);
      }
  const Index n = static_cast<Index>(blocks.size()) * dim;
  Eigen::SparseMatrix<double> D(n, n);
  D.setFromTriplets(t.begin(), t.end());
  return D;
}

// (1/d) Σ_fam S Gᵀ diag(μ_f coef(x_f)) G S
Mat gs_diffusion(const VelocityGrid& grid, const std::vector<FaceFamily>& fams, const Vec& s,
                 const std::function<Mat(const Vec&)>& coef) {
  const int d = grid.dim;
  const Index n = grid.size();
  Mat out = Mat::Zero(n, n);
  for (const FaceFamily& fam : fams) {
    const Index nf = fam.x.cols();
    std::vector<Mat> blocks(static_cast<size_t>(nf));
    parallel_for(nf, [&](Index f) {
      const Vec x = fam.x.col(f);
      blocks[static_cast<size_t>(f)] = maxwellian(x) * coef(x);
    });
    const Eigen::SparseMatrix<double> GS = fam.G * s.asDiagonal();
    const Eigen::SparseMatrix<double> D = block_diagonal(blocks, d);
    out += Mat(Eigen::SparseMatrix<double>(GS.transpose() * D * GS));
  }
  return out / d;
}

}  // namespace

VelocityGrid::VelocityGrid(int dim_, double L_, int N_) : dim(dim_), L(L_), N(N_) {
  if (dim < 2 || dim > 3) throw Error(ErrorKind::invalid_input, "dim must be 2 or 3");
  if (N < 4) throw Error(ErrorKind::invalid_input, "N must be >= 4");
  if (!std::isfinite(L) || L < 5.5) throw Error(ErrorKind::invalid_input, "L out of range [5.5,inf)");
  if (dim == 3 && N > 14) throw Error(ErrorKind::invalid_input, "N out of range [4,14] for dim 3");
  if (dim == 2 && N > 64) throw Error(ErrorKind::invalid_input, "N out of range [4,64] for dim 2");
}

Index VelocityGrid::size() const {
  Index n = 1;
  for (int k = 0; k < dim; ++k) n *= N;
  return n;
}

Vec VelocityGrid::node(Index flat) const {
  const std::vector<int> idx = unflatten(flat, dim, N);
  Vec v(dim);
  for (int k = 0; k < dim; ++k) v(k) = axis_node(idx[static_cast<size_t>(k)]);
  return v;
}

Mat VelocityGrid::nodes() const {
  Mat X(dim, size());
  for (Index i = 0; i < size(); ++i) X.col(i) = node(i);
  return X;
}

const char* to_string(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::A_xi: return "A_xi";
    case OperatorTag::Kpart: return "Kpart";
    case OperatorTag::P_xi: return "P_xi";
    case OperatorTag::W_majorant: return "W_majorant";
    case OperatorTag::L1: return "L1";
    case OperatorTag::L2: return "L2";
  }
  return "?";
}

std::vector<FaceFamily> face_families(const VelocityGrid& grid) {
  const int d = grid.dim, N = grid.N;
  const double h = grid.h();
  std::vector<FaceFamily> fams;
  for (int axis = 0; axis < d; ++axis) {
    std::vector<std::vector<int>> faces;
    for (Index flat = 0; flat < grid.size(); ++flat) {
      std::vector<int> idx = unflatten(flat, d, N);
      if (idx[static_cast<size_t>(axis)] <= N - 2) faces.push_back(std::move(idx));
    }
    FaceFamily fam;
    fam.axis = axis;
    const Index nf = static_cast<Index>(faces.size());
    fam.x.resize(d, nf);
    std::vector<Eigen::Triplet<double>> t;
    for (Index f = 0; f < nf; ++f) {
      const std::vector<int>& i = faces[static_cast<size_t>(f)];
      for (int k = 0; k < d; ++k) fam.x(k, f) = grid.axis_node(i[static_cast<size_t>(k)]);
      fam.x(axis, f) += 0.5 * h;
      std::vector<int> up = i;
      up[static_cast<size_t>(axis)] += 1;
      t.emplace_back(f * d + axis, flatten(up, N), 1.0 / h);
      t.emplace_back(f * d + axis, flatten(i, N), -1.0 / h);
      const int ia = i[static_cast<size_t>(axis)];
      const std::vector<std::pair<int, double>> interp =
          ia >= 1 && ia + 2 <= N - 1 ? std::vector<std::pair<int, double>>{{-1, -1.0 / 16}, {0, 9.0 / 16}, {1, 9.0 / 16}, {2, -1.0 / 16}}
                                     : std::vector<std::pair<int, double>>{{0, 0.5}, {1, 0.5}};
      for (int c = 0; c < d; ++c) {
        if (c == axis) continue;
        const std::vector<std::pair<int, double>> deriv = transverse_stencil(i[static_cast<size_t>(c)], N, h);
        for (const auto& [da, wa] : interp)
          for (const auto& [dc, wc] : deriv) {
            std::vector<int> node = i;
            node[static_cast<size_t>(axis)] += da;
            node[static_cast<size_t>(c)] += dc;
            t.emplace_back(f * d + c, flatten(node, N), wa * wc);
          }
      }
    }
    fam.G.resize(nf * d, grid.size());
    fam.G.setFromTriplets(t.begin(), t.end());
    fams.push_back(std::move(fam));
  }
  return fams;
}

CollisionParts assemble_parts(const VelocityGrid& grid, const KernelField& kf, bool with_L2) {
  require_calibrated(kf);
  if (kf.dim() != grid.dim) throw Error(ErrorKind::precondition, "kernel and grid dimensions differ");
  const int d = grid.dim;
  const Index n = grid.size();
  const double gamma = kf.gamma(), hd = grid.weight();
  CollisionParts parts;
  parts.grid = grid;
  parts.gamma = gamma;
  parts.v = grid.nodes();
  Vec s(n);
  parts.M_chi.resize(n);
  for (Index i = 0; i < n; ++i) {
    s(i) = 1.0 / std::sqrt(maxwellian(parts.v.col(i)));
    parts.M_chi(i) = kf.M() * chi_R(parts.v.col(i).norm(), kf.R());
  }

  const std::vector<FaceFamily> fams = face_families(grid);
  parts.L1 = Mat::Zero(n, n);
  if (with_L2) parts.L2 = Mat::Zero(n, n);
  for (const FaceFamily& fam : fams) {
    const Index nf = fam.x.cols();
    Vec mu(nf);
    for (Index f = 0; f < nf; ++f) mu(f) = maxwellian(fam.x.col(f));
    // C[f,g] blocks and ā_h(x_f) = Σ_g h^d μ_g a(x_f − x_g)
    Mat C = with_L2 ? Mat(nf * d, nf * d) : Mat();
    std::vector<Mat> blocks(static_cast<size_t>(nf));
    parallel_for(nf, [&](Index f) {
      Mat acc = Mat::Zero(d, d);
      for (Index g = 0; g < nf; ++g) {
        const Mat a = eval_a(Vec(fam.x.col(f) - fam.x.col(g)), gamma);
        acc += hd * mu(g) * a;
        if (with_L2) C.block(f * d, g * d, d, d) = hd * mu(f) * mu(g) * a;
      }
      blocks[static_cast<size_t>(f)] = mu(f) * acc;
    });
    const Eigen::SparseMatrix<double> GS = fam.G * s.asDiagonal();
    const Eigen::SparseMatrix<double> D = block_diagonal(blocks, d);
    parts.L1 -= Mat(Eigen::SparseMatrix<double>(GS.transpose() * D * GS));
    if (with_L2) {
      const Mat CG = C * GS;
      parts.L2 += GS.transpose() * CG;
    }
  }
  parts.L1 /= d;
  if (with_L2) parts.L2 /= d;
  // exact symmetry of the assembled forms
  parts.L1 = 0.5 * (parts.L1 + parts.L1.transpose()).eval();
  if (with_L2) parts.L2 = 0.5 * (parts.L2 + parts.L2.transpose()).eval();
  return parts;
}

OperatorMatrix assemble_Axi(const CollisionParts& parts, const Vec& xi) {
  require_xi(xi, parts.grid.dim);
  OperatorMatrix op;
  op.grid = parts.grid;
  op.tag = OperatorTag::A_xi;
  op.xi = xi;
  op.gamma = parts.gamma;
  op.scheme = "face-gradient gs form, closure boundary, second order";
  op.matrix = (-parts.L1).cast<cplx>();
  const Vec vx = parts.v.transpose() * xi;
  for (Index i = 0; i < op.matrix.rows(); ++i) op.matrix(i, i) += cplx(parts.M_chi(i), vx(i));
  return op;
}

OperatorMatrix assemble_K(const CollisionParts& parts) {
  if (parts.L2.size() == 0) throw Error(ErrorKind::precondition, "compact part was not assembled");
  OperatorMatrix op;
  op.grid = parts.grid;
  op.tag = OperatorTag::Kpart;
  op.xi = Vec::Zero(parts.grid.dim);
  op.gamma = parts.gamma;
  op.scheme = "face-gradient gs form, grid convolution";
  op.matrix = (-parts.L2).cast<cplx>();
  op.matrix.diagonal() -= parts.M_chi.cast<cplx>();
  return op;
}

OperatorMatrix assemble_P(const OperatorMatrix& A, const OperatorMatrix& K) {
  if (A.tag != OperatorTag::A_xi || K.tag != OperatorTag::Kpart) throw Error(ErrorKind::precondition, "assemble_P needs A_xi and Kpart");
  if (A.matrix.rows() != K.matrix.rows() || A.grid.N != K.grid.N || A.grid.dim != K.grid.dim || A.grid.L != K.grid.L)
    throw Error(ErrorKind::precondition, "grid mismatch between A_xi and Kpart");
  OperatorMatrix op = A;
  op.tag = OperatorTag::P_xi;
  op.matrix = A.matrix + K.matrix;
  return op;
}

OperatorMatrix assemble_Axi(const VelocityGrid& grid, const KernelField& kf, const Vec& xi) {
  return assemble_Axi(assemble_parts(grid, kf, false), xi);
}

OperatorMatrix assemble_K(const VelocityGrid& grid, const KernelField& kf) { return assemble_K(assemble_parts(grid, kf, true)); }

OperatorMatrix assemble_P(const VelocityGrid& grid, const KernelField& kf, const Vec& xi) {
  const CollisionParts parts = assemble_parts(grid, kf, true);
  return assemble_P(assemble_Axi(parts, xi), assemble_K(parts));
}

OperatorMatrix assemble_majorant_W(const VelocityGrid& grid, double gamma, const Vec& xi, double K) {
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma > 1.0) throw Error(ErrorKind::invalid_input, "gamma out of range [0,1]");
  if (!std::isfinite(K) || K < 0.0) throw Error(ErrorKind::invalid_input, "K must be >= 0");
  require_xi(xi, grid.dim);
  const int d = grid.dim;
  const Index n = grid.size();
  const Mat X = grid.nodes();
  Vec s(n);
  for (Index i = 0; i < n; ++i) s(i) = 1.0 / std::sqrt(maxwellian(X.col(i)));
  const auto coef = [gamma, d](const Vec& v) {
    const double r2 = v.squaredNorm();
    return Mat(std::pow(1.0 + r2, 0.5 * gamma) * ((1.0 + r2) * Mat::Identity(d, d) - v * v.transpose()));
  };
  const Mat diff = gs_diffusion(grid, face_families(grid), s, coef);
  // the gs form equals the Weyl rule plus ¼∇·∇·C + Cv·v/4 − ½∇·(Cv); remove it on the diagonal
  Vec V(n);
  for (Index i = 0; i < n; ++i) {
    const Vec v = X.col(i);
    const double r2 = v.squaredNorm(), sv = 1.0 + r2, g2 = 0.5 * gamma;
    const double phi = gamma * std::pow(sv, g2 - 1.0) + (1.0 - d) * std::pow(sv, g2);
    const double dphi = gamma * (g2 - 1.0) * std::pow(sv, g2 - 2.0) + (1.0 - d) * g2 * std::pow(sv, g2 - 1.0);
    const double divdivC = d * phi + 2.0 * r2 * dphi;
    const double Cvv = std::pow(sv, g2) * r2;
    const double divCv = std::pow(sv, g2) * (d + gamma * r2 / sv);
    const double c0 = std::pow(sv, g2) * (1.0 + r2 + xi.squaredNorm() + wedge_sq(v, xi));
    V(i) = c0 + K * K * std::pow(sv, 0.5 * (gamma + 2.0)) - 0.25 * divdivC - 0.25 * Cvv + 0.5 * divCv;
  }
  OperatorMatrix op;
  op.grid = grid;
  op.tag = OperatorTag::W_majorant;
  op.xi = xi;
  op.gamma = gamma;
  op.scheme = "weyl rule for an eta-quadratic symbol via the gs form";
  op.matrix = (diff + Mat(V.asDiagonal())).cast<cplx>();
  op.matrix = hermitian_part(op.matrix);
  return op;
}

double default_majorant_K(double gamma) {
  const SymbolSampler lam = make_sampler(SymbolKind::lambda, Vec::Zero(1), gamma);
  const PhaseFunction p = [lam](const Vec& v, const Vec& eta) { return eval_lambda(v, eta, lam); };
  return choose_K(p, 2.0 / 3.0, PhaseGrid(1, 8.0, 48), 0.5 * gamma + 1.0).K;
}

CheckReport verify_dissipation(const VelocityGrid& grid, const KernelField& kf, const Vec& xi, const DissipationOptions& opts) {
  if (opts.samples < 1) throw Error(ErrorKind::invalid_input, "samples must be >= 1");
  const CollisionParts parts = assemble_parts(grid, kf, false);
  const OperatorMatrix A = assemble_Axi(parts, xi);
  const int d = grid.dim;
  const Index n = grid.size();
  const double hd = grid.weight();

  std::vector<Mat> abar(static_cast<size_t>(n));
  Vec F(n);
  parallel_for(n, [&](Index i) {
    const Vec v = parts.v.col(i);
    abar[static_cast<size_t>(i)] = eval_abar(v, kf);
    F(i) = eval_F(v, kf);
  });

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> width(0.6, 0.9), center(-1.0, 1.0), wave(-1.0, 1.0);
  double worst = 0.0;
  int used = 0, excluded = 0;
  for (int sidx = 0; sidx < opts.samples; ++sidx) {
    const double w = width(rng);
    Vec c(d), k(d);
    for (int a = 0; a < d; ++a) c(a) = center(rng);
    for (int a = 0; a < d; ++a) k(a) = wave(rng);
    // envelope on the box boundary, independent of the grid
    const double gap = grid.L - c.cwiseAbs().maxCoeff();
    if (std::exp(-gap * gap / (2.0 * w * w)) > 1e-6) {
      ++excluded;
      continue;
    }
    CVec u(n);
    std::vector<CVec> grad(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) {
      const Vec v = parts.v.col(i);
      u(i) = std::exp(-(v - c).squaredNorm() / (2.0 * w * w)) * std::polar(1.0, k.dot(v));
      grad[static_cast<size_t>(i)] = u(i) * (-(v - c).cast<cplx>() / (w * w) + cplx(0.0, 1.0) * k.cast<cplx>());
    }
    const double lhs = hd * u.dot(A.matrix * u).real();
    double rhs = 0.0;
    for (Index i = 0; i < n; ++i) {
      const CVec& g = grad[static_cast<size_t>(i)];
      rhs += hd * ((g.adjoint() * abar[static_cast<size_t>(i)].cast<cplx>() * g)(0).real() + F(i) * std::norm(u(i)));
    }
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    ++used;
  }

  CheckReport r("dissipation", anchor::dissipation);
  r.add("N", grid.N);
  r.add("h", grid.h());
  r.add("samples_used", used);
  r.add("samples_excluded_boundary", excluded);
  r.add("identity_defect_max", worst);
  r.require(used > 0, "all samples were boundary dominated");
  if (opts.accretivity) {
    const double normA = spectral_norm(A.matrix);
    const double accretive = hermitian_eigenvalues(A.matrix).minCoeff();
    r.add("accretivity_min_eig", accretive);
    r.add("norm_A", normA);
    r.add("tol_accretivity", -1e-8 * normA);
    r.require(accretive >= -1e-8 * normA, "Hermitian part of A_xi is not PSD");
  }
  for (double t : opts.times) {
    const double e = spectral_norm(expm(-t * A.matrix));
    const std::string key = "semigroup_norm_t" + std::to_string(t).substr(0, 3);
    r.add(key, e);
    r.require(e <= 1.0 + 1e-8, "exp(-tA) is not a contraction");
  }
  r.add("tol_semigroup", 1.0 + 1e-8);
  return r;
}

namespace {

constexpr char kMagic[8] = {'L', 'A', 'N', 'D', 'A', 'U', 'M', '1'};

template <typename T>
void put(std::ofstream& out, T x) {
  out.write(reinterpret_cast<const char*>(&x), sizeof(T));
}

template <typename T>
T take(std::ifstream& in) {
  T x{};
  in.read(reinterpret_cast<char*>(&x), sizeof(T));
  if (!in) throw Error(ErrorKind::io, "truncated matrix dump");
  return x;
}

}  // namespace

// Layout (little-endian): magic[8], rows i64, cols i64, tag char[16], dim i64,
// N i64, L f64, gamma f64, xi f64[3], then rows·cols (re, im) f64 pairs.
void write_matrix_dump(const std::string& path, const OperatorMatrix& op) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path);
  out.write(kMagic, 8);
  put<std::int64_t>(out, op.matrix.rows());
  put<std::int64_t>(out, op.matrix.cols());
  std::array<char, 16> tag{};
  std::strncpy(tag.data(), to_string(op.tag), tag.size() - 1);
  out.write(tag.data(), tag.size());
  put<std::int64_t>(out, op.grid.dim);
  put<std::int64_t>(out, op.grid.N);
  put<double>(out, op.grid.L);
  put<double>(out, op.gamma);
  for (int k = 0; k < 3; ++k) put<double>(out, k < op.xi.size() ? op.xi(k) : 0.0);
  for (Index i = 0; i < op.matrix.rows(); ++i)
    for (Index j = 0; j < op.matrix.cols(); ++j) {
      put<double>(out, op.matrix(i, j).real());
      put<double>(out, op.matrix(i, j).imag());
    }
  if (!out) throw Error(ErrorKind::io, "write failed for " + path);
}

OperatorMatrix read_matrix_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw Error(ErrorKind::io, "not a matrix dump: " + path);
  const auto rows = take<std::int64_t>(in), cols = take<std::int64_t>(in);
  std::array<char, 16> tag{};
  in.read(tag.data(), tag.size());
  OperatorMatrix op;
  const std::string name(tag.data());
  for (OperatorTag t : {OperatorTag::A_xi, OperatorTag::Kpart, OperatorTag::P_xi, OperatorTag::W_majorant, OperatorTag::L1, OperatorTag::L2})
    if (name == to_string(t)) op.tag = t;
  const auto dim = take<std::int64_t>(in), N = take<std::int64_t>(in);
  const double L = take<double>(in);
  op.grid = VelocityGrid(static_cast<int>(dim), L, static_cast<int>(N));
  op.gamma = take<double>(in);
  op.xi.resize(dim);
  for (int k = 0; k < 3; ++k) {
    const double x = take<double>(in);
    if (k < dim) op.xi(k) = x;
  }
  op.matrix.resize(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const double re = take<double>(in), im = take<double>(in);
      op.matrix(i, j) = cplx(re, im);
    }
  return op;
}

}  // namespace landau
