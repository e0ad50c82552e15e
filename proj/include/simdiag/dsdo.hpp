#pragma once

#include <random>

#include "simdiag/classify.hpp"

namespace simdiag {

struct DsdoFactorization {
  enum class Mode { SDO, SD };
  Mat P;               // n x m, orthonormal columns in SDO mode
  std::vector<Mat> D;  // L diagonal n x n matrices
  Mode mode = Mode::SDO;
  double residual = 0.0;  // phi_D value
};

namespace detail {

// reproducible spectral factor: descending eigenvalues, each eigenvector's
// largest-magnitude entry made positive; returns (Q, X) with A = Q^T X Q
inline std::pair<Mat, Mat> spectral_rows(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  const int m = static_cast<int>(A.rows());
  Mat V = es.eigenvectors();
  Vec ev = es.eigenvalues();
  Mat Q(m, m);
  Mat X = Mat::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    int src = m - 1 - j;  // descending order
    Vec v = V.col(src);
    Eigen::Index imax;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0) v = -v;
    Q.row(j) = v.transpose();
    X(j, j) = ev(src);
  }
  return {Q, X};
}

}  // namespace detail

inline DsdoFactorization dsdo_construct(const SymMatrixSet& C,
                                        const Config& cfg = {}) {
  const int m = C.dim;
  const int L = C.size();
  const int n = L * m;
  DsdoFactorization f;
  f.P = Mat(n, m);
  const double root = std::sqrt(static_cast<double>(L));
  std::vector<Mat> X(L);
  for (int i = 0; i < L; ++i) {
    auto [Q, Xi] = detail::spectral_rows(C.mats[i]);
    f.P.middleRows(i * m, m) = Q / root;
    X[i] = Xi;
  }
  for (int i = 0; i < L; ++i) {
    Mat Di = Mat::Zero(n, n);
    Di.block(i * m, i * m, m, m) = static_cast<double>(L) * X[i];
    f.D.push_back(Di);
  }
  f.mode = DsdoFactorization::Mode::SDO;
  f.residual = phi_D(C, f.P, f.D);
  double total = 0.0;
  for (const auto& A : C.mats) total += A.squaredNorm();
  if (f.residual > cfg.fact_tol * std::max(1.0, total))
    throw std::runtime_error("dsdo_construct: residual above tolerance");
  return f;
}

// symmetric basis T^(i,i) = e_i e_i^T, T^(i,j) = e_i e_j^T + e_j e_i^T, in
// the order (1,1), ..., (m,m), then (i,j) with i < j
inline std::vector<Mat> symmetric_basis(int m) {
  std::vector<Mat> T;
  for (int i = 0; i < m; ++i) {
    Mat B = Mat::Zero(m, m);
    B(i, i) = 1.0;
    T.push_back(B);
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Mat B = Mat::Zero(m, m);
      B(i, j) = 1.0;
      B(j, i) = 1.0;
      T.push_back(B);
    }
  return T;
}

// coefficients of A in symmetric_basis order: diagonal entries, then the
// strict upper triangle row by row
inline Vec symmetric_basis_coefficients(const Mat& A) {
  const int m = static_cast<int>(A.rows());
  Vec c(m * (m + 1) / 2);
  for (int i = 0; i < m; ++i) c(i) = A(i, i);
  int at = m;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) c(at++) = A(i, j);
  return c;
}

inline DsdoFactorization dsdo_basis_construct(int m, const Config& cfg = {}) {
  if (m < 1 || m > 12)
    throw std::invalid_argument("dsdo_basis_construct: 1 <= m <= 12 required");
  return dsdo_construct(SymMatrixSet(m, symmetric_basis(m), cfg), cfg);
}

// diagonal matrix representing A through the fixed basis factorization:
// A = P^T diag_combination P by linearity of the basis expansion
inline Mat dsdo_basis_diagonal(const DsdoFactorization& basis, const Mat& A) {
  Vec c = symmetric_basis_coefficients(A);
  if (static_cast<std::size_t>(c.size()) != basis.D.size())
    throw std::invalid_argument("dsdo_basis_diagonal: size mismatch");
  Mat D = Mat::Zero(basis.D[0].rows(), basis.D[0].cols());
  for (Eigen::Index k = 0; k < c.size(); ++k) D += c(k) * basis.D[k];
  return D;
}

// Does the big set project onto C through the corner map, and is it itself
// simultaneously diagonalizable (orthogonally or by congruence)?
inline bool rho_projection_check(const std::vector<Mat>& S,
                                 const SymMatrixSet& C, bool orthogonal = true,
                                 const Config& cfg = {}) {
  if (S.size() != static_cast<std::size_t>(C.size())) return false;
  const int m = C.dim;
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (S[i].rows() != S[i].cols() || S[i].rows() < m) return false;
    double scale = std::max(1.0, C.mats[i].norm());
    if ((S[i].topLeftCorner(m, m) - C.mats[i]).norm() > cfg.sym_rel * scale)
      return false;
  }
  const int n = static_cast<int>(S[0].rows());
  for (const auto& Si : S)
    if (Si.rows() != n) return false;
  SymMatrixSet big(n, S, cfg);
  auto rep = orthogonal ? check_sdo(big, cfg) : check_sd(big, cfg);
  return rep.verdict == Verdict::Yes;
}

inline DsdoFactorization joint_slice_factorization(const SymMatrixSet& slices,
                                                   int d,
                                                   const Config& cfg = {}) {
  if (d < 3) throw std::invalid_argument("joint_slice_factorization: d >= 3");
  const int m = slices.dim;
  const long L = slices.size();
  double needed = std::pow(static_cast<double>(m), d - 1);
  if (static_cast<double>(L) * m < needed)
    throw std::domain_error(
        "joint_slice_factorization: need L*m >= m^(d-1) slices");
  return dsdo_construct(slices, cfg);
}

struct SyntheticSlices {
  SymMatrixSet slices;
  Mat mixing;               // r x m, orthonormal columns
  std::vector<Vec> source;  // per-slice diagonal source weights
};

// synthetic joint-slice generator: orthonormal mixing, diagonal sources,
// slice_i = mixing^T Diag(source_i) mixing; L = m^(d-2) slices
inline SyntheticSlices synth_bss_slices(int m, int d, int r,
                                        std::uint64_t seed,
                                        const Config& cfg = {}) {
  if (r < m) throw std::invalid_argument("synth_bss_slices: r >= m required");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Mat G(r, m);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < m; ++j) G(i, j) = g(rng);
  Mat Q = Eigen::HouseholderQR<Mat>(G).householderQ() *
          Mat::Identity(r, m);  // thin orthonormal factor
  long L = 1;
  for (int t = 0; t < d - 2; ++t) L *= m;
  std::vector<Mat> mats;
  std::vector<Vec> src;
  for (long i = 0; i < L; ++i) {
    Vec w(r);
    for (int j = 0; j < r; ++j) w(j) = g(rng);
    src.push_back(w);
    mats.push_back(Q.transpose() * w.asDiagonal() * Q);
  }
  return {SymMatrixSet(m, mats, cfg), Q, src};
}

}  // namespace simdiag
