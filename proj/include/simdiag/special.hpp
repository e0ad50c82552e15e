#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <variant>

#include "simdiag/types.hpp"

namespace simdiag {

// Anti-identity: ones where i + j = m + 1 (1-based).
inline Mat special_E(int m) {
  if (m < 1) throw std::invalid_argument("special_E: m >= 1 required");
  Mat M = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) M(i, m - 1 - i) = 1.0;
  return M;
}

// Sub-antidiagonal: ones where i + j = m + 2 (1-based). F(1) = 0.
inline Mat special_F(int m) {
  if (m < 1) throw std::invalid_argument("special_F: m >= 1 required");
  Mat M = Mat::Zero(m, m);
  for (int i = 1; i < m; ++i) M(i, m - i) = 1.0;
  return M;
}

// +1 where i + j = m, -1 where i + j = m + 2 (1-based).
inline Mat special_H(int m) {
  if (m < 1) throw std::invalid_argument("special_H: m >= 1 required");
  Mat M = Mat::Zero(m, m);
  for (int i = 0; i < m - 1; ++i) M(i, m - 2 - i) = 1.0;
  for (int i = 1; i < m; ++i) M(i, m - i) = -1.0;
  return M;
}

// Signature of E(m): Diag{I_ceil(m/2), -I_floor(m/2)}.
inline Mat special_G(int m) {
  if (m < 1) throw std::invalid_argument("special_G: m >= 1 required");
  Mat M = Mat::Zero(m, m);
  int pos = (m + 1) / 2;
  for (int i = 0; i < m; ++i) M(i, i) = i < pos ? 1.0 : -1.0;
  return M;
}

// Diagonal scaling diag{k^delta_s} with delta_s = (m+1)/2 - s; det = 1.
inline Mat special_Rk(int m, double k) {
  if (m < 1) throw std::invalid_argument("special_Rk: m >= 1 required");
  if (k < 1.0) throw std::invalid_argument("special_Rk: k >= 1 required");
  Mat M = Mat::Zero(m, m);
  for (int s = 1; s <= m; ++s)
    M(s - 1, s - 1) = std::pow(k, (m + 1) / 2.0 - s);
  return M;
}

// Upper Jordan block, real eigenvalue.
inline Mat jordan_block(double lambda, int m) {
  if (m < 1) throw std::invalid_argument("jordan_block: m >= 1 required");
  Mat M = Mat::Identity(m, m) * lambda;
  for (int i = 0; i + 1 < m; ++i) M(i, i + 1) = 1.0;
  return M;
}

// Real Jordan block for a +- bi with `cells` 2x2 rotation cells
// [[a, b], [-b, a]] and identity super-cells; total dimension 2*cells.
inline Mat jordan_block_complex(double a, double b, int cells) {
  if (cells < 1) throw std::invalid_argument("jordan_block_complex: cells >= 1");
  int n = 2 * cells;
  Mat M = Mat::Zero(n, n);
  for (int c = 0; c < cells; ++c) {
    M(2 * c, 2 * c) = a;
    M(2 * c, 2 * c + 1) = b;
    M(2 * c + 1, 2 * c) = -b;
    M(2 * c + 1, 2 * c + 1) = a;
    if (c + 1 < cells) {
      M(2 * c, 2 * c + 2) = 1.0;
      M(2 * c + 1, 2 * c + 3) = 1.0;
    }
  }
  return M;
}

struct SpecialMatrixKind {
  enum Tag { E, F, H, G, Rk, Jordan } tag;
  int size;                      // m (total dimension)
  double k = 1.0;                // Rk only
  double eig_re = 0.0;           // Jordan only
  double eig_im = 0.0;           // Jordan only; != 0 means complex pair
};

inline Mat special_matrix(const SpecialMatrixKind& kind) {
  switch (kind.tag) {
    case SpecialMatrixKind::E: return special_E(kind.size);
    case SpecialMatrixKind::F: return special_F(kind.size);
    case SpecialMatrixKind::H: return special_H(kind.size);
    case SpecialMatrixKind::G: return special_G(kind.size);
    case SpecialMatrixKind::Rk: return special_Rk(kind.size, kind.k);
    case SpecialMatrixKind::Jordan:
      if (kind.eig_im != 0.0) {
        if (kind.size % 2 != 0)
          throw std::invalid_argument("complex Jordan kind needs even size");
        return jordan_block_complex(kind.eig_re, std::abs(kind.eig_im),
                                    kind.size / 2);
      }
      return jordan_block(kind.eig_re, kind.size);
  }
  throw std::invalid_argument("special_matrix: bad tag");
}

// [A, B]_S = S^-1 A S^-1 B - S^-1 B S^-1 A.
inline Mat s_commutator(const Mat& A, const Mat& B, const Mat& S,
                        const Config& cfg = {}) {
  Eigen::FullPivLU<Mat> lu(S);
  Eigen::JacobiSVD<Mat> svd(S);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin <= cfg.det_rel * std::max(1.0, smax))
    throw std::domain_error("s_commutator: S is singular");
  Mat SA = lu.solve(A);
  Mat SB = lu.solve(B);
  return SA * SB - SB * SA;
}

enum class CongruenceConvention { PtAP, PAPt };

// phi_T error: sum_i ||congruence(A_i) - D_i||_F^2. Default convention is
// P^T A P (P is m x n); the flag switches to P A P^T (P is n x m).
inline double phi_T(const SymMatrixSet& C, const Mat& P,
                    const std::vector<Mat>& D,
                    CongruenceConvention conv = CongruenceConvention::PtAP) {
  if (static_cast<int>(D.size()) != C.size())
    throw std::invalid_argument("phi_T: |D| must equal L");
  const int m = C.dim;
  Eigen::Index n;
  if (conv == CongruenceConvention::PtAP) {
    if (P.rows() != m) throw std::invalid_argument("phi_T: P must be m x n");
    n = P.cols();
  } else {
    if (P.cols() != m) throw std::invalid_argument("phi_T: P must be n x m");
    n = P.rows();
  }
  if (n < m) throw std::invalid_argument("phi_T: n >= m required");
  double acc = 0.0;
  for (int i = 0; i < C.size(); ++i) {
    if (D[i].rows() != n || D[i].cols() != n)
      throw std::invalid_argument("phi_T: D_i must be n x n");
    Mat W = conv == CongruenceConvention::PtAP
                ? Mat(P.transpose() * C.mats[i] * P)
                : Mat(P * C.mats[i] * P.transpose());
    acc += (W - D[i]).squaredNorm();
  }
  return acc;
}

// phi_D error: sum_i ||A_i - P^T D_i P||_F^2 with P of shape n x m.
inline double phi_D(const SymMatrixSet& C, const Mat& P,
                    const std::vector<Mat>& D) {
  if (static_cast<int>(D.size()) != C.size())
    throw std::invalid_argument("phi_D: |D| must equal L");
  const int m = C.dim;
  if (P.cols() != m) throw std::invalid_argument("phi_D: P must be n x m");
  const Eigen::Index n = P.rows();
  if (n < m) throw std::invalid_argument("phi_D: n >= m required");
  double acc = 0.0;
  for (int i = 0; i < C.size(); ++i) {
    if (D[i].rows() != n || D[i].cols() != n)
      throw std::invalid_argument("phi_D: D_i must be n x n");
    acc += (C.mats[i] - P.transpose() * D[i] * P).squaredNorm();
  }
  return acc;
}

}  // namespace simdiag
