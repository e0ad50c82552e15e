#pragma once

#include <variant>

#include "simdiag/canon.hpp"

namespace simdiag {

// Orthogonal Q with Q^T E(m) Q = G(m): paired antidiagonal eigenvectors,
// det fixed to +1.
inline Mat q_anti_to_signature(int m) {
  Mat Q = Mat::Zero(m, m);
  const double s = 1.0 / std::sqrt(2.0);
  int col = 0;
  for (int i = 0; i < m / 2; ++i) {
    Q(i, col) = s;
    Q(m - 1 - i, col) = s;
    ++col;
  }
  if (m % 2 == 1) Q(m / 2, col++) = 1.0;
  for (int i = 0; i < m / 2; ++i) {
    Q(i, col) = s;
    Q(m - 1 - i, col) = -s;
    ++col;
  }
  if (Q.determinant() < 0) Q.col(m - 1) *= -1.0;
  return Q;
}

struct SeqConstant {
  Mat P;
};
struct SeqEFBlock {
  Mat Q;
  int m = 1;
};
struct SeqNonsingularPair {
  Mat base;  // P-tilde
  struct Factor {
    int m = 1;
    Mat Q;         // orthogonal, Q^T E Q = G; identity factor when inactive
    bool active = true;
  };
  std::vector<Factor> factors;
};
struct SeqSingularCase1 {
  Mat base;  // canonicalizing transform, zero block placed last
};
struct SeqSingularCase2 {
  Mat base;  // canonicalizing transform, the chosen corner block placed last
  int mp = 1;  // corner-block parameter; block dimension 2*mp + 1
};
struct SeqPsdPencil {
  Mat C;      // the semidefinite pencil member
  Mat other;  // the matrix whose compression gets orthogonally diagonalized
};

struct CongruenceSequence {
  int dim = 0;
  std::variant<SeqConstant, SeqEFBlock, SeqNonsingularPair, SeqSingularCase1,
               SeqSingularCase2, SeqPsdPencil>
      recipe;
  double det_value = 1.0;
  std::optional<std::vector<Mat>> limits;
};

namespace detail {

inline void overflow_guard(const Mat& P) {
  if (!P.allFinite() || P.cwiseAbs().maxCoeff() > 1e150)
    throw std::overflow_error("k-too-large");
}

// deterministic orthogonal diagonalizer: ascending eigenvalues, first
// nonzero entry of each eigenvector positive, det fixed to +1
inline Mat fixed_diagonalizer(const Mat& S) {
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  Mat Q = es.eigenvectors();
  for (Eigen::Index j = 0; j < Q.cols(); ++j) {
    for (Eigen::Index i = 0; i < Q.rows(); ++i) {
      if (std::abs(Q(i, j)) > 1e-12) {
        if (Q(i, j) < 0) Q.col(j) *= -1.0;
        break;
      }
    }
  }
  if (Q.determinant() < 0) Q.col(Q.cols() - 1) *= -1.0;
  return Q;
}

}  // namespace detail

inline Mat evaluate(const CongruenceSequence& seq, double k) {
  if (k < 1.0) throw std::invalid_argument("evaluate: k must be >= 1");
  const int m = seq.dim;
  Mat P;
  if (auto* c = std::get_if<SeqConstant>(&seq.recipe)) {
    P = c->P;
  } else if (auto* ef = std::get_if<SeqEFBlock>(&seq.recipe)) {
    P = special_Rk(ef->m, k) * ef->Q;
  } else if (auto* np = std::get_if<SeqNonsingularPair>(&seq.recipe)) {
    Mat D = Mat::Zero(m, m);
    int at = 0;
    for (const auto& f : np->factors) {
      if (f.active)
        D.block(at, at, f.m, f.m) = special_Rk(f.m, k) * f.Q;
      else
        D.block(at, at, f.m, f.m) = Mat::Identity(f.m, f.m);
      at += f.m;
    }
    P = np->base * D;
  } else if (auto* c1 = std::get_if<SeqSingularCase1>(&seq.recipe)) {
    Vec d = Vec::Constant(m, 1.0 / k);
    d(m - 1) = std::pow(k, m - 1);
    P = c1->base * d.asDiagonal();
  } else if (auto* c2 = std::get_if<SeqSingularCase2>(&seq.recipe)) {
    const int d4 = 2 * c2->mp + 1;
    const int rest = m - d4;
    const double s = std::pow(k, -1.0 / (2.0 * (m - 1)));
    Mat D = Mat::Zero(m, m);
    D.topLeftCorner(rest, rest) = s * Mat::Identity(rest, rest);
    Mat V = Mat::Zero(d4, d4);
    V.diagonal().head(c2->mp).setConstant(s);
    V(c2->mp, c2->mp) = std::sqrt(k);
    V.diagonal().tail(c2->mp).setConstant(s);
    D.bottomRightCorner(d4, d4) = special_Rk(d4, k) * V;
    P = c2->base * D;
  } else {
    const auto& pp = std::get<SeqPsdPencil>(seq.recipe);
    Eigen::SelfAdjointEigenSolver<Mat> es(pp.C + (1.0 / k) * Mat::Identity(m, m));
    Vec inv_sqrt = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cwiseInverse();
    Mat Ct = es.eigenvectors() * inv_sqrt.asDiagonal() *
             es.eigenvectors().transpose();
    Mat Qk = detail::fixed_diagonalizer(Ct * pp.other * Ct);
    double logdet = inv_sqrt.array().log().sum();
    P = Ct * Qk * std::exp(-logdet / m);
  }
  detail::overflow_guard(P);
  return P;
}

inline CongruenceSequence seq_nonsingular_pair(const Mat& A, const Mat& B,
                                               const Config& cfg = {}) {
  const int m = static_cast<int>(A.rows());
  const double scale = std::max({1.0, A.norm(), B.norm()});
  if (offdiag(A).norm() <= 1e-14 * scale && offdiag(B).norm() <= 1e-14 * scale) {
    CongruenceSequence seq;
    seq.dim = m;
    seq.recipe = SeqConstant{Mat::Identity(m, m)};
    seq.det_value = 1.0;
    seq.limits = std::vector<Mat>{diagpart(A), diagpart(B)};
    return seq;
  }
  UhligCanonicalPair u = uhlig_canonical(A, B, cfg);
  for (const auto& b : u.blocks)
    if (b.complex_pair)
      throw std::domain_error(
          "seq_nonsingular_pair: non-real eigenvalues present");
  SeqNonsingularPair rec;
  rec.base = u.transform;
  Mat limA = Mat::Zero(m, m), limB = Mat::Zero(m, m);
  int at = 0;
  for (const auto& b : u.blocks) {
    SeqNonsingularPair::Factor f;
    f.m = b.size;
    f.Q = q_anti_to_signature(b.size);
    rec.factors.push_back(f);
    limA.block(at, at, b.size, b.size) = double(b.sign) * special_G(b.size);
    limB.block(at, at, b.size, b.size) =
        b.re * double(b.sign) * special_G(b.size);
    at += b.size;
  }
  CongruenceSequence seq;
  seq.dim = m;
  seq.recipe = std::move(rec);
  seq.limits = std::vector<Mat>{limA, limB};
  seq.det_value = evaluate(seq, 1.0).determinant();
  return seq;
}

inline CongruenceSequence seq_singular_pair(
    const std::vector<LancasterBlockDescriptor>& blocks,
    const std::optional<Mat>& scramble = std::nullopt, const Config& cfg = {}) {
  int p3 = 0, p4 = 0, p5 = 0, total = 0;
  for (const auto& b : blocks) {
    if (b.type == 3) ++p3;
    if (b.type == 4) ++p4;
    if (b.type == 5) ++p5;
    total += b.total_dim();
  }
  if (p3 > 0 && p4 + p5 == 0)
    throw std::runtime_error("not-TWSD-B");

  // base transform undoing the scramble: P^T (Q^T X Q) P = X with P = Q^-1
  Mat base = Mat::Identity(total, total);
  if (scramble) {
    if (scramble->rows() != total || scramble->cols() != total)
      throw std::invalid_argument("seq_singular_pair: scramble shape");
    base = scramble->inverse();
  }

  auto move_block_last = [&](std::size_t which) {
    // permutation putting block `which` at the end, in descriptor order
    Mat Pi = Mat::Zero(total, total);
    int src = 0, dst = 0;
    int special_at = 0, special_d = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      int d = blocks[i].total_dim();
      if (i == which) {
        special_at = src;
        special_d = d;
      }
      src += d;
    }
    src = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      int d = blocks[i].total_dim();
      if (i != which) {
        for (int c = 0; c < d; ++c) Pi(src + c, dst + c) = 1.0;
        dst += d;
      }
      src += d;
    }
    for (int c = 0; c < special_d; ++c) Pi(special_at + c, dst + c) = 1.0;
    return Pi;
  };

  CongruenceSequence seq;
  seq.dim = total;
  if (p5 > 0) {
    std::size_t which = 0;
    while (blocks[which].type != 5) ++which;
    SeqSingularCase1 rec;
    rec.base = base * move_block_last(which);
    seq.recipe = std::move(rec);
    seq.limits =
        std::vector<Mat>{Mat::Zero(total, total), Mat::Zero(total, total)};
  } else if (p4 > 0) {
    std::size_t which = 0;
    while (blocks[which].type != 4) ++which;
    SeqSingularCase2 rec;
    rec.base = base * move_block_last(which);
    rec.mp = blocks[which].m;
    seq.recipe = std::move(rec);
    seq.limits =
        std::vector<Mat>{Mat::Zero(total, total), Mat::Zero(total, total)};
  } else {
    // only diagonal-pattern and corner-pattern blocks: per-block R_k(m_i) Q_i
    SeqNonsingularPair rec;
    rec.base = base;
    Mat limA = Mat::Zero(total, total), limB = Mat::Zero(total, total);
    int at = 0;
    for (const auto& b : blocks) {
      int d = b.total_dim();
      SeqNonsingularPair::Factor f;
      f.m = d;
      f.Q = q_anti_to_signature(d);
      rec.factors.push_back(f);
      if (b.type == 1) {
        limA.block(at, at, d, d) = double(b.sign) * special_G(d);
        limB.block(at, at, d, d) = b.lambda * double(b.sign) * special_G(d);
      } else {  // type 2: X part decays, Y part limits to eta * G
        limB.block(at, at, d, d) = double(b.sign) * special_G(d);
      }
      at += d;
    }
    seq.recipe = std::move(rec);
    seq.limits = std::vector<Mat>{limA, limB};
  }
  seq.det_value = evaluate(seq, 1.0).determinant();
  (void)cfg;
  return seq;
}

inline CongruenceSequence seq_psd_pencil(const Mat& A, const Mat& B,
                                         const PencilWitness& witness,
                                         const Config& cfg = {}) {
  if (witness.kind == PencilWitness::Nonsingular)
    throw std::domain_error("seq_psd_pencil: witness must be (semi)definite");
  if (witness.coeffs.size() != 2)
    throw std::invalid_argument("seq_psd_pencil: pair witness required");
  const double alpha = witness.coeffs(0), beta = witness.coeffs(1);
  if (alpha == 0.0 && beta == 0.0)
    throw std::domain_error("seq_psd_pencil: zero pencil coefficients");
  SeqPsdPencil rec;
  rec.C = witness.pencil;
  rec.other = alpha != 0.0 ? B : A;  // alpha = 0: swap the roles of A and B
  CongruenceSequence seq;
  seq.dim = static_cast<int>(A.rows());
  seq.recipe = std::move(rec);
  seq.det_value = 1.0;
  (void)cfg;
  return seq;
}

struct VerificationReport {
  std::vector<double> k_grid;
  std::vector<double> offdiag_sum;  // sum_i ||offdiag(Pk^T A_i Pk)||
  std::vector<double> diag_max;     // max_i ||diag(Pk^T A_i Pk)||
  std::vector<double> det_drift;    // |det(Pk) - det_value| / |det_value|
  bool monotone_decay = false;
  bool bounded_diag = false;
  bool det_constant = false;
};

inline VerificationReport verify_sequence(const SymMatrixSet& C,
                                          const CongruenceSequence& seq,
                                          const std::vector<double>& k_grid) {
  if (k_grid.size() < 3)
    throw std::invalid_argument("verify_sequence: need at least 3 grid points");
  for (std::size_t i = 1; i < k_grid.size(); ++i)
    if (k_grid[i] <= k_grid[i - 1])
      throw std::invalid_argument("verify_sequence: k_grid must ascend");
  if (C.dim != seq.dim)
    throw std::invalid_argument("verify_sequence: dimension mismatch");

  VerificationReport rep;
  rep.k_grid = k_grid;
  for (double k : k_grid) {
    Mat P = evaluate(seq, k);
    double off = 0.0, dmax = 0.0;
    for (const auto& A : C.mats) {
      Mat W = P.transpose() * A * P;
      off += offdiag(W).norm();
      dmax = std::max(dmax, diagpart(W).norm());
    }
    rep.offdiag_sum.push_back(off);
    rep.diag_max.push_back(dmax);
    rep.det_drift.push_back(std::abs(P.determinant() - seq.det_value) /
                            std::abs(seq.det_value));
  }
  rep.monotone_decay = true;
  double scale = 1.0;
  for (const auto& A : C.mats) scale = std::max(scale, A.norm());
  double floor_tol = 1e-10 * scale;  // noise floor: exact zeros pick up O(k*eps)
  for (std::size_t i = 1; i < rep.offdiag_sum.size(); ++i)
    if (!(rep.offdiag_sum[i] < rep.offdiag_sum[i - 1] ||
          rep.offdiag_sum[i] <= floor_tol))
      rep.monotone_decay = false;
  double dmin = *std::min_element(rep.diag_max.begin(), rep.diag_max.end());
  rep.bounded_diag = true;
  for (double d : rep.diag_max)
    if (d > 2.0 * std::max(dmin, 1e-300)) rep.bounded_diag = false;
  rep.det_constant = true;
  for (double d : rep.det_drift)
    if (d > 1e-8) rep.det_constant = false;
  return rep;
}

}  // namespace simdiag
