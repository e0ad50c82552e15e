#pragma once

#include <optional>

#include "simdiag/jordan.hpp"
#include "simdiag/pencil.hpp"
#include "simdiag/special.hpp"

namespace simdiag {

struct UhligBlockSpec {
  int sign = +1;        // +1 for complex blocks (they carry no sign)
  int size = 1;         // Jordan size; 2x2-cell count for complex pairs
  bool complex_pair = false;
  double re = 0.0;
  double im = 0.0;

  int total_dim() const { return complex_pair ? 2 * size : size; }
};

struct UhligCanonicalPair {
  Mat transform;  // P with P^T A P = Diag{sigma_s E(m_s)}
  std::vector<UhligBlockSpec> blocks;
  double residualA = 0.0;
  double residualB = 0.0;

  Mat target_A() const {
    int m = 0;
    for (const auto& b : blocks) m += b.total_dim();
    Mat X = Mat::Zero(m, m);
    int at = 0;
    for (const auto& b : blocks) {
      int d = b.total_dim();
      X.block(at, at, d, d) = double(b.sign) * special_E(d);
      at += d;
    }
    return X;
  }
  Mat target_B() const {
    int m = 0;
    for (const auto& b : blocks) m += b.total_dim();
    Mat Y = Mat::Zero(m, m);
    int at = 0;
    for (const auto& b : blocks) {
      int d = b.total_dim();
      Mat J = b.complex_pair ? jordan_block_complex(b.re, b.im, b.size)
                             : jordan_block(b.re, b.size);
      Y.block(at, at, d, d) = double(b.sign) * special_E(d) * J;
      at += d;
    }
    return Y;
  }
};

struct CanonicalUnreliable : std::runtime_error {
  std::vector<UhligBlockSpec> blocks;
  explicit CanonicalUnreliable(const std::string& what,
                               std::vector<UhligBlockSpec> b = {})
      : std::runtime_error(what), blocks(std::move(b)) {}
};

namespace detail {

template <typename MatT>
struct RawChain {
  using VecT = Eigen::Matrix<typename MatT::Scalar, Eigen::Dynamic, 1>;
  VecT top;
  int len = 0;
};

// A-bilinear pairing <x, y> = x^T A y (no conjugation, also over C).
template <typename VecT, typename MatT>
typename MatT::Scalar apair(const VecT& x, const MatT& A, const VecT& y) {
  return (x.transpose() * A * y)(0, 0);
}

// Normalizes the chains of one eigenvalue group so the A-Gram of the chain
// columns is Diag{sigma_t E(m_t)}. N = M - lambda*I; chains longest-first.
// Uses <N x, y>_A = <x, N y>_A, which holds because A*(A^-1 B) is symmetric.
template <typename MatT>
std::vector<std::pair<typename MatT::Scalar, std::vector<typename RawChain<MatT>::VecT>>>
normalize_group(std::vector<RawChain<MatT>> chains, const MatT& A,
                const MatT& N, double scale, const Config& cfg) {
  using Scalar = typename MatT::Scalar;
  using VecT = typename RawChain<MatT>::VecT;
  std::vector<std::pair<Scalar, std::vector<VecT>>> done;  // (h_top, cols)
  std::vector<std::vector<VecT>> powers;  // powers[s][j] = N^j w_s
  std::vector<int> lens;
  auto top_pair = [&](const VecT& x, const VecT& y, int len) {
    VecT Ny = y;
    for (int l = 0; l + 1 < len; ++l) Ny = N * Ny;
    return apair<VecT, MatT>(x, A, Ny);
  };
  for (std::size_t ti = 0; ti < chains.size(); ++ti) {
    auto& ch = chains[ti];
    const int mt = ch.len;
    VecT v = ch.top;
    // pivot repair: if the self-pairing of this chain vanishes (e.g. a
    // hyperbolic [[0,1],[1,0]] Gram with an equal-size partner), mix in a
    // later same-length chain top to make it nonzero
    if (std::abs(top_pair(v, v, mt)) < 1e-8 * scale) {
      for (std::size_t u = ti + 1; u < chains.size(); ++u) {
        if (chains[u].len != mt) continue;
        VecT cand = v + chains[u].top;
        if (std::abs(top_pair(cand, cand, mt)) > 1e-8 * scale) {
          v = cand;
          break;
        }
        cand = v - chains[u].top;
        if (std::abs(top_pair(cand, cand, mt)) > 1e-8 * scale) {
          v = cand;
          break;
        }
      }
    }
    // cross-orthogonalize against every already-normalized chain
    for (std::size_t s = 0; s < done.size(); ++s) {
      const int ms = lens[s];
      Scalar sigma = done[s].first;  // self-pairing value at level ms-1
      std::vector<Scalar> g(mt);
      VecT Nlv = v;
      for (int l = 0; l < mt; ++l) {
        g[l] = apair<VecT, MatT>(powers[s][0], A, Nlv);
        if (l + 1 < mt) Nlv = N * Nlv;
      }
      for (int l = 0; l < mt; ++l) {
        int j = ms - 1 - l;
        v -= (g[l] / sigma) * powers[s][j];
      }
    }
    // self-pairings h_l = <v, N^l v>_A
    std::vector<Scalar> h(mt);
    {
      VecT Nlv = v;
      for (int l = 0; l < mt; ++l) {
        h[l] = apair<VecT, MatT>(v, A, Nlv);
        if (l + 1 < mt) Nlv = N * Nlv;
      }
    }
    if (std::abs(h[mt - 1]) < 1e-10 * scale)
      throw CanonicalUnreliable("canonical-unreliable: degenerate chain pairing");
    // strip the lower Hankel stripes: w = sum c_j N^j v with c_0 = 1
    std::vector<Scalar> c(mt, Scalar(0));
    c[0] = Scalar(1);
    for (int d = 1; d < mt; ++d) {
      // <w, N^s w> with s = mt-1-d: sum over j+u <= d of c_j c_u h[s+j+u]
      Scalar acc(0);
      for (int j = 0; j <= d; ++j)
        for (int u = 0; u + j <= d; ++u) {
          if ((j == 0 && u == d) || (j == d && u == 0)) continue;
          acc += c[j] * c[u] * h[mt - 1 - d + j + u];
        }
      c[d] = -acc / (Scalar(2) * h[mt - 1]);
    }
    VecT w = VecT::Zero(v.size());
    {
      VecT Njv = v;
      for (int j = 0; j < mt; ++j) {
        w += c[j] * Njv;
        if (j + 1 < mt) Njv = N * Njv;
      }
    }
    Scalar htop = h[mt - 1];
    Scalar gamma;
    if constexpr (std::is_same_v<Scalar, double>) {
      gamma = 1.0 / std::sqrt(std::abs(htop));
    } else {
      gamma = Scalar(1) / std::sqrt(htop);  // complex: absorb the phase
    }
    w *= gamma;
    // record chain column powers
    std::vector<VecT> pw(mt);
    pw[0] = w;
    for (int j = 1; j < mt; ++j) pw[j] = N * pw[j - 1];
    Scalar sig = apair<VecT, MatT>(w, A, pw[mt - 1]);
    powers.push_back(pw);
    lens.push_back(mt);
    done.push_back({sig, pw});
  }
  return done;
}

}  // namespace detail

inline UhligCanonicalPair uhlig_canonical(const Mat& A, const Mat& B,
                                          const Config& cfg = {}) {
  const int m = static_cast<int>(A.rows());
  Eigen::FullPivLU<Mat> lu(A);
  if (detail::nonsingularity(A) <= cfg.det_rel)
    throw std::domain_error("uhlig_canonical: A is singular");
  Mat M = lu.solve(B);
  RealJordanForm rjf = real_jordan_form(M, cfg);
  double scale = std::max({1.0, A.norm(), B.norm()});

  struct OutBlock {
    UhligBlockSpec spec;
    Mat cols;
  };
  std::vector<OutBlock> out;

  // group blocks by (kind, eigenvalue); jordan stores one representative value
  // per cluster, so exact equality identifies the group
  std::vector<bool> used(rjf.blocks.size(), false);
  int col_at = 0;
  std::vector<int> col_start(rjf.blocks.size());
  for (std::size_t i = 0; i < rjf.blocks.size(); ++i) {
    col_start[i] = col_at;
    col_at += rjf.blocks[i].total_dim();
  }

  for (std::size_t i = 0; i < rjf.blocks.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> group;
    for (std::size_t j = i; j < rjf.blocks.size(); ++j)
      if (!used[j] && rjf.blocks[j].complex_pair == rjf.blocks[i].complex_pair &&
          rjf.blocks[j].re == rjf.blocks[i].re &&
          rjf.blocks[j].im == rjf.blocks[i].im) {
        group.push_back(j);
        used[j] = true;
      }
    // longest chains first (jordan already sorts sizes descending in a group)
    std::sort(group.begin(), group.end(), [&](std::size_t a, std::size_t b) {
      return rjf.blocks[a].size > rjf.blocks[b].size;
    });

    const auto& b0 = rjf.blocks[i];
    if (!b0.complex_pair) {
      Mat N = M - b0.re * Mat::Identity(m, m);
      std::vector<detail::RawChain<Mat>> chains;
      for (auto gi : group) {
        int len = rjf.blocks[gi].size;
        detail::RawChain<Mat> ch;
        ch.len = len;
        ch.top = rjf.transform.col(col_start[gi] + len - 1);
        chains.push_back(ch);
      }
      auto norm = detail::normalize_group<Mat>(chains, A, N, scale, cfg);
      for (std::size_t t = 0; t < norm.size(); ++t) {
        int len = static_cast<int>(norm[t].second.size());
        Mat cols(m, len);
        for (int h = 0; h < len; ++h)
          cols.col(h) = norm[t].second[len - 1 - h];  // bottom-up order
        UhligBlockSpec spec;
        spec.sign = norm[t].first > 0 ? +1 : -1;
        spec.size = len;
        spec.re = b0.re;
        out.push_back({spec, cols});
      }
    } else {
      std::complex<double> lam(b0.re, b0.im);
      CMat Ac = A.cast<std::complex<double>>();
      CMat N = M.cast<std::complex<double>>() -
               lam * CMat::Identity(m, m);
      std::vector<detail::RawChain<CMat>> chains;
      for (auto gi : group) {
        int len = rjf.blocks[gi].size;
        // complex chain from the real columns: w_h = x_h + i y_h
        CVec top = rjf.transform.col(col_start[gi] + 2 * len - 2).cast<std::complex<double>>() +
                   std::complex<double>(0, 1) *
                       rjf.transform.col(col_start[gi] + 2 * len - 1)
                           .cast<std::complex<double>>();
        detail::RawChain<CMat> ch;
        ch.len = len;
        ch.top = top;
        chains.push_back(ch);
      }
      auto norm = detail::normalize_group<CMat>(chains, Ac, N, scale, cfg);
      for (std::size_t t = 0; t < norm.size(); ++t) {
        int len = static_cast<int>(norm[t].second.size());
        Mat cols(m, 2 * len);
        for (int h = 0; h < len; ++h) {
          // bottom-up complex chain vector w, realified as (x - y, x + y),
          // which turns the +-(1/2)E Gram cells into exact E(2) cells
          CVec w = norm[t].second[len - 1 - h];
          cols.col(2 * h) = w.real() - w.imag();
          cols.col(2 * h + 1) = w.real() + w.imag();
        }
        UhligBlockSpec spec;
        spec.sign = +1;
        spec.size = len;
        spec.complex_pair = true;
        spec.re = b0.re;
        spec.im = b0.im;
        out.push_back({spec, cols});
      }
    }
  }

  // canonical order: real blocks by (lambda asc, size desc, sigma=+1 first),
  // then complex by (a, b, size desc)
  std::stable_sort(out.begin(), out.end(), [](const OutBlock& x,
                                              const OutBlock& y) {
    const auto& a = x.spec;
    const auto& b = y.spec;
    if (a.complex_pair != b.complex_pair) return !a.complex_pair;
    if (a.re != b.re) return a.re < b.re;
    if (a.im != b.im) return a.im < b.im;
    if (a.size != b.size) return a.size > b.size;
    return a.sign > b.sign;
  });

  UhligCanonicalPair result;
  result.transform = Mat(m, m);
  int at = 0;
  for (const auto& ob : out) {
    result.blocks.push_back(ob.spec);
    result.transform.middleCols(at, ob.cols.cols()) = ob.cols;
    at += static_cast<int>(ob.cols.cols());
  }

  // for complex blocks the cell sign of b is a convention; pick the one the
  // realified chains actually produced
  Mat X = result.target_A();
  Mat PtAP = result.transform.transpose() * A * result.transform;
  Mat PtBP = result.transform.transpose() * B * result.transform;
  result.residualA = (PtAP - X).norm() / scale;
  auto b_residual = [&]() {
    return (PtBP - result.target_B()).norm() / scale;
  };
  result.residualB = b_residual();
  bool any_complex = false;
  for (auto& b : result.blocks) any_complex |= b.complex_pair;
  if (any_complex && result.residualB > cfg.canon_rel) {
    for (auto& b : result.blocks)
      if (b.complex_pair) b.im = -b.im;
    double alt = b_residual();
    if (alt < result.residualB)
      result.residualB = alt;
    else
      for (auto& b : result.blocks)
        if (b.complex_pair) b.im = -b.im;
  }
  if (result.residualA > cfg.canon_rel || result.residualB > cfg.canon_rel)
    throw CanonicalUnreliable(
        "canonical-unreliable: residuals " + std::to_string(result.residualA) +
            ", " + std::to_string(result.residualB),
        result.blocks);
  return result;
}

struct LancasterBlockDescriptor {
  int type = 1;      // 1..5 per the five-type taxonomy
  int m = 1;         // size parameter m_s (type 3: cell count; type 4: corner)
  int sign = +1;     // sigma_s (type 1) or eta_s (type 2)
  double lambda = 0.0;  // type 1
  double mu = 0.0;      // type 3
  double nu = 0.0;      // type 3, must be nonzero

  int total_dim() const {
    switch (type) {
      case 3: return 2 * m;
      case 4: return 2 * m + 1;
      default: return m;
    }
  }
};

inline std::pair<Mat, Mat> synthesize_lancaster_pair(
    const std::vector<LancasterBlockDescriptor>& blocks,
    const std::optional<Mat>& scramble = std::nullopt) {
  int total = 0;
  int n_type5 = 0;
  for (const auto& b : blocks) {
    if (b.type < 1 || b.type > 5 || b.m < 1)
      throw std::invalid_argument("synthesize_lancaster_pair: bad descriptor");
    if ((b.type == 1 || b.type == 2) && b.sign != 1 && b.sign != -1)
      throw std::invalid_argument("synthesize_lancaster_pair: sign must be +-1");
    if (b.type == 3 && b.nu == 0.0)
      throw std::invalid_argument("synthesize_lancaster_pair: type 3 needs nu != 0");
    if (b.type == 5) ++n_type5;
    total += b.total_dim();
  }
  if (n_type5 > 1)
    throw std::invalid_argument("synthesize_lancaster_pair: at most one type-5 block");

  Mat X = Mat::Zero(total, total), Y = Mat::Zero(total, total);
  int at = 0;
  for (const auto& b : blocks) {
    int d = b.total_dim();
    switch (b.type) {
      case 1:
        X.block(at, at, d, d) = double(b.sign) * special_E(d);
        Y.block(at, at, d, d) =
            double(b.sign) * (b.lambda * special_E(d) + special_F(d));
        break;
      case 2:
        X.block(at, at, d, d) = double(b.sign) * special_F(d);
        Y.block(at, at, d, d) = double(b.sign) * special_E(d);
        break;
      case 3: {
        Mat extra = Mat::Zero(d, d);
        if (d > 2) extra.topLeftCorner(d - 2, d - 2) = special_E(d - 2);
        X.block(at, at, d, d) = special_E(d);
        Y.block(at, at, d, d) =
            b.mu * special_E(d) + b.nu * special_H(d) + extra;
        break;
      }
      case 4: {
        Mat Xs = special_E(d);
        Xs(b.m, b.m) = 0.0;  // zero out the centre of the anti-identity
        X.block(at, at, d, d) = Xs;
        Y.block(at, at, d, d) = special_F(d);
        break;
      }
      case 5:
        break;  // X = Y = 0
    }
    at += d;
  }
  if (scramble) {
    const Mat& Q = *scramble;
    if (Q.rows() != total || Q.cols() != total)
      throw std::invalid_argument("synthesize_lancaster_pair: scramble shape");
    return {Q.transpose() * X * Q, Q.transpose() * Y * Q};
  }
  return {X, Y};
}

enum class PairRegularity { NonsingularPair, SingularPair };

inline PairRegularity pair_regularity(const Mat& A, const Mat& B,
                                      const Config& cfg = {}) {
  SymMatrixSet C(static_cast<int>(A.rows()), {A, B}, cfg);
  auto r = find_nonsingular_pencil(C, cfg);
  return r.found() ? PairRegularity::NonsingularPair
                   : PairRegularity::SingularPair;
}

}  // namespace simdiag
