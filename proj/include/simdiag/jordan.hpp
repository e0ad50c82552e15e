#pragma once

#include <algorithm>
#include <complex>
#include <numeric>

#include "simdiag/special.hpp"
#include "simdiag/types.hpp"

namespace simdiag {

struct JordanBlockSpec {
  bool complex_pair = false;
  double re = 0.0;
  double im = 0.0;  // > 0 for complex pairs, 0 for real blocks
  int size = 1;     // 2x2-cell count for complex pairs (total dim 2*size)

  int total_dim() const { return complex_pair ? 2 * size : size; }
};

struct RealJordanForm {
  std::vector<JordanBlockSpec> blocks;
  Mat transform;    // T with T^-1 M T = J
  double residual;  // ||T^-1 M T - J||_F / max(1, ||M||_F)
};

struct JordanUnreliable : std::runtime_error {
  std::vector<JordanBlockSpec> partial;
  explicit JordanUnreliable(const std::string& what,
                            std::vector<JordanBlockSpec> p = {})
      : std::runtime_error(what), partial(std::move(p)) {}
};

inline Mat jordan_matrix(const std::vector<JordanBlockSpec>& blocks) {
  int m = 0;
  for (const auto& b : blocks) m += b.total_dim();
  Mat J = Mat::Zero(m, m);
  int at = 0;
  for (const auto& b : blocks) {
    int d = b.total_dim();
    J.block(at, at, d, d) = b.complex_pair
                                ? jordan_block_complex(b.re, b.im, b.size)
                                : jordan_block(b.re, b.size);
    at += d;
  }
  return J;
}

namespace detail {

struct EigCluster {
  std::complex<double> centroid;
  int size = 0;
  double radius = 0.0;  // merge radius used at this size (absolute)
};

// Eigenvalues of a size-s Jordan block scatter at radius ~eps^(1/s) under
// perturbation, so the cluster radius must grow with the cluster size; plain
// single-linkage at a fixed 1e-6 radius cannot recover blocks of size >= 3.
inline double cluster_radius(int size, double scale, const Config& cfg) {
  double r = std::max(cfg.eig_rel, 2.0 * std::pow(1e-14, 1.0 / size));
  return r * scale;
}

// Full single-linkage agglomeration, then a validity cut: accept the largest
// merge whose member diameter fits the size-dependent radius. Intermediate
// merges of a scattered size-s ring are individually implausible, so a
// threshold applied during merging would never get off the ground.
inline std::vector<EigCluster> cluster_eigenvalues(const CVec& eigs,
                                                   double scale,
                                                   const Config& cfg) {
  struct Node {
    std::vector<int> members;
    int left = -1, right = -1;
  };
  const int n = static_cast<int>(eigs.size());
  std::vector<Node> nodes;
  std::vector<int> active;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({{i}, -1, -1});
    active.push_back(i);
  }
  auto link_dist = [&](int a, int b) {
    double d = std::numeric_limits<double>::infinity();
    for (int i : nodes[a].members)
      for (int j : nodes[b].members)
        d = std::min(d, std::abs(eigs(i) - eigs(j)));
    return d;
  };
  while (active.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        double d = link_dist(active[i], active[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    Node parent;
    parent.left = active[bi];
    parent.right = active[bj];
    parent.members = nodes[parent.left].members;
    parent.members.insert(parent.members.end(),
                          nodes[parent.right].members.begin(),
                          nodes[parent.right].members.end());
    nodes.push_back(parent);
    active.erase(active.begin() + bj);
    active.erase(active.begin() + bi);
    active.push_back(static_cast<int>(nodes.size()) - 1);
  }

  std::vector<EigCluster> out;
  auto emit = [&](int node, auto&& self) -> void {
    const auto& mem = nodes[node].members;
    int s = static_cast<int>(mem.size());
    double diam = 0.0;
    for (std::size_t i = 0; i < mem.size(); ++i)
      for (std::size_t j = i + 1; j < mem.size(); ++j)
        diam = std::max(diam, std::abs(eigs(mem[i]) - eigs(mem[j])));
    double r = cluster_radius(s, scale, cfg);
    if (diam <= r || nodes[node].left < 0) {
      std::complex<double> c(0.0, 0.0);
      for (int i : mem) c += eigs(i);
      out.push_back({c / double(s), s, r});
      return;
    }
    self(nodes[node].left, self);
    self(nodes[node].right, self);
  };
  emit(static_cast<int>(nodes.size()) - 1, emit);
  return out;
}

// Orthonormal kernel basis of M at an absolute singular-value cutoff.
template <typename MatT>
MatT kernel_basis(const MatT& M, double abs_tol) {
  Eigen::JacobiSVD<MatT> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > abs_tol) ++rank;
  return svd.matrixV().rightCols(M.cols() - rank);
}

// Builds Jordan chains for one eigenvalue given N = M - lambda*I and the
// multiplicity; returns chains as column groups ordered bottom-up (height 1
// first), so M*c_h = lambda*c_h + c_{h-1}. Chains sorted longest first.
template <typename MatT>
std::vector<MatT> build_chains(const MatT& N, int multiplicity,
                               double noise_radius, const Config& cfg,
                               const std::vector<JordanBlockSpec>& partial) {
  using VecT = Eigen::Matrix<typename MatT::Scalar, Eigen::Dynamic, 1>;
  const int m = static_cast<int>(N.rows());
  std::vector<MatT> kernels;  // kernels[j-1] = ker(N^j)
  MatT power = MatT::Identity(m, m);
  std::vector<int> dims;
  int q = 0;
  for (int j = 1; j <= m; ++j) {
    power = power * N;
    // noise singular values of N^j sit at the eigenvalue-scatter level to the
    // j-th power, far above the bare SVD cutoff
    double tol = std::max(cfg.rank_tol * power.norm(),
                          std::pow(noise_radius, j));
    MatT K = kernel_basis(power, tol);
    int d = static_cast<int>(K.cols());
    if (d > multiplicity || (j > 1 && d < dims.back()))
      throw JordanUnreliable("jordan-unreliable: inconsistent rank sequence",
                             partial);
    kernels.push_back(K);
    dims.push_back(d);
    if (d == multiplicity) {
      q = j;
      break;
    }
  }
  if (q == 0)
    throw JordanUnreliable("jordan-unreliable: kernel never reaches multiplicity",
                           partial);

  auto weyr = [&](int j) {  // #blocks of size >= j
    if (j < 1 || j > q) return 0;
    return dims[j - 1] - (j >= 2 ? dims[j - 2] : 0);
  };

  std::vector<std::vector<VecT>> chains;  // chains[c][h-1] = height-h vector
  MatT used(m, 0);                        // orthonormal columns spanning U_j
  auto add_used = [&](const VecT& v) {
    VecT r = v - used * (used.adjoint() * v);
    double nr = r.norm();
    if (nr < 1e-10)
      throw JordanUnreliable("jordan-unreliable: dependent chain vectors",
                             partial);
    used.conservativeResize(m, used.cols() + 1);
    used.col(used.cols() - 1) = r / nr;
  };

  for (int j = q; j >= 1; --j) {
    int need = weyr(j) - weyr(j + 1);
    // U_j = ker(N^{j-1}) + height-j vectors of the longer chains
    used = MatT(m, 0);
    if (j >= 2)
      for (Eigen::Index c = 0; c < kernels[j - 2].cols(); ++c)
        add_used(kernels[j - 2].col(c));
    for (const auto& ch : chains) add_used(ch[j - 1]);
    const MatT& K = kernels[j - 1];
    for (int t = 0; t < need; ++t) {
      int pick = -1;
      double best = -1.0;
      for (Eigen::Index c = 0; c < K.cols(); ++c) {
        VecT r = K.col(c) - used * (used.adjoint() * K.col(c));
        if (r.norm() > best) {
          best = r.norm();
          pick = static_cast<int>(c);
        }
      }
      if (pick < 0 || best < 1e-8)
        throw JordanUnreliable("jordan-unreliable: chain top not found",
                               partial);
      VecT top = K.col(pick) - used * (used.adjoint() * K.col(pick));
      top /= top.norm();
      add_used(top);
      std::vector<VecT> chain(j);
      chain[j - 1] = top;
      for (int h = j - 1; h >= 1; --h) chain[h - 1] = N * chain[h];
      // balance the chain: scale so max/min column norms are symmetric
      double mx = 0.0, mn = std::numeric_limits<double>::infinity();
      for (const auto& v : chain) {
        mx = std::max(mx, v.norm());
        mn = std::min(mn, v.norm());
      }
      if (mn < 1e-140)
        throw JordanUnreliable("jordan-unreliable: collapsing chain", partial);
      double s = 1.0 / std::sqrt(mx * mn);
      std::vector<VecT> cols;
      for (auto& v : chain) v *= s;
      chains.push_back(std::move(chain));
    }
  }
  std::sort(chains.begin(), chains.end(),
            [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<MatT> out;
  for (const auto& ch : chains) {
    MatT block(m, ch.size());
    for (std::size_t h = 0; h < ch.size(); ++h) block.col(h) = ch[h];
    out.push_back(block);
  }
  return out;
}

}  // namespace detail

inline RealJordanForm real_jordan_form(const Mat& M, const Config& cfg = {}) {
  const int m = static_cast<int>(M.rows());
  if (m != M.cols()) throw std::invalid_argument("real_jordan_form: square only");
  if (m > 32) throw std::invalid_argument("real_jordan_form: m <= 32 supported");
  Eigen::EigenSolver<Mat> es(M);
  if (es.info() != Eigen::Success)
    throw JordanUnreliable("jordan-unreliable: eigensolver failed");
  double scale = std::max(1.0, M.norm());
  auto clusters = detail::cluster_eigenvalues(es.eigenvalues(), scale, cfg);

  struct BlockCols {
    JordanBlockSpec spec;
    Mat cols;
  };
  std::vector<BlockCols> built;
  std::vector<JordanBlockSpec> partial;

  std::vector<bool> done(clusters.size(), false);
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    if (done[ci]) continue;
    auto& cl = clusters[ci];
    if (std::abs(cl.centroid.imag()) <= cl.radius) {
      // real eigenvalue
      double lam = cl.centroid.real();
      Mat N = M - lam * Mat::Identity(m, m);
      auto chains = detail::build_chains<Mat>(N, cl.size, cl.radius, cfg, partial);
      for (const auto& ch : chains) {
        JordanBlockSpec b{false, lam, 0.0, static_cast<int>(ch.cols())};
        partial.push_back(b);
        built.push_back({b, ch});
      }
      done[ci] = true;
    } else {
      // complex pair: find the conjugate partner cluster
      std::size_t pj = clusters.size();
      double bestd = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < clusters.size(); ++j) {
        if (j == ci || done[j]) continue;
        double d = std::abs(clusters[j].centroid - std::conj(cl.centroid));
        if (d < bestd) {
          bestd = d;
          pj = j;
        }
      }
      if (pj == clusters.size() || bestd > 2.0 * cl.radius ||
          clusters[pj].size != cl.size)
        throw JordanUnreliable("jordan-unreliable: unpaired complex cluster",
                               partial);
      done[ci] = done[pj] = true;
      double a = cl.centroid.real();
      double b = std::abs(cl.centroid.imag());
      std::complex<double> lam(a, b);
      CMat N = M.cast<std::complex<double>>() -
               lam * CMat::Identity(m, m);
      auto chains = detail::build_chains<CMat>(N, cl.size, cl.radius, cfg, partial);
      for (const auto& ch : chains) {
        int len = static_cast<int>(ch.cols());
        Mat cols(m, 2 * len);
        for (int h = 0; h < len; ++h) {
          cols.col(2 * h) = ch.col(h).real();
          cols.col(2 * h + 1) = ch.col(h).imag();
        }
        JordanBlockSpec spec{true, a, b, len};
        partial.push_back(spec);
        built.push_back({spec, cols});
      }
    }
  }

  // canonical order: real eigenvalues ascending, then complex pairs by (a, b);
  // sizes descending within an eigenvalue
  std::stable_sort(built.begin(), built.end(),
                   [](const BlockCols& x, const BlockCols& y) {
                     const auto& a = x.spec;
                     const auto& b = y.spec;
                     if (a.complex_pair != b.complex_pair)
                       return !a.complex_pair;
                     if (a.re != b.re) return a.re < b.re;
                     if (a.im != b.im) return a.im < b.im;
                     return a.size > b.size;
                   });

  RealJordanForm out;
  out.transform = Mat(m, m);
  int at = 0;
  for (const auto& bc : built) {
    out.blocks.push_back(bc.spec);
    out.transform.middleCols(at, bc.cols.cols()) = bc.cols;
    at += static_cast<int>(bc.cols.cols());
  }
  if (at != m)
    throw JordanUnreliable("jordan-unreliable: dimension mismatch", partial);

  Eigen::FullPivLU<Mat> lu(out.transform);
  if (!lu.isInvertible())
    throw JordanUnreliable("jordan-unreliable: singular transform", partial);
  Mat J = jordan_matrix(out.blocks);
  out.residual = (lu.solve(M * out.transform) - J).norm() / scale;
  if (!(out.residual <= cfg.jordan_tol))
    throw JordanUnreliable("jordan-unreliable: residual " +
                               std::to_string(out.residual),
                           out.blocks);
  return out;
}

inline Verdict has_only_real_eigenvalues(const Mat& M, const Config& cfg = {}) {
  Eigen::EigenSolver<Mat> es(M);
  double scale = std::max(1.0, M.norm());
  auto clusters = detail::cluster_eigenvalues(es.eigenvalues(), scale, cfg);
  bool unknown = false;
  for (const auto& cl : clusters) {
    double t = std::abs(cl.centroid.imag());
    if (t <= cl.radius) continue;
    if (t > 2.0 * cl.radius) return Verdict::No;
    unknown = true;
  }
  return unknown ? Verdict::Unknown : Verdict::Yes;
}

inline Verdict is_nilpotent(const Mat& M, const Config& cfg = {}) {
  const int m = static_cast<int>(M.rows());
  double nrm = M.norm();
  if (nrm == 0.0) return Verdict::Yes;
  Eigen::EigenSolver<Mat> es(M);
  double scale = std::max(1.0, nrm);
  auto clusters = detail::cluster_eigenvalues(es.eigenvalues(), scale, cfg);
  bool spec_nil = true;
  for (const auto& cl : clusters)
    if (std::abs(cl.centroid) > cl.radius) spec_nil = false;
  Mat Mn = M / nrm;
  Mat P = Mat::Identity(m, m);
  for (int j = 0; j < m; ++j) P = P * Mn;
  bool pow_nil = P.norm() <= 1e-8;
  if (spec_nil && pow_nil) return Verdict::Yes;
  if (!spec_nil && !pow_nil) return Verdict::No;
  return Verdict::Unknown;
}

}  // namespace simdiag
