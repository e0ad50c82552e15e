#pragma once

#include <optional>
#include <random>

#include "simdiag/special.hpp"
#include "simdiag/types.hpp"

namespace simdiag {

struct PencilWitness {
  enum Kind { Nonsingular, PositiveDefinite, PositiveSemidefinite } kind;
  Vec coeffs;   // L coefficients alpha_i
  Mat pencil;   // sum alpha_i A_i
  double det = 0.0;
  double lambda_min = 0.0;
};

struct PencilResult {
  std::optional<PencilWitness> witness;
  bool probabilistic = false;  // verdict rests on random sampling (L > 2)

  bool found() const { return witness.has_value(); }
};

namespace detail {

inline Mat combine(const SymMatrixSet& C, const Vec& alpha) {
  Mat M = Mat::Zero(C.dim, C.dim);
  for (int i = 0; i < C.size(); ++i) M += alpha(i) * C.mats[i];
  return M;
}

// Relative nonsingularity margin: sigma_min / max(1, sigma_max).
inline double nonsingularity(const Mat& M) {
  Eigen::JacobiSVD<Mat> svd(M);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  return smin / std::max(1.0, smax);
}

inline double lambda_min_of(const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (M + M.transpose()));
  return es.eigenvalues()(0);
}

}  // namespace detail

// Search for a nonsingular pencil. For L = 2 the decision is exact:
// det(alpha*A1 + (1-alpha)*A2) is a polynomial of degree <= m in alpha, so it
// either vanishes identically or is nonzero at one of m+1 distinct nodes.
// For L > 2 a seeded randomized search over coefficient spheres is used and a
// miss is only probabilistic evidence.
inline PencilResult find_nonsingular_pencil(const SymMatrixSet& C,
                                            const Config& cfg = {}) {
  const int m = C.dim;
  auto witness_from = [&](const Vec& alpha) -> std::optional<PencilWitness> {
    Mat M = detail::combine(C, alpha);
    if (detail::nonsingularity(M) <= cfg.det_rel) return std::nullopt;
    PencilWitness w;
    w.kind = PencilWitness::Nonsingular;
    w.coeffs = alpha;
    w.pencil = M;
    w.det = M.determinant();
    w.lambda_min = detail::lambda_min_of(M);
    return w;
  };

  if (C.size() == 1) {
    Vec a = Vec::Ones(1);
    PencilResult r;
    r.witness = witness_from(a);
    return r;
  }

  if (C.size() == 2) {
    double best = -1.0;
    Vec best_alpha;
    for (int j = 0; j <= m; ++j) {
      double a = static_cast<double>(j) / m;
      Vec alpha(2);
      alpha << a, 1.0 - a;
      double q = detail::nonsingularity(detail::combine(C, alpha));
      if (q > best) {
        best = q;
        best_alpha = alpha;
      }
    }
    PencilResult r;
    if (best > cfg.det_rel) r.witness = witness_from(best_alpha);
    return r;
  }

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss;
  PencilResult r;
  r.probabilistic = true;
  double best = -1.0;
  Vec best_alpha;
  for (int t = 0; t < cfg.n_pencil; ++t) {
    Vec alpha(C.size());
    for (int i = 0; i < C.size(); ++i) alpha(i) = gauss(rng);
    double nrm = alpha.norm();
    if (nrm == 0.0) continue;
    alpha /= nrm;
    double q = detail::nonsingularity(detail::combine(C, alpha));
    if (q > best) {
      best = q;
      best_alpha = alpha;
    }
  }
  if (best > cfg.det_rel) r.witness = witness_from(best_alpha);
  return r;
}

// Search for a positive-(semi)definite pencil. For L = 2 scans the full
// coefficient circle (cos t, sin t) on a grid with local refinement around the
// best angle; for L > 2 randomized sphere samples with hill-climbing. A miss
// is never a proof of nonexistence.
inline PencilResult find_definite_pencil(const SymMatrixSet& C,
                                         const Config& cfg = {}) {
  auto classify = [&](const Vec& alpha) -> std::optional<PencilWitness> {
    Mat M = detail::combine(C, alpha);
    double lmin = detail::lambda_min_of(M);
    double tol = cfg.pd_tol * std::max(1.0, M.norm());
    if (lmin < -tol) return std::nullopt;
    PencilWitness w;
    w.kind = lmin > tol ? PencilWitness::PositiveDefinite
                        : PencilWitness::PositiveSemidefinite;
    w.coeffs = alpha;
    w.pencil = M;
    w.det = M.determinant();
    w.lambda_min = lmin;
    return w;
  };

  PencilResult r;
  if (C.size() == 1) {
    Vec a = Vec::Ones(1);
    r.witness = classify(a);
    return r;
  }

  if (C.size() == 2) {
    const double pi = 3.14159265358979323846;
    auto lmin_at = [&](double th) {
      Vec alpha(2);
      alpha << std::cos(th), std::sin(th);
      return detail::lambda_min_of(detail::combine(C, alpha));
    };
    double best_th = 0.0, best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < cfg.n_theta; ++j) {
      double th = 2.0 * pi * j / cfg.n_theta;
      double v = lmin_at(th);
      if (v > best) {
        best = v;
        best_th = th;
      }
    }
    double half = 2.0 * pi / cfg.n_theta;
    for (int round = 0; round < 40; ++round) {
      for (double th : {best_th - half, best_th + half}) {
        double v = lmin_at(th);
        if (v > best) {
          best = v;
          best_th = th;
        }
      }
      half *= 0.5;
    }
    Vec alpha(2);
    alpha << std::cos(best_th), std::sin(best_th);
    r.witness = classify(alpha);
    return r;
  }

  r.probabilistic = true;
  std::mt19937_64 rng(cfg.seed + 1);
  std::normal_distribution<double> gauss;
  Vec best_alpha;
  double best = -std::numeric_limits<double>::infinity();
  auto consider = [&](Vec alpha) {
    double nrm = alpha.norm();
    if (nrm == 0.0) return;
    alpha /= nrm;
    double v = detail::lambda_min_of(detail::combine(C, alpha));
    if (v > best) {
      best = v;
      best_alpha = alpha;
    }
  };
  for (int i = 0; i < C.size(); ++i) {
    Vec e = Vec::Zero(C.size());
    e(i) = 1.0;
    consider(e);
    consider(-e);
  }
  consider(Vec::Ones(C.size()));
  for (int t = 0; t < cfg.n_pencil; ++t) {
    Vec alpha(C.size());
    for (int i = 0; i < C.size(); ++i) alpha(i) = gauss(rng);
    consider(alpha);
  }
  // local refinement around the best direction
  double step = 0.3;
  for (int round = 0; round < 200; ++round) {
    bool improved = false;
    for (int i = 0; i < C.size(); ++i) {
      for (double s : {step, -step}) {
        Vec alpha = best_alpha;
        alpha(i) += s;
        double nrm = alpha.norm();
        if (nrm == 0.0) continue;
        alpha /= nrm;
        double v = detail::lambda_min_of(detail::combine(C, alpha));
        if (v > best) {
          best = v;
          best_alpha = alpha;
          improved = true;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      if (step < 1e-8) break;
    }
  }
  if (best_alpha.size() > 0) r.witness = classify(best_alpha);
  return r;
}

}  // namespace simdiag
