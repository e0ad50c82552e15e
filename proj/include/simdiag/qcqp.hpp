#pragma once

#include <functional>
#include <random>

#include "simdiag/canon.hpp"
#include "simdiag/lp.hpp"
#include "simdiag/sequences.hpp"

namespace simdiag {

// One quadratic term in the internal convention (no 1/2 factors):
//   value(x) = x^T Q x + 2 q^T x + c
struct QcqpTerm {
  Mat Q;
  Vec q;
  double c = 0.0;

  double value(const Vec& x) const {
    return x.dot(Q * x) + 2.0 * q.dot(x) + c;
  }
};

// min objective.value(x)  s.t.  constraints[l].value(x) <= 0
struct QcqpInstance {
  int dim = 0;
  QcqpTerm objective;
  std::vector<QcqpTerm> constraints;
};

// ingest a term written with the conventional 1/2 factor:
//   (1/2) x^T A x + a^T x + c  ->  internal (A/2, a/2, c)
inline QcqpTerm from_half_convention(const Mat& A, const Vec& a, double c) {
  return {Mat(0.5 * A), Vec(0.5 * a), c};
}

inline void validate_qcqp(const QcqpInstance& q, const Config& cfg = {}) {
  auto check = [&](const QcqpTerm& t) {
    if (t.Q.rows() != q.dim || t.Q.cols() != q.dim || t.q.size() != q.dim)
      throw std::invalid_argument("qcqp: shape mismatch");
    double scale = std::max(1.0, t.Q.norm());
    if ((t.Q - t.Q.transpose().eval()).norm() > cfg.sym_rel * scale)
      throw std::invalid_argument("qcqp: matrices must be symmetric");
  };
  check(q.objective);
  for (const auto& t : q.constraints) check(t);
}

// Lift to dimension m+1 with a pure quadratic per term,
//   Abar = [[Q, q], [q^T, c]],
// the objective corner forced to 0, and a final marker constraint
// Diag(0_m, 1) whose intended sense is x_{m+1}^2 = 1 (equality).
inline QcqpInstance homogenize(const QcqpInstance& q, const Config& cfg = {}) {
  validate_qcqp(q, cfg);
  const int m = q.dim;
  auto lift = [&](const QcqpTerm& t, double corner) {
    Mat Abar = Mat::Zero(m + 1, m + 1);
    Abar.topLeftCorner(m, m) = t.Q;
    Abar.col(m).head(m) = t.q;
    Abar.row(m).head(m) = t.q.transpose();
    Abar(m, m) = corner;
    return QcqpTerm{Abar, Vec::Zero(m + 1), 0.0};
  };
  QcqpInstance out;
  out.dim = m + 1;
  out.objective = lift(q.objective, 0.0);
  for (const auto& t : q.constraints) out.constraints.push_back(lift(t, t.c));
  Mat marker = Mat::Zero(m + 1, m + 1);
  marker(m, m) = 1.0;
  // equality marker: x_{m+1}^2 = 1; stored as the last constraint with
  // value x^T marker x - 1
  out.constraints.push_back({marker, Vec::Zero(m + 1), -1.0});
  return out;
}

// substitute x_{m+1} = 1 into a homogenized instance, recovering the
// original data (drops the trailing marker constraint)
inline QcqpInstance restrict_to_unit_slice(const QcqpInstance& hom) {
  if (hom.dim < 2 || hom.constraints.empty())
    throw std::invalid_argument("restrict_to_unit_slice: not homogenized");
  const int m = hom.dim - 1;
  auto drop = [&](const QcqpTerm& t) {
    QcqpTerm out;
    out.Q = t.Q.topLeftCorner(m, m);
    out.q = Vec(t.Q.col(m).head(m)) + t.q.head(m);
    out.c = t.Q(m, m) + 2.0 * t.q(m) + t.c;
    return out;
  };
  QcqpInstance out;
  out.dim = m;
  out.objective = drop(hom.objective);
  for (std::size_t l = 0; l + 1 < hom.constraints.size(); ++l)
    out.constraints.push_back(drop(hom.constraints[l]));
  return out;
}

// Diagonal relaxation of a homogeneous QCQP through a congruence sequence:
// with x = P_k y and u_i = y_i^2, keep only diag(P_k^T Q P_k) and report
// the dropped off-diagonal mass. Heuristic: the error is not controlled.
struct QcqpLpRelaxation {
  LpInstance lp;
  Mat Pk;
  double dropped_mass = 0.0;  // sum of off-diagonal Frobenius norms

  // u >= 0 from the LP back to a representative x (signs of y are free)
  Vec back_map(const Vec& u) const {
    return Pk * Vec(u.cwiseMax(0.0).cwiseSqrt());
  }
};

inline QcqpLpRelaxation lp_relaxation(const QcqpInstance& q,
                                      const CongruenceSequence& seq, double k,
                                      const Config& cfg = {}) {
  validate_qcqp(q, cfg);
  if (seq.dim != q.dim)
    throw std::invalid_argument("lp_relaxation: sequence dimension mismatch");
  auto zero_linear = [](const QcqpTerm& t) { return t.q.norm() == 0.0; };
  if (!zero_linear(q.objective))
    throw std::invalid_argument("lp_relaxation: linear terms must vanish");
  for (const auto& t : q.constraints)
    if (!zero_linear(t))
      throw std::invalid_argument("lp_relaxation: linear terms must vanish");

  QcqpLpRelaxation rel;
  rel.Pk = evaluate(seq, k);
  const int m = q.dim;
  const int L = static_cast<int>(q.constraints.size());
  auto diag_of = [&](const Mat& Q) {
    Mat W = rel.Pk.transpose() * Q * rel.Pk;
    Vec lam = W.diagonal();
    W.diagonal().setZero();
    rel.dropped_mass += W.norm();
    return lam;
  };
  rel.lp.cost = diag_of(q.objective.Q);
  rel.lp.rows = Mat::Zero(L, m);
  rel.lp.rhs = Vec(L);
  for (int l = 0; l < L; ++l) {
    rel.lp.rows.row(l) = diag_of(q.constraints[l].Q).transpose();
    rel.lp.rhs(l) = -q.constraints[l].c;
  }
  return rel;
}

// min x^T B x  s.t.  x^T A x <= b, A symmetric nonsingular
struct SingleConstraintProblem {
  Mat B;
  Mat A;
  double b = 0.0;
};

struct SingleConstraintResult {
  enum class Status { Attained, InfimumOnly, UnboundedBelow, Infeasible };
  Status status = Status::Attained;
  double value = 0.0;
  Vec point;  // set when Attained
  std::vector<UhligBlockSpec> blocks;
  std::string note;
};

inline SingleConstraintResult solve_single_constraint(
    const SingleConstraintProblem& p, const Config& cfg = {}) {
  const int m = static_cast<int>(p.A.rows());
  double det_scale = std::pow(std::max(1.0, p.A.norm()), m);
  if (std::abs(p.A.determinant()) <= cfg.det_rel * det_scale)
    throw std::invalid_argument("solve_single_constraint: A singular");

  SingleConstraintResult res;
  auto canon = uhlig_canonical(p.A, p.B, cfg);
  res.blocks = canon.blocks;

  bool pos_def = true;
  for (const auto& blk : canon.blocks)
    if (blk.complex_pair || blk.size != 1 || blk.sign != +1) pos_def = false;
  if (pos_def) {
    if (p.b < -cfg.det_rel) {
      res.status = SingleConstraintResult::Status::Infeasible;
      res.note = "A positive definite and b < 0: empty feasible set";
      return res;
    }
    if (std::abs(p.b) <= cfg.det_rel) {
      // only x = 0 is feasible
      res.status = SingleConstraintResult::Status::Attained;
      res.value = 0.0;
      res.point = Vec::Zero(m);
      res.note = "A positive definite and b = 0: feasible set is the origin";
      return res;
    }
  }

  // boundedness screen: real eigenvalues, block sizes <= 2, and every
  // 2-block with positive sign and nonpositive eigenvalue; anything else
  // makes the objective unbounded below on the feasible set
  for (const auto& blk : canon.blocks) {
    bool ok = !blk.complex_pair && blk.size <= 2 &&
              (blk.size == 1 || (blk.sign == +1 && blk.re <= cfg.eig_rel));
    if (!ok) {
      res.status = SingleConstraintResult::Status::UnboundedBelow;
      res.note = "structural: canonical block violates the boundedness test";
      return res;
    }
  }

  // limit problem: objective Diag{sigma_i lambda_i E(m_i)}, constraint
  // Diag{sigma_i E(m_i)}. Size-1 slots give u_i = y_i^2 >= 0; each 2-block
  // contributes a free variable t = 2 y_1 y_2.
  std::vector<int> var_block;  // block index per LP variable
  LpInstance lp;
  std::vector<double> cost, row;
  std::vector<bool> nonneg;
  for (std::size_t s = 0; s < canon.blocks.size(); ++s) {
    const auto& blk = canon.blocks[s];
    double sg = static_cast<double>(blk.sign);
    if (blk.size == 1) {
      cost.push_back(sg * blk.re);
      row.push_back(sg);
      nonneg.push_back(true);
    } else {
      cost.push_back(blk.re);
      row.push_back(1.0);
      nonneg.push_back(false);
    }
    var_block.push_back(static_cast<int>(s));
  }
  const int nv = static_cast<int>(cost.size());
  lp.cost = Eigen::Map<Vec>(cost.data(), nv);
  lp.rows = Eigen::Map<Vec>(row.data(), nv).transpose();
  lp.rhs = Vec::Constant(1, p.b);
  lp.nonneg = nonneg;
  auto sol = solve_lp(lp);
  if (sol.status == LpResult::Status::Unbounded) {
    res.status = SingleConstraintResult::Status::UnboundedBelow;
    res.note = "limit problem unbounded";
    return res;
  }
  if (sol.status == LpResult::Status::Infeasible) {
    res.status = SingleConstraintResult::Status::Infeasible;
    return res;
  }
  res.value = sol.value;

  // zero out free variables that carry no cost: they only consume budget,
  // so an optimal point with t = 0 there always exists
  Vec u = sol.point;
  for (int j = 0; j < nv; ++j)
    if (!nonneg[j] && std::abs(lp.cost(j)) <= cfg.eig_rel) u(j) = 0.0;
  bool escapes = false;
  for (int j = 0; j < nv; ++j)
    if (!nonneg[j] && std::abs(u(j)) > 1e-9 * std::max(1.0, std::abs(p.b)))
      escapes = true;
  if (escapes) {
    // the 2-block coordinates of the original problem only reach this
    // value in the limit of the scaling family
    res.status = SingleConstraintResult::Status::InfimumOnly;
    res.note = "optimal free variable nonzero: minimizer escapes to infinity";
    return res;
  }

  // assemble y in canonical coordinates (2-block slots stay zero) and map
  // back through the congruence
  Vec y = Vec::Zero(m);
  int at = 0;
  for (std::size_t s = 0; s < canon.blocks.size(); ++s) {
    const auto& blk = canon.blocks[s];
    if (blk.size == 1) y(at) = std::sqrt(std::max(0.0, u(static_cast<int>(s))));
    at += blk.total_dim();
  }
  res.status = SingleConstraintResult::Status::Attained;
  res.point = canon.transform * y;
  return res;
}

// scaled reformulation of the canonicalized problem: x = P Diag{R_k(m_s)} y
// leaves the constraint form fixed and moves the objective toward its limit
inline SingleConstraintProblem single_constraint_pk(
    const SingleConstraintProblem& p, double k, const Config& cfg = {}) {
  auto canon = uhlig_canonical(p.A, p.B, cfg);
  int m = 0;
  for (const auto& blk : canon.blocks) m += blk.total_dim();
  Mat R = Mat::Zero(m, m);
  int at = 0;
  for (const auto& blk : canon.blocks) {
    int d = blk.total_dim();
    R.block(at, at, d, d) = special_Rk(d, k);
    at += d;
  }
  SingleConstraintProblem out;
  out.A = R.transpose() * canon.target_A() * R;
  out.B = R.transpose() * canon.target_B() * R;
  out.b = p.b;
  return out;
}

struct QcqpOracleResult {
  double value = std::numeric_limits<double>::infinity();
  Vec point;
  bool suspected_unbounded = false;
  bool found_feasible = false;
};

namespace detail {

using QcqpFun = std::function<double(const Vec&)>;

inline Vec fd_gradient(const QcqpFun& f, const Vec& x, double fx) {
  const int m = static_cast<int>(x.size());
  Vec grad(m);
  double h = 1e-6 * std::max(1.0, x.norm());
  for (int i = 0; i < m; ++i) {
    Vec xp = x;
    xp(i) += h;
    grad(i) = (f(xp) - fx) / h;
  }
  return grad;
}

// projected gradient from one start inside a ball of the given radius;
// near an active constraint the descent direction is projected onto its
// tangent, and infeasible trial points bisect back toward the iterate
inline void qcqp_descend_from(const QcqpFun& f, const std::vector<QcqpFun>& gs,
                              Vec x, double radius, QcqpOracleResult& best) {
  const int m = static_cast<int>(x.size());
  auto feasible = [&](const Vec& z) {
    for (const auto& g : gs)
      if (g(z) > 1e-12 * std::max(1.0, z.squaredNorm())) return false;
    return true;
  };
  if (!feasible(x)) {
    bool ok = false;
    for (double t : {0.5, 0.25, 0.1, 0.03, 0.0}) {
      if (feasible(t * x)) {
        x = t * x;
        ok = true;
        break;
      }
    }
    if (!ok) return;
  }
  double fx = f(x);
  double step = 0.25 * radius;
  for (int it = 0; it < 600 && step > 1e-14 * radius; ++it) {
    Vec dir = -fd_gradient(f, x, fx);
    // slide along active constraints instead of pushing into them
    double act_tol = 1e-7 * std::max(1.0, x.squaredNorm());
    for (const auto& g : gs) {
      double gx = g(x);
      if (gx < -act_tol) continue;
      Vec n = fd_gradient(g, x, gx);
      double nn = n.squaredNorm();
      if (nn <= 1e-20) continue;
      double out = dir.dot(n);
      if (out > 0.0) dir -= (out / nn) * n;
    }
    double dn = dir.norm();
    if (dn <= 1e-13 * std::max(1.0, fx < 0 ? -fx : fx)) break;
    Vec cand = x + (step / dn) * dir;
    if (cand.norm() > radius) cand *= radius / cand.norm();
    if (!feasible(cand)) {
      // Newton retraction: a tangential step leaves a curved boundary on
      // the infeasible side everywhere, so pull back along the normals
      Vec ret = cand;
      for (int nr = 0; nr < 8 && !feasible(ret); ++nr) {
        for (const auto& g : gs) {
          double gr = g(ret);
          if (gr <= 0.0) continue;
          Vec n = fd_gradient(g, ret, gr);
          double nn = n.squaredNorm();
          if (nn <= 1e-20) continue;
          ret -= (gr / nn) * n * (1.0 + 1e-12);
        }
      }
      if (feasible(ret) && ret.norm() <= radius * (1.0 + 1e-9)) {
        cand = ret;
      } else {
        double lo = 0.0, hi = 1.0;
        for (int bs = 0; bs < 50; ++bs) {
          double mid = 0.5 * (lo + hi);
          if (feasible(x + mid * (cand - x)))
            lo = mid;
          else
            hi = mid;
        }
        cand = x + lo * (cand - x);
      }
    }
    double fc = f(cand);
    if (fc < fx) {
      x = cand;
      fx = fc;
      step = std::min(1.5 * step, 0.5 * radius);
    } else {
      step *= 0.5;
    }
  }
  if (!best.found_feasible || fx < best.value) {
    best.found_feasible = true;
    best.value = fx;
    best.point = x;
  }
}

inline QcqpOracleResult qcqp_oracle_impl(const QcqpFun& f,
                                         const std::vector<QcqpFun>& gs, int m,
                                         double scale, std::uint64_t seed,
                                         int n_starts) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ur(-1.0, 1.0);
  QcqpOracleResult best;
  std::vector<double> per_radius;
  double radius = 1.0;
  for (int level = 0; level < 7; ++level, radius *= 2.0) {
    for (int s = 0; s < n_starts; ++s) {
      Vec x(m);
      for (int i = 0; i < m; ++i) x(i) = radius * ur(rng);
      qcqp_descend_from(f, gs, x, radius, best);
    }
    // re-polish the incumbent at the enlarged radius
    if (best.found_feasible)
      qcqp_descend_from(f, gs, best.point, radius, best);
    per_radius.push_back(best.found_feasible
                             ? best.value
                             : std::numeric_limits<double>::infinity());
  }
  // unbounded instances keep improving roughly like radius^2; converged
  // ones stall across the last escalations
  std::size_t nr = per_radius.size();
  double last = per_radius[nr - 1], prev = per_radius[nr - 2];
  if (best.found_feasible && last < -10.0 * std::max(1.0, scale) &&
      last < 2.5 * prev)
    best.suspected_unbounded = true;
  return best;
}

}  // namespace detail

inline QcqpOracleResult brute_force_qcqp_oracle(
    const SingleConstraintProblem& p, const Config& cfg = {},
    int n_starts = 40) {
  const int m = static_cast<int>(p.A.rows());
  if (m > 4)
    throw std::invalid_argument("brute_force_qcqp_oracle: m <= 4 required");
  double fs = std::max(1.0, p.B.norm());
  detail::QcqpFun f = [p](const Vec& x) { return x.dot(p.B * x); };
  std::vector<detail::QcqpFun> gs{
      [p](const Vec& x) { return x.dot(p.A * x) - p.b; }};
  return detail::qcqp_oracle_impl(f, gs, m, fs, cfg.seed, n_starts);
}

inline QcqpOracleResult brute_force_qcqp_oracle(const QcqpInstance& q,
                                                const Config& cfg = {},
                                                int n_starts = 40) {
  if (q.dim > 4)
    throw std::invalid_argument("brute_force_qcqp_oracle: m <= 4 required");
  validate_qcqp(q, cfg);
  double fs = std::max(1.0, q.objective.Q.norm());
  detail::QcqpFun f = [q](const Vec& x) { return q.objective.value(x); };
  std::vector<detail::QcqpFun> gs;
  for (const auto& t : q.constraints)
    gs.push_back([t](const Vec& x) { return t.value(x); });
  return detail::qcqp_oracle_impl(f, gs, q.dim, fs, cfg.seed, n_starts);
}

}  // namespace simdiag
