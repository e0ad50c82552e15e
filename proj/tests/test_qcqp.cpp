#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "simdiag/qcqp.hpp"

using namespace simdiag;

namespace {

Mat random_orthogonal(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat G(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) G(i, j) = g(rng);
  Mat Q = Eigen::HouseholderQR<Mat>(G).householderQ();
  if (Q.determinant() < 0) Q.col(0) *= -1.0;
  return Q;
}

// random instance passing the boundedness screen: size-1 blocks with
// positive sign, optionally one 2-block with nonpositive eigenvalue
SingleConstraintProblem random_screened(int m, std::mt19937_64& rng,
                                        bool allow_two_block) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Mat Ahat = Mat::Zero(m, m), Bhat = Mat::Zero(m, m);
  int at = 0;
  if (allow_two_block && m >= 2 && (rng() % 2)) {
    double lam = (rng() % 2) ? 0.0 : -0.5 * std::abs(u(rng));
    Ahat.block(0, 0, 2, 2) = special_E(2);
    Bhat.block(0, 0, 2, 2) = special_E(2) * jordan_block(lam, 2);
    at = 2;
  }
  for (; at < m; ++at) {
    Ahat(at, at) = 1.0;
    Bhat(at, at) = u(rng);
  }
  Mat P0 = random_orthogonal(m, rng);
  SingleConstraintProblem p;
  p.A = P0.transpose() * Ahat * P0;
  p.B = P0.transpose() * Bhat * P0;
  p.b = 0.5 + 1.5 * std::abs(u(rng)) / 2.0;
  return p;
}

}  // namespace

TEST_CASE("homogenize") {
  // 1-D: min x^2 + 2x  s.t.  x^2 <= 1
  QcqpInstance q;
  q.dim = 1;
  Mat two = Mat::Constant(1, 1, 2.0);
  q.objective = from_half_convention(two, Vec::Constant(1, 2.0), 0.0);
  q.constraints.push_back(from_half_convention(two, Vec::Zero(1), -1.0));
  auto hom = homogenize(q);
  REQUIRE(hom.dim == 2);
  REQUIRE(hom.constraints.size() == 2);
  Mat A0(2, 2), A1(2, 2), Am(2, 2);
  A0 << 1, 1, 1, 0;
  A1 << 1, 0, 0, -1;
  Am << 0, 0, 0, 1;
  CHECK((hom.objective.Q - A0).norm() <= 1e-15);
  CHECK((hom.constraints[0].Q - A1).norm() <= 1e-15);
  CHECK((hom.constraints[1].Q - Am).norm() <= 1e-15);
  CHECK(hom.constraints[1].c == -1.0);

  // zero linear and constant terms: plain zero-padding plus the marker
  std::mt19937_64 rng(5);
  QcqpInstance q2;
  q2.dim = 3;
  Mat S = random_orthogonal(3, rng);
  S = Mat(S + S.transpose().eval());
  q2.objective = {S, Vec::Zero(3), 0.0};
  q2.constraints.push_back({Mat::Identity(3, 3), Vec::Zero(3), 0.0});
  auto hom2 = homogenize(q2);
  Mat pad = Mat::Zero(4, 4);
  pad.topLeftCorner(3, 3) = S;
  CHECK((hom2.objective.Q - pad).norm() <= 1e-15);
  pad.topLeftCorner(3, 3) = Mat::Identity(3, 3);
  CHECK((hom2.constraints[0].Q - pad).norm() <= 1e-15);

  // feasible x lifts to feasible (x, 1) with equal objective
  Vec x(1);
  x << -0.7;
  Vec xb(2);
  xb << x(0), 1.0;
  CHECK(q.constraints[0].value(x) <= 0.0);
  CHECK(hom.constraints[0].value(xb) <= 0.0);
  CHECK(hom.constraints[1].value(xb) == doctest::Approx(0.0));
  CHECK(hom.objective.value(xb) == doctest::Approx(q.objective.value(x)));

  // slicing at x_{m+1} = 1 recovers the original data
  auto back = restrict_to_unit_slice(hom);
  CHECK((back.objective.Q - q.objective.Q).norm() <= 1e-15);
  CHECK((back.objective.q - q.objective.q).norm() <= 1e-15);
  CHECK(back.constraints[0].c == doctest::Approx(q.constraints[0].c));

  QcqpInstance bad = q;
  bad.objective.Q = Mat::Zero(1, 2);
  CHECK_THROWS_AS(homogenize(bad), std::invalid_argument);
}

TEST_CASE("lp_relaxation worked examples") {
  CongruenceSequence id;
  id.dim = 2;
  id.recipe = SeqConstant{Mat::Identity(2, 2)};

  // already diagonal: exact LP, no dropped mass
  QcqpInstance q;
  q.dim = 2;
  Mat D0 = Mat::Zero(2, 2);
  D0.diagonal() << 1, -1;
  q.objective = from_half_convention(D0, Vec::Zero(2), 0.0);
  q.constraints.push_back(
      from_half_convention(Mat::Identity(2, 2), Vec::Zero(2), -1.0));
  auto rel = lp_relaxation(q, id, 50.0);
  CHECK(rel.dropped_mass == 0.0);
  auto sol = solve_lp(rel.lp);
  REQUIRE(sol.status == LpResult::Status::Optimal);
  CHECK(sol.value == doctest::Approx(-1.0));
  CHECK(sol.point(0) == doctest::Approx(0.0));
  CHECK(sol.point(1) == doctest::Approx(2.0));
  Vec x = rel.back_map(sol.point);
  CHECK(x(0) == doctest::Approx(0.0));
  CHECK(std::abs(x(1)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(q.objective.value(x) == doctest::Approx(-1.0));
  CHECK(q.constraints[0].value(x) <= 1e-12);

  QcqpInstance lin = q;
  lin.objective.q = Vec::Ones(2);
  CHECK_THROWS_AS(lp_relaxation(lin, id, 50.0), std::invalid_argument);
}

TEST_CASE("lp_relaxation off-diagonal mass decays on a split set") {
  // {I, diag(1,1,-1), the axis swap} as constraints; the scaling family
  // inflates the decoupled first coordinate and crushes the 2x2 tail
  Mat A2 = Mat::Zero(3, 3);
  A2.diagonal() << 1, 1, -1;
  Mat A3(3, 3);
  A3 << 1, 0, 0, 0, 0, 1, 0, 1, 0;
  QcqpInstance q;
  q.dim = 3;
  q.objective = {Mat::Identity(3, 3), Vec::Zero(3), 0.0};
  for (const Mat& A : {Mat(Mat::Identity(3, 3)), A2, A3})
    q.constraints.push_back({A, Vec::Zero(3), -1.0});

  Mat Pi = Mat::Zero(3, 3);  // cyclic permutation, determinant +1
  Pi(0, 2) = 1.0;
  Pi(1, 0) = 1.0;
  Pi(2, 1) = 1.0;
  CongruenceSequence seq;
  seq.dim = 3;
  seq.recipe = SeqSingularCase1{Pi};

  double total = 0.0;
  for (const auto& t : q.constraints) total += t.Q.norm();
  auto r10 = lp_relaxation(q, seq, 10.0);
  auto r1000 = lp_relaxation(q, seq, 1000.0);
  CHECK(r1000.dropped_mass <= 1e-6 * total);
  CHECK(r1000.dropped_mass < 1e-3 * r10.dropped_mass);
}

TEST_CASE("solve_single_constraint worked examples") {
  SingleConstraintProblem p1{Mat::Zero(2, 2), Mat::Identity(2, 2), 1.0};
  p1.B.diagonal() << 1, -1;
  auto r1 = solve_single_constraint(p1);
  REQUIRE(r1.status == SingleConstraintResult::Status::Attained);
  CHECK(r1.value == doctest::Approx(-1.0));
  CHECK(std::abs(r1.point(0)) <= 1e-9);
  CHECK(std::abs(r1.point(1)) == doctest::Approx(1.0));
  CHECK(r1.point.dot(p1.A * r1.point) <= 1.0 + 1e-9);

  // the infimum along the escaping 2-block direction
  SingleConstraintProblem p2{special_E(2) * jordan_block(-1.0, 2),
                             special_E(2), 1.0};
  auto r2 = solve_single_constraint(p2);
  REQUIRE(r2.status == SingleConstraintResult::Status::InfimumOnly);
  CHECK(r2.value == doctest::Approx(-1.0));

  // positive definite constraint with b = 0: only the origin is feasible
  std::mt19937_64 rng(3);
  Mat B = random_orthogonal(3, rng);
  B = Mat(B + B.transpose().eval());
  SingleConstraintProblem p3{B, Mat::Identity(3, 3), 0.0};
  auto r3 = solve_single_constraint(p3);
  REQUIRE(r3.status == SingleConstraintResult::Status::Attained);
  CHECK(r3.value == 0.0);
  CHECK(r3.point.norm() == 0.0);

  SingleConstraintProblem p4 = p3;
  p4.b = -1.0;
  CHECK(solve_single_constraint(p4).status ==
        SingleConstraintResult::Status::Infeasible);

  // complex canonical block: unbounded below
  SingleConstraintProblem p5{Mat::Zero(2, 2), special_E(2), 1.0};
  p5.B.diagonal() << 1, -1;
  CHECK(solve_single_constraint(p5).status ==
        SingleConstraintResult::Status::UnboundedBelow);

  SingleConstraintProblem sing{Mat::Identity(2, 2), Mat::Zero(2, 2), 1.0};
  CHECK_THROWS_AS(solve_single_constraint(sing), std::invalid_argument);
}

TEST_CASE("brute_force_qcqp_oracle worked examples") {
  SingleConstraintProblem p0{Mat::Identity(2, 2), Mat::Identity(2, 2), 1.0};
  auto r0 = brute_force_qcqp_oracle(p0);
  REQUIRE(r0.found_feasible);
  CHECK(!r0.suspected_unbounded);
  CHECK(r0.value == doctest::Approx(0.0).epsilon(1e-6));

  SingleConstraintProblem p1{Mat::Zero(2, 2), Mat::Identity(2, 2), 1.0};
  p1.B.diagonal() << 1, -1;
  auto r1 = brute_force_qcqp_oracle(p1);
  CHECK(!r1.suspected_unbounded);
  CHECK(r1.value == doctest::Approx(-1.0).epsilon(1e-5));

  SingleConstraintProblem p2{Mat::Zero(2, 2), special_E(2), 1.0};
  p2.B.diagonal() << 1, -1;
  auto r2 = brute_force_qcqp_oracle(p2);
  CHECK(r2.suspected_unbounded);

  Mat big = Mat::Identity(5, 5);
  CHECK_THROWS_AS(
      brute_force_qcqp_oracle(SingleConstraintProblem{big, big, 1.0}),
      std::invalid_argument);
}

TEST_CASE("scaling reformulation preserves the optimal value") {
  std::mt19937_64 rng(2026);
  int done = 0;
  while (done < 10) {
    int m = 2 + static_cast<int>(rng() % 3);
    auto p = random_screened(m, rng, true);
    auto exact = solve_single_constraint(p);
    if (exact.status != SingleConstraintResult::Status::Attained)
      continue;  // keep instances whose minimum is attained
    auto base = brute_force_qcqp_oracle(p, {}, 30);
    REQUIRE(base.found_feasible);
    CHECK(base.value == doctest::Approx(exact.value).epsilon(1e-4).scale(1.0));
    for (double k : {1.0, 10.0, 100.0}) {
      auto pk = single_constraint_pk(p, k);
      auto rk = brute_force_qcqp_oracle(pk, {}, 30);
      REQUIRE(rk.found_feasible);
      CHECK(rk.value == doctest::Approx(base.value).epsilon(1e-4).scale(1.0));
    }
    ++done;
  }
}

TEST_CASE("solver agrees with the oracle") {
  std::mt19937_64 rng(99);
  int bounded = 0, unbounded = 0;
  for (int t = 0; t < 24 && (bounded < 8 || unbounded < 2); ++t) {
    int m = 2 + static_cast<int>(rng() % 3);
    SingleConstraintProblem p;
    if (t % 3 == 2) {
      // occasionally a raw random pair, often unbounded below
      Mat P0 = random_orthogonal(m, rng);
      std::uniform_real_distribution<double> u(-2.0, 2.0);
      Mat D1 = Mat::Zero(m, m), D2 = Mat::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        D1(i, i) = (i == 0) ? -1.0 : 1.0;
        D2(i, i) = u(rng);
      }
      p.A = P0.transpose() * D1 * P0;
      p.B = P0.transpose() * D2 * P0;
      p.b = 1.0;
    } else {
      p = random_screened(m, rng, true);
    }
    auto exact = solve_single_constraint(p);
    auto oracle = brute_force_qcqp_oracle(p, {}, 30);
    if (exact.status == SingleConstraintResult::Status::UnboundedBelow) {
      CHECK(oracle.suspected_unbounded);
      ++unbounded;
    } else if (exact.status != SingleConstraintResult::Status::Infeasible) {
      CHECK(!oracle.suspected_unbounded);
      CHECK(oracle.value ==
            doctest::Approx(exact.value).epsilon(1e-3).scale(1.0));
      ++bounded;
    }
  }
  CHECK(bounded >= 8);
  CHECK(unbounded >= 1);
}

TEST_CASE("scaled objective is pointwise non-increasing in k") {
  SingleConstraintProblem p{special_E(2) * jordan_block(-0.8, 2), special_E(2),
                            1.0};
  Mat B1 = single_constraint_pk(p, 1.0).B;
  Mat B10 = single_constraint_pk(p, 10.0).B;
  Mat B100 = single_constraint_pk(p, 100.0).B;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    Vec y(2);
    y << g(rng), g(rng);
    double f1 = y.dot(B1 * y), f10 = y.dot(B10 * y), f100 = y.dot(B100 * y);
    CHECK(f10 <= f1 + 1e-12);
    CHECK(f100 <= f10 + 1e-12);
  }
}

TEST_CASE("homogenize preserves the optimal value") {
  // the lift zeroes the objective's constant, so use instances with c0 = 0:
  // min ||x - v||^2 - ||v||^2  s.t.  ||x||^2 <= 4, minimized at x = v
  QcqpInstance q;
  q.dim = 2;
  Vec v(2);
  v << 1.0, 0.5;
  q.objective = {Mat::Identity(2, 2), Vec(-v), 0.0};
  q.constraints.push_back({Mat::Identity(2, 2), Vec::Zero(2), -4.0});
  auto direct = brute_force_qcqp_oracle(q);
  REQUIRE(direct.found_feasible);
  CHECK(direct.value == doctest::Approx(-v.squaredNorm()).epsilon(1e-6));
  CHECK((direct.point - v).norm() <= 1e-3);

  auto sliced = restrict_to_unit_slice(homogenize(q));
  auto again = brute_force_qcqp_oracle(sliced);
  REQUIRE(again.found_feasible);
  CHECK(again.value == doctest::Approx(direct.value).epsilon(1e-5).scale(1.0));

  // a constrained optimum away from the unconstrained minimizer
  QcqpInstance q2 = q;
  q2.constraints[0].c = -0.25;  // ||x|| <= 1/2
  auto d2 = brute_force_qcqp_oracle(q2);
  auto s2 = brute_force_qcqp_oracle(restrict_to_unit_slice(homogenize(q2)));
  double expected = std::pow(v.norm() - 0.5, 2) - v.squaredNorm();
  CHECK(d2.value == doctest::Approx(expected).epsilon(1e-4));
  CHECK(s2.value == doctest::Approx(d2.value).epsilon(1e-5).scale(1.0));
}
