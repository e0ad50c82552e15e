#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "simdiag/sequences.hpp"

using namespace simdiag;

namespace {

Mat random_conditioned(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.5, 2.0);
  Mat X(m, m), Y(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      X(i, j) = g(rng);
      Y(i, j) = g(rng);
    }
  Mat Q1 = Eigen::HouseholderQR<Mat>(X).householderQ();
  Mat Q2 = Eigen::HouseholderQR<Mat>(Y).householderQ();
  Vec d(m);
  for (int i = 0; i < m; ++i) d(i) = u(rng);
  return Q1 * d.asDiagonal() * Q2;
}

const std::vector<double> kGrid = {10.0, 100.0, 1000.0, 10000.0};

double loglog_slope(const std::vector<double>& k, const std::vector<double>& y) {
  // least-squares slope of log y against log k
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(k.size());
  for (int i = 0; i < n; ++i) {
    double x = std::log(k[i]), v = std::log(std::max(y[i], 1e-300));
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("q_anti_to_signature") {
  for (int m = 1; m <= 9; ++m) {
    Mat Q = q_anti_to_signature(m);
    CHECK((Q.transpose() * Q - Mat::Identity(m, m)).norm() <= 1e-13);
    CHECK((Q.transpose() * special_E(m) * Q - special_G(m)).norm() <= 1e-13);
    CHECK(Q.determinant() == doctest::Approx(1.0));
  }
}

TEST_CASE("evaluate closed forms") {
  std::mt19937_64 rng(3);
  Mat Q = q_anti_to_signature(2);
  CongruenceSequence ef{2, SeqEFBlock{Q, 2}, Q.determinant(), std::nullopt};
  CHECK((evaluate(ef, 1.0) - Q).norm() <= 1e-15);

  // pair factor at k = 100 is diag(10, 0.1) * Q
  SeqNonsingularPair rec;
  rec.base = Mat::Identity(2, 2);
  rec.factors.push_back({2, Q, true});
  CongruenceSequence np{2, rec, 1.0, std::nullopt};
  Mat R100 = Mat::Zero(2, 2);
  R100.diagonal() << 10.0, 0.1;
  CHECK((evaluate(np, 100.0) - R100 * Q).norm() <= 1e-13);

  Mat P = random_conditioned(3, rng);
  CongruenceSequence cst{3, SeqConstant{P}, P.determinant(), std::nullopt};
  CHECK((evaluate(cst, 7.5) - P).norm() == 0.0);

  CHECK_THROWS_AS(evaluate(cst, 0.5), std::invalid_argument);
  CongruenceSequence big{5, SeqEFBlock{Mat::Identity(5, 5), 5}, 1.0,
                         std::nullopt};
  CHECK_THROWS_AS(evaluate(big, 1e80), std::overflow_error);
}

TEST_CASE("seq_nonsingular_pair on the corner pair") {
  Mat A = special_E(2);
  Mat B = Mat::Zero(2, 2);
  B(0, 0) = 1.0;
  auto seq = seq_nonsingular_pair(A, B);
  REQUIRE(seq.limits.has_value());
  CHECK(((*seq.limits)[0] - special_G(2)).norm() <= 1e-12);
  CHECK((*seq.limits)[1].norm() <= 1e-12);

  SymMatrixSet C(2, {A, B});
  auto rep = verify_sequence(C, seq, kGrid);
  CHECK(rep.monotone_decay);
  CHECK(rep.det_constant);
  CHECK(rep.bounded_diag);
  CHECK(loglog_slope(kGrid, rep.offdiag_sum) <= -0.9);
  for (std::size_t i = 0; i < kGrid.size(); ++i) {
    Mat P = evaluate(seq, kGrid[i]);
    CHECK((P.transpose() * A * P - (*seq.limits)[0]).norm() <=
          3.0 / kGrid[i]);
    CHECK((P.transpose() * B * P - (*seq.limits)[1]).norm() <=
          3.0 / kGrid[i]);
  }

  // the known closed-form witness for this pair is accepted by verify_sequence
  for (double k : {10.0, 100.0, 1000.0}) {
    Mat Pk(2, 2);
    Pk << 1.0 / k, 1.0 / (2.0 * k), -k, k / 2.0;
    Mat WA = Pk.transpose() * A * Pk;
    Mat expectA = Mat::Zero(2, 2);
    expectA.diagonal() << -2.0, 0.5;
    CHECK((WA - expectA).norm() <= 1e-12);
    Mat WB = Pk.transpose() * B * Pk;
    CHECK(WB(0, 0) == doctest::Approx(1.0 / (k * k)).epsilon(1e-12));
    CHECK(WB(0, 1) == doctest::Approx(1.0 / (2.0 * k * k)).epsilon(1e-12));
    CHECK(WB(1, 1) == doctest::Approx(1.0 / (4.0 * k * k)).epsilon(1e-12));
  }
}

TEST_CASE("seq_nonsingular_pair trivial and 3x3 cases") {
  Mat I2 = Mat::Identity(2, 2);
  Mat D(2, 2);
  D << 2, 0, 0, 3;
  auto seq = seq_nonsingular_pair(I2, D);
  CHECK(std::holds_alternative<SeqConstant>(seq.recipe));
  CHECK((evaluate(seq, 50.0) - I2).norm() == 0.0);

  Mat A3 = special_E(3);
  Mat B3 = special_E(3) * jordan_block(5.0, 3);
  auto s3 = seq_nonsingular_pair(A3, B3);
  Mat P = evaluate(s3, 1000.0);
  double off = offdiag(P.transpose() * A3 * P).norm() +
               offdiag(P.transpose() * B3 * P).norm();
  CHECK(off <= 3.0 / 1000.0);
  REQUIRE(s3.limits.has_value());
  CHECK(((*s3.limits)[1] - 5.0 * (*s3.limits)[0]).norm() <= 1e-10);

  Mat rot = special_E(2) * jordan_block_complex(0.3, 1.1, 1);
  CHECK_THROWS_AS(seq_nonsingular_pair(special_E(2), rot), std::domain_error);
}

TEST_CASE("seq_nonsingular_pair on random real-spectrum pairs") {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> lamd(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    int m = 2 + static_cast<int>(rng() % 5);
    std::vector<LancasterBlockDescriptor> desc;
    int left = m;
    while (left > 0) {
      int sz = 1 + static_cast<int>(rng() % std::min(left, 3));
      desc.push_back({1, sz, rng() % 2 == 0 ? 1 : -1, lamd(rng), 0, 0});
      left -= sz;
    }
    Mat Q = random_conditioned(m, rng);
    auto [A, B] = synthesize_lancaster_pair(desc, Q);
    CongruenceSequence seq;
    try {
      seq = seq_nonsingular_pair(A, B);
    } catch (const CanonicalUnreliable&) {
      continue;
    }
    SymMatrixSet C(m, {A, B});
    auto rep = verify_sequence(C, seq, kGrid);
    CHECK(rep.det_constant);
    // diagonalizable draws have offdiag identically ~0; otherwise 1/k decay
    if (rep.offdiag_sum.front() > 1e-10)
      CHECK(loglog_slope(kGrid, rep.offdiag_sum) <= -0.9);
    double dmax = *std::max_element(rep.diag_max.begin(), rep.diag_max.end());
    double dmin = *std::min_element(rep.diag_max.begin(), rep.diag_max.end());
    CHECK(dmax <= 2.0 * dmin);
  }
}

TEST_CASE("seq_singular_pair zero-block schedule") {
  // unimodular integer scramble keeps the zero block exactly zero, so the
  // k^{m-1} blow-up slot does not amplify rounding noise
  Mat Q(3, 3);
  Q << 1, 2, 1, 1, 3, 2, 1, 3, 3;
  std::vector<LancasterBlockDescriptor> desc = {{5, 2, +1, 0, 0, 0},
                                                {1, 1, +1, 2.0, 0, 0}};
  auto [A, B] = synthesize_lancaster_pair(desc, Q);
  auto seq = seq_singular_pair(desc, Q);
  CHECK(std::holds_alternative<SeqSingularCase1>(seq.recipe));
  SymMatrixSet C(3, {A, B});
  auto rep = verify_sequence(C, seq, kGrid);
  CHECK(rep.monotone_decay);
  CHECK(rep.det_constant);
  Mat P = evaluate(seq, 1000.0);
  CHECK((P.transpose() * A * P).norm() <= 1e-4);
  CHECK((P.transpose() * B * P).norm() <= 1e-4);
}

TEST_CASE("seq_singular_pair corner-block schedule") {
  std::vector<LancasterBlockDescriptor> lone = {{4, 1, +1, 0, 0, 0}};
  auto [A, B] = synthesize_lancaster_pair(lone);
  auto seq = seq_singular_pair(lone);
  CHECK(std::holds_alternative<SeqSingularCase2>(seq.recipe));
  SymMatrixSet C(3, {A, B});
  auto rep = verify_sequence(C, seq, {10.0, 100.0, 1000.0});
  CHECK(rep.monotone_decay);
  CHECK(rep.det_constant);
  Mat P = evaluate(seq, 1000.0);
  CHECK(offdiag(P.transpose() * A * P).norm() <= 0.1);
  CHECK(offdiag(P.transpose() * B * P).norm() <= 0.1);

  std::mt19937_64 rng(18);
  std::vector<LancasterBlockDescriptor> mixed = {{1, 2, +1, 1.5, 0, 0},
                                                 {4, 1, -1, 0, 0, 0}};
  Mat Q = random_conditioned(5, rng);
  auto [Am, Bm] = synthesize_lancaster_pair(mixed, Q);
  auto sm = seq_singular_pair(mixed, Q);
  SymMatrixSet Cm(5, {Am, Bm});
  auto repm = verify_sequence(Cm, sm, {10.0, 100.0, 1000.0, 10000.0});
  CHECK(repm.monotone_decay);
  CHECK(repm.det_constant);
  // the mixed schedule decays like k^{-1/(m-1)}; check the rate, not a tiny bound
  CHECK(repm.offdiag_sum.back() <= 0.2 * repm.offdiag_sum.front());
  Mat Pm = evaluate(sm, 10000.0);
  CHECK(offdiag(Pm.transpose() * Am * Pm).norm() <= 0.35);
  CHECK(offdiag(Pm.transpose() * Bm * Pm).norm() <= 0.35);
}

TEST_CASE("seq_singular_pair per-block path and the refusal branch") {
  std::mt19937_64 rng(91);
  std::vector<LancasterBlockDescriptor> desc = {{1, 2, +1, -1.0, 0, 0},
                                                {2, 2, -1, 0, 0, 0}};
  Mat Q = random_conditioned(4, rng);
  auto [A, B] = synthesize_lancaster_pair(desc, Q);
  auto seq = seq_singular_pair(desc, Q);
  CHECK(std::holds_alternative<SeqNonsingularPair>(seq.recipe));
  SymMatrixSet C(4, {A, B});
  auto rep = verify_sequence(C, seq, kGrid);
  CHECK(rep.monotone_decay);
  CHECK(rep.det_constant);
  REQUIRE(seq.limits.has_value());
  Mat P = evaluate(seq, 10000.0);
  CHECK((P.transpose() * A * P - (*seq.limits)[0]).norm() <= 1e-2);
  CHECK((P.transpose() * B * P - (*seq.limits)[1]).norm() <= 1e-2);

  std::vector<LancasterBlockDescriptor> bad = {{3, 1, +1, 0, 0.5, 1.0}};
  CHECK_THROWS_WITH_AS(seq_singular_pair(bad), "not-TWSD-B",
                       std::runtime_error);
}

TEST_CASE("seq_psd_pencil") {
  Mat A(2, 2), B(2, 2);
  A << 1, -1, -1, 0;
  B << 1, 1, 1, 0;
  auto wit = find_definite_pencil(SymMatrixSet(2, {A, B}));
  REQUIRE(wit.found());
  auto seq = seq_psd_pencil(A, B, *wit.witness);
  SymMatrixSet C(2, {A, B});
  auto rep = verify_sequence(C, seq, kGrid);
  CHECK(rep.det_constant);
  // offdiagonals vanish in the limit even though this is TWSD-only
  CHECK(rep.offdiag_sum.back() <= 5e-2);
  CHECK(rep.offdiag_sum.back() < 0.2 * rep.offdiag_sum.front());

  // positive definite pencil member: the diagonalized matrix is exactly clean
  std::mt19937_64 rng(12);
  Mat S = random_conditioned(3, rng);
  S = Mat(0.5 * (S + S.transpose().eval()));
  Mat I3 = Mat::Identity(3, 3);
  auto wpd = find_definite_pencil(SymMatrixSet(3, {I3, S}));
  REQUIRE(wpd.found());
  auto spd = seq_psd_pencil(I3, S, *wpd.witness);
  for (double k : kGrid) {
    Mat P = evaluate(spd, k);
    double target = std::abs(wpd.witness->coeffs(0)) > 0
                        ? offdiag(P.transpose() * S * P).norm()
                        : offdiag(P.transpose() * I3 * P).norm();
    CHECK(target <= 1e-10);
    CHECK(std::abs(P.determinant() - 1.0) <= 1e-9);
  }

  PencilWitness nw;
  nw.kind = PencilWitness::Nonsingular;
  nw.coeffs = Vec::Ones(2);
  nw.pencil = A + B;
  CHECK_THROWS_AS(seq_psd_pencil(A, B, nw), std::domain_error);
}

TEST_CASE("unbounded-diagonal witness is flagged") {
  Mat A(3, 3);
  A << 1, 0, 0, 0, 0, 1, 0, 1, 0;
  Mat B = Mat::Zero(3, 3);
  B.diagonal() << 1, 1, -1;
  // diag(k^2, 1/k, 1/k) family, encoded with the blown-up slot last
  Mat Pi = Mat::Zero(3, 3);
  Pi(0, 2) = 1.0;
  Pi(1, 0) = 1.0;
  Pi(2, 1) = 1.0;
  CongruenceSequence seq{3, SeqSingularCase1{Pi}, Pi.determinant(),
                         std::nullopt};
  SymMatrixSet C(3, {A, B});
  auto rep = verify_sequence(C, seq, kGrid);
  CHECK(rep.det_constant);
  CHECK(!rep.bounded_diag);
  CHECK(rep.offdiag_sum.back() <= 1e-7);
  // diagonal grows like k^4
  CHECK(rep.diag_max.back() >= 1e12);
}

TEST_CASE("determinant invariance across recipes") {
  std::mt19937_64 rng(44);
  std::vector<CongruenceSequence> seqs;
  seqs.push_back(seq_nonsingular_pair(special_E(3),
                                      Mat(special_E(3) * jordan_block(2.0, 3))));
  std::vector<LancasterBlockDescriptor> d1 = {{5, 1, +1, 0, 0, 0},
                                              {1, 2, -1, 0.5, 0, 0}};
  seqs.push_back(seq_singular_pair(d1, random_conditioned(3, rng)));
  std::vector<LancasterBlockDescriptor> d2 = {{4, 1, +1, 0, 0, 0},
                                              {1, 1, +1, 1.0, 0, 0}};
  seqs.push_back(seq_singular_pair(d2, random_conditioned(4, rng)));
  for (const auto& s : seqs)
    for (double k : {1.0, 10.0, 100.0, 1000.0}) {
      double det = evaluate(s, k).determinant();
      CHECK(std::abs(det - s.det_value) <=
            1e-8 * std::max(1.0, std::abs(s.det_value)));
    }
}
