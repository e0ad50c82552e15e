#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "simdiag/dsdo.hpp"

using namespace simdiag;

namespace {

Mat random_sym(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = g(rng);
  return Mat(0.5 * (A + A.transpose().eval()));
}

SymMatrixSet triple61() {
  Mat A2 = Mat::Zero(3, 3);
  A2.diagonal() << 1, 1, -1;
  Mat A3(3, 3);
  A3 << 1, 0, 0, 0, 0, 1, 0, 1, 0;
  return SymMatrixSet(3, {Mat::Identity(3, 3), A2, A3});
}

}  // namespace

TEST_CASE("dsdo_construct worked examples") {
  Mat A = Mat::Zero(2, 2);
  A.diagonal() << 3, 1;  // already diagonal, descending
  auto f1 = dsdo_construct(SymMatrixSet(2, {A}));
  CHECK((f1.P - Mat::Identity(2, 2)).norm() <= 1e-14);
  CHECK((f1.D[0] - A).norm() <= 1e-14);
  CHECK(f1.residual <= 1e-28);

  Mat a1(1, 1), a2(1, 1);
  a1 << 2;
  a2 << -3;
  auto f2 = dsdo_construct(SymMatrixSet(1, {a1, a2}));
  Mat expP(2, 1);
  expP << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK((f2.P - expP).norm() <= 1e-14);
  Mat D1 = Mat::Zero(2, 2), D2 = Mat::Zero(2, 2);
  D1(0, 0) = 4.0;
  D2(1, 1) = -6.0;
  CHECK((f2.D[0] - D1).norm() <= 1e-14);
  CHECK((f2.D[1] - D2).norm() <= 1e-14);
  CHECK((f2.P.transpose() * f2.D[0] * f2.P - a1).norm() <= 1e-14);

  auto f3 = dsdo_construct(triple61());
  CHECK(f3.P.rows() == 9);
  CHECK(f3.residual <= 1e-10);
  CHECK((f3.P.transpose() * f3.P - Mat::Identity(3, 3)).norm() <= 1e-12);
}

TEST_CASE("dsdo_construct on 200 random sets") {
  std::mt19937_64 rng(1234);
  for (int t = 0; t < 200; ++t) {
    int m = 1 + static_cast<int>(rng() % 6);
    int L = 1 + static_cast<int>(rng() % 5);
    std::vector<Mat> mats;
    for (int i = 0; i < L; ++i) mats.push_back(random_sym(m, rng));
    SymMatrixSet C(m, mats);
    auto f = dsdo_construct(C);
    double total = 0.0;
    for (const auto& X : C.mats) total += X.squaredNorm();
    CHECK(f.residual <= 1e-18 * total);
    CHECK((f.P.transpose() * f.P - Mat::Identity(m, m)).norm() <= 1e-12);
    // orthonormal columns also certify the unit-determinant variant
    CHECK(std::abs((f.P.transpose() * f.P).determinant() - 1.0) <= 1e-10);
  }
}

TEST_CASE("zero-padding keeps a factorization valid") {
  std::mt19937_64 rng(9);
  SymMatrixSet C(3, {random_sym(3, rng), random_sym(3, rng)});
  auto f = dsdo_construct(C);
  const int n = static_cast<int>(f.P.rows());
  Mat Pp = Mat::Zero(n + 1, 3);
  Pp.topRows(n) = f.P;
  std::vector<Mat> Dp;
  for (const auto& D : f.D) {
    Mat Z = Mat::Zero(n + 1, n + 1);
    Z.topLeftCorner(n, n) = D;
    Dp.push_back(Z);
  }
  CHECK(phi_D(C, Pp, Dp) == doctest::Approx(f.residual).epsilon(1e-10));
  CHECK((Pp.transpose() * Pp - Mat::Identity(3, 3)).norm() <= 1e-12);
}

TEST_CASE("dsdo_basis_construct") {
  auto f1 = dsdo_basis_construct(1);
  CHECK(f1.P.rows() == 1);
  CHECK(std::abs(std::abs(f1.P(0, 0)) - 1.0) <= 1e-14);

  auto f2 = dsdo_basis_construct(2);
  CHECK(f2.P.rows() == 6);
  Mat A(2, 2);
  A << 1, 2, 2, 3;
  Vec c = symmetric_basis_coefficients(A);
  CHECK(c(0) == doctest::Approx(1.0));
  CHECK(c(1) == doctest::Approx(3.0));
  CHECK(c(2) == doctest::Approx(2.0));
  Mat D = dsdo_basis_diagonal(f2, A);
  CHECK((A - f2.P.transpose() * D * f2.P).norm() <= 1e-10);

  // one fixed P factorizes a whole random m=3 set
  auto f3 = dsdo_basis_construct(3);
  CHECK(f3.P.rows() == 18);
  std::mt19937_64 rng(31);
  for (int i = 0; i < 5; ++i) {
    Mat S = random_sym(3, rng);
    Mat DS = dsdo_basis_diagonal(f3, S);
    CHECK((S - f3.P.transpose() * DS * f3.P).norm() <= 1e-10);
  }

  CHECK_THROWS_AS(dsdo_basis_construct(13), std::invalid_argument);
}

TEST_CASE("rho_projection_check") {
  std::mt19937_64 rng(77);
  SymMatrixSet C(2, {random_sym(2, rng), random_sym(2, rng)});
  auto f = dsdo_construct(C);
  const int n = static_cast<int>(f.P.rows());
  // complete P to a square orthogonal U with the factor in the first columns
  Eigen::HouseholderQR<Mat> qr(f.P);
  Mat U = qr.householderQ();
  // householder may flip the leading columns' sign; realign with P
  for (int j = 0; j < 2; ++j)
    if ((U.col(j) + f.P.col(j)).norm() < (U.col(j) - f.P.col(j)).norm())
      U.col(j) *= -1.0;
  std::vector<Mat> S;
  for (const auto& D : f.D) S.push_back(U.transpose() * D * U);
  CHECK(rho_projection_check(S, C));

  std::vector<Mat> bad = S;
  bad[0](0, 0) += 0.3;
  CHECK(!rho_projection_check(bad, C));

  Mat d3 = Mat::Zero(3, 3);
  d3.diagonal() << 1, 2, 3;
  Mat d2 = Mat::Zero(2, 2);
  d2.diagonal() << 1, 2;
  CHECK(rho_projection_check({d3}, SymMatrixSet(2, {d2})));
}

TEST_CASE("joint_slice_factorization") {
  auto syn = synth_bss_slices(2, 3, 3, 2026);
  REQUIRE(syn.slices.size() == 2);
  auto f = joint_slice_factorization(syn.slices, 3);
  CHECK(f.P.rows() == 4);  // n = L*m >= m^(d-1) = 4
  CHECK(f.residual <= 1e-10);

  auto syn4 = synth_bss_slices(2, 4, 4, 99);
  REQUIRE(syn4.slices.size() == 4);
  auto f4 = joint_slice_factorization(syn4.slices, 4);
  CHECK(f4.P.rows() == 8);
  CHECK(f4.residual <= 1e-10);

  // too few slices for the requested order
  CHECK_THROWS_AS(joint_slice_factorization(syn.slices, 4), std::domain_error);

  // jointly diagonal slices factor through stacked scaled identities
  Mat s1 = Mat::Zero(2, 2), s2 = Mat::Zero(2, 2);
  s1.diagonal() << 5, 1;
  s2.diagonal() << 4, 2;
  auto fd = joint_slice_factorization(SymMatrixSet(2, {s1, s2}), 3);
  Mat stacked(4, 2);
  stacked << 1, 0, 0, 1, 1, 0, 0, 1;
  stacked /= std::sqrt(2.0);
  CHECK((fd.P - stacked).norm() <= 1e-13);
}
