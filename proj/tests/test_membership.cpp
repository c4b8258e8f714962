#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ell4/eigh.hpp"
#include "ell4/gram.hpp"
#include "ell4/membership.hpp"
#include "ell4/rng.hpp"

using namespace ell4;

namespace {

DenseMatrix simplex_gram(int N) {
  DenseMatrix X(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) X(i, j) = (i == j) ? 1.0 : -1.0 / (N - 1);
  return X;
}

}  // namespace

TEST_CASE("e2 membership") {
  MembershipVerdict a = e2_membership(simplex_gram(3));
  CHECK(a.status == Membership::Member);

  DenseMatrix ones(4, 4);
  for (auto& x : ones.a) x = 1.0;
  CHECK(e2_membership(ones).status == Membership::Member);

  DenseMatrix bad(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) bad(i, j) = (i == j) ? 1.0 : -1.0;  // 2I - 11^T
  MembershipVerdict c = e2_membership(bad);
  CHECK(c.status == Membership::NonMember);
  CHECK(c.gap == doctest::Approx(1.0).epsilon(1e-9));  // spectrum {2,2,-1}
}

TEST_CASE("cut membership: interior, vertex, and excluded points") {
  MembershipVerdict mi = cut_membership(DenseMatrix::identity(5), 1e-7, 20000);
  CHECK(mi.status == Membership::Member);
  REQUIRE(mi.decomposition.has_value());
  CHECK(max_abs(mi.decomposition->represented(5) - DenseMatrix::identity(5)) <= 1e-6);

  Xorshift64Star rng(67);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<int> x(5, 1);
    for (int i = 1; i < 5; ++i) x[i] = (rng.next() & 1) ? 1 : -1;
    DenseMatrix X(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) X(i, j) = x[i] * x[j];
    MembershipVerdict mv = cut_membership(X, 1e-7, 20000);
    CHECK(mv.status == Membership::Member);
  }

  MembershipVerdict mx = cut_membership(simplex_gram(5), 1e-6, 20000);
  CHECK(mx.status == Membership::NonMember);
  REQUIRE(mx.separating.has_value());
  // re-verify separation: <W, X> strictly above the cut support value
  double wx = dot(*mx.separating, simplex_gram(5));
  CHECK(wx - mx.separation_threshold > 0);
  // the classical separator: <11^T, X^(5)> = 0 while every cut has >= 1
  DenseMatrix ones(5, 5);
  for (auto& x : ones.a) x = 1.0;
  CHECK(std::fabs(dot(ones, simplex_gram(5))) < 1e-9);
}

TEST_CASE("cut membership rejects large N") {
  CHECK_THROWS_AS(cut_membership(DenseMatrix::identity(17)), Error);
}

TEST_CASE("e4 feasibility: simplex members and excluded maximal frames") {
  VectorSystem s5 = simplex_etf(5);
  MembershipVerdict m5 = e4_feasibility(s5, 1e-8, 5000);
  CHECK(m5.status == Membership::Member);
  REQUIRE(m5.witness.has_value());
  std::vector<double> v = s5.vec();
  std::vector<double> Mv = matvec(m5.witness->M, v);
  double vMv = 0;
  for (size_t t = 0; t < v.size(); ++t) vMv += v[t] * Mv[t];
  CHECK(vMv == doctest::Approx(25.0).epsilon(1e-6));
  CHECK(validate_witness(*m5.witness, 1e-6).all_pass());
  // the recovered witness converts to a valid pseudomoment matrix
  Degree4Moments m = witness_to_moments(*m5.witness, s5, 1e-6);
  CHECK(validate_degree4(m, 1e-5).all_pass());

  MembershipVerdict m3 = e4_feasibility(simplex_etf(3), 1e-8, 5000);
  CHECK(m3.status == Membership::NonMember);
  CHECK(m3.gap >= 1e-4);

  VectorSystem basis{4, 4, DenseMatrix::identity(4), std::nullopt};
  MembershipVerdict mb = e4_feasibility(basis, 1e-8, 5000);
  CHECK(mb.status == Membership::Member);
}

TEST_CASE("e4 feasibility rejects the 28/7 maximal ETF") {
  MembershipVerdict m = e4_feasibility(etf_28_7(), 1e-6, 1200);
  CHECK(m.status == Membership::NonMember);
  CHECK(m.gap >= 1e-4);
}

TEST_CASE("agreement at rank one: cut and e4 oracles coincide on sign vectors") {
  Xorshift64Star rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    int N = 3 + static_cast<int>(rng.next() % 3);
    std::vector<int> x(N, 1);
    for (int i = 1; i < N; ++i) x[i] = (rng.next() & 1) ? 1 : -1;
    DenseMatrix X(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) X(i, j) = x[i] * x[j];
    MembershipVerdict mc = cut_membership(X, 1e-7, 20000);
    DenseMatrix V(1, N);
    for (int i = 0; i < N; ++i) V(0, i) = x[i];
    MembershipVerdict me = e4_feasibility(VectorSystem{N, 1, V, std::nullopt}, 1e-8, 3000);
    CHECK(mc.status == Membership::Member);
    CHECK(me.status == Membership::Member);
  }
}

TEST_CASE("membership is monotone along rays from the identity") {
  auto [A1, A2] = random_directions(5, 99);
  DenseMatrix B = A1;
  auto member_e2 = [&](double t) {
    DenseMatrix X = DenseMatrix::identity(5) + B.scaled(t);
    return e2_membership(X, 1e-9).status == Membership::Member;
  };
  // find the boundary then check no sign flips on either side
  double lo = 0, hi = 1;
  while (member_e2(hi)) hi *= 2;
  while (hi - lo > 1e-4) {
    double mid = 0.5 * (lo + hi);
    (member_e2(mid) ? lo : hi) = mid;
  }
  for (double f : {0.1, 0.5, 0.9}) CHECK(member_e2(lo * f));
  for (double f : {1.1, 1.5, 3.0}) CHECK(!member_e2(hi * f));
}

TEST_CASE("random_directions are deterministic, orthonormal, zero diagonal") {
  auto [A1, A2] = random_directions(5, 12345);
  auto [B1, B2] = random_directions(5, 12345);
  CHECK(max_abs(A1 - B1) == 0.0);
  CHECK(max_abs(A2 - B2) == 0.0);
  CHECK(std::fabs(frob_norm(A1) - 1.0) < 1e-12);
  CHECK(std::fabs(frob_norm(A2) - 1.0) < 1e-12);
  CHECK(std::fabs(dot(A1, A2)) < 1e-12);
  for (int i = 0; i < 5; ++i) {
    CHECK(A1(i, i) == 0.0);
    CHECK(A2(i, i) == 0.0);
  }
  auto [C1, C2] = random_directions(5, 54321);
  CHECK(max_abs(A1 - C1) > 1e-3);
}

TEST_CASE("cross section: nesting on a small ray budget") {
  auto [A1, A2] = random_directions(5, 7);
  CrossSection cs = cross_section(5, A1, A2, 8, 2e-3);
  for (int k = 0; k < 8; ++k) {
    CHECK(cs.radius_e2[k] > 0);
    CHECK(cs.radius_cut[k] <= cs.radius_e4[k] + 2e-3);
    CHECK(cs.radius_e4[k] <= cs.radius_e2[k] + 2e-3);
  }
}

TEST_CASE("cross section: E4 strictly exceeds C toward the simplex Gram") {
  // direction proportional to X^(5) - I (zero diagonal, normalized)
  DenseMatrix D = simplex_gram(5) - DenseMatrix::identity(5);
  D = D.scaled(1.0 / frob_norm(D));
  // orthonormal partner
  auto [A1, A2] = random_directions(5, 11);
  DenseMatrix E = A1 - D.scaled(dot(D, A1));
  E = E.scaled(1.0 / frob_norm(E));
  CrossSection cs = cross_section(5, D, E, 1, 5e-4);
  CHECK(cs.radius_e4[0] - cs.radius_cut[0] >= 1e-3);
  CHECK(cs.radius_e4[0] <= cs.radius_e2[0] + 2e-3);
}

TEST_CASE("cross_section rejects bad directions") {
  DenseMatrix A1(5, 5), A2(5, 5);
  A1(0, 0) = 1.0;
  CHECK_THROWS_AS(cross_section(5, A1, A2, 4, 1e-3), Error);
}
