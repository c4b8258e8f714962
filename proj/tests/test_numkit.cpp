#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ell4/eigh.hpp"
#include "ell4/frames.hpp"
#include "ell4/gram.hpp"
#include "ell4/matrix.hpp"
#include "ell4/psd_ldl.hpp"
#include "ell4/rng.hpp"

using namespace ell4;

namespace {

DenseMatrix random_symmetric(int n, Xorshift64Star& rng, double scale = 1.0) {
  DenseMatrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) A(i, j) = A(j, i) = scale * rng.uniform_pm1();
  return A;
}

double reconstruction_error(const DenseMatrix& A, const EighResult& e) {
  const int n = A.rows;
  DenseMatrix R(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) R(i, j) += e.eigenvalues[k] * e.vectors(i, k) * e.vectors(j, k);
  return max_abs(A - R);
}

double orthogonality_error(const EighResult& e) {
  const int n = e.vectors.rows;
  DenseMatrix QtQ = e.vectors.transpose() * e.vectors;
  for (int i = 0; i < n; ++i) QtQ(i, i) -= 1.0;
  return max_abs(QtQ);
}

}  // namespace

TEST_CASE("eigh identity") {
  EighResult e = symmetric_eigh(DenseMatrix::identity(3));
  for (double l : e.eigenvalues) CHECK(l == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigh 2x2 closed form") {
  DenseMatrix A(2, 2);
  A(0, 0) = A(1, 1) = 2;
  A(0, 1) = A(1, 0) = 1;
  EighResult e = symmetric_eigh(A);
  CHECK(e.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
  // eigenvectors (1,1)/sqrt2 and (1,-1)/sqrt2 up to sign
  CHECK(std::fabs(e.vectors(0, 0) * e.vectors(1, 0)) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(e.vectors(0, 1) * e.vectors(1, 1) == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("eigh of the simplex ETF Gram: eigenvalues N/r and 0") {
  VectorSystem sys = simplex_etf(5);
  EighResult e = symmetric_eigh(sys.gram());
  for (int k = 0; k < 4; ++k) CHECK(e.eigenvalues[k] == doctest::Approx(1.25).epsilon(1e-10));
  CHECK(std::fabs(e.eigenvalues[4]) < 1e-10);
}

TEST_CASE("eigh residuals on 200 random symmetric matrices up to size 50") {
  Xorshift64Star rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng.next() % 49);
    DenseMatrix A = random_symmetric(n, rng, 3.0);
    EighResult e = symmetric_eigh(A, 1e-8);
    double scale = std::max(1.0, max_abs(A));
    CHECK(reconstruction_error(A, e) <= 1e-8 * scale);
    CHECK(orthogonality_error(e) <= 1e-8);
    for (size_t k = 1; k < e.eigenvalues.size(); ++k)
      CHECK(e.eigenvalues[k - 1] >= e.eigenvalues[k]);
  }
}

TEST_CASE("eigh rejects asymmetric and non-square input") {
  DenseMatrix A(2, 2);
  A(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS_AS(symmetric_eigh(A), Error);
  DenseMatrix B(2, 3);
  CHECK_THROWS_AS(symmetric_eigh(B), Error);
}

TEST_CASE("exact_psd_ldl hand cases") {
  RationalMatrix A(2, 2);
  A(0, 0) = 2;
  A(0, 1) = A(1, 0) = 1;
  A(1, 1) = 2;
  PsdResult res = exact_psd_ldl(A);
  REQUIRE(is_psd_proof(res));
  const auto& p = std::get<PsdProof>(res);
  CHECK(p.rank == 2);
  CHECK(p.D[0] == rat(2));
  CHECK(p.D[1] == rat(3, 2));

  RationalMatrix B(2, 2);
  B(0, 0) = 1;
  B(0, 1) = B(1, 0) = 2;
  B(1, 1) = 1;
  PsdResult res2 = exact_psd_ldl(B);
  REQUIRE(!is_psd_proof(res2));
  const auto& w = std::get<NotPsdWitness>(res2);
  CHECK(quadratic_form(B, w.w) == w.value);
  CHECK(w.value < 0);
  // the hand witness (1,-1) gives -2; the pivoted elimination surfaces the
  // Schur-complement witness (-2,1) with value -3, an equally exact certificate
  CHECK(quadratic_form(B, {rat(1), rat(-1)}) == rat(-2));
}

TEST_CASE("exact_psd_ldl is a decision procedure on random rational matrices") {
  Xorshift64Star rng(7);
  int psd_count = 0, indef_count = 0;
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng.next() % 7);
    // random G^T G is PSD; random symmetric is usually not
    RationalMatrix G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = rat(static_cast<long>(rng.next() % 11) - 5, 3);
    RationalMatrix A = (trial % 2 == 0) ? G.transpose() * G : G + G.transpose();
    PsdResult res = exact_psd_ldl(A);
    if (is_psd_proof(res)) {
      ++psd_count;
      const auto& p = std::get<PsdProof>(res);
      RationalMatrix R = ldl_reconstruct(p);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) CHECK(R(i, j) == A(p.perm[i], p.perm[j]));
      for (const Rational& d : p.D) CHECK(d >= 0);
    } else {
      ++indef_count;
      const auto& w = std::get<NotPsdWitness>(res);
      Rational val = quadratic_form(A, w.w);
      CHECK(val == w.value);
      CHECK(val < 0);
    }
  }
  CHECK(psd_count >= 20);  // all G^T G trials must land PSD
  CHECK(indef_count >= 1);
}

TEST_CASE("exact_psd_ldl on a PSD rank-deficient matrix ends with a zero tail") {
  // 3x3 of rank 1
  RationalMatrix A(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = rat(2) * rat(3) / rat(6);  // all ones
  PsdResult res = exact_psd_ldl(A);
  REQUIRE(is_psd_proof(res));
  const auto& p = std::get<PsdProof>(res);
  CHECK(p.rank == 1);
  CHECK(p.D[1] == 0);
  CHECK(p.D[2] == 0);
}

TEST_CASE("partial transpose: r=1 identity, swap spectrum, involution, trace") {
  // r = 1: unchanged
  Xorshift64Star rng(3);
  DenseMatrix A = random_symmetric(4, rng);
  DenseMatrix A1 = partial_transpose(A, BlockLayout{4, 1});
  CHECK(max_abs(A - A1) == 0.0);

  // (vv^T)^Gamma for v = e1(x)e1 + e2(x)e2 is the swap matrix
  std::vector<double> v = {1, 0, 0, 1};
  DenseMatrix vv = outer(v, v);
  DenseMatrix S = partial_transpose(vv, BlockLayout{2, 2});
  EighResult e = symmetric_eigh(S);
  CHECK(e.eigenvalues[0] == doctest::Approx(1).epsilon(1e-12));
  CHECK(e.eigenvalues[1] == doctest::Approx(1).epsilon(1e-12));
  CHECK(e.eigenvalues[2] == doctest::Approx(1).epsilon(1e-12));
  CHECK(e.eigenvalues[3] == doctest::Approx(-1).epsilon(1e-12));

  // involution + trace preservation on random 6x6 with r=2
  DenseMatrix B = random_symmetric(6, rng);
  DenseMatrix BG = partial_transpose(B, BlockLayout{3, 2});
  CHECK(max_abs(partial_transpose(BG, BlockLayout{3, 2}) - B) == 0.0);
  CHECK(trace_of(BG) == doctest::Approx(trace_of(B)).epsilon(1e-14));

  CHECK_THROWS_AS(partial_transpose(random_symmetric(5, rng), BlockLayout{2, 2}), Error);
}

TEST_CASE("gram_factor basics") {
  DenseMatrix I5 = DenseMatrix::identity(5);
  DenseMatrix V = gram_factor(I5);
  CHECK(V.rows == 5);
  CHECK(max_abs(V.transpose() * V - I5) < 1e-10);

  VectorSystem s5 = simplex_etf(5);
  DenseMatrix X5 = to_dense(*s5.gram_exact);
  DenseMatrix V5 = gram_factor(X5);
  CHECK(V5.rows == 4);
  CHECK(max_abs(V5.transpose() * V5 - X5) < 1e-10);

  DenseMatrix ones(3, 3);
  for (auto& x : ones.a) x = 1.0;
  DenseMatrix V1 = gram_factor(ones);
  CHECK(V1.rows == 1);
  for (int j = 0; j < 3; ++j) CHECK(std::fabs(std::fabs(V1(0, j)) - 1.0) < 1e-12);

  DenseMatrix neg = DenseMatrix::identity(3);
  neg(2, 2) = -0.5;
  CHECK_THROWS_AS(gram_factor(neg), NotPsdError);
}

TEST_CASE("gram_factor rank equals eigenvalue count above threshold") {
  Xorshift64Star rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + static_cast<int>(rng.next() % 6);
    int r = 1 + static_cast<int>(rng.next() % n);
    DenseMatrix G(r, n);
    for (auto& x : G.a) x = rng.uniform_pm1();
    DenseMatrix X = G.transpose() * G;
    DenseMatrix V = gram_factor(X, 1e-8);
    CHECK(V.rows == r);  // generic full row rank
    CHECK(max_abs(V.transpose() * V - X) <= 10 * 1e-8 * std::max(1.0, max_abs(X)));
  }
}

TEST_CASE("rational helpers") {
  CHECK(to_string(rat(2, 4)) == "1/2");
  CHECK(to_string(rat(-6, 3)) == "-2");
  CHECK(parse_rational("7/3") == rat(7, 3));
  Rational root;
  CHECK(rational_sqrt(rat(9, 4), root));
  CHECK(root == rat(3, 2));
  CHECK(!rational_sqrt(rat(2), root));
}
