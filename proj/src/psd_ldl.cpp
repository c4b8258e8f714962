#include "ell4/psd_ldl.hpp"

#include <chrono>
#include <iostream>

namespace ell4 {

bool is_psd_proof(const PsdResult& r) { return std::holds_alternative<PsdProof>(r); }

namespace {

// Fraction-free (Bareiss) symmetric elimination on the integer scaling of A.
// Working entries are minors of scale*A, so every division is exact and no
// gcd reduction is ever needed; the true Schur complement at step k is
// W / (scale * prev_pivot). Storage keeps the lower triangle only, with an
// index indirection so pivot swaps are O(1) relabelings.
struct IntSymWork {
  int n;
  std::vector<int> p;  // logical -> storage index
  std::vector<mpz_class> w;

  explicit IntSymWork(const RationalMatrix& A, const mpz_class& scale) : n(A.rows), p(A.rows) {
    w.resize(static_cast<size_t>(n) * n);
    mpz_class t;
    for (int i = 0; i < n; ++i) {
      p[i] = i;
      for (int j = 0; j <= i; ++j) {
        const Rational& q = A(i, j);
        mpz_divexact(t.get_mpz_t(), scale.get_mpz_t(), q.get_den().get_mpz_t());
        w[static_cast<size_t>(i) * n + j] = t * q.get_num();
      }
    }
  }

  mpz_class& at(int i, int j) {
    int si = p[i], sj = p[j];
    if (si < sj) std::swap(si, sj);
    return w[static_cast<size_t>(si) * n + sj];
  }
};

}  // namespace

PsdResult exact_psd_ldl(const RationalMatrix& A, int progress_every) {
  require_symmetric(A, "exact_psd_ldl input");
  const int n = A.rows;

  mpz_class scale(1);
  for (const Rational& q : A.a)
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), q.get_den().get_mpz_t());

  IntSymWork S(A, scale);
  RationalMatrix L = RationalMatrix::identity(n);
  std::vector<Rational> D(n, Rational(0));

  auto lift_witness = [&](int k, const std::vector<Rational>& w_schur,
                          const Rational& value) -> NotPsdWitness {
    // solve L11^T z = -L21^T w so [z; w] kills the eliminated block
    std::vector<Rational> u(k, Rational(0));
    for (int j = 0; j < k; ++j)
      for (size_t t = 0; t < w_schur.size(); ++t)
        u[j] += L(k + static_cast<int>(t), j) * w_schur[t];
    std::vector<Rational> z(k, Rational(0));
    for (int j = k - 1; j >= 0; --j) {
      Rational acc = -u[j];
      for (int t = j + 1; t < k; ++t) acc -= L(t, j) * z[t];
      z[j] = acc;
    }
    NotPsdWitness wit;
    wit.w.assign(n, Rational(0));
    for (int t = 0; t < k; ++t) wit.w[S.p[t]] = z[t];
    for (size_t t = 0; t < w_schur.size(); ++t) wit.w[S.p[k + static_cast<int>(t)]] = w_schur[t];
    wit.value = value;
    return wit;
  };

  auto t0 = std::chrono::steady_clock::now();
  mpz_class prev(1);
  mpz_class num;
  int rank = 0;
  for (int k = 0; k < n; ++k) {
    // schur(i,j) = W(i,j) / (scale * prev); scale*prev > 0, so the integer
    // entries order the diagonal
    int piv = k;
    for (int t = k + 1; t < n; ++t)
      if (S.at(t, t) > S.at(piv, piv)) piv = t;

    if (S.at(piv, piv) <= 0) {
      mpz_class sp = scale * prev;
      Rational denom = Rational(sp);
      for (int t = k; t < n; ++t)
        if (S.at(t, t) < 0) {
          std::vector<Rational> wv(n - k, Rational(0));
          wv[t - k] = 1;
          Rational val = Rational(S.at(t, t)) / denom;
          return lift_witness(k, wv, val);
        }
      for (int i = k; i < n; ++i)
        for (int j = k; j < i; ++j)
          if (S.at(i, j) != 0) {
            // zero diagonal against a nonzero entry: indefinite 2x2 minor
            std::vector<Rational> wv(n - k, Rational(0));
            mpz_class a = abs(S.at(i, j));
            wv[i - k] = 1;
            wv[j - k] = (S.at(i, j) > 0) ? Rational(-1) : Rational(1);
            Rational val = Rational(-2) * Rational(a) / denom;
            return lift_witness(k, wv, val);
          }
      break;  // remaining block is exactly zero: PSD with rank k
    }

    if (piv != k) {
      std::swap(S.p[k], S.p[piv]);
      for (int j = 0; j < k; ++j) std::swap(L(k, j), L(piv, j));
    }
    const mpz_class d = S.at(k, k);
    {
      mpz_class sp = scale * prev;
      D[k] = Rational(d) / Rational(sp);
    }
    ++rank;
    for (int i = k + 1; i < n; ++i) {
      const mpz_class wik = S.at(i, k);
      if (wik == 0) {
        for (int j = k + 1; j <= i; ++j) {
          mpz_class& wij = S.at(i, j);
          if (wij == 0) continue;
          wij *= d;
          mpz_divexact(wij.get_mpz_t(), wij.get_mpz_t(), prev.get_mpz_t());
        }
        continue;
      }
      L(i, k) = Rational(wik) / Rational(d);
      for (int j = k + 1; j <= i; ++j) {
        mpz_class& wij = S.at(i, j);
        // (d * w_ij - w_ik * w_jk) / prev, exactly divisible
        mpz_mul(num.get_mpz_t(), d.get_mpz_t(), wij.get_mpz_t());
        mpz_submul(num.get_mpz_t(), wik.get_mpz_t(), S.at(j, k).get_mpz_t());
        mpz_divexact(wij.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = d;
    if (progress_every > 0 && (k + 1) % progress_every == 0) {
      auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      std::cerr << "exact_psd_ldl: pivot " << (k + 1) << "/" << n << " (" << dt / 1000.0
                << " s, pivot bits " << mpz_sizeinbase(d.get_mpz_t(), 2) << ")\n";
    }
  }

  PsdProof proof;
  proof.perm = S.p;
  proof.L = std::move(L);
  proof.D = std::move(D);
  proof.rank = rank;
  return proof;
}

RationalMatrix ldl_reconstruct(const PsdProof& proof) {
  const int n = proof.L.rows;
  RationalMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      Rational s(0);
      for (int k = 0; k <= j; ++k) s += proof.L(i, k) * proof.D[k] * proof.L(j, k);
      out(i, j) = s;
      out(j, i) = s;
    }
  return out;
}

Rational quadratic_form(const RationalMatrix& A, const std::vector<Rational>& w) {
  Rational s(0);
  for (int i = 0; i < A.rows; ++i) {
    if (w[i] == 0) continue;
    for (int j = 0; j < A.cols; ++j) {
      if (w[j] == 0) continue;
      s += w[i] * A(i, j) * w[j];
    }
  }
  return s;
}

}  // namespace ell4
