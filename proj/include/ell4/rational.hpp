#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace ell4 {

// Exact arbitrary-precision fraction, always kept canonical (gcd 1, q > 0).
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  q.canonicalize();
  return q;
}

// "p/q" with q > 0 and gcd(p, q) = 1; plain "p" when q = 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational rat_abs(const Rational& q) {
  Rational r;
  mpq_abs(r.get_mpq_t(), q.get_mpq_t());
  return r;
}

// Exact square root of a nonnegative rational, or failure when irrational.
inline bool rational_sqrt(const Rational& q, Rational& out) {
  if (q < 0) return false;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return false;
  if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return false;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  out = Rational(sn, sd);
  out.canonicalize();
  return true;
}

}  // namespace ell4
