#pragma once

#include <variant>
#include <vector>

#include "ell4/matrix.hpp"

namespace ell4 {

// P^T A P = L D L^T exactly, L unit lower triangular, all D_k >= 0.
// perm encodes P: (P^T A P)_{ij} = A_{perm[i], perm[j]}.
struct PsdProof {
  std::vector<int> perm;
  RationalMatrix L;
  std::vector<Rational> D;
  int rank = 0;  // positive pivots; trailing D entries are exact zeros
};

// An exact vector with w^T A w < 0.
struct NotPsdWitness {
  std::vector<Rational> w;
  Rational value;
};

using PsdResult = std::variant<PsdProof, NotPsdWitness>;

bool is_psd_proof(const PsdResult& r);

// Exact semidefinite LDL^T with symmetric pivoting on the largest remaining
// diagonal. A zero diagonal against a nonzero residual row yields a witness
// from the indefinite 2x2 principal minor. Throws on asymmetric input.
// progress_every > 0 prints one line per that many pivots to stderr.
PsdResult exact_psd_ldl(const RationalMatrix& A, int progress_every = 0);

// L D L^T reassembled in permuted coordinates (test oracle for the proof).
RationalMatrix ldl_reconstruct(const PsdProof& proof);

Rational quadratic_form(const RationalMatrix& A, const std::vector<Rational>& w);

}  // namespace ell4
