#pragma once

#include <map>
#include <optional>

#include "ell4/frames.hpp"
#include "ell4/matrix.hpp"

namespace ell4 {

// Degree 4 pseudomoment matrix, N^2 x N^2 with pair index (i,j) -> i*N + j.
// Exact rational storage is kept alongside the numeric mirror when available.
struct Degree4Moments {
  int N = 0;
  DenseMatrix Y;
  std::optional<RationalMatrix> exact;

  static int pair_index(int i, int j, int N) { return i * N + j; }
  double at(int i, int j, int k, int l) const { return Y(i * N + j, k * N + l); }
};

struct ConditionReport {
  bool pass = false;
  double violation = 0;
};

struct Degree4Validation {
  ConditionReport psd;               // condition 1
  ConditionReport marginal;          // condition 2: Y_(ij)(kk) independent of k
  ConditionReport unit_diagonal;     // condition 3: Y_(ii)(ii) = 1
  ConditionReport permutation;       // condition 4 via the three generating transpositions
  double min_eigenvalue = 0;
  DenseMatrix X;                     // extracted degree 2 minor
  bool all_pass() const { return psd.pass && marginal.pass && unit_diagonal.pass && permutation.pass; }
};

Degree4Validation validate_degree4(const Degree4Moments& m, double tol = 1e-8);

// X_ij = Y_(ii)(jj); requires conditions 2-4 within tol.
DenseMatrix extract_degree2(const Degree4Moments& m, double tol = 1e-8);
RationalMatrix extract_degree2_exact(const Degree4Moments& m);

// Closed-form degree 4 extension of an ETF Gram matrix (entrywise formula).
// Exact when the system carries an exact Gram. Throws MaximalEtfError when
// r > 1 and N >= r(r+1)/2.
Degree4Moments etf_degree4(const VectorSystem& sys);

// Same matrix as vec(X)vec(X)^T plus a scaled projector onto the perturbation
// subspace; cross-validates the entrywise form.
Degree4Moments etf_degree4_projector_form(const VectorSystem& sys);

// Average of (x (x) x)(x (x) x)^T over all sign vectors: 1 where every index
// appears an even number of times, else 0. Extends X = I_N.
Degree4Moments parity_degree4(int N);

// (x (x) x)(x (x) x)^T for a sign vector x.
Degree4Moments rank_one_degree4(const std::vector<int>& signs);

DenseMatrix pseudocovariance(const Degree4Moments& m, double tol = 1e-8);

// Truncated degree-d pseudomoment matrix on strings [N]^{d/2}, lexicographic.
struct TruncatedMoments {
  int N = 0, d = 0;
  RationalMatrix Z;

  int side() const { return Z.rows; }
};

// Entry value for an odd set of size 2a: (-1)^a prod_{i odd, i < 2a} i/(N-i).
Rational laurent_entry(int N, int odd_size);

// Laurent's parity pseudomoment matrix, materialized when N^{d/2} <= 2000.
TruncatedMoments laurent_moments(int N, int d);

// Degree-d complete pseudomoment matrix on strings [N]^{<= d/2}, ordered by
// length then lexicographically.
struct CompleteMoments {
  int N = 0, d = 0;
  RationalMatrix Z;
};

int complete_index_count(int N, int d);
CompleteMoments complete_from_truncated(const TruncatedMoments& t, double tol = 1e-8);

struct TruncatedValidation {
  ConditionReport psd, odd_set_consistency, unit_class;
  double min_eigenvalue = 0;
  bool all_pass() const { return psd.pass && odd_set_consistency.pass && unit_class.pass; }
};

// Def. A.1-style conditions for a matrix indexed by fixed- or mixed-length
// strings; used for both truncated and complete matrices.
TruncatedValidation validate_string_moments(const RationalMatrix& Z, int N, int min_len,
                                            int max_len, double tol = 1e-8);

// Sum of A entries per odd-set class, computed exactly.
using OddSetFunctional = std::map<std::vector<int>, Rational>;
OddSetFunctional collapse_functional(const RationalMatrix& A);

// <A, Y> for exact matrices via the collapse, and directly (test oracle).
Rational apply_functional(const OddSetFunctional& f,
                          const std::map<std::vector<int>, Rational>& class_values);

}  // namespace ell4
