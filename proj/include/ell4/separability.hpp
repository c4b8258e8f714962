#pragma once

#include "ell4/witnesses.hpp"

namespace ell4 {

// Convex combination of cut matrices: X = sum_k rho_k d_k d_k^T.
struct CutDecomposition {
  std::vector<double> weights;          // nonnegative, sums to 1
  std::vector<std::vector<int>> signs;  // entries +-1, length N each

  int terms() const { return static_cast<int>(weights.size()); }
  DenseMatrix represented(int N) const;
};

// BlockWitness together with its product rank-one terms
// M = sum_k (d_k (x) z_k)(d_k (x) z_k)^T.
struct SeparableWitness {
  BlockWitness witness;
  std::vector<double> rho;                   // trace weights of (1/rN) M, sum 1
  std::vector<std::vector<int>> cut_parts;   // d_k in {+-1}^N
  std::vector<std::vector<double>> vec_parts;  // z_k in R^r (unnormalized rows of Z)
};

// Appendix C.2 converse: a separable witness from a cut decomposition whose
// mixture reproduces Gram(sys).
SeparableWitness cuts_to_witness(const CutDecomposition& dec, const VectorSystem& sys,
                                 double tol = 1e-8);

// Appendix C.1 positive direction: extract a cut decomposition from a
// minimal-rank witness via joint diagonalization of the commuting blocks.
CutDecomposition witness_to_cuts(const BlockWitness& w, const VectorSystem& sys,
                                 double tol = 1e-8);

// Rank-N witness for X = I_N built from a Hadamard matrix (checked exactly).
BlockWitness hadamard_witness(const std::vector<std::vector<int>>& H);

}  // namespace ell4
