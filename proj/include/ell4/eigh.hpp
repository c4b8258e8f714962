#pragma once

#include "ell4/matrix.hpp"

namespace ell4 {

struct EighResult {
  std::vector<double> eigenvalues;  // descending
  DenseMatrix vectors;              // orthonormal, column k pairs with eigenvalues[k]
};

// Cyclic Jacobi sweeps. Throws Error on non-square/asymmetric input and on
// non-convergence after max_sweeps (message carries the residual).
EighResult symmetric_eigh(const DenseMatrix& A, double tol = 1e-8, int max_sweeps = 100);

// Count of eigenvalues > reltol * max eigenvalue magnitude.
int numerical_rank(const std::vector<double>& eigenvalues_desc, double reltol = 1e-8);

}  // namespace ell4
