#pragma once

#include "ell4/eigh.hpp"
#include "ell4/matrix.hpp"

namespace ell4 {

// Factor a PSD matrix X as V^T V with V of shape rank(X) x N.
// Throws NotPsdError when X has an eigenvalue below -tol * lambda_max.
DenseMatrix gram_factor(const DenseMatrix& X, double tol = 1e-8);

}  // namespace ell4
