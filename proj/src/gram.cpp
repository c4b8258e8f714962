#include "ell4/gram.hpp"

#include <cmath>
#include <sstream>

namespace ell4 {

DenseMatrix gram_factor(const DenseMatrix& X, double tol) {
  require_symmetric(X, 1e-10, "gram_factor input");
  EighResult e = symmetric_eigh(X, std::min(tol, 1e-10));
  const int n = X.rows;
  double lmax = e.eigenvalues.empty() ? 0.0 : std::max(0.0, e.eigenvalues.front());
  double lmin = e.eigenvalues.empty() ? 0.0 : e.eigenvalues.back();
  double scale = std::max(lmax, std::fabs(lmin));
  if (lmin < -tol * std::max(scale, 1.0)) {
    std::ostringstream msg;
    msg << "gram_factor: input not PSD, min eigenvalue " << lmin;
    throw NotPsdError(msg.str());
  }
  int rank = numerical_rank(e.eigenvalues, tol);
  DenseMatrix V(rank, n);
  for (int k = 0; k < rank; ++k) {
    double s = std::sqrt(std::max(0.0, e.eigenvalues[k]));
    for (int j = 0; j < n; ++j) V(k, j) = s * e.vectors(j, k);
  }
  return V;
}

}  // namespace ell4
