#include "ell4/eigh.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace ell4 {

EighResult symmetric_eigh(const DenseMatrix& A, double tol, int max_sweeps) {
  require_symmetric(A, 1e-10, "symmetric_eigh input");
  const int n = A.rows;
  DenseMatrix S = A;
  DenseMatrix Q = DenseMatrix::identity(n);
  // symmetrize exactly so the rotations see a clean matrix
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = 0.5 * (S(i, j) + S(j, i));
      S(i, j) = S(j, i) = v;
    }

  const double scale = std::max(1.0, max_abs(A));
  // drive off-diagonals well below the requested tolerance; cheap at desk scale
  const double target = std::min(tol, 1e-13) * scale;

  auto max_off = [&]() {
    double m = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) m = std::max(m, std::fabs(S(i, j)));
    return m;
  };

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = max_off();
    if (off <= target) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = S(p, q);
        if (std::fabs(apq) <= target / (4.0 * n)) continue;
        double theta = (S(q, q) - S(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double tau = s / (1.0 + c);
        double app = S(p, p), aqq = S(q, q);
        S(p, p) = app - t * apq;
        S(q, q) = aqq + t * apq;
        S(p, q) = S(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            double arp = S(r, p), arq = S(r, q);
            S(r, p) = S(p, r) = arp - s * (arq + tau * arp);
            S(r, q) = S(q, r) = arq + s * (arp - tau * arq);
          }
          double qrp = Q(r, p), qrq = Q(r, q);
          Q(r, p) = qrp - s * (qrq + tau * qrp);
          Q(r, q) = qrq + s * (qrp - tau * qrq);
        }
      }
  }
  double off = max_off();
  if (off > tol * scale) {
    std::ostringstream msg;
    msg << "symmetric_eigh: no convergence after " << max_sweeps
        << " sweeps, off-diagonal residual " << off;
    throw Error(msg.str());
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return S(i, i) > S(j, j); });

  EighResult out;
  out.eigenvalues.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues[k] = S(order[k], order[k]);
    for (int r = 0; r < n; ++r) out.vectors(r, k) = Q(r, order[k]);
  }
  return out;
}

int numerical_rank(const std::vector<double>& eigs, double reltol) {
  if (eigs.empty()) return 0;
  double lmax = eigs.front();
  if (lmax <= 0) return 0;
  int r = 0;
  for (double l : eigs)
    if (l > reltol * lmax) ++r;
  return r;
}

}  // namespace ell4
