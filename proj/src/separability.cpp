#include "ell4/separability.hpp"

#include <cmath>
#include <sstream>

#include "ell4/eigh.hpp"
#include "ell4/gram.hpp"

namespace ell4 {

DenseMatrix CutDecomposition::represented(int N) const {
  DenseMatrix X(N, N);
  for (int k = 0; k < terms(); ++k)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) X(i, j) += weights[k] * signs[k][i] * signs[k][j];
  return X;
}

SeparableWitness cuts_to_witness(const CutDecomposition& dec, const VectorSystem& sys,
                                 double tol) {
  const int N = sys.N, r = sys.r;
  double wsum = 0;
  for (double w : dec.weights) {
    if (w < -1e-12) throw Error("cuts_to_witness: negative weight");
    wsum += w;
  }
  if (std::fabs(wsum - 1.0) > 1e-9) throw Error("cuts_to_witness: weights do not sum to 1");
  DenseMatrix X = sys.gram();
  DenseMatrix Xdec = dec.represented(N);
  if (max_abs(X - Xdec) > std::max(tol, 1e-8)) {
    std::ostringstream msg;
    msg << "cuts_to_witness: decomposition mismatches Gram(sys) by " << max_abs(X - Xdec);
    throw Error(msg.str());
  }
  double sum2 = 0;
  for (int i = 0; i < N; ++i) sum2 += X(i, i);
  if (std::fabs(sum2 - N) > tol * N) throw Error("cuts_to_witness: sum of squared norms != N");

  // pad so the cut count is at least r, then v'_i = R^{1/2} d_i with
  // d_i the per-index sign pattern across cuts
  int m = dec.terms();
  std::vector<double> rho = dec.weights;
  std::vector<std::vector<int>> signs = dec.signs;
  while (m < r) {
    rho.push_back(0.0);
    signs.push_back(std::vector<int>(N, 1));
    ++m;
  }

  DenseMatrix Vp(m, N);  // columns v'_i
  for (int k = 0; k < m; ++k) {
    double s = std::sqrt(std::max(0.0, rho[k]));
    for (int i = 0; i < N; ++i) Vp(k, i) = s * signs[k][i];
  }

  // isometry Z in R^{m x r} with Z v_i = v'_i
  EighResult e = symmetric_eigh(sys.V * sys.V.transpose(), 1e-10);
  if (numerical_rank(e.eigenvalues, 1e-10) != r)
    throw Error("cuts_to_witness: V is rank deficient");
  DenseMatrix VVt_inv(r, r);
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q) {
      double s = 0;
      for (int k = 0; k < r; ++k) s += e.vectors(p, k) * e.vectors(q, k) / e.eigenvalues[k];
      VVt_inv(p, q) = s;
    }
  DenseMatrix Z = Vp * sys.V.transpose() * VVt_inv;  // m x r
  DenseMatrix ZtZ = Z.transpose() * Z;
  for (int p = 0; p < r; ++p) ZtZ(p, p) -= 1.0;
  if (max_abs(ZtZ) > 1e-6)
    throw Error("cuts_to_witness: decomposition does not isometrically match the Gram vectors");

  BlockLayout lay{N, r};
  DenseMatrix M(lay.dim(), lay.dim());
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        double dd = signs[k][i] * signs[k][j];
        for (int p = 0; p < r; ++p)
          for (int q = 0; q < r; ++q) M(i * r + p, j * r + q) += dd * Z(k, p) * Z(k, q);
      }

  SeparableWitness out;
  out.witness = BlockWitness{lay, std::move(M)};
  for (int k = 0; k < m; ++k) {
    double zn = 0;
    for (int p = 0; p < r; ++p) zn += Z(k, p) * Z(k, p);
    out.rho.push_back(zn * N / (static_cast<double>(r) * N));  // trace weight of (1/rN) M
    out.cut_parts.push_back(signs[k]);
    std::vector<double> z(r);
    for (int p = 0; p < r; ++p) z[p] = Z(k, p);
    out.vec_parts.push_back(std::move(z));
  }
  return out;
}

CutDecomposition witness_to_cuts(const BlockWitness& w, const VectorSystem& sys, double tol) {
  const int N = sys.N, r = sys.r;
  if (w.layout.N != N || w.layout.r != r) throw Error("witness_to_cuts: layout mismatch");
  EighResult em = symmetric_eigh(w.M, 1e-10);
  int rank = numerical_rank(em.eigenvalues, 1e-7);
  if (rank > r) {
    std::ostringstream msg;
    msg << "witness_to_cuts: rank(M) = " << rank << " exceeds r = " << r;
    throw NotMinimalRankError(msg.str());
  }
  std::vector<double> v = sys.vec();
  std::vector<double> Mv = matvec(w.M, v);
  double vMv = 0;
  for (size_t t = 0; t < v.size(); ++t) vMv += v[t] * Mv[t];
  if (std::fabs(vMv - static_cast<double>(N) * N) > std::max(tol, 1e-8) * N * N)
    throw NotOptimalError("witness_to_cuts: v^T M v != N^2");

  // Q_i = M_[1i]: symmetric orthogonal commuting family
  std::vector<DenseMatrix> Q(N);
  for (int i = 0; i < N; ++i) Q[i] = block_of(w.M, w.layout, 0, i);
  for (int i = 0; i < N; ++i) {
    DenseMatrix QtQ = Q[i].transpose() * Q[i];
    for (int p = 0; p < r; ++p) QtQ(p, p) -= 1.0;
    if (max_abs(QtQ) > 1e-6 || sym_violation(Q[i]) > 1e-6)
      throw NotStructuredError("witness_to_cuts: block M_[1i] is not symmetric orthogonal");
  }
  for (int i = 1; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      DenseMatrix C = Q[i] * Q[j] - Q[j] * Q[i];
      if (max_abs(C) > 1e-6)
        throw NotStructuredError("witness_to_cuts: blocks fail to commute within tol");
    }

  // joint diagonalization: refine eigenspaces of Q_2 with Q_3, ... using a
  // 1e-7 degeneracy threshold on eigenvalue gaps
  DenseMatrix B = DenseMatrix::identity(r);  // columns: current basis
  std::vector<std::pair<int, int>> blocks{{0, r}};
  for (int t = 1; t < N; ++t) {
    std::vector<std::pair<int, int>> nblocks;
    DenseMatrix Bn(r, r);
    for (auto [lo, hi] : blocks) {
      int w_ = hi - lo;
      if (w_ == 1) {
        for (int p = 0; p < r; ++p) Bn(p, lo) = B(p, lo);
        nblocks.emplace_back(lo, hi);
        continue;
      }
      DenseMatrix sub(w_, w_);
      for (int a = 0; a < w_; ++a)
        for (int b = 0; b < w_; ++b) {
          double s = 0;
          for (int p = 0; p < r; ++p)
            for (int q = 0; q < r; ++q) s += B(p, lo + a) * Q[t](p, q) * B(q, lo + b);
          sub(a, b) = s;
        }
      for (int a = 0; a < w_; ++a)
        for (int b = a + 1; b < w_; ++b) {
          double m = 0.5 * (sub(a, b) + sub(b, a));
          sub(a, b) = sub(b, a) = m;
        }
      EighResult es = symmetric_eigh(sub, 1e-12);
      for (int a = 0; a < w_; ++a)
        for (int p = 0; p < r; ++p) {
          double s = 0;
          for (int b = 0; b < w_; ++b) s += B(p, lo + b) * es.vectors(b, a);
          Bn(p, lo + a) = s;
        }
      int start = 0;
      for (int a = 1; a <= w_; ++a)
        if (a == w_ || es.eigenvalues[a - 1] - es.eigenvalues[a] > 1e-7) {
          nblocks.emplace_back(lo + start, lo + a);
          start = a;
        }
    }
    B = std::move(Bn);
    blocks = std::move(nblocks);
  }

  // signs and weights
  CutDecomposition dec;
  std::vector<std::vector<int>> dmat(N, std::vector<int>(r));
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < r; ++k) {
      double s = 0;
      for (int p = 0; p < r; ++p)
        for (int q = 0; q < r; ++q) s += B(p, k) * Q[i](p, q) * B(q, k);
      if (std::fabs(std::fabs(s) - 1.0) > 1e-5)
        throw NotStructuredError("witness_to_cuts: joint diagonalization gave a non-sign value");
      dmat[i][k] = s > 0 ? 1 : -1;
    }
  for (int k = 0; k < r; ++k) {
    double p1 = 0;
    for (int p = 0; p < r; ++p) p1 += B(p, k) * sys.V(p, 0);
    double rho = p1 * p1;
    if (rho < 1e-12) continue;  // drop negligible terms and renormalize below
    dec.weights.push_back(rho);
    std::vector<int> d(N);
    for (int i = 0; i < N; ++i) d[i] = dmat[i][k];
    dec.signs.push_back(std::move(d));
  }
  double tot = 0;
  for (double x : dec.weights) tot += x;
  if (tot <= 0) throw NotStructuredError("witness_to_cuts: no usable terms");
  for (double& x : dec.weights) x /= tot;

  DenseMatrix X = sys.gram();
  double err = max_abs(dec.represented(N) - X);
  if (err > std::max(tol, 1e-8) * 10) {
    std::ostringstream msg;
    msg << "witness_to_cuts: recovered decomposition misses Gram by " << err;
    throw NotStructuredError(msg.str());
  }
  return dec;
}

BlockWitness hadamard_witness(const std::vector<std::vector<int>>& H) {
  const int N = static_cast<int>(H.size());
  bool ok = N >= 1;
  for (const auto& row : H) {
    if (static_cast<int>(row.size()) != N) ok = false;
    for (int x : row)
      if (x != 1 && x != -1) ok = false;
  }
  if (ok)
    for (int i = 0; i < N && ok; ++i)
      for (int j = 0; j < N; ++j) {
        long s = 0;
        for (int k = 0; k < N; ++k) s += static_cast<long>(H[i][k]) * H[j][k];
        if (s != (i == j ? N : 0)) {
          ok = false;
          break;
        }
      }
  if (!ok) {
    std::ostringstream msg;
    msg << "hadamard_witness: input is not a Hadamard matrix (order must lie in {1,2} or 4N)";
    throw Error(msg.str());
  }

  // Q = H/sqrt(N); D_i q_i = q_1 fixes the sign patterns; M_[ij] = Q D_i D_j Q^T
  double s = 1.0 / std::sqrt(static_cast<double>(N));
  std::vector<std::vector<int>> D(N, std::vector<int>(N));
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) D[i][k] = H[i][k] * H[0][k] > 0 ? 1 : -1;

  BlockLayout lay{N, N};
  DenseMatrix M(lay.dim(), lay.dim());
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int p = 0; p < N; ++p)
        for (int q = 0; q < N; ++q) {
          double acc = 0;
          for (int k = 0; k < N; ++k) acc += H[p][k] * D[i][k] * D[j][k] * H[q][k];
          M(i * N + p, j * N + q) = acc * s * s;
        }
  return BlockWitness{lay, std::move(M)};
}

}  // namespace ell4
