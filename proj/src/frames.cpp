#include "ell4/frames.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ell4/gram.hpp"

namespace ell4 {

bool Graph::adjacent(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

std::vector<std::vector<bool>> Graph::adjacency() const {
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (auto [i, j] : edges) adj[i][j] = adj[j][i] = true;
  return adj;
}

FrameReport analyze_frame(const VectorSystem& sys, double tol) {
  const int N = sys.N, r = sys.r;
  DenseMatrix X = sys.gram();
  for (int i = 0; i < N; ++i)
    if (std::fabs(X(i, i) - 1.0) > tol) {
      std::ostringstream msg;
      msg << "analyze_frame: vector " << i + 1 << " has squared norm " << X(i, i);
      throw Error(msg.str());
    }

  FrameReport rep;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) rep.frame_potential += X(i, j) * X(i, j);
  double fp_untf = static_cast<double>(N) * N / r;
  rep.is_untf = std::fabs(rep.frame_potential - fp_untf) <= tol * fp_untf;

  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) rep.coherence_max = std::max(rep.coherence_max, std::fabs(X(i, j)));
  rep.welch_bound = (N > 1 && N > r)
                        ? std::sqrt(static_cast<double>(N - r) / (static_cast<double>(r) * (N - 1)))
                        : 0.0;

  bool equiangular = true;
  if (sys.gram_exact) {
    const RationalMatrix& Xq = *sys.gram_exact;
    Rational alpha = (N > 1) ? rat_abs(Xq(0, 1)) : Rational(0);
    for (int i = 0; i < N && equiangular; ++i)
      for (int j = i + 1; j < N; ++j)
        if (rat_abs(Xq(i, j)) != alpha) {
          equiangular = false;
          break;
        }
  } else {
    double alpha = (N > 1) ? std::fabs(X(0, 1)) : 0.0;
    for (int i = 0; i < N && equiangular; ++i)
      for (int j = i + 1; j < N; ++j)
        if (std::fabs(std::fabs(X(i, j)) - alpha) > 1e-10) {
          equiangular = false;
          break;
        }
  }
  rep.is_etf = rep.is_untf && equiangular;
  return rep;
}

VectorSystem simplex_etf(int N) {
  if (N < 3) throw Error("simplex_etf: N must be at least 3");
  RationalMatrix Xq(N, N);
  Rational off = rat(-1, N - 1);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) Xq(i, j) = (i == j) ? Rational(1) : off;

  VectorSystem sys;
  sys.N = N;
  sys.r = N - 1;
  sys.V = gram_factor(to_dense(Xq), 1e-10);
  if (sys.V.rows != N - 1) throw Error("simplex_etf: unexpected Gram rank");
  sys.gram_exact = std::move(Xq);
  return sys;
}

VectorSystem etf_28_7() {
  const int N = 28;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) pairs.emplace_back(i, j);

  // u_{ij} = e_i + e_j - (1/4) 1 in R^8; <u,u'> = |{i,j} cap {k,l}| - 1/2
  RationalMatrix Xq(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      if (a == b) {
        Xq(a, b) = 1;
        continue;
      }
      int common = (pairs[a].first == pairs[b].first) + (pairs[a].first == pairs[b].second) +
                   (pairs[a].second == pairs[b].first) + (pairs[a].second == pairs[b].second);
      Xq(a, b) = (common == 1) ? rat(1, 3) : rat(-1, 3);
    }

  // Helmert rows give a fixed orthonormal coordinate frame for 1^perp in R^8
  DenseMatrix H(7, 8);
  for (int k = 1; k <= 7; ++k) {
    double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int t = 0; t < k; ++t) H(k - 1, t) = s;
    H(k - 1, k) = -k * s;
  }
  DenseMatrix U(8, N);
  double scale = std::sqrt(2.0 / 3.0);
  for (int a = 0; a < N; ++a) {
    for (int t = 0; t < 8; ++t) U(t, a) = -0.25 * scale;
    U(pairs[a].first, a) += scale;
    U(pairs[a].second, a) += scale;
  }

  VectorSystem sys;
  sys.N = N;
  sys.r = 7;
  sys.V = H * U;
  sys.gram_exact = std::move(Xq);
  return sys;
}

VectorSystem canonicalize_signs(const VectorSystem& sys, int anchor, double tol) {
  if (anchor < 0 || anchor >= sys.N) throw Error("canonicalize_signs: anchor out of range");
  std::vector<int> sign(sys.N, 1);
  if (sys.gram_exact) {
    const RationalMatrix& Xq = *sys.gram_exact;
    for (int i = 0; i < sys.N; ++i) {
      if (i == anchor) continue;
      if (Xq(anchor, i) == 0)
        throw AmbiguityError("canonicalize_signs: zero inner product with anchor");
      sign[i] = (Xq(anchor, i) > 0) ? 1 : -1;
    }
  } else {
    DenseMatrix X = sys.gram();
    for (int i = 0; i < sys.N; ++i) {
      if (i == anchor) continue;
      if (std::fabs(X(anchor, i)) <= tol)
        throw AmbiguityError("canonicalize_signs: inner product with anchor within tol of zero");
      sign[i] = (X(anchor, i) > 0) ? 1 : -1;
    }
  }

  VectorSystem out = sys;
  for (int i = 0; i < sys.N; ++i) {
    if (sign[i] == 1) continue;
    for (int p = 0; p < sys.r; ++p) out.V(p, i) = -out.V(p, i);
  }
  if (out.gram_exact) {
    RationalMatrix& Xq = *out.gram_exact;
    for (int i = 0; i < sys.N; ++i)
      for (int j = 0; j < sys.N; ++j)
        if (sign[i] * sign[j] < 0) Xq(i, j) = -Xq(i, j);
  }
  return out;
}

std::pair<Graph, SrgParams> etf_to_srg(const VectorSystem& sys, int anchor) {
  const int N = sys.N, r = sys.r;
  if (N <= r) throw Error("etf_to_srg: requires N > r");
  FrameReport rep = analyze_frame(sys);
  if (!rep.is_etf) throw Error("etf_to_srg: input is not an ETF");

  // positive inner product with the anchor must hold throughout (canonical form)
  std::vector<int> verts;
  for (int i = 0; i < N; ++i)
    if (i != anchor) verts.push_back(i);
  auto inner_positive = [&](int i, int j) {
    if (sys.gram_exact) return (*sys.gram_exact)(i, j) > 0;
    return sys.gram()(i, j) > 0;
  };
  for (int i : verts)
    if (!inner_positive(anchor, i))
      throw Error("etf_to_srg: system is not canonical at the given anchor");

  Graph g;
  g.n = N - 1;
  for (int a = 0; a < g.n; ++a)
    for (int b = a + 1; b < g.n; ++b)
      if (inner_positive(verts[a], verts[b])) g.edges.emplace_back(a, b);

  // srg parameters from the correspondence; the square root is rational for
  // an ETF (it is 1/coherence), so everything evaluates exactly
  Rational inside = rat(r, 1) * rat(N - 1, 1) / rat(N - r, 1);
  Rational root;
  if (!rational_sqrt(inside, root))
    throw Error("etf_to_srg: sqrt(r(N-1)/(N-r)) is not rational; not an ETF geometry");
  Rational kq = rat(N, 2) - 1 + (rat(N, 2 * r) - 1) * root;
  if (kq.get_den() != 1) throw Error("etf_to_srg: non-integer regularity parameter");
  long k = kq.get_num().get_si();
  if (k % 2 != 0) throw Error("etf_to_srg: odd regularity parameter");
  SrgParams par;
  par.v = N - 1;
  par.k = k;
  par.mu = k / 2;
  // lambda is only meaningful when edges exist (degenerate for the simplex)
  par.lambda = (3 * k - par.v - 1) / 2;

  // empirical check: regularity and common-neighbor counts
  auto adj = g.adjacency();
  for (int a = 0; a < g.n; ++a) {
    long deg = 0;
    for (int b = 0; b < g.n; ++b) deg += adj[a][b];
    if (deg != par.k) {
      std::ostringstream msg;
      msg << "etf_to_srg: vertex " << a + 1 << " has degree " << deg << ", expected " << par.k;
      throw Error(msg.str());
    }
  }
  for (int a = 0; a < g.n; ++a)
    for (int b = a + 1; b < g.n; ++b) {
      long common = 0;
      for (int c = 0; c < g.n; ++c) common += adj[a][c] && adj[b][c];
      long want = adj[a][b] ? par.lambda : par.mu;
      if (common != want) {
        std::ostringstream msg;
        msg << "etf_to_srg: strong regularity fails at vertex pair (" << a + 1 << ", " << b + 1
            << "): " << common << " common neighbors, expected " << want;
        throw Error(msg.str());
      }
    }
  return {g, par};
}

}  // namespace ell4
