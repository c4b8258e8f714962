#include "ell4/certificates.hpp"

#include <sstream>

namespace ell4 {

Graph augment_with_anchor(const Graph& g) {
  Graph out;
  out.n = g.n + 1;
  for (int i = 1; i <= g.n; ++i) out.edges.emplace_back(0, i);
  for (auto [i, j] : g.edges) out.edges.emplace_back(i + 1, j + 1);
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

RationalMatrix etf_gram_from_graph(const Graph& g28) {
  const int N = g28.n;
  auto adj = g28.adjacency();
  RationalMatrix Z(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      Z(i, j) = (i == j) ? Rational(1) : (adj[i][j] ? rat(1, 3) : rat(-1, 3));
  return Z;
}

SchlafliCertificate build_schlafli_certificate(const Graph& g28) {
  const int N = 28;
  if (g28.n != N) throw Error("build_schlafli_certificate: graph must have 28 vertices");
  auto adj = g28.adjacency();
  {
    // sanity: a dominating anchor plus an srg(27,16,10,8) on the rest
    int anchor = -1;
    for (int i = 0; i < N; ++i) {
      int deg = 0;
      for (int j = 0; j < N; ++j) deg += adj[i][j];
      if (deg == N - 1) anchor = i;
    }
    if (anchor < 0) throw Error("build_schlafli_certificate: no dominating anchor vertex");
    std::vector<int> rest;
    for (int i = 0; i < N; ++i)
      if (i != anchor) rest.push_back(i);
    for (int a : rest) {
      int deg = 0;
      for (int b : rest) deg += adj[a][b];
      if (deg != 16) throw Error("build_schlafli_certificate: non-anchor part is not 16-regular");
    }
    for (size_t ai = 0; ai < rest.size(); ++ai)
      for (size_t bi = ai + 1; bi < rest.size(); ++bi) {
        int a = rest[ai], b = rest[bi], common = 0;
        for (int c : rest) common += adj[a][c] && adj[b][c];
        int want = adj[a][b] ? 10 : 8;
        if (common != want) {
          std::ostringstream msg;
          msg << "build_schlafli_certificate: case-table graph check fails at vertex pair ("
              << a + 1 << ", " << b + 1 << ")";
          throw Error(msg.str());
        }
      }
  }

  SchlafliCertificate cert;
  cert.g = g28;
  cert.gamma1 = rat(1, 126);
  cert.gamma2 = rat(1, 36);
  cert.kappa1 = rat(2, 9);
  cert.kappa2 = rat(1, 28);
  cert.sgn.assign(N, std::vector<int>(N, 0));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) cert.sgn[i][j] = adj[i][j] ? 1 : -1;

  // split-position sign from the induced subgraph on {a, b, c}
  auto edge_class = [&](int a, int b, int c) -> int {
    int e = adj[a][b] + adj[a][c] + adj[b][c];
    if (e == 0) return 1;
    if (e == 2 && adj[a][b] && adj[a][c]) return 1;
    if (e == 2 && adj[b][c]) return -1;
    return 0;
  };

  // The one-sided case table is symmetrized by averaging with its transpose,
  // which halves the diagonal-pair and split values; the (ab)(ba) positions,
  // which the table leaves open, carry -kappa1/2 so the constant class sums
  // to 112. Dispatch below is by mutually exclusive index patterns.
  const Rational g1h = cert.gamma1 / 2;
  const Rational g2h = cert.gamma2 / 2;
  const Rational k3 = -cert.kappa1 / 2;

  auto value = [&](int i, int j, int k, int l) -> Rational {
    if (i == j && k == l) return cert.kappa2;
    if (i == j) return Rational(-cert.sgn[k][l]) * g1h;
    if (k == l) return Rational(-cert.sgn[i][j]) * g1h;
    if (i == k && j == l) return cert.kappa1;
    if (i == l && j == k) return k3;
    if (i == k) return Rational(edge_class(i, j, l)) * g2h;
    if (j == l) return Rational(edge_class(j, i, k)) * g2h;
    return Rational(0);
  };

  cert.A = RationalMatrix(N * N, N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) cert.A(i * N + j, k * N + l) = value(i, j, k, l);
  if (sym_violation(cert.A) != 0)
    throw Error("build_schlafli_certificate: case table produced an asymmetric matrix");
  return cert;
}

SchlafliProof verify_schlafli_certificate(const SchlafliCertificate& cert, int progress_every) {
  const int N = cert.g.n;
  SchlafliProof proof;

  OddSetFunctional f = collapse_functional(cert.A);
  auto it = f.find({});
  proof.constant = (it == f.end()) ? Rational(0) : it->second;
  if (proof.constant != 112) {
    std::ostringstream msg;
    msg << "certificate invalid: constant class is " << to_string(proof.constant) << ", not 112";
    throw Error(msg.str());
  }
  size_t pair_classes = 0;
  for (const auto& [od, coef] : f) {
    if (od.empty()) continue;
    if (od.size() == 2) {
      Rational want = Rational(-cert.sgn[od[0]][od[1]]);
      if (coef != want) {
        std::ostringstream msg;
        msg << "certificate invalid: pair class {" << od[0] + 1 << "," << od[1] + 1 << "} has "
            << to_string(coef) << ", expected " << to_string(want);
        throw Error(msg.str());
      }
      ++pair_classes;
    } else {
      std::ostringstream msg;
      msg << "certificate invalid: odd-set class of size " << od.size() << " has nonzero sum "
          << to_string(coef);
      throw Error(msg.str());
    }
  }
  if (pair_classes != static_cast<size_t>(N * (N - 1) / 2))
    throw Error("certificate invalid: some pair class collapsed to zero");
  proof.collapse_ok = true;

  PsdResult res = exact_psd_ldl(cert.A, progress_every);
  if (!is_psd_proof(res)) {
    const auto& wit = std::get<NotPsdWitness>(res);
    std::ostringstream msg;
    msg << "certificate invalid: not PSD, witness quadratic value " << to_string(wit.value);
    throw Error(msg.str());
  }
  const auto& p = std::get<PsdProof>(res);
  proof.psd = true;
  proof.rank = p.rank;
  proof.d_min = p.D.empty() ? Rational(0) : p.D[0];
  for (const Rational& d : p.D) proof.d_min = std::min(proof.d_min, d);
  return proof;
}

namespace {

template <typename T>
InequalityReport schlafli_eval(const Mat<T>& X, const std::vector<int>& pi,
                               const SchlafliCertificate& cert) {
  const int n = cert.g.n;
  if (static_cast<int>(pi.size()) != n) throw Error("evaluate_schlafli: pi must have 28 entries");
  std::vector<bool> seen(X.rows, false);
  for (int t : pi) {
    if (t < 0 || t >= X.rows || seen[t]) throw Error("evaluate_schlafli: pi is not injective into [N]");
    seen[t] = true;
  }
  Rational lhs(0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if constexpr (std::is_same_v<T, Rational>)
        lhs += Rational(cert.sgn[i][j]) * X(pi[i], pi[j]);
      else
        lhs += Rational(cert.sgn[i][j]) * Rational(X(pi[i], pi[j]));
    }
  InequalityReport rep;
  rep.lhs = lhs;
  rep.rhs = 112;
  rep.margin = rep.rhs - rep.lhs;
  rep.satisfied = rep.margin >= 0;
  return rep;
}

template <typename T>
TriangleReport triangles_eval(const Mat<T>& X, double tol) {
  const int N = X.rows;
  // sign patterns for (s_i s_j, s_j s_k, s_i s_k)
  static const int pat[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  TriangleReport rep;
  bool first = true;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      for (int k = j + 1; k < N; ++k)
        for (int c = 0; c < 4; ++c) {
          Rational val;
          if constexpr (std::is_same_v<T, Rational>)
            val = Rational(-pat[c][0]) * X(i, j) + Rational(-pat[c][1]) * X(j, k) +
                  Rational(-pat[c][2]) * X(i, k);
          else
            val = Rational(-pat[c][0]) * Rational(X(i, j)) +
                  Rational(-pat[c][1]) * Rational(X(j, k)) + Rational(-pat[c][2]) * Rational(X(i, k));
          if (first || val > rep.worst_value) {
            rep.worst_value = val;
            rep.i = i;
            rep.j = j;
            rep.k = k;
            rep.sign_class = c;
            first = false;
          }
        }
  rep.all_satisfied = !first && to_double(rep.worst_value) <= 1.0 + tol;
  if (first) rep.all_satisfied = true;  // fewer than 3 indices: nothing to violate
  return rep;
}

}  // namespace

InequalityReport evaluate_schlafli(const RationalMatrix& X, const std::vector<int>& pi,
                                   const SchlafliCertificate& cert) {
  return schlafli_eval(X, pi, cert);
}
InequalityReport evaluate_schlafli(const DenseMatrix& X, const std::vector<int>& pi,
                                   const SchlafliCertificate& cert) {
  return schlafli_eval(X, pi, cert);
}

TriangleReport evaluate_triangles(const RationalMatrix& X, double tol) {
  require_symmetric(X, "evaluate_triangles input");
  return triangles_eval(X, tol);
}
TriangleReport evaluate_triangles(const DenseMatrix& X, double tol) {
  require_symmetric(X, 1e-10, "evaluate_triangles input");
  return triangles_eval(X, tol);
}

uint64_t graph_hash(const Graph& g) {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](uint64_t x) {
    h ^= x;
    h *= 1099511628211ULL;
  };
  mix(static_cast<uint64_t>(g.n));
  for (auto [i, j] : g.edges) {
    mix(static_cast<uint64_t>(i));
    mix(static_cast<uint64_t>(j));
  }
  return h;
}

}  // namespace ell4
