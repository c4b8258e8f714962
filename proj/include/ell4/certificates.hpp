#pragma once

#include "ell4/frames.hpp"
#include "ell4/matrix.hpp"
#include "ell4/psd_ldl.hpp"
#include "ell4/pseudomoments.hpp"

namespace ell4 {

// The 784 x 784 rational certificate for the Schlafli inequality, together
// with the 28-vertex sign graph it was built from.
struct SchlafliCertificate {
  RationalMatrix A;
  Graph g;                             // 28 vertices, one dominating (anchor)
  std::vector<std::vector<int>> sgn;   // +1 on edges, -1 off edges, 0 diagonal
  Rational gamma1, gamma2, kappa1, kappa2;
};

struct SchlafliProof {
  bool psd = false;
  Rational d_min;       // smallest diagonal entry of the exact LDL
  int rank = 0;
  bool collapse_ok = false;
  Rational constant;    // odd-set class {} coefficient (112)
};

struct InequalityReport {
  Rational lhs;
  Rational rhs;
  bool satisfied = false;
  Rational margin;  // rhs - lhs
};

struct TriangleReport {
  bool all_satisfied = false;
  int i = -1, j = -1, k = -1;
  int sign_class = 0;  // index into the 4 sign patterns
  Rational worst_value;
};

// Adds a dominating vertex in front of a graph (new vertex 0).
Graph augment_with_anchor(const Graph& g);

// The canonical ETF Gram matrix matching a 28-vertex sign graph: +-1/3 by
// adjacency, unit diagonal.
RationalMatrix etf_gram_from_graph(const Graph& g28);

// Assemble the certificate from the case analysis over index patterns;
// verifies the dispatch yields an exactly symmetric matrix.
SchlafliCertificate build_schlafli_certificate(const Graph& g28);

// (a) exact PSD via rational LDL, (b) exact collapse functional
// {{} -> 112, {i,j} -> -sgn(Z_ij), 4-sets -> 0}. Throws Error with the
// offending class or witness on failure.
SchlafliProof verify_schlafli_certificate(const SchlafliCertificate& cert,
                                          int progress_every = 50);

// sum_{i<j} sgn(Z_ij) X_{pi(i) pi(j)} <= 112 for an injective pi.
InequalityReport evaluate_schlafli(const RationalMatrix& X, const std::vector<int>& pi,
                                   const SchlafliCertificate& cert);
InequalityReport evaluate_schlafli(const DenseMatrix& X, const std::vector<int>& pi,
                                   const SchlafliCertificate& cert);

// Exhaustive triangle inequalities -s_i s_j X_ij - s_j s_k X_jk - s_i s_k X_ik <= 1.
TriangleReport evaluate_triangles(const RationalMatrix& X, double tol = 1e-10);
TriangleReport evaluate_triangles(const DenseMatrix& X, double tol = 1e-10);

uint64_t graph_hash(const Graph& g);

}  // namespace ell4
