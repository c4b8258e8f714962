#pragma once

#include <optional>
#include <utility>

#include "ell4/matrix.hpp"

namespace ell4 {

// N unit-norm vectors in R^r, stored as the columns of V.
struct VectorSystem {
  int N = 0;
  int r = 0;
  DenseMatrix V;  // r x N
  std::optional<RationalMatrix> gram_exact;

  DenseMatrix gram() const { return V.transpose() * V; }
  std::vector<double> vec() const { return vec_of_columns(V); }
};

struct FrameReport {
  double frame_potential = 0;
  bool is_untf = false;
  double coherence_max = 0;
  bool is_etf = false;
  double welch_bound = 0;
};

// Simple undirected graph, 0-based vertices, sorted edge list with i < j.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  bool adjacent(int i, int j) const;
  std::vector<std::vector<bool>> adjacency() const;
};

struct SrgParams {
  long v = 0, k = 0, lambda = 0, mu = 0;
};

FrameReport analyze_frame(const VectorSystem& sys, double tol = 1e-8);

// Gram X^(N) = (1 + 1/(N-1)) I - (1/(N-1)) 11^T; vectors span R^{N-1}.
VectorSystem simplex_etf(int N);

// 28 unit vectors in R^7 with pairwise inner products +-1/3: one per pair
// {i,j} in [8], built from e_i + e_j - (1/4)1 scaled by sqrt(2/3) and
// expressed in a fixed Helmert basis of the hyperplane orthogonal to 1.
VectorSystem etf_28_7();

// Flip signs so every vector has positive inner product with the anchor.
VectorSystem canonicalize_signs(const VectorSystem& sys, int anchor, double tol = 1e-10);

// Graph on [N] \ {anchor} with i ~ j iff <v_i, v_j> > 0, and the strongly
// regular graph parameters it must satisfy for a canonical ETF.
std::pair<Graph, SrgParams> etf_to_srg(const VectorSystem& sys, int anchor);

}  // namespace ell4
