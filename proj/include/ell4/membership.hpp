#pragma once

#include <optional>

#include "ell4/separability.hpp"
#include "ell4/witnesses.hpp"

namespace ell4 {

enum class Membership { Member, NonMember, Inconclusive };

struct MembershipVerdict {
  Membership status = Membership::Inconclusive;
  int iterations = 0;
  double runtime_s = 0;
  double gap = 0;       // certified distance bound (cut) / stabilized set gap (e4)
  double residual = 0;  // diagnostics for Inconclusive

  std::optional<CutDecomposition> decomposition;  // cut Member witness
  std::optional<DenseMatrix> separating;          // cut NonMember separator W
  double separation_threshold = 0;                // max over cuts of <W, xx^T>
  std::optional<BlockWitness> witness;            // e4 Member witness
  std::vector<double> eigenvalues;                // e2 witness
};

// X in E2: PSD with unit diagonal.
MembershipVerdict e2_membership(const DenseMatrix& X, double tol = 1e-8);

// Distance minimization over conv{xx^T} by pairwise Frank-Wolfe with an
// exhaustive sign-vector oracle (N <= 16).
MembershipVerdict cut_membership(const DenseMatrix& X, double tol = 1e-6, int max_iter = 5000);

// Feasibility of {M psd} cap {diag blocks I, symmetric off blocks, Mv = Nv}
// by alternating projections with a Dykstra correction on the psd side.
MembershipVerdict e4_feasibility(const VectorSystem& sys, double tol = 1e-8, int max_iter = 5000,
                                 const DenseMatrix* warm_start = nullptr);

struct CrossSection {
  DenseMatrix A1, A2;  // orthonormal symmetric zero-diagonal directions
  std::vector<double> theta;
  std::vector<double> radius_cut, radius_e4, radius_e2;
};

// Boundary radii of C, E4, E2 along rays I + t(cos A1 + sin A2), bisected to
// the given tolerance. Rays run in parallel.
CrossSection cross_section(int N, const DenseMatrix& A1, const DenseMatrix& A2, int angles = 64,
                           double bisect_tol = 1e-3);

// Seeded direction pair for reproducible sections.
std::pair<DenseMatrix, DenseMatrix> random_directions(int N, uint64_t seed);

}  // namespace ell4
