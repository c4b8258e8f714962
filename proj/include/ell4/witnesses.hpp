#pragma once

#include "ell4/frames.hpp"
#include "ell4/matrix.hpp"
#include "ell4/pseudomoments.hpp"

namespace ell4 {

// M in B(N, r): PSD, identity diagonal blocks, symmetric off-diagonal blocks.
struct BlockWitness {
  BlockLayout layout;
  DenseMatrix M;
};

struct WitnessValidation {
  ConditionReport psd, diag_identity, off_symmetry, block_norm_bound, norm_bound;
  double min_eigenvalue = 0;
  double max_block_norm = 0;
  double spectral_norm = 0;
  bool all_pass() const {
    return psd.pass && diag_identity.pass && off_symmetry.pass && block_norm_bound.pass &&
           norm_bound.pass;
  }
};

WitnessValidation validate_witness(const BlockWitness& w, double tol = 1e-8);

// Y_(ij)(kl) = v_i^T M_[jk] v_l. Requires sum ||v_i||^2 = N and v^T M v = N^2
// (throws NotOptimalError otherwise: the witness does not certify).
Degree4Moments witness_to_moments(const BlockWitness& w, const VectorSystem& sys,
                                  double tol = 1e-8);

// Inverse direction: blocks M_[ij] = W Y_[ij] W^T with W = (VV^T)^{-1} V, then
// an isometric lift when r exceeds rank(X).
BlockWitness moments_to_witness(const Degree4Moments& m, const VectorSystem& sys,
                                double tol = 1e-8);

// M = U^T U with U = [S_1 .. S_N; R_1 .. R_N], S_1 = I, R_1 = 0,
// S_i^2 + R_i^T R_i = I and the commutator relation.
struct SRFactorization {
  int r_prime = 0;
  std::vector<DenseMatrix> S;
  std::vector<DenseMatrix> R;
  double diag_residual = 0;        // worst over S_i^2 + R_i^T R_i - I
  double commutator_residual = 0;  // worst over the pairwise relation
};

SRFactorization sr_factorization(const BlockWitness& w, double tol = 1e-8);

// D* = vv^T - (vv^T)^Gamma + I_N (x) (VV^T): dual-feasible with trace N^2.
struct DualCertificate {
  BlockLayout layout;
  DenseMatrix D;
};

DualCertificate dual_certificate(const VectorSystem& sys);

// Orthogonal projector onto {vec(SV) : S symmetric} (UNTF formula).
DenseMatrix vsym_projector(const VectorSystem& sys, double tol = 1e-8);

// Orthogonal projector onto {vec(SV) : S symmetric, v_i^T S v_i = 0}.
// Dispatches to the ETF closed form when applicable.
DenseMatrix vsym_prime_projector(const VectorSystem& sys);
DenseMatrix vsym_prime_projector_general(const VectorSystem& sys);
DenseMatrix vsym_prime_projector_etf(const VectorSystem& sys);

// M = vv^T + ((r-1)N / (r(r+1)/2 - N)) P_{V'sym} for a non-maximal ETF.
BlockWitness etf_witness(const VectorSystem& sys);

// Spectral decomposition of (vv^T)^Gamma from the singular triples of V.
struct PtSpectrum {
  std::vector<double> sigma;                  // descending, sigma > 0 kept
  std::vector<std::vector<double>> y, z;      // left/right singular vectors
  std::vector<std::vector<double>> d, s, a;   // unit eigenvectors in R^{rN}
  std::vector<double> d_vals, s_vals, a_vals; // sigma_i^2, sigma_i sigma_j, -sigma_i sigma_j
};

PtSpectrum rank_one_pt_spectrum(const DenseMatrix& V);

struct VsymKernelReport {
  double min_eigenvalue = 0;   // of I_N (x) VV^T - (vv^T)^Gamma
  int kernel_dim = 0;
  double basis_residual = 0;   // worst ||K b|| over the explicit kernel basis
  double projector_diff = 0;   // explicit-span projector vs numerical kernel projector
  bool pass = false;
};

VsymKernelReport vsym_kernel_check(const VectorSystem& sys, double tol = 1e-8);

}  // namespace ell4
