#include "ell4/witnesses.hpp"

#include <cmath>
#include <sstream>

#include "ell4/eigh.hpp"
#include "ell4/gram.hpp"

namespace ell4 {

namespace {

double spectral_norm_sym(const DenseMatrix& A) {
  EighResult e = symmetric_eigh(A, 1e-10);
  double m = 0;
  for (double l : e.eigenvalues) m = std::max(m, std::fabs(l));
  return m;
}

DenseMatrix sym_inverse(const DenseMatrix& A, const char* what) {
  EighResult e = symmetric_eigh(A, 1e-10);
  double lmax = std::fabs(e.eigenvalues.front());
  for (double l : e.eigenvalues)
    if (std::fabs(l) <= 1e-10 * std::max(1.0, lmax))
      throw Error(std::string(what) + ": singular matrix");
  const int n = A.rows;
  DenseMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += e.vectors(i, k) * e.vectors(j, k) / e.eigenvalues[k];
      inv(i, j) = s;
    }
  return inv;
}

void require_unit_norms(const VectorSystem& sys, double tol, const char* what) {
  for (int i = 0; i < sys.N; ++i) {
    double n2 = 0;
    for (int p = 0; p < sys.r; ++p) n2 += sys.V(p, i) * sys.V(p, i);
    if (std::fabs(n2 - 1.0) > tol) throw Error(std::string(what) + ": vectors are not unit norm");
  }
}

}  // namespace

WitnessValidation validate_witness(const BlockWitness& w, double tol) {
  const BlockLayout& lay = w.layout;
  if (w.M.rows != lay.dim() || w.M.cols != lay.dim())
    throw Error("validate_witness: dimension mismatch with layout");
  WitnessValidation rep;

  EighResult e = symmetric_eigh(w.M, 1e-10);
  rep.min_eigenvalue = e.eigenvalues.back();
  rep.spectral_norm = std::max(std::fabs(e.eigenvalues.front()), std::fabs(e.eigenvalues.back()));
  double scale = std::max(1.0, rep.spectral_norm);
  rep.psd.violation = std::max(0.0, -rep.min_eigenvalue);
  rep.psd.pass = rep.min_eigenvalue >= -tol * scale;

  double dviol = 0, sviol = 0;
  for (int i = 0; i < lay.N; ++i) {
    DenseMatrix B = block_of(w.M, lay, i, i);
    for (int p = 0; p < lay.r; ++p)
      for (int q = 0; q < lay.r; ++q) dviol = std::max(dviol, std::fabs(B(p, q) - (p == q ? 1.0 : 0.0)));
  }
  for (int i = 0; i < lay.N; ++i)
    for (int j = 0; j < lay.N; ++j) {
      DenseMatrix B = block_of(w.M, lay, i, j);
      sviol = std::max(sviol, sym_violation(B));
      DenseMatrix Bs = B.transpose() * B;
      double bn = std::sqrt(std::max(0.0, spectral_norm_sym(Bs)));
      rep.max_block_norm = std::max(rep.max_block_norm, bn);
    }
  rep.diag_identity.violation = dviol;
  rep.diag_identity.pass = dviol <= tol;
  rep.off_symmetry.violation = sviol;
  rep.off_symmetry.pass = sviol <= tol;
  rep.block_norm_bound.violation = std::max(0.0, rep.max_block_norm - 1.0);
  rep.block_norm_bound.pass = rep.max_block_norm <= 1.0 + tol;
  rep.norm_bound.violation = std::max(0.0, rep.spectral_norm - lay.N);
  rep.norm_bound.pass = rep.spectral_norm <= lay.N + tol;
  return rep;
}

Degree4Moments witness_to_moments(const BlockWitness& w, const VectorSystem& sys, double tol) {
  const int N = sys.N, r = sys.r;
  if (w.layout.N != N || w.layout.r != r) throw Error("witness_to_moments: layout mismatch");
  double sum2 = 0;
  for (int i = 0; i < N; ++i)
    for (int p = 0; p < r; ++p) sum2 += sys.V(p, i) * sys.V(p, i);
  if (std::fabs(sum2 - N) > tol * N)
    throw Error("witness_to_moments: sum of squared norms differs from N");

  std::vector<double> v = sys.vec();
  double vMv = 0;
  std::vector<double> Mv = matvec(w.M, v);
  for (size_t t = 0; t < v.size(); ++t) vMv += v[t] * Mv[t];
  if (std::fabs(vMv - static_cast<double>(N) * N) > tol * N * N) {
    std::ostringstream msg;
    msg << "witness does not certify: v^T M v = " << vMv << " != N^2 = " << N * N;
    throw NotOptimalError(msg.str());
  }

  Degree4Moments out;
  out.N = N;
  out.Y = DenseMatrix(N * N, N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          double s = 0;
          for (int p = 0; p < r; ++p)
            for (int q = 0; q < r; ++q)
              s += sys.V(p, i) * w.M(j * r + p, k * r + q) * sys.V(q, l);
          out.Y(i * N + j, k * N + l) = s;
        }
  return out;
}

BlockWitness moments_to_witness(const Degree4Moments& m, const VectorSystem& sys, double tol) {
  const int N = sys.N, r = sys.r;
  Degree4Validation val = validate_degree4(m, tol);
  if (!val.all_pass()) throw Error("moments_to_witness: Y is not a valid degree 4 pseudomoment matrix");
  DenseMatrix Xs = sys.gram();
  double mismatch = max_abs(val.X - Xs);
  if (mismatch > 10 * tol) {
    std::ostringstream msg;
    msg << "moments_to_witness: Y does not extend Gram(sys), mismatch " << mismatch;
    throw Error(msg.str());
  }

  DenseMatrix X = val.X;
  EighResult ex = symmetric_eigh(Xs, 1e-10);
  int rank = numerical_rank(ex.eigenvalues, 1e-8);

  auto case1 = [&](const DenseMatrix& V0) {
    const int r0 = V0.rows;
    DenseMatrix W = sym_inverse(V0 * V0.transpose(), "moments_to_witness") * V0;  // r0 x N
    BlockLayout lay{N, r0};
    DenseMatrix M(lay.dim(), lay.dim());
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        DenseMatrix Yij(N, N);
        for (int k = 0; k < N; ++k)
          for (int l = 0; l < N; ++l) Yij(k, l) = m.Y(i * N + k, j * N + l);
        DenseMatrix B = W * Yij * W.transpose();
        set_block(M, lay, i, j, B);
      }
    return BlockWitness{lay, std::move(M)};
  };

  BlockWitness out{BlockLayout{N, r}, DenseMatrix()};
  if (rank == r) {
    out = case1(sys.V);
  } else if (rank < r) {
    // lift a rank-level witness through the isometry Z V0 = V
    DenseMatrix V0 = gram_factor(Xs, 1e-8);
    BlockWitness M0 = case1(V0);
    const int r0 = V0.rows;
    DenseMatrix Z = sys.V * V0.transpose() * sym_inverse(V0 * V0.transpose(), "moments_to_witness");
    BlockLayout lay{N, r};
    DenseMatrix M(lay.dim(), lay.dim());
    DenseMatrix ZZt = Z * Z.transpose();
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        DenseMatrix B = Z * block_of(M0.M, M0.layout, i, j) * Z.transpose();
        if (i == j)
          for (int p = 0; p < r; ++p)
            for (int q = 0; q < r; ++q) B(p, q) += (p == q ? 1.0 : 0.0) - ZZt(p, q);
        set_block(M, lay, i, j, B);
      }
    (void)r0;
    out = BlockWitness{lay, std::move(M)};
  } else {
    throw Error("moments_to_witness: r below rank(X); vectors cannot Gram-factor X");
  }

  WitnessValidation wval = validate_witness(out, std::max(tol, 1e-8));
  if (!wval.all_pass()) throw Error("moments_to_witness: constructed witness fails validation");
  return out;
}

SRFactorization sr_factorization(const BlockWitness& w, double tol) {
  const int N = w.layout.N, r = w.layout.r, n = w.layout.dim();
  EighResult e = symmetric_eigh(w.M, 1e-10);
  double scale = std::max(1.0, std::fabs(e.eigenvalues.front()));
  if (e.eigenvalues.back() < -tol * scale) throw NotPsdError("sr_factorization: M is not PSD");
  int rp = numerical_rank(e.eigenvalues, 1e-12);
  rp = std::max(rp, r);

  DenseMatrix U(rp, n);
  for (int k = 0; k < rp; ++k) {
    double s = std::sqrt(std::max(0.0, e.eigenvalues[k]));
    for (int t = 0; t < n; ++t) U(k, t) = s * e.vectors(t, k);
  }

  // rotate so the first block column becomes [I_r; 0]: complete the
  // orthonormal columns of U_1 to a basis of R^{rp}
  DenseMatrix T(rp, rp);
  int placed = 0;
  auto push_col = [&](const std::vector<double>& cand) {
    std::vector<double> c = cand;
    for (int k = 0; k < placed; ++k) {
      double d = 0;
      for (int t = 0; t < rp; ++t) d += T(t, k) * c[t];
      for (int t = 0; t < rp; ++t) c[t] -= d * T(t, k);
    }
    double nrm = 0;
    for (double x : c) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm < 1e-8) return false;
    for (int t = 0; t < rp; ++t) T(t, placed) = c[t] / nrm;
    ++placed;
    return true;
  };
  for (int p = 0; p < r; ++p) {
    std::vector<double> col(rp);
    for (int t = 0; t < rp; ++t) col[t] = U(t, p);
    if (!push_col(col)) throw Error("sr_factorization: first block column is rank deficient");
  }
  for (int t = 0; t < rp && placed < rp; ++t) {
    std::vector<double> col(rp, 0.0);
    col[t] = 1.0;
    push_col(col);
  }
  if (placed != rp) throw Error("sr_factorization: basis completion failed");

  DenseMatrix Ut = T.transpose() * U;
  SRFactorization out;
  out.r_prime = rp;
  out.S.resize(N);
  out.R.resize(N);
  for (int i = 0; i < N; ++i) {
    DenseMatrix Si(r, r), Ri(rp - r, r);
    for (int p = 0; p < r; ++p)
      for (int q = 0; q < r; ++q) Si(p, q) = Ut(p, i * r + q);
    for (int p = r; p < rp; ++p)
      for (int q = 0; q < r; ++q) Ri(p - r, q) = Ut(p, i * r + q);
    out.S[i] = std::move(Si);
    out.R[i] = std::move(Ri);
  }

  for (int i = 0; i < N; ++i) {
    DenseMatrix lhs = out.S[i] * out.S[i] + out.R[i].transpose() * out.R[i];
    for (int p = 0; p < r; ++p) lhs(p, p) -= 1.0;
    out.diag_residual = std::max(out.diag_residual, max_abs(lhs));
    for (int j = i + 1; j < N; ++j) {
      DenseMatrix c = out.S[i] * out.S[j] - out.S[j] * out.S[i] +
                      out.R[i].transpose() * out.R[j] - out.R[j].transpose() * out.R[i];
      out.commutator_residual = std::max(out.commutator_residual, max_abs(c));
    }
  }
  return out;
}

DualCertificate dual_certificate(const VectorSystem& sys) {
  const int N = sys.N, r = sys.r;
  require_unit_norms(sys, 1e-8, "dual_certificate");
  DenseMatrix VVt = sys.V * sys.V.transpose();
  EighResult e = symmetric_eigh(VVt, 1e-10);
  if (numerical_rank(e.eigenvalues, 1e-10) != r)
    throw Error("dual_certificate: V is rank deficient");

  std::vector<double> v = sys.vec();
  BlockLayout lay{N, r};
  DenseMatrix vv = outer(v, v);
  DenseMatrix D = vv - partial_transpose(vv, lay);
  for (int i = 0; i < N; ++i)
    for (int p = 0; p < r; ++p)
      for (int q = 0; q < r; ++q) D(i * r + p, i * r + q) += VVt(p, q);
  return DualCertificate{lay, std::move(D)};
}

DenseMatrix vsym_projector(const VectorSystem& sys, double tol) {
  FrameReport rep = analyze_frame(sys, tol);
  if (!rep.is_untf) throw Error("vsym_projector: formula requires a UNTF");
  const int N = sys.N, r = sys.r;
  BlockLayout lay{N, r};
  std::vector<double> v = sys.vec();
  DenseMatrix P = partial_transpose(outer(v, v), lay);
  DenseMatrix X = sys.gram();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int p = 0; p < r; ++p) P(i * r + p, j * r + p) += X(i, j);
  double c = static_cast<double>(r) / (2.0 * N);
  return P.scaled(c);
}

DenseMatrix vsym_prime_projector_general(const VectorSystem& sys) {
  const int N = sys.N, r = sys.r;
  DenseMatrix X = sys.gram();
  DenseMatrix X2(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) X2(i, j) = X(i, j) * X(i, j);
  DenseMatrix X2inv = sym_inverse(X2, "vsym_prime_projector: X^{odot 2}");

  BlockLayout lay{N, r};
  DenseMatrix P(lay.dim(), lay.dim());
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      DenseMatrix B(r, r);
      for (int p = 0; p < r; ++p) {
        for (int q = 0; q < r; ++q) B(p, q) = 0.5 * sys.V(p, j) * sys.V(q, i);
        B(p, p) += 0.5 * X(i, j);
      }
      for (int k = 0; k < N; ++k) {
        // accumulate sum_l (X2inv)_{kl} X_{jl} v_l first
        std::vector<double> wl(r, 0.0);
        for (int l = 0; l < N; ++l) {
          double c = X2inv(k, l) * X(j, l);
          if (c == 0) continue;
          for (int q = 0; q < r; ++q) wl[q] += c * sys.V(q, l);
        }
        double ck = X(i, k);
        for (int p = 0; p < r; ++p)
          for (int q = 0; q < r; ++q) B(p, q) -= ck * sys.V(p, k) * wl[q];
      }
      set_block(P, lay, i, j, B.scaled(static_cast<double>(r) / N));
    }
  return P;
}

DenseMatrix vsym_prime_projector_etf(const VectorSystem& sys) {
  const int N = sys.N, r = sys.r;
  if (r <= 1) throw Error("vsym_prime_projector_etf: requires r > 1");
  DenseMatrix X = sys.gram();
  double c1 = static_cast<double>(N - r) / (static_cast<double>(N) * (r - 1));
  double c2 = static_cast<double>(r) / (2.0 * N);
  double c3 = static_cast<double>(r) * r * (N - 1) / (static_cast<double>(N) * N * (r - 1));

  BlockLayout lay{N, r};
  DenseMatrix P(lay.dim(), lay.dim());
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      DenseMatrix B(r, r);
      for (int p = 0; p < r; ++p) {
        for (int q = 0; q < r; ++q)
          B(p, q) = c1 * sys.V(p, i) * sys.V(q, j) + c2 * sys.V(p, j) * sys.V(q, i);
        B(p, p) += c2 * X(i, j);
      }
      for (int k = 0; k < N; ++k) {
        double ck = c3 * X(i, k) * X(j, k);
        if (ck == 0) continue;
        for (int p = 0; p < r; ++p)
          for (int q = 0; q < r; ++q) B(p, q) -= ck * sys.V(p, k) * sys.V(q, k);
      }
      set_block(P, lay, i, j, B);
    }
  return P;
}

DenseMatrix vsym_prime_projector(const VectorSystem& sys) {
  FrameReport rep = analyze_frame(sys);
  if (rep.is_etf && sys.r > 1) return vsym_prime_projector_etf(sys);
  return vsym_prime_projector_general(sys);
}

BlockWitness etf_witness(const VectorSystem& sys) {
  FrameReport rep = analyze_frame(sys);
  if (!rep.is_etf) throw Error("etf_witness: input is not an ETF");
  const int N = sys.N, r = sys.r;
  if (r <= 1) throw Error("etf_witness: requires r > 1");
  if (2 * N >= r * (r + 1)) throw MaximalEtfError("etf_witness: maximal ETF is excluded");

  double c = static_cast<double>(r - 1) * N / (0.5 * r * (r + 1) - N);
  std::vector<double> v = sys.vec();
  DenseMatrix M = outer(v, v) + vsym_prime_projector_etf(sys).scaled(c);
  return BlockWitness{BlockLayout{N, r}, std::move(M)};
}

PtSpectrum rank_one_pt_spectrum(const DenseMatrix& V) {
  const int r = V.rows, N = V.cols;
  if (r > N) throw Error("rank_one_pt_spectrum: requires r <= N");
  EighResult e = symmetric_eigh(V * V.transpose(), 1e-12);
  PtSpectrum out;
  double lmax = e.eigenvalues.empty() ? 0.0 : std::max(0.0, e.eigenvalues.front());
  for (int k = 0; k < r; ++k) {
    double lam = e.eigenvalues[k];
    if (lam <= 1e-14 * std::max(1.0, lmax)) continue;
    double sig = std::sqrt(lam);
    std::vector<double> y(r), z(N, 0.0);
    for (int p = 0; p < r; ++p) y[p] = e.vectors(p, k);
    for (int t = 0; t < N; ++t) {
      double s = 0;
      for (int p = 0; p < r; ++p) s += V(p, t) * y[p];
      z[t] = s / sig;
    }
    out.sigma.push_back(sig);
    out.y.push_back(std::move(y));
    out.z.push_back(std::move(z));
  }

  const int m = static_cast<int>(out.sigma.size());
  auto kron = [&](const std::vector<double>& zz, const std::vector<double>& yy) {
    std::vector<double> x(static_cast<size_t>(N) * r, 0.0);
    for (int i = 0; i < N; ++i)
      for (int p = 0; p < r; ++p) x[static_cast<size_t>(i) * r + p] = zz[i] * yy[p];
    return x;
  };
  for (int i = 0; i < m; ++i) {
    out.d.push_back(kron(out.z[i], out.y[i]));
    out.d_vals.push_back(out.sigma[i] * out.sigma[i]);
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      std::vector<double> sij = kron(out.z[i], out.y[j]);
      std::vector<double> ji = kron(out.z[j], out.y[i]);
      std::vector<double> aij = sij;
      for (size_t t = 0; t < sij.size(); ++t) {
        double u = sij[t], w = ji[t];
        sij[t] = inv_sqrt2 * (u + w);
        aij[t] = inv_sqrt2 * (u - w);
      }
      out.s.push_back(std::move(sij));
      out.s_vals.push_back(out.sigma[i] * out.sigma[j]);
      out.a.push_back(std::move(aij));
      out.a_vals.push_back(-out.sigma[i] * out.sigma[j]);
    }
  return out;
}

VsymKernelReport vsym_kernel_check(const VectorSystem& sys, double tol) {
  const int N = sys.N, r = sys.r;
  DenseMatrix VVt = sys.V * sys.V.transpose();
  EighResult ev = symmetric_eigh(VVt, 1e-10);
  if (numerical_rank(ev.eigenvalues, 1e-10) != r)
    throw Error("vsym_kernel_check: V is rank deficient");

  BlockLayout lay{N, r};
  std::vector<double> v = sys.vec();
  DenseMatrix K = partial_transpose(outer(v, v), lay).scaled(-1.0);
  for (int i = 0; i < N; ++i)
    for (int p = 0; p < r; ++p)
      for (int q = 0; q < r; ++q) K(i * r + p, i * r + q) += VVt(p, q);

  EighResult e = symmetric_eigh(K, 1e-10);
  VsymKernelReport rep;
  rep.min_eigenvalue = e.eigenvalues.back();
  double lmax = std::max(1.0, e.eigenvalues.front());
  int kd = 0;
  for (double l : e.eigenvalues)
    if (std::fabs(l) <= 1e-8 * lmax) ++kd;
  rep.kernel_dim = kd;

  PtSpectrum sp = rank_one_pt_spectrum(sys.V);
  std::vector<std::vector<double>> basis;
  for (size_t i = 0; i < sp.d.size(); ++i) basis.push_back(sp.d[i]);
  const int m = static_cast<int>(sp.sigma.size());
  int sidx = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j, ++sidx) {
      double si = sp.sigma[i], sj = sp.sigma[j];
      double nrm = std::sqrt(si * si + sj * sj);
      // sigma_i z_i (x) y_j + sigma_j z_j (x) y_i, normalized
      std::vector<double> b(static_cast<size_t>(N) * r, 0.0);
      for (int t = 0; t < N; ++t)
        for (int p = 0; p < r; ++p)
          b[static_cast<size_t>(t) * r + p] =
              (si * sp.z[i][t] * sp.y[j][p] + sj * sp.z[j][t] * sp.y[i][p]) / nrm;
      basis.push_back(std::move(b));
    }

  for (const auto& b : basis) {
    std::vector<double> Kb = matvec(K, b);
    double nrm = 0;
    for (double x : Kb) nrm = std::max(nrm, std::fabs(x));
    rep.basis_residual = std::max(rep.basis_residual, nrm);
  }

  // projector onto the numerical kernel vs projector onto the explicit span
  const int n = lay.dim();
  DenseMatrix Pnum(n, n);
  for (int k = 0; k < n; ++k)
    if (std::fabs(e.eigenvalues[k]) <= 1e-8 * lmax)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Pnum(i, j) += e.vectors(i, k) * e.vectors(j, k);
  DenseMatrix Pexp(n, n);
  for (const auto& b : basis)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Pexp(i, j) += b[i] * b[j];
  rep.projector_diff = max_abs(Pnum - Pexp);

  rep.pass = rep.min_eigenvalue >= -tol * lmax && rep.kernel_dim == r * (r + 1) / 2 &&
             rep.basis_residual <= 100 * tol && rep.projector_diff <= 100 * tol;
  return rep;
}

}  // namespace ell4
