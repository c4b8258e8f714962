// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "ell4/certificates.hpp"
#include "ell4/eigh.hpp"
#include "ell4/gram.hpp"
#include "ell4/io.hpp"
#include "ell4/membership.hpp"
#include "ell4/pseudomoments.hpp"
#include "ell4/rng.hpp"
#include "ell4/separability.hpp"
#include "ell4/witnesses.hpp"

using namespace ell4;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Failure(msg);
}

template <typename T>
std::string str(const T& x) {
  std::ostringstream ss;
  ss << x;
  return ss.str();
}

std::vector<int> odd4(int i, int j, int k, int l) {
  std::map<int, int> c;
  c[i]++;
  c[j]++;
  c[k]++;
  c[l]++;
  std::vector<int> o;
  for (auto& [t, n] : c)
    if (n % 2) o.push_back(t);
  return o;
}

int eig_rank(const DenseMatrix& A, double tol = 1e-8) {
  EighResult e = symmetric_eigh(A, 1e-10);
  double lmax = 0;
  for (double l : e.eigenvalues) lmax = std::max(lmax, std::fabs(l));
  int c = 0;
  for (double l : e.eigenvalues)
    if (std::fabs(l) > tol * std::max(lmax, 1e-300)) ++c;
  return c;
}

double vMv_of(const DenseMatrix& M, const std::vector<double>& v) {
  std::vector<double> Mv = matvec(M, v);
  double s = 0;
  for (size_t t = 0; t < v.size(); ++t) s += v[t] * Mv[t];
  return s;
}

// independent subspace oracle used by criterion 7
DenseMatrix gram_schmidt_vsym_prime(const VectorSystem& sys) {
  const int r = sys.r, N = sys.N, n = r * N;
  std::vector<DenseMatrix> sym;
  for (int p = 0; p < r; ++p)
    for (int q = p; q < r; ++q) {
      DenseMatrix B(r, r);
      B(p, q) = B(q, p) = 1.0;
      sym.push_back(B);
    }
  const int d = static_cast<int>(sym.size());
  DenseMatrix C(N, d);
  for (int i = 0; i < N; ++i)
    for (int a = 0; a < d; ++a) {
      double s = 0;
      for (int p = 0; p < r; ++p)
        for (int q = 0; q < r; ++q) s += sys.V(p, i) * sym[a](p, q) * sys.V(q, i);
      C(i, a) = s;
    }
  EighResult e = symmetric_eigh(C.transpose() * C, 1e-12);
  double lmax = std::max(1.0, e.eigenvalues.front());
  std::vector<std::vector<double>> span;
  for (int k = 0; k < d; ++k) {
    if (std::fabs(e.eigenvalues[k]) > 1e-9 * lmax) continue;
    DenseMatrix S(r, r);
    for (int a = 0; a < d; ++a) S = S + sym[a].scaled(e.vectors(a, k));
    std::vector<double> w(n, 0.0);
    for (int i = 0; i < N; ++i)
      for (int p = 0; p < r; ++p) {
        double s = 0;
        for (int q = 0; q < r; ++q) s += S(p, q) * sys.V(q, i);
        w[i * r + p] = s;
      }
    span.push_back(std::move(w));
  }
  std::vector<std::vector<double>> ortho;
  for (auto& v : span) {
    std::vector<double> u = v;
    for (auto& b : ortho) {
      double d2 = 0;
      for (int t = 0; t < n; ++t) d2 += u[t] * b[t];
      for (int t = 0; t < n; ++t) u[t] -= d2 * b[t];
    }
    double nrm = 0;
    for (double x : u) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm < 1e-9) continue;
    for (double& x : u) x /= nrm;
    ortho.push_back(std::move(u));
  }
  DenseMatrix P(n, n);
  for (auto& b : ortho)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) P(i, j) += b[i] * b[j];
  return P;
}

SchlafliCertificate build_canonical_certificate() {
  VectorSystem canon = canonicalize_signs(etf_28_7(), 27);
  auto [g27, par] = etf_to_srg(canon, 27);
  require(par.v == 27 && par.k == 16 && par.lambda == 10 && par.mu == 8,
          "expected srg(27,16,10,8)");
  return build_schlafli_certificate(augment_with_anchor(g27));
}

// ---- criteria ----

void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  TruncatedMoments lau = laurent_moments(5, 4);
  Degree4Moments etf = etf_degree4(simplex_etf(5));
  require(etf.exact.has_value(), "etf moments must be exact");
  require(lau.Z == *etf.exact, "laurent(5,4) must equal etf_degree4(simplex_etf(5)) exactly");

  std::map<int, Rational> by_size;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k)
        for (int l = 0; l < 5; ++l)
          by_size[static_cast<int>(odd4(i, j, k, l).size())] = (*etf.exact)(i * 5 + j, k * 5 + l);
  require(by_size[0] == 1 && by_size[2] == rat(-1, 4) && by_size[4] == rat(3, 8),
          "odd-set class values must be 1, -1/4, 3/8");

  Degree4Validation rep = validate_degree4(etf, 1e-8);
  require(rep.all_pass(), "validate_degree4 failed");
  require(rep.marginal.violation == 0 && rep.unit_diagonal.violation == 0 &&
              rep.permutation.violation == 0,
          "conditions 2-4 must have zero violation");
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(dt < 1.0, "criterion 1 exceeded 1 s: " + str(dt));
}

void criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  for (int N = 4; N <= 8; ++N) {
    Degree4Moments m = etf_degree4(simplex_etf(N));
    PsdResult res = exact_psd_ldl(*m.exact);
    require(is_psd_proof(res), "etf pseudomoments must be exactly PSD, N=" + str(N));
    const auto& p = std::get<PsdProof>(res);
    int r = N - 1;
    int want = 1 + (r * (r + 1) / 2 - N);
    require(p.rank == want, "rank " + str(p.rank) + " != " + str(want) + " at N=" + str(N));
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(dt < 30.0, "criterion 2 exceeded 30 s: " + str(dt));
}

void criterion3() {
  bool threw = false;
  try {
    etf_degree4(simplex_etf(3));
  } catch (const MaximalEtfError&) {
    threw = true;
  }
  require(threw, "etf_degree4(simplex_etf(3)) must raise MaximalEtf");
  threw = false;
  try {
    etf_degree4(etf_28_7());
  } catch (const MaximalEtfError&) {
    threw = true;
  }
  require(threw, "etf_degree4(etf_28_7) must raise MaximalEtf");

  MembershipVerdict v = e4_feasibility(simplex_etf(3), 1e-8, 5000);
  require(v.status == Membership::NonMember, "simplex_etf(3) must be NonMember");
  require(v.gap >= 1e-4, "gap " + str(v.gap) + " below 1e-4");
  require(v.iterations <= 5000, "exceeded 5000 iterations");
}

void criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  SchlafliCertificate cert = build_canonical_certificate();
  SchlafliProof proof = verify_schlafli_certificate(cert, 100);
  require(proof.psd && proof.collapse_ok, "certificate verification failed");
  require(proof.constant == 112, "constant class must be 112");

  RationalMatrix Z = etf_gram_from_graph(cert.g);
  std::vector<int> id(28);
  for (int i = 0; i < 28; ++i) id[i] = i;
  InequalityReport rep = evaluate_schlafli(Z, id, cert);
  require(rep.lhs == 126, "lhs at the ETF Gram must be exactly 126, got " + to_string(rep.lhs));
  require(!rep.satisfied, "the inequality must be violated at the ETF Gram");
  TriangleReport tri = evaluate_triangles(Z);
  require(tri.all_satisfied && tri.worst_value == 1,
          "triangles at the ETF Gram must be tight at exactly 1");
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(dt < 600.0, "criterion 4 exceeded 10 minutes: " + str(dt));
}

void criterion5() {
  for (int N = 4; N <= 8; ++N) {
    VectorSystem sys = simplex_etf(N);
    Degree4Moments Y = etf_degree4(sys);
    BlockWitness M = moments_to_witness(Y, sys);
    require(validate_witness(M).all_pass(), "witness validation failed at N=" + str(N));
    std::vector<double> v = sys.vec();
    double q = vMv_of(M.M, v);
    require(std::fabs(q - static_cast<double>(N) * N) <= 1e-8 * N * N,
            "v^T M v = " + str(q) + " at N=" + str(N));
    Degree4Moments back = witness_to_moments(M, sys);
    require(max_abs(back.Y - Y.Y) <= 1e-8, "round trip error at N=" + str(N));
  }
  VectorSystem s5 = simplex_etf(5);
  BlockWitness W = etf_witness(s5);
  require(std::fabs((4 - 1) * 5.0 / (4 * 5 / 2 - 5) - 3.0) == 0, "coefficient must be 3");
  require(std::fabs(trace_of(W.M) - 20.0) <= 1e-8, "trace must be 20");
  Degree4Moments viaW = witness_to_moments(W, s5);
  require(max_abs(viaW.Y - etf_degree4(s5).Y) <= 1e-8, "etf witness disagrees with moments");
}

void criterion6() {
  VectorSystem s5 = simplex_etf(5);
  DualCertificate D = dual_certificate(s5);
  require(std::fabs(trace_of(D.D) - 25.0) <= 1e-10, "trace(D*) must be 25");
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      DenseMatrix B = block_of(D.D, D.layout, i, j);
      require(max_abs(B + B.transpose()) <= 1e-12, "off blocks must be antisymmetric");
    }
  std::vector<double> v = s5.vec();
  DenseMatrix slack = D.D - outer(v, v);
  EighResult e = symmetric_eigh(slack, 1e-10);
  require(e.eigenvalues.back() >= -1e-10, "D* - vv^T must be PSD within 1e-10");

  BlockWitness M = etf_witness(s5);
  require(max_abs(M.M * slack) <= 1e-8, "complementary slackness residual too large");

  DenseMatrix P = vsym_prime_projector(s5);
  EighResult em = symmetric_eigh(M.M, 1e-10);
  for (int k = 0; k < 20; ++k) {
    if (em.eigenvalues[k] <= 1e-8) continue;
    std::vector<double> w(20);
    double wv = 0;
    for (int t = 0; t < 20; ++t) {
      w[t] = em.vectors(t, k);
      wv += w[t] * v[t];
    }
    if (std::fabs(wv) > 1e-8) continue;
    std::vector<double> Pw = matvec(P, w);
    double res = 0;
    for (int t = 0; t < 20; ++t) res += (w[t] - Pw[t]) * (w[t] - Pw[t]);
    require(std::sqrt(res) <= 1e-6, "positive eigenvector leaves the V'sym subspace");
  }
}

void criterion7() {
  for (int N : {5, 6}) {
    VectorSystem sys = simplex_etf(N);
    DenseMatrix Pe = vsym_prime_projector_etf(sys);
    DenseMatrix Pg = vsym_prime_projector_general(sys);
    require(max_abs(Pe - Pg) <= 1e-10, "projector paths disagree at N=" + str(N));
    DenseMatrix Pgs = gram_schmidt_vsym_prime(sys);
    require(max_abs(Pe - Pgs) <= 1e-8, "projector disagrees with the subspace oracle");
    int r = N - 1;
    require(eig_rank(Pe) == r * (r + 1) / 2 - N, "projector rank wrong at N=" + str(N));
  }
}

void criterion8() {
  Xorshift64Star rng(101);
  int done = 0;
  while (done < 50) {
    int N = 2 + static_cast<int>(rng.next() % 7);
    int r = 1 + static_cast<int>(rng.next() % N);
    DenseMatrix V(r, N);
    for (auto& x : V.a) x = rng.uniform_pm1();
    PtSpectrum sp = rank_one_pt_spectrum(V);
    std::vector<double> v = vec_of_columns(V);
    DenseMatrix target = partial_transpose(outer(v, v), BlockLayout{N, r});
    DenseMatrix recon(N * r, N * r);
    auto acc = [&](const std::vector<double>& b, double val) {
      for (int i = 0; i < N * r; ++i)
        for (int j = 0; j < N * r; ++j) recon(i, j) += val * b[i] * b[j];
    };
    for (size_t t = 0; t < sp.d.size(); ++t) acc(sp.d[t], sp.d_vals[t]);
    for (size_t t = 0; t < sp.s.size(); ++t) acc(sp.s[t], sp.s_vals[t]);
    for (size_t t = 0; t < sp.a.size(); ++t) acc(sp.a[t], sp.a_vals[t]);
    require(max_abs(recon - target) <= 1e-10, "pt reconstruction error too large");

    if (static_cast<int>(sp.sigma.size()) == r) {  // full rank: kernel check applies
      VectorSystem sys{N, r, V, std::nullopt};
      VsymKernelReport rep = vsym_kernel_check(sys);
      require(rep.kernel_dim == r * (r + 1) / 2, "kernel dimension mismatch");
      require(rep.pass, "kernel check failed");
    }
    ++done;
  }
  PtSpectrum sp2 = rank_one_pt_spectrum(DenseMatrix::identity(2));
  require(sp2.d_vals.size() == 2 && sp2.s_vals.size() == 1 && sp2.a_vals.size() == 1,
          "I_2 spectrum shape wrong");
  require(std::fabs(sp2.d_vals[0] - 1) < 1e-12 && std::fabs(sp2.s_vals[0] - 1) < 1e-12 &&
              std::fabs(sp2.a_vals[0] + 1) < 1e-12,
          "I_2 eigenvalues must be (1,1,1,-1)");
}

void criterion9() {
  Xorshift64Star rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    int N = 3 + static_cast<int>(rng.next() % 4);
    int terms = 2 + static_cast<int>(rng.next() % (N - 1));
    CutDecomposition dec;
    // independent cuts keep witness_to_cuts' minimal-rank precondition valid
    for (bool ok = false; !ok;) {
      dec = CutDecomposition{};
      double tot = 0;
      for (int t = 0; t < terms; ++t) {
        double w = rng.uniform01() + 0.05;
        std::vector<int> x(N, 1);
        for (int i = 1; i < N; ++i) x[i] = (rng.next() & 1) ? 1 : -1;
        dec.weights.push_back(w);
        dec.signs.push_back(x);
        tot += w;
      }
      for (double& w : dec.weights) w /= tot;
      EighResult e = symmetric_eigh(dec.represented(N), 1e-10);
      ok = numerical_rank(e.eigenvalues, 1e-9) == terms;
    }
    DenseMatrix X = dec.represented(N);
    DenseMatrix V = gram_factor(X, 1e-9);
    VectorSystem sys{N, V.rows, V, std::nullopt};
    SeparableWitness w = cuts_to_witness(dec, sys);
    require(validate_witness(w.witness).all_pass(), "separable witness failed validation");
    CutDecomposition rec = witness_to_cuts(w.witness, sys);
    require(max_abs(rec.represented(N) - X) <= 1e-8, "cut round trip misses the Gram");
  }

  std::vector<std::vector<int>> H4 = {
      {1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  BlockWitness hw = hadamard_witness(H4);
  require(eig_rank(hw.M) == 4, "hadamard witness must have rank 4");
  VectorSystem b4{4, 4, DenseMatrix::identity(4), std::nullopt};
  CutDecomposition dec = witness_to_cuts(hw, b4);
  require(max_abs(dec.represented(4) - DenseMatrix::identity(4)) <= 1e-12,
          "hadamard decomposition must re-sum to I_4");
}

void criterion10() {
  for (auto [N, d] : {std::pair{5, 4}, std::pair{7, 6}}) {
    TruncatedMoments t = laurent_moments(N, d);
    int side = 1;
    for (int q = 0; q < d / 2; ++q) side *= N;
    require(t.Z.rows == side, "materialized size wrong");
    TruncatedValidation v = validate_string_moments(t.Z, N, d / 2, d / 2);
    require(v.odd_set_consistency.violation == 0, "odd-set classes must be exact");
    require(v.unit_class.violation == 0, "unit class must be exact");
    require(v.min_eigenvalue >= -1e-8, "min eigenvalue " + str(v.min_eigenvalue));
  }
}

void criterion11() {
  Degree4Moments par = parity_degree4(4);
  TruncatedMoments tp{4, 4, *par.exact};
  CompleteMoments cp = complete_from_truncated(tp);
  TruncatedValidation vp = validate_string_moments(cp.Z, 4, 0, 2);
  require(vp.odd_set_consistency.violation == 0 && vp.unit_class.violation == 0,
          "parity completion classes must be exact");
  require(vp.min_eigenvalue >= -1e-8, "parity completion min eig " + str(vp.min_eigenvalue));

  Degree4Moments m = etf_degree4(simplex_etf(5));
  TruncatedMoments te{5, 4, *m.exact};
  CompleteMoments ce = complete_from_truncated(te);
  TruncatedValidation vv = validate_string_moments(ce.Z, 5, 0, 2);
  require(vv.odd_set_consistency.violation == 0 && vv.unit_class.violation == 0,
          "etf completion classes must be exact");
  require(vv.min_eigenvalue >= -1e-8, "etf completion min eig " + str(vv.min_eigenvalue));
  int off = complete_index_count(5, 4) - 25;
  for (int p = 0; p < 25; ++p)
    for (int q = 0; q < 25; ++q)
      require(ce.Z(off + p, off + q) == te.Z(p, q), "minor recovery must be exact");
}

void criterion12() {
  auto t0 = std::chrono::steady_clock::now();
  auto [A1, A2] = random_directions(5, 20260811);
  CrossSection cs = cross_section(5, A1, A2, 64, 1e-3);
  for (int k = 0; k < 64; ++k) {
    require(cs.radius_cut[k] <= cs.radius_e4[k] + 2e-3,
            "nesting C <= E4 fails at angle " + str(k));
    require(cs.radius_e4[k] <= cs.radius_e2[k] + 2e-3,
            "nesting E4 <= E2 fails at angle " + str(k));
    require(cs.radius_e2[k] > 0, "E2 radius must be positive");
  }
  write_cross_section_csv(cs, "cross_section_n5.csv");

  // ray toward the simplex Gram: E4 strictly exceeds C
  DenseMatrix D(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) D(i, j) = (i == j) ? 0.0 : -0.25;
  D = D.scaled(1.0 / frob_norm(D));
  DenseMatrix E = A1 - D.scaled(dot(D, A1));
  E = E.scaled(1.0 / frob_norm(E));
  CrossSection single = cross_section(5, D, E, 1, 5e-4);
  require(single.radius_e4[0] - single.radius_cut[0] >= 1e-3,
          "E4 must strictly exceed C toward the simplex Gram");
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(dt < 600.0, "criterion 12 exceeded 10 minutes: " + str(dt));
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void()>>> criteria = {
      {"1  laurent/ETF degree-4 values agree exactly", criterion1},
      {"2  exact PSD + rank of ETF pseudomoments, N=4..8", criterion2},
      {"3  maximal-ETF exclusion", criterion3},
      {"4  schlafli certificate: exact PSD + collapse + 126>112", criterion4},
      {"5  witness round trip, N=4..8", criterion5},
      {"6  dual certificate & complementary slackness", criterion6},
      {"7  projector cross-validation", criterion7},
      {"8  partial-transpose spectrum & kernel dimensions", criterion8},
      {"9  separability round trips", criterion9},
      {"10 laurent higher degree PSD", criterion10},
      {"11 complete extension preserves validity", criterion11},
      {"12 cross-section reproduction", criterion12},
  };

  int failures = 0;
  for (auto& [name, fn] : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    try {
      fn();
      double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cout << "[PASS] criterion " << name << "  (" << dt << " s)\n" << std::flush;
    } catch (const std::exception& e) {
      double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cout << "[FAIL] criterion " << name << "  (" << dt << " s): " << e.what() << "\n"
                << std::flush;
      ++failures;
    }
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed"
                              : str(failures) + " acceptance criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
