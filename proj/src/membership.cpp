#include "ell4/membership.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <thread>

#include "ell4/eigh.hpp"
#include "ell4/gram.hpp"
#include "ell4/rng.hpp"

namespace ell4 {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

MembershipVerdict e2_membership(const DenseMatrix& X, double tol) {
  require_symmetric(X, 1e-8, "e2_membership input");
  MembershipVerdict v;
  EighResult e = symmetric_eigh(X, 1e-10);
  double diag_dev = 0;
  for (int i = 0; i < X.rows; ++i) diag_dev = std::max(diag_dev, std::fabs(X(i, i) - 1.0));
  double min_eig = e.eigenvalues.back();
  v.eigenvalues = e.eigenvalues;
  v.iterations = 1;
  if (min_eig >= -tol && diag_dev <= tol) {
    v.status = Membership::Member;
  } else {
    v.status = Membership::NonMember;
    v.gap = std::max(std::max(0.0, -min_eig), diag_dev);
  }
  return v;
}

namespace {

// all sign vectors with x_0 = +1, encoded in the low N-1 bits
struct CutOracle {
  int N;
  explicit CutOracle(int N) : N(N) {
    if (N > 16) throw Error("cut oracle: N > 16 not supported (2^{N-1} enumeration)");
  }
  void decode(uint32_t code, std::vector<int>& x) const {
    x.assign(N, 1);
    for (int i = 1; i < N; ++i)
      if (code & (1u << (i - 1))) x[i] = -1;
  }
  // argmax over sign vectors of x^T W x
  std::pair<uint32_t, double> best(const DenseMatrix& W) const {
    std::vector<int> x;
    uint32_t bestc = 0;
    double bestv = -1e300;
    const uint32_t total = 1u << (N - 1);
    for (uint32_t c = 0; c < total; ++c) {
      decode(c, x);
      double s = 0;
      for (int i = 0; i < N; ++i) {
        double row = 0;
        for (int j = 0; j < N; ++j) row += W(i, j) * x[j];
        s += x[i] * row;
      }
      if (s > bestv) {
        bestv = s;
        bestc = c;
      }
    }
    return {bestc, bestv};
  }
};

}  // namespace

MembershipVerdict cut_membership(const DenseMatrix& X, double tol, int max_iter) {
  require_symmetric(X, 1e-8, "cut_membership input");
  const int N = X.rows;
  CutOracle oracle(N);
  auto t0 = std::chrono::steady_clock::now();

  std::map<uint32_t, double> weight;  // active atoms
  weight[0] = 1.0;                    // start at the all-ones cut
  DenseMatrix P(N, N);
  std::vector<int> x;
  auto add_atom = [&](DenseMatrix& T, uint32_t c, double w) {
    oracle.decode(c, x);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) T(i, j) += w * x[i] * x[j];
  };
  add_atom(P, 0, 1.0);

  MembershipVerdict v;
  for (int it = 0; it < max_iter; ++it) {
    DenseMatrix G = P - X;
    double dist = frob_norm(G);
    if (dist <= tol) {
      // replay the witness from the decomposition alone
      CutDecomposition dec;
      for (auto& [c, w] : weight) {
        if (w < 1e-12) continue;
        oracle.decode(c, x);
        dec.weights.push_back(w);
        dec.signs.push_back(x);
      }
      double tot = 0;
      for (double w : dec.weights) tot += w;
      for (double& w : dec.weights) w /= tot;
      if (max_abs(dec.represented(N) - X) > std::max(10 * tol, 1e-9))
        throw Error("cut_membership: witness replay failed");
      v.status = Membership::Member;
      v.decomposition = std::move(dec);
      v.iterations = it;
      v.runtime_s = seconds_since(t0);
      return v;
    }

    // certified lower bound on the distance to the hull via W = X - P
    DenseMatrix W = X - P;
    auto [hc, hval] = oracle.best(W);
    double lb = (dot(W, X) - hval) / std::max(dist, 1e-300);
    if (lb >= 10 * tol) {
      v.status = Membership::NonMember;
      v.gap = lb;
      v.separating = W;
      v.separation_threshold = hval;
      v.iterations = it;
      v.runtime_s = seconds_since(t0);
      return v;
    }

    // pairwise step between the Frank-Wolfe atom and the worst active atom;
    // the oracle call above already minimizes <G, xx^T>
    uint32_t sc = hc;
    uint32_t ac = weight.begin()->first;
    double aval = -1e300;
    for (auto& [c, w] : weight) {
      if (w <= 0) continue;
      oracle.decode(c, x);
      double s = 0;
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) s += G(i, j) * x[i] * x[j];
      if (s > aval) {
        aval = s;
        ac = c;
      }
    }
    DenseMatrix Dir(N, N);
    add_atom(Dir, sc, 1.0);
    add_atom(Dir, ac, -1.0);
    double denom = dot(Dir, Dir);
    if (denom < 1e-30) {
      v.residual = dist;
      break;
    }
    double gamma = dot(X - P, Dir) / denom;
    gamma = std::min(std::max(gamma, 0.0), weight[ac]);
    if (gamma <= 0) {
      v.residual = dist;
      break;
    }
    weight[sc] += gamma;
    weight[ac] -= gamma;
    if (weight[ac] <= 1e-15) weight.erase(ac);
    DenseMatrix step(N, N);
    add_atom(step, sc, gamma);
    add_atom(step, ac, -gamma);
    P = P + step;
    v.iterations = it + 1;
  }
  v.status = Membership::Inconclusive;
  v.residual = frob_norm(P - X);
  v.runtime_s = seconds_since(t0);
  return v;
}

namespace {

DenseMatrix psd_clip(const DenseMatrix& M) {
  EighResult e = symmetric_eigh(M, 1e-10);
  const int n = M.rows;
  DenseMatrix out(n, n);
  for (int k = 0; k < n; ++k) {
    double lam = e.eigenvalues[k];
    if (lam <= 0) break;
    for (int i = 0; i < n; ++i) {
      double qi = lam * e.vectors(i, k);
      if (qi == 0) continue;
      for (int j = 0; j < n; ++j) out(i, j) += qi * e.vectors(j, k);
    }
  }
  return out;
}

// Feasibility geometry after the subspace reduction: every certifying witness
// has the form M = vv^T + U W U^T with U an orthonormal basis of
// {vec(S V) : S symmetric, v_i^T S v_i = 0} and W psd. The eigen-equation
// M v = N v holds by construction, and the remaining block-structure
// constraints are affine in W, so the alternating projections run between the
// psd cone in W-space (which has interior) and one affine subspace.
struct WitnessSpace {
  int N = 0, r = 0, n = 0, m = 0;
  DenseMatrix U;          // n x m, orthonormal columns spanning V'sym
  std::vector<double> v;  // vec(V)
  // affine constraints A what = b over scaled coordinates what of sym(m)
  DenseMatrix A;
  std::vector<double> b;
  EighResult AAt;  // of A A^T, for the exact projection

  explicit WitnessSpace(const VectorSystem& sys) : N(sys.N), r(sys.r), n(sys.N * sys.r) {
    v = sys.vec();
    // basis of {S : v_i^T S v_i = 0} inside sym(r), via the constraint kernel
    const int d = r * (r + 1) / 2;
    std::vector<std::pair<int, int>> sym_idx;
    for (int p = 0; p < r; ++p)
      for (int q = p; q < r; ++q) sym_idx.emplace_back(p, q);
    DenseMatrix C(N, d);
    for (int i = 0; i < N; ++i)
      for (int a = 0; a < d; ++a) {
        auto [p, q] = sym_idx[a];
        C(i, a) = (p == q) ? sys.V(p, i) * sys.V(p, i) : 2.0 * sys.V(p, i) * sys.V(q, i);
      }
    EighResult ec = symmetric_eigh(C.transpose() * C, 1e-12);
    double lmax = std::max(1.0, std::fabs(ec.eigenvalues.front()));
    std::vector<std::vector<double>> cols;
    for (int k = 0; k < d; ++k) {
      if (std::fabs(ec.eigenvalues[k]) > 1e-9 * lmax) continue;
      DenseMatrix S(r, r);
      for (int a = 0; a < d; ++a) {
        auto [p, q] = sym_idx[a];
        S(p, q) += ec.vectors(a, k);
        if (p != q) S(q, p) += ec.vectors(a, k);
      }
      std::vector<double> u(n, 0.0);
      for (int i = 0; i < N; ++i)
        for (int p = 0; p < r; ++p) {
          double s = 0;
          for (int q = 0; q < r; ++q) s += S(p, q) * sys.V(q, i);
          u[i * r + p] = s;
        }
      cols.push_back(std::move(u));
    }
    // orthonormalize the spanning set in R^n
    std::vector<std::vector<double>> ortho;
    for (auto& cvec : cols) {
      std::vector<double> u = cvec;
      for (int rep = 0; rep < 2; ++rep)
        for (auto& bvec : ortho) {
          double dp = 0;
          for (int t = 0; t < n; ++t) dp += u[t] * bvec[t];
          for (int t = 0; t < n; ++t) u[t] -= dp * bvec[t];
        }
      double nrm = 0;
      for (double x : u) nrm += x * x;
      nrm = std::sqrt(nrm);
      if (nrm < 1e-8) continue;
      for (double& x : u) x /= nrm;
      ortho.push_back(std::move(u));
    }
    m = static_cast<int>(ortho.size());
    U = DenseMatrix(n, m);
    for (int c = 0; c < m; ++c)
      for (int t = 0; t < n; ++t) U(t, c) = ortho[c][t];
    if (m == 0) return;

    // structure constraints on M = vv^T + U W U^T: diagonal blocks identity,
    // off-diagonal blocks symmetric; rows assembled over the Frobenius-scaled
    // coordinates (s<t entries carry sqrt(2))
    const int mm = m * (m + 1) / 2;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    const double rt2 = std::sqrt(0.5);  // 1/sqrt(2)
    auto blockval = [&](int s, int i, int p) { return U(i * r + p, s); };
    for (int i = 0; i < N; ++i)
      for (int p = 0; p < r; ++p)
        for (int q = p; q < r; ++q) {
          std::vector<double> row(mm, 0.0);
          int c = 0;
          for (int s = 0; s < m; ++s)
            for (int t = s; t < m; ++t, ++c) {
              double coef = blockval(s, i, p) * blockval(t, i, q) +
                            ((s != t) ? blockval(t, i, p) * blockval(s, i, q) : 0.0);
              row[c] = (s == t) ? coef : coef * rt2;
            }
          rows.push_back(std::move(row));
          rhs.push_back((p == q ? 1.0 : 0.0) - v[i * r + p] * v[i * r + q]);
        }
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j)
        for (int p = 0; p < r; ++p)
          for (int q = p + 1; q < r; ++q) {
            std::vector<double> row(mm, 0.0);
            int c = 0;
            for (int s = 0; s < m; ++s)
              for (int t = s; t < m; ++t, ++c) {
                double coef = blockval(s, i, p) * blockval(t, j, q) -
                              blockval(s, i, q) * blockval(t, j, p);
                if (s != t)
                  coef += blockval(t, i, p) * blockval(s, j, q) -
                          blockval(t, i, q) * blockval(s, j, p);
                row[c] = (s == t) ? coef : coef * rt2;
              }
            rows.push_back(std::move(row));
            rhs.push_back(-(v[i * r + p] * v[j * r + q] - v[i * r + q] * v[j * r + p]));
          }
    const int R = static_cast<int>(rows.size());
    A = DenseMatrix(R, mm);
    for (int rr = 0; rr < R; ++rr)
      for (int c = 0; c < mm; ++c) A(rr, c) = rows[rr][c];
    b = std::move(rhs);
    AAt = symmetric_eigh(A * A.transpose(), 1e-10);
  }

  std::vector<double> coords(const DenseMatrix& W) const {
    const double rt2 = std::sqrt(2.0);
    std::vector<double> what(m * (m + 1) / 2);
    int c = 0;
    for (int s = 0; s < m; ++s)
      for (int t = s; t < m; ++t, ++c) what[c] = (s == t) ? W(s, s) : rt2 * W(s, t);
    return what;
  }

  DenseMatrix matrix_of(const std::vector<double>& what) const {
    const double rt2 = std::sqrt(0.5);
    DenseMatrix W(m, m);
    int c = 0;
    for (int s = 0; s < m; ++s)
      for (int t = s; t < m; ++t, ++c) {
        double x = (s == t) ? what[c] : what[c] * rt2;
        W(s, t) = x;
        W(t, s) = x;
      }
    return W;
  }

  // exact orthogonal projection onto {A what = b}
  std::vector<double> project_affine(const std::vector<double>& what) const {
    const int R = A.rows;
    std::vector<double> res(R, 0.0);
    for (int rr = 0; rr < R; ++rr) {
      double s = -b[rr];
      for (int c = 0; c < A.cols; ++c) s += A(rr, c) * what[c];
      res[rr] = s;
    }
    // mu = (A A^T)^+ res
    double lmax = std::max(1.0, std::fabs(AAt.eigenvalues.front()));
    std::vector<double> mu(R, 0.0);
    for (int k = 0; k < R; ++k) {
      if (std::fabs(AAt.eigenvalues[k]) <= 1e-11 * lmax) continue;
      double s = 0;
      for (int t = 0; t < R; ++t) s += AAt.vectors(t, k) * res[t];
      s /= AAt.eigenvalues[k];
      for (int t = 0; t < R; ++t) mu[t] += AAt.vectors(t, k) * s;
    }
    std::vector<double> out = what;
    for (int rr = 0; rr < R; ++rr) {
      if (mu[rr] == 0) continue;
      for (int c = 0; c < A.cols; ++c) out[c] -= A(rr, c) * mu[rr];
    }
    return out;
  }

  double affine_residual(const std::vector<double>& what) const {
    double worst = 0;
    for (int rr = 0; rr < A.rows; ++rr) {
      double s = -b[rr];
      for (int c = 0; c < A.cols; ++c) s += A(rr, c) * what[c];
      worst = std::max(worst, std::fabs(s));
    }
    return worst;
  }

  DenseMatrix witness_of(const DenseMatrix& W) const {
    DenseMatrix M = outer(v, v);
    for (int s = 0; s < m; ++s)
      for (int t = 0; t < m; ++t) {
        if (W(s, t) == 0) continue;
        for (int i = 0; i < n; ++i) {
          double c = W(s, t) * U(i, s);
          if (c == 0) continue;
          for (int j = 0; j < n; ++j) M(i, j) += c * U(j, t);
        }
      }
    return M;
  }

  // vv^T structural residual, used when the subspace is trivial
  double base_residual() const {
    double worst = 0;
    for (int i = 0; i < N; ++i)
      for (int p = 0; p < r; ++p)
        for (int q = p; q < r; ++q)
          worst = std::max(worst,
                           std::fabs((p == q ? 1.0 : 0.0) - v[i * r + p] * v[i * r + q]));
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j)
        for (int p = 0; p < r; ++p)
          for (int q = p + 1; q < r; ++q)
            worst = std::max(worst, std::fabs(v[i * r + p] * v[j * r + q] -
                                              v[i * r + q] * v[j * r + p]));
    return worst;
  }
};

}  // namespace

MembershipVerdict e4_feasibility(const VectorSystem& sys, double tol, int max_iter,
                                 const DenseMatrix* warm_start) {
  const int N = sys.N, r = sys.r;
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < N; ++i) {
    double n2 = 0;
    for (int p = 0; p < r; ++p) n2 += sys.V(p, i) * sys.V(p, i);
    if (std::fabs(n2 - 1.0) > 1e-8) throw Error("e4_feasibility: vectors must be unit norm");
  }

  WitnessSpace ws(sys);
  MembershipVerdict verdict;

  if (ws.m == 0) {
    // vv^T is the only candidate (the perturbation subspace is trivial)
    double res = ws.base_residual();
    verdict.iterations = 1;
    verdict.runtime_s = seconds_since(t0);
    if (res <= 10 * tol) {
      verdict.status = Membership::Member;
      verdict.witness = BlockWitness{BlockLayout{N, r}, outer(ws.v, ws.v)};
    } else {
      verdict.status = Membership::NonMember;
      verdict.gap = res;
    }
    return verdict;
  }

  DenseMatrix W(ws.m, ws.m);
  if (warm_start && warm_start->rows == N * r) {
    // re-express a previous witness in the current subspace
    DenseMatrix D = *warm_start - outer(ws.v, ws.v);
    for (int s = 0; s < ws.m; ++s)
      for (int t = 0; t < ws.m; ++t) {
        double acc = 0;
        for (int i = 0; i < ws.n; ++i) {
          double c = ws.U(i, s);
          if (c == 0) continue;
          for (int j = 0; j < ws.n; ++j) acc += c * D(i, j) * ws.U(j, t);
        }
        W(s, t) = acc;
      }
  }

  DenseMatrix corr(ws.m, ws.m);  // Dykstra correction for the psd projection
  std::deque<double> gaps;
  for (int it = 1; it <= max_iter; ++it) {
    DenseMatrix WL = ws.matrix_of(ws.project_affine(ws.coords(W)));
    EighResult e = symmetric_eigh(WL, 1e-11);
    double lmax = e.eigenvalues.empty() ? 0.0 : std::max(1.0, e.eigenvalues.front());
    verdict.iterations = it;
    if (e.eigenvalues.back() >= -tol * lmax) {
      DenseMatrix M = ws.witness_of(WL);
      verdict.status = Membership::Member;
      verdict.gap = std::max(0.0, -e.eigenvalues.back());
      verdict.witness = BlockWitness{BlockLayout{N, r}, std::move(M)};
      verdict.runtime_s = seconds_since(t0);
      return verdict;
    }
    DenseMatrix Wp = psd_clip(WL + corr);
    corr = (WL + corr) - Wp;
    double gap = max_abs(WL - Wp);
    gaps.push_back(gap);
    if (gaps.size() > 220) gaps.pop_front();
    W = Wp;

    if (it > 300 && gaps.size() >= 200) {
      double lo = gaps[0], hi = gaps[0];
      for (double g : gaps) {
        lo = std::min(lo, g);
        hi = std::max(hi, g);
      }
      if (lo > 10 * tol && (hi - lo) <= 1e-3 * hi) {
        verdict.status = Membership::NonMember;
        verdict.gap = gap;
        verdict.runtime_s = seconds_since(t0);
        return verdict;
      }
    }
  }
  verdict.status = Membership::Inconclusive;
  verdict.residual = gaps.empty() ? 0.0 : gaps.back();
  verdict.runtime_s = seconds_since(t0);
  return verdict;
}


std::pair<DenseMatrix, DenseMatrix> random_directions(int N, uint64_t seed) {
  Xorshift64Star rng(seed);
  auto draw = [&]() {
    DenseMatrix A(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) {
        double x = rng.uniform_pm1();
        A(i, j) = A(j, i) = x;
      }
    return A;
  };
  DenseMatrix A1 = draw();
  double n1 = frob_norm(A1);
  A1 = A1.scaled(1.0 / n1);
  DenseMatrix A2 = draw();
  double d = dot(A1, A2);
  A2 = A2 - A1.scaled(d);
  A2 = A2.scaled(1.0 / frob_norm(A2));
  return {A1, A2};
}

namespace {

struct RayResult {
  double r_cut, r_e4, r_e2;
};

RayResult trace_ray(int N, const DenseMatrix& B, double btol) {
  auto member_e2 = [&](double t) {
    DenseMatrix X = DenseMatrix::identity(N) + B.scaled(t);
    return e2_membership(X, 1e-9).status == Membership::Member;
  };
  auto member_cut = [&](double t) {
    DenseMatrix X = DenseMatrix::identity(N) + B.scaled(t);
    MembershipVerdict v = cut_membership(X, 1e-7, 20000);
    if (v.status == Membership::Inconclusive) v = cut_membership(X, 1e-6, 60000);
    return v.status == Membership::Member;
  };
  DenseMatrix warm;
  auto member_e4 = [&](double t) {
    DenseMatrix X = DenseMatrix::identity(N) + B.scaled(t);
    EighResult e = symmetric_eigh(X, 1e-10);
    if (e.eigenvalues.back() < -1e-9) return false;  // outside E2 already
    DenseMatrix V = gram_factor(X, 1e-9);
    VectorSystem sys{N, V.rows, V, std::nullopt};
    const DenseMatrix* ws = (warm.rows == N * V.rows) ? &warm : nullptr;
    MembershipVerdict v = e4_feasibility(sys, 1e-7, 4000, ws);
    if (v.status == Membership::Inconclusive) v = e4_feasibility(sys, 1e-7, 12000, ws);
    if (v.status == Membership::Member && v.witness) warm = v.witness->M;
    return v.status == Membership::Member;
  };

  auto bisect = [&](auto member, double hint) {
    double lo = 0.0, hi = std::max(hint, 1e-2);
    while (member(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e6) throw Error("cross_section: ray appears unbounded");
    }
    while (hi - lo > btol) {
      double mid = 0.5 * (lo + hi);
      if (member(mid))
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  RayResult res;
  res.r_e2 = bisect(member_e2, 1.0);
  res.r_cut = bisect(member_cut, 0.5);
  warm = DenseMatrix();
  res.r_e4 = bisect(member_e4, res.r_cut);
  return res;
}

}  // namespace

CrossSection cross_section(int N, const DenseMatrix& A1, const DenseMatrix& A2, int angles,
                           double bisect_tol) {
  for (const DenseMatrix* A : {&A1, &A2}) {
    require_symmetric(*A, 1e-8, "cross_section direction");
    for (int i = 0; i < N; ++i)
      if (std::fabs((*A)(i, i)) > 1e-12)
        throw Error("cross_section: directions must have zero diagonal");
  }
  if (std::fabs(frob_norm(A1) - 1.0) > 1e-8 || std::fabs(frob_norm(A2) - 1.0) > 1e-8 ||
      std::fabs(dot(A1, A2)) > 1e-8)
    throw Error("cross_section: directions must be Frobenius-orthonormal");

  CrossSection cs;
  cs.A1 = A1;
  cs.A2 = A2;
  cs.theta.resize(angles);
  cs.radius_cut.resize(angles);
  cs.radius_e4.resize(angles);
  cs.radius_e2.resize(angles);

  std::vector<std::thread> pool;
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<int> next{0};
  auto run = [&]() {
    for (;;) {
      int k = next.fetch_add(1);
      if (k >= angles) return;
      double th = 2.0 * M_PI * k / angles;
      DenseMatrix B = A1.scaled(std::cos(th)) + A2.scaled(std::sin(th));
      RayResult r = trace_ray(N, B, bisect_tol);
      cs.theta[k] = th;
      cs.radius_cut[k] = r.r_cut;
      cs.radius_e4[k] = r.r_e4;
      cs.radius_e2[k] = r.r_e2;
    }
  };
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  return cs;
}

}  // namespace ell4
