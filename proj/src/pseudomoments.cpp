#include "ell4/pseudomoments.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "ell4/eigh.hpp"
#include "ell4/witnesses.hpp"

namespace ell4 {

namespace {

int isqrt_exact(int n) {
  int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  return s;
}

std::vector<int> odd_set_of(std::initializer_list<int> idx) {
  std::map<int, int> cnt;
  for (int t : idx) cnt[t]++;
  std::vector<int> odd;
  for (auto& [t, c] : cnt)
    if (c % 2) odd.push_back(t);
  return odd;
}

}  // namespace

Degree4Validation validate_degree4(const Degree4Moments& m, double tol) {
  const int N = m.N;
  if (m.Y.rows != N * N || m.Y.cols != N * N) {
    int side = m.Y.rows;
    int n = isqrt_exact(side);
    if (n * n != side) throw Error("validate_degree4: dimension is not a perfect square");
    throw Error("validate_degree4: stored N inconsistent with matrix dimension");
  }

  Degree4Validation rep;
  auto idx = [N](int i, int j) { return i * N + j; };

  if (m.exact) {
    const RationalMatrix& Yq = *m.exact;
    Rational worst(0);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        Rational base = Yq(idx(i, j), idx(0, 0));
        for (int k = 1; k < N; ++k) worst = std::max(worst, rat_abs(Yq(idx(i, j), idx(k, k)) - base));
      }
    rep.marginal.violation = to_double(worst);
    Rational worst3(0);
    for (int i = 0; i < N; ++i) worst3 = std::max(worst3, rat_abs(Yq(idx(i, i), idx(i, i)) - 1));
    rep.unit_diagonal.violation = to_double(worst3);
    Rational worst4(0);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
          for (int l = 0; l < N; ++l) {
            const Rational& y = Yq(idx(i, j), idx(k, l));
            worst4 = std::max(worst4, rat_abs(y - Yq(idx(j, i), idx(k, l))));
            worst4 = std::max(worst4, rat_abs(y - Yq(idx(i, j), idx(l, k))));
            worst4 = std::max(worst4, rat_abs(y - Yq(idx(i, k), idx(j, l))));
          }
    rep.permutation.violation = to_double(worst4);
  } else {
    const DenseMatrix& Y = m.Y;
    double worst = 0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        double base = Y(idx(i, j), idx(0, 0));
        for (int k = 1; k < N; ++k) worst = std::max(worst, std::fabs(Y(idx(i, j), idx(k, k)) - base));
      }
    rep.marginal.violation = worst;
    double worst3 = 0;
    for (int i = 0; i < N; ++i) worst3 = std::max(worst3, std::fabs(Y(idx(i, i), idx(i, i)) - 1.0));
    rep.unit_diagonal.violation = worst3;
    double worst4 = 0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
          for (int l = 0; l < N; ++l) {
            double y = Y(idx(i, j), idx(k, l));
            worst4 = std::max(worst4, std::fabs(y - Y(idx(j, i), idx(k, l))));
            worst4 = std::max(worst4, std::fabs(y - Y(idx(i, j), idx(l, k))));
            worst4 = std::max(worst4, std::fabs(y - Y(idx(i, k), idx(j, l))));
          }
    rep.permutation.violation = worst4;
  }

  // asymmetry is reported through condition 4; the psd check uses the
  // symmetric part
  DenseMatrix Ysym = m.Y;
  for (int p = 0; p < N * N; ++p)
    for (int q = p + 1; q < N * N; ++q) {
      double v = 0.5 * (Ysym(p, q) + Ysym(q, p));
      Ysym(p, q) = Ysym(q, p) = v;
    }
  EighResult e = symmetric_eigh(Ysym, 1e-10);
  rep.min_eigenvalue = e.eigenvalues.back();
  double scale = std::max(1.0, std::fabs(e.eigenvalues.front()));
  rep.psd.violation = std::max(0.0, -rep.min_eigenvalue);
  rep.psd.pass = rep.min_eigenvalue >= -tol * scale;
  rep.marginal.pass = rep.marginal.violation <= tol;
  rep.unit_diagonal.pass = rep.unit_diagonal.violation <= tol;
  rep.permutation.pass = rep.permutation.violation <= tol;

  // degree 2 minor: X_ij = Y_(ij)(kk) for any k by condition 2
  rep.X = DenseMatrix(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) rep.X(i, j) = m.Y(idx(i, j), idx(0, 0));
  return rep;
}

DenseMatrix extract_degree2(const Degree4Moments& m, double tol) {
  Degree4Validation rep = validate_degree4(m, tol);
  if (!rep.marginal.pass || !rep.unit_diagonal.pass || !rep.permutation.pass)
    throw Error("extract_degree2: conditions 2-4 violated beyond tol");
  return rep.X;
}

RationalMatrix extract_degree2_exact(const Degree4Moments& m) {
  if (!m.exact) throw Error("extract_degree2_exact: no exact storage");
  const int N = m.N;
  RationalMatrix X(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) X(i, j) = (*m.exact)(i * N + j, 0);
  return X;
}

Degree4Moments etf_degree4(const VectorSystem& sys) {
  FrameReport rep = analyze_frame(sys);
  if (!rep.is_etf) throw Error("etf_degree4: input is not an ETF");
  const int N = sys.N, r = sys.r;

  Degree4Moments out;
  out.N = N;
  if (r == 1) {
    std::vector<int> signs(N);
    for (int i = 0; i < N; ++i) signs[i] = sys.V(0, i) > 0 ? 1 : -1;
    return rank_one_degree4(signs);
  }
  if (2 * N >= r * (r + 1)) {
    std::ostringstream msg;
    msg << "etf_degree4: maximal ETF, N = " << N << " is not below r(r+1)/2 = " << r * (r + 1) / 2
        << " (membership fails exactly at this boundary)";
    throw MaximalEtfError(msg.str());
  }

  auto idx = [N](int i, int j) { return i * N + j; };
  if (sys.gram_exact) {
    const RationalMatrix& X = *sys.gram_exact;
    Rational denom = rat(r * (r + 1), 2) - N;
    Rational c1 = rat(r * (r - 1), 2) / denom;
    Rational c2 = rat(r, 1) * rat(r, 1) * (1 - rat(1, N)) / denom;
    RationalMatrix Y(N * N, N * N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
          for (int l = 0; l < N; ++l) {
            Rational smix = X(i, j) * X(k, l) + X(i, k) * X(j, l) + X(i, l) * X(j, k);
            Rational s4(0);
            for (int t = 0; t < N; ++t) s4 += X(i, t) * X(j, t) * X(k, t) * X(l, t);
            Y(idx(i, j), idx(k, l)) = c1 * smix - c2 * s4;
          }
    out.Y = to_dense(Y);
    out.exact = std::move(Y);
  } else {
    DenseMatrix X = sys.gram();
    double denom = 0.5 * r * (r + 1) - N;
    double c1 = 0.5 * r * (r - 1) / denom;
    double c2 = static_cast<double>(r) * r * (1.0 - 1.0 / N) / denom;
    DenseMatrix Y(N * N, N * N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
          for (int l = 0; l < N; ++l) {
            double smix = X(i, j) * X(k, l) + X(i, k) * X(j, l) + X(i, l) * X(j, k);
            double s4 = 0;
            for (int t = 0; t < N; ++t) s4 += X(i, t) * X(j, t) * X(k, t) * X(l, t);
            Y(idx(i, j), idx(k, l)) = c1 * smix - c2 * s4;
          }
    out.Y = std::move(Y);
  }
  return out;
}

Degree4Moments etf_degree4_projector_form(const VectorSystem& sys) {
  FrameReport rep = analyze_frame(sys);
  if (!rep.is_etf) throw Error("etf_degree4_projector_form: input is not an ETF");
  const int N = sys.N, r = sys.r;
  if (r <= 1) throw Error("etf_degree4_projector_form: requires r > 1");
  if (2 * N >= r * (r + 1)) throw MaximalEtfError("etf_degree4_projector_form: maximal ETF");

  DenseMatrix P = vsym_prime_projector(sys);
  // isometric embedding C = sqrt(r/N) (I_N (x) V^T) carries V'sym into the
  // perturbation subspace in vec coordinates
  DenseMatrix C(N * N, N * r);
  double s = std::sqrt(static_cast<double>(r) / N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int p = 0; p < r; ++p) C(i * N + j, i * r + p) = s * sys.V(p, j);
  DenseMatrix Pvec = C * P * C.transpose();

  DenseMatrix X = sys.gram();
  std::vector<double> vecX(static_cast<size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) vecX[i * N + j] = X(i, j);
  double c = static_cast<double>(N) * N * (1.0 - 1.0 / r) / (0.5 * r * (r + 1) - N);

  Degree4Moments out;
  out.N = N;
  out.Y = outer(vecX, vecX) + Pvec.scaled(c);
  return out;
}

Degree4Moments parity_degree4(int N) {
  Degree4Moments out;
  out.N = N;
  RationalMatrix Y(N * N, N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l)
          Y(i * N + j, k * N + l) = odd_set_of({i, j, k, l}).empty() ? 1 : 0;
  out.Y = to_dense(Y);
  out.exact = std::move(Y);
  return out;
}

Degree4Moments rank_one_degree4(const std::vector<int>& signs) {
  const int N = static_cast<int>(signs.size());
  Degree4Moments out;
  out.N = N;
  RationalMatrix Y(N * N, N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l)
          Y(i * N + j, k * N + l) = signs[i] * signs[j] * signs[k] * signs[l];
  out.Y = to_dense(Y);
  out.exact = std::move(Y);
  return out;
}

DenseMatrix pseudocovariance(const Degree4Moments& m, double tol) {
  DenseMatrix X = extract_degree2(m, tol);
  const int N = m.N;
  std::vector<double> vecX(static_cast<size_t>(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) vecX[i * N + j] = X(i, j);
  return m.Y - outer(vecX, vecX);
}

Rational laurent_entry(int N, int odd_size) {
  if (odd_size % 2 != 0) throw Error("laurent_entry: odd set sizes are even");
  Rational v(1);
  for (int i = 1; i < odd_size; i += 2) v *= rat(i, N - i);
  if ((odd_size / 2) % 2 != 0) v = -v;
  return v;
}

namespace {

// strings of fixed length L over [N], lexicographic; digits of the index
std::vector<int> string_of_index(int idx, int N, int L) {
  std::vector<int> s(L);
  for (int t = L - 1; t >= 0; --t) {
    s[t] = idx % N;
    idx /= N;
  }
  return s;
}

std::vector<int> odd_of_strings(const std::vector<int>& s, const std::vector<int>& t, int N) {
  std::vector<int> cnt(N, 0);
  for (int x : s) cnt[x] ^= 1;
  for (int x : t) cnt[x] ^= 1;
  std::vector<int> odd;
  for (int x = 0; x < N; ++x)
    if (cnt[x]) odd.push_back(x);
  return odd;
}

}  // namespace

TruncatedMoments laurent_moments(int N, int d) {
  if (N % 2 == 0) throw Error("laurent_moments: N must be odd");
  if (d % 2 != 0 || d < 2) throw Error("laurent_moments: d must be even and >= 2");
  if (d > N - 1) throw Error("laurent_moments: d > N-1 makes the product denominators vanish");
  const int L = d / 2;
  long side = 1;
  for (int t = 0; t < L; ++t) {
    side *= N;
    if (side > 2000) throw Error("laurent_moments: N^{d/2} exceeds the 2000 materialization cap");
  }
  TruncatedMoments out;
  out.N = N;
  out.d = d;
  out.Z = RationalMatrix(static_cast<int>(side), static_cast<int>(side));
  for (int p = 0; p < side; ++p) {
    std::vector<int> s = string_of_index(p, N, L);
    for (int q = p; q < side; ++q) {
      std::vector<int> t = string_of_index(q, N, L);
      Rational v = laurent_entry(N, static_cast<int>(odd_of_strings(s, t, N).size()));
      out.Z(p, q) = v;
      out.Z(q, p) = v;
    }
  }
  return out;
}

int complete_index_count(int N, int d) {
  int total = 0, p = 1;
  for (int len = 0; len <= d / 2; ++len) {
    total += p;
    p *= N;
  }
  return total;
}

CompleteMoments complete_from_truncated(const TruncatedMoments& t, double tol) {
  const int N = t.N, d = t.d, L = d / 2;
  TruncatedValidation val = validate_string_moments(t.Z, N, L, L, tol);
  if (!val.all_pass()) throw Error("complete_from_truncated: truncated input fails validation");

  int total = complete_index_count(N, d);
  // enumerate strings by length then lex; pad with the all-1 string e_k
  std::vector<std::vector<int>> strings;
  strings.reserve(total);
  for (int len = 0; len <= L; ++len) {
    int cnt = 1;
    for (int q = 0; q < len; ++q) cnt *= N;
    for (int p = 0; p < cnt; ++p) strings.push_back(string_of_index(p, N, len));
  }
  auto trunc_index = [&](const std::vector<int>& s) {
    int idx = 0;
    for (size_t q = 0; q < s.size(); ++q) idx = idx * N + s[q];
    for (size_t q = s.size(); q < static_cast<size_t>(L); ++q) idx = idx * N;  // append symbol 0
    return idx;
  };

  CompleteMoments out;
  out.N = N;
  out.d = d;
  out.Z = RationalMatrix(total, total);
  for (int p = 0; p < total; ++p)
    for (int q = 0; q < total; ++q)
      out.Z(p, q) = t.Z(trunc_index(strings[p]), trunc_index(strings[q]));
  return out;
}

TruncatedValidation validate_string_moments(const RationalMatrix& Z, int N, int min_len,
                                            int max_len, double tol) {
  // rebuild the string list to map row indices to strings
  std::vector<std::vector<int>> strings;
  for (int len = min_len; len <= max_len; ++len) {
    int cnt = 1;
    for (int q = 0; q < len; ++q) cnt *= N;
    for (int p = 0; p < cnt; ++p) strings.push_back(string_of_index(p, N, len));
  }
  if (static_cast<int>(strings.size()) != Z.rows)
    throw Error("validate_string_moments: index count mismatch");

  TruncatedValidation rep;
  std::map<std::vector<int>, Rational> by_class;
  Rational worst2(0), worst3(0);
  for (int p = 0; p < Z.rows; ++p)
    for (int q = p; q < Z.rows; ++q) {
      std::vector<int> od = odd_of_strings(strings[p], strings[q], N);
      auto it = by_class.find(od);
      if (it == by_class.end())
        by_class.emplace(od, Z(p, q));
      else
        worst2 = std::max(worst2, rat_abs(Z(p, q) - it->second));
      if (od.empty()) worst3 = std::max(worst3, rat_abs(Z(p, q) - 1));
    }
  rep.odd_set_consistency.violation = to_double(worst2);
  rep.unit_class.violation = to_double(worst3);
  rep.odd_set_consistency.pass = rep.odd_set_consistency.violation <= tol;
  rep.unit_class.pass = rep.unit_class.violation <= tol;

  EighResult e = symmetric_eigh(to_dense(Z), 1e-10);
  rep.min_eigenvalue = e.eigenvalues.back();
  rep.psd.violation = std::max(0.0, -rep.min_eigenvalue);
  rep.psd.pass = rep.min_eigenvalue >= -tol;
  return rep;
}

OddSetFunctional collapse_functional(const RationalMatrix& A) {
  require_symmetric(A, "collapse_functional input");
  int side = A.rows;
  int N = isqrt_exact(side);
  if (N * N != side) throw Error("collapse_functional: dimension is not a perfect square");
  OddSetFunctional f;
  for (int p = 0; p < side; ++p)
    for (int q = 0; q < side; ++q) {
      if (A(p, q) == 0) continue;
      std::vector<int> od = odd_set_of({p / N, p % N, q / N, q % N});
      f[od] += A(p, q);
    }
  for (auto it = f.begin(); it != f.end();) {
    if (it->second == 0 && !it->first.empty())
      it = f.erase(it);
    else
      ++it;
  }
  return f;
}

Rational apply_functional(const OddSetFunctional& f,
                          const std::map<std::vector<int>, Rational>& class_values) {
  Rational s(0);
  for (const auto& [od, coef] : f) {
    auto it = class_values.find(od);
    if (it == class_values.end()) throw Error("apply_functional: missing class value");
    s += coef * it->second;
  }
  return s;
}

}  // namespace ell4
