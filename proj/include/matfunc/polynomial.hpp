// Copyright 2026 The matfunc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "matfunc/core.hpp"
#include "matfunc/dense_oracle.hpp"

namespace matfunc {

/// Polynomial in the monomial basis, optionally also held in the Chebyshev
/// basis. When `chebyshev` is non-empty it describes the same polynomial and
/// evaluators prefer it: high-degree approximants such as the inverse
/// expansion have monomial coefficients far beyond double precision, while
/// their Chebyshev coefficients stay bounded.
struct PolynomialSpec {
  std::vector<cplx> coefficients{cplx(0.0)};
  std::vector<cplx> chebyshev;
  /// Bound on |f - p| over the domain the polynomial was built for.
  double certified_error = 0.0;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  bool has_chebyshev() const { return !chebyshev.empty(); }

  static PolynomialSpec from_coefficients(std::vector<cplx> c) {
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    if (c.empty()) c.push_back(0.0);
    PolynomialSpec p;
    p.coefficients = std::move(c);
    return p;
  }

  static PolynomialSpec monomial(int m, cplx scale = 1.0) {
    if (m < 0) throw PreconditionError("monomial degree must be >= 0");
    std::vector<cplx> c(m + 1, 0.0);
    c[m] = scale;
    return from_coefficients(std::move(c));
  }

  /// Coefficients with every alpha_r replaced by conj(alpha_r).
  PolynomialSpec conjugate() const {
    PolynomialSpec p = *this;
    for (auto& c : p.coefficients) c = std::conj(c);
    for (auto& c : p.chebyshev) c = std::conj(c);
    return p;
  }
};

/// The four studied function families.
struct FunctionSpec {
  enum class Kind { Monomial, Chebyshev, Inverse, TimeEvolution };
  Kind kind = Kind::Monomial;
  int m = 1;
  double t = 0.0;
  double kappa = 2.0;
  double eps = 1e-3;

  static FunctionSpec monomial(int m) { return {Kind::Monomial, m, 0.0, 2.0, 1e-3}; }
  static FunctionSpec chebyshev(int m) { return {Kind::Chebyshev, m, 0.0, 2.0, 1e-3}; }
  static FunctionSpec inverse(double kappa, double eps) { return {Kind::Inverse, 1, 0.0, kappa, eps}; }
  static FunctionSpec timeevo(double t, double eps) { return {Kind::TimeEvolution, 1, t, 2.0, eps}; }

  void validate() const {
    switch (kind) {
      case Kind::Monomial:
      case Kind::Chebyshev:
        if (m < 0) throw PreconditionError("function degree must be >= 0");
        break;
      case Kind::Inverse:
        if (!(kappa > 1.0)) throw PreconditionError("inverse: kappa must exceed 1");
        if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("inverse: eps must lie in (0,1)");
        break;
      case Kind::TimeEvolution:
        if (!(eps > 0.0 && eps < std::exp(-1.0))) throw PreconditionError("timeevo: eps must lie in (0,1/e)");
        break;
    }
  }

  friend bool operator==(const FunctionSpec&, const FunctionSpec&) = default;
};

inline const char* function_kind_name(FunctionSpec::Kind k) {
  switch (k) {
    case FunctionSpec::Kind::Monomial: return "monomial";
    case FunctionSpec::Kind::Chebyshev: return "chebyshev";
    case FunctionSpec::Kind::Inverse: return "inverse";
    case FunctionSpec::Kind::TimeEvolution: return "timeevo";
  }
  return "?";
}

/// Horner in the monomial basis.
inline cplx horner(const std::vector<cplx>& c, cplx x) {
  cplx s = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
  return s;
}

/// Clenshaw summation of sum c_k T_k(x).
inline cplx clenshaw(const std::vector<cplx>& c, cplx x) {
  cplx b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) {
    const cplx b0 = c[k] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return (c.empty() ? cplx(0.0) : c[0]) + x * b1 - b2;
}

inline cplx eval_scalar(const PolynomialSpec& p, cplx x) {
  return p.has_chebyshev() ? clenshaw(p.chebyshev, x) : horner(p.coefficients, x);
}

/// Exact integer coefficients of T_m for m <= 40.
inline std::vector<std::int64_t> chebyshev_integer_coefficients(int m) {
  if (m < 0 || m > 40) throw PreconditionError("integer Chebyshev table covers degrees 0..40");
  std::vector<std::int64_t> prev{1}, cur{0, 1};
  if (m == 0) return prev;
  for (int k = 1; k < m; ++k) {
    std::vector<std::int64_t> next(k + 2, 0);
    for (int i = 0; i <= k; ++i) next[i + 1] += 2 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Monomial coefficients of sum c_k T_k. Exact integer T_k tables are used
/// up to degree 40; beyond that the recurrence runs in doubles and the
/// result inherits coefficients as large as 4^m, so cancellation can
/// destroy accuracy when the monomial form is evaluated.
inline std::vector<cplx> chebyshev_to_monomial(const std::vector<cplx>& c) {
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<cplx> out(std::max(d, 0) + 1, 0.0);
  if (d <= 40) {
    for (int k = 0; k <= d; ++k) {
      if (c[k] == 0.0) continue;
      const auto t = chebyshev_integer_coefficients(k);
      for (int i = 0; i <= k; ++i) out[i] += c[k] * static_cast<double>(t[i]);
    }
    return out;
  }
  std::vector<double> prev{1.0}, cur{0.0, 1.0};
  out[0] += c[0];
  out[1] += c[1];
  for (int k = 1; k < d; ++k) {
    std::vector<double> next(k + 2, 0.0);
    for (int i = 0; i <= k; ++i) next[i + 1] += 2.0 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    prev = std::move(cur);
    cur = std::move(next);
    for (int i = 0; i <= k + 1; ++i) out[i] += c[k + 1] * cur[i];
  }
  return out;
}

/// T_m with exact integer coefficients; every |coefficient| <= 4^m.
inline PolynomialSpec chebyshev_poly(int m) {
  if (m < 0) throw PreconditionError("Chebyshev degree must be >= 0");
  if (static_cast<std::size_t>(m) + 1 > caps().poly_degree) throw CapExceeded("Chebyshev degree exceeds cap");
  std::vector<cplx> cheb(m + 1, 0.0);
  cheb[m] = 1.0;
  PolynomialSpec p = PolynomialSpec::from_coefficients(chebyshev_to_monomial(cheb));
  p.chebyshev = std::move(cheb);
  return p;
}

/// Chebyshev coefficients of a degree-d polynomial from its values at the
/// d+1 Chebyshev nodes (exact up to rounding).
inline std::vector<cplx> chebyshev_interpolate(const std::function<cplx(double)>& f, int d) {
  const int n = d + 1;
  std::vector<cplx> vals(n);
  std::vector<double> theta(n);
  for (int j = 0; j < n; ++j) {
    theta[j] = kPi * (j + 0.5) / n;
    vals[j] = f(std::cos(theta[j]));
  }
  std::vector<cplx> c(n, 0.0);
  for (int k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) s += vals[j] * std::cos(k * theta[j]);
    c[k] = s * (2.0 / n);
  }
  c[0] *= 0.5;
  return c;
}

/// Largest |f(x) - p(x)| over `points` evenly spaced samples of [a, b].
inline double grid_error(const PolynomialSpec& p, const std::function<cplx(double)>& f, double a, double b,
                         int points = 10000) {
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    const double x = points == 1 ? a : a + (b - a) * k / (points - 1);
    worst = std::max(worst, std::abs(f(x) - eval_scalar(p, x)));
  }
  return worst;
}

/// g(x) = (1 - (1-x^2)^b)/x with b = ceil(kappa^2 ln(kappa/eps)).
///
/// Odd, degree 2b-1, and within eps of 1/x on [-1,-1/kappa] u [1/kappa,1].
inline PolynomialSpec inverse_poly(double kappa, double eps) {
  if (!(kappa > 1.0)) throw PreconditionError("inverse_poly: kappa must exceed 1");
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("inverse_poly: eps must lie in (0,1)");
  const double bd = std::ceil(kappa * kappa * std::log(kappa / eps));
  if (2.0 * bd > static_cast<double>(caps().poly_degree))
    throw CapExceeded("inverse_poly: degree " + std::to_string(2.0 * bd - 1) + " exceeds cap");
  const int b = std::max(1, static_cast<int>(bd));
  const int d = 2 * b - 1;
  // x^{2i-1} carries (-1)^{i+1} C(b,i).
  std::vector<cplx> mono(d + 1, 0.0);
  double binom = 1.0;
  for (int i = 1; i <= b; ++i) {
    binom = binom * (b - i + 1) / i;
    mono[2 * i - 1] = (i % 2 == 1 ? 1.0 : -1.0) * binom;
  }
  auto g = [b](double x) -> cplx {
    if (x == 0.0) return 0.0;
    return -std::expm1(b * std::log1p(-x * x)) / x;
  };
  PolynomialSpec p;
  p.coefficients = std::move(mono);
  p.chebyshev = chebyshev_interpolate(g, d);
  for (int k = 0; k <= d; k += 2) p.chebyshev[k] = 0.0;
  auto inv = [](double x) -> cplx { return 1.0 / x; };
  p.certified_error = std::max(grid_error(p, inv, 1.0 / kappa, 1.0), grid_error(p, inv, -1.0, -1.0 / kappa));
  return p;
}

/// J_k(x) from the alternating power series, summed in long double with
/// Neumaier compensation. Valid for |x| <= 20 and k <= 200.
inline double bessel_j(int k, double x) {
  if (k < 0) throw PreconditionError("bessel_j: order must be >= 0");
  if (k > 200 || std::abs(x) > 20.0) throw CapExceeded("bessel_j: supported range is |x| <= 20, k <= 200");
  if (x == 0.0) return k == 0 ? 1.0 : 0.0;
  const long double h = static_cast<long double>(x) / 2.0L;
  long double term = 1.0L;
  for (int i = 1; i <= k; ++i) term *= h / i;
  long double sum = 0.0L, comp = 0.0L;
  const long double h2 = h * h;
  for (int m = 0; m < 400; ++m) {
    const long double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
    term = -term * h2 / (static_cast<long double>(m + 1) * (m + 1 + k));
    if (m > std::fabs(h) && std::fabs(term) < 1e-30L * std::fabs(sum)) break;
    if (term == 0.0L) break;
  }
  return static_cast<double>(sum + comp);
}

/// Tail bound sum_{k>R} 2 (|t|/2)^k / k!.
inline double anger_jacobi_tail(double t, int R) {
  const double h = std::abs(t) / 2.0;
  double term = 1.0;
  for (int k = 1; k <= R + 1; ++k) term *= h / k;
  double s = 0.0;
  for (int k = R + 1; k < R + 400; ++k) {
    s += 2.0 * term;
    term *= h / (k + 1);
    if (k > h && term < 1e-18 * s) break;
  }
  return s;
}

/// e^{ixt} ~ J_0(t) + 2 sum_{k=1}^R i^k J_k(t) T_k(x), with the smallest R
/// whose tail bound is at most 2 eps.
inline PolynomialSpec anger_jacobi_poly(double t, double eps) {
  if (t == 0.0) throw PreconditionError("anger_jacobi_poly: t = 0 is the identity; handle at the caller");
  if (!(eps > 0.0 && eps < std::exp(-1.0))) throw PreconditionError("anger_jacobi_poly: eps must lie in (0,1/e)");
  int R = 1;
  while (anger_jacobi_tail(t, R) > 2.0 * eps) ++R;
  if (static_cast<std::size_t>(R) + 1 > caps().poly_degree) throw CapExceeded("anger_jacobi_poly: degree cap");
  std::vector<cplx> cheb(R + 1);
  cheb[0] = bessel_j(0, t);
  for (int k = 1; k <= R; ++k) cheb[k] = 2.0 * i_pow(k) * bessel_j(k, t);
  PolynomialSpec p = PolynomialSpec::from_coefficients(chebyshev_to_monomial(cheb));
  p.chebyshev = std::move(cheb);
  p.certified_error = anger_jacobi_tail(t, R);
  return p;
}

struct TaylorFragments {
  int r = 1;             // fragments
  int K = 0;             // truncation order per fragment
  double remainder = 0;  // r (t/r)^{K+1}/(K+1)! e^{t/r}
};

/// Fragmentation e^{iAt} = (e^{iAt/r})^r with each factor truncated at K.
inline TaylorFragments taylor_fragment_spec(double t, double gamma, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("taylor_fragment_spec: eps must lie in (0,1)");
  if (!(gamma >= 0.0)) throw PreconditionError("taylor_fragment_spec: gamma must be >= 0");
  const double th = gamma * std::abs(t);
  TaylorFragments f;
  f.r = std::max(1, static_cast<int>(std::ceil(th / std::log(2.0) - 1e-12)));
  const double u = th / f.r;
  double term = u;  // u^{K+1}/(K+1)! at K = 0
  for (int K = 0;; ++K) {
    const double rem = f.r * term * std::exp(u);
    if (rem <= eps || u == 0.0) {
      f.K = K;
      f.remainder = u == 0.0 ? 0.0 : rem;
      return f;
    }
    term *= u / (K + 2);
  }
}

/// Monomial coefficients of (sum_{k<=K} (i t x / r)^k / k!)^r.
inline PolynomialSpec taylor_fragment_poly(double t, const TaylorFragments& f) {
  std::vector<cplx> frag(f.K + 1);
  double fact = 1.0;
  for (int k = 0; k <= f.K; ++k) {
    if (k > 0) fact *= k;
    frag[k] = std::pow(cplx(0.0, t / f.r), k) / fact;
  }
  std::vector<cplx> acc{1.0};
  for (int i = 0; i < f.r; ++i) {
    std::vector<cplx> next(acc.size() + f.K, 0.0);
    for (std::size_t a = 0; a < acc.size(); ++a)
      for (int k = 0; k <= f.K; ++k) next[a + k] += acc[a] * frag[k];
    acc = std::move(next);
  }
  PolynomialSpec p = PolynomialSpec::from_coefficients(std::move(acc));
  p.certified_error = f.remainder;
  return p;
}

/// ||p(bx)||_l1 = sum |alpha_r| b^r.
inline double l1_rescaled_norm(const PolynomialSpec& p, double b) {
  double s = 0.0, pw = 1.0;
  for (const auto& c : p.coefficients) {
    s += std::abs(c) * pw;
    pw *= b;
  }
  return s;
}

/// Exact scalar function of a spec, as used by the dense oracle.
inline ScalarFunction scalar_function(const FunctionSpec& f) {
  switch (f.kind) {
    case FunctionSpec::Kind::Monomial: {
      const int m = f.m;
      return [m](double x) -> cplx { return std::pow(x, m); };
    }
    case FunctionSpec::Kind::Chebyshev: {
      const int m = f.m;
      return [m](double x) -> cplx {
        double a = 1.0, b = x;
        if (m == 0) return 1.0;
        for (int k = 1; k < m; ++k) {
          const double c = 2.0 * x * b - a;
          a = b;
          b = c;
        }
        return b;
      };
    }
    case FunctionSpec::Kind::Inverse:
      return guarded_inverse();
    case FunctionSpec::Kind::TimeEvolution: {
      const double t = f.t;
      return [t](double x) -> cplx { return std::exp(cplx(0.0, x * t)); };
    }
  }
  throw PreconditionError("unknown function kind");
}

/// Polynomial realization of a spec. Approximating families use `eps`
/// (defaulting to the spec's own) as their approximation budget.
inline PolynomialSpec to_polynomial(const FunctionSpec& f, double eps = -1.0) {
  f.validate();
  const double e = eps > 0 ? eps : f.eps;
  switch (f.kind) {
    case FunctionSpec::Kind::Monomial: return PolynomialSpec::monomial(f.m);
    case FunctionSpec::Kind::Chebyshev: return chebyshev_poly(f.m);
    case FunctionSpec::Kind::Inverse: return inverse_poly(f.kappa, e);
    case FunctionSpec::Kind::TimeEvolution:
      if (f.t == 0.0) return PolynomialSpec::monomial(0);
      return anger_jacobi_poly(f.t, std::min(e, 0.36));
  }
  throw PreconditionError("unknown function kind");
}

}  // namespace matfunc
