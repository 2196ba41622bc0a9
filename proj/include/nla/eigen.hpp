/*
 * Copyright 2026 The nla Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nla/complanart.hpp"
#include "nla/numeric.hpp"
#include "nla/resultant.hpp"
#include "nla/upoly.hpp"

namespace nla {

// Homogeneous polynomial map z_i -> A_i(z) of degree s in the variables `vars`; other
// registry variables are parameters.
struct PolyMap {
  std::vector<MPoly> components;
  std::vector<std::string> vars;
  int s = 0;

  static PolyMap make(std::vector<MPoly> components, std::vector<std::string> vars,
                      std::optional<int> degree = {}) {
    if (components.empty()) throw ScopeError("empty map");
    if (components.size() != vars.size()) throw ScopeError("a map needs one component per variable");
    for (const auto& p : components) components.front().check(p);
    auto idx = indices_of(*components.front().registry(), vars);
    std::optional<int> s = degree;
    for (const auto& p : components) {
      if (p.is_zero()) continue;
      int d = require_homogeneous(p, idx);
      if (s && *s != d) throw NotHomogeneous("map components have different degrees");
      s = d;
    }
    if (!s) throw ScopeError("the zero map needs a declared degree");
    return PolyMap{std::move(components), std::move(vars), *s};
  }

  size_t n() const { return vars.size(); }
  const RegistryPtr& registry() const { return components.front().registry(); }
  std::vector<size_t> var_indices() const { return indices_of(*registry(), vars); }
  std::vector<size_t> parameters() const {
    std::vector<size_t> out;
    auto idx = var_indices();
    for (size_t v = 0; v < registry()->size(); ++v) {
      if (std::find(idx.begin(), idx.end(), v) != idx.end()) continue;
      for (const auto& p : components)
        if (p.depends_on(v)) {
          out.push_back(v);
          break;
        }
    }
    return out;
  }
  bool parametric() const { return !parameters().empty(); }

  // A(v) for polynomial arguments.
  std::vector<MPoly> apply(const std::vector<MPoly>& v) const {
    std::map<size_t, MPoly> sub;
    auto idx = var_indices();
    for (size_t i = 0; i < idx.size(); ++i) sub.emplace(idx[i], v[i]);
    std::vector<MPoly> out;
    for (const auto& p : components) out.push_back(p.substitute(sub));
    return out;
  }

  std::vector<cplx> apply(const std::vector<cplx>& v) const {
    std::vector<cplx> x(registry()->size(), 0);
    auto idx = var_indices();
    for (size_t i = 0; i < idx.size(); ++i) x[idx[i]] = v[i];
    std::vector<cplx> out;
    for (const auto& p : components) out.push_back(p.evaluate_numeric(x));
    return out;
  }

  PolyMap specialized(const std::map<std::string, Rational>& values) const {
    std::map<size_t, MPoly> sub;
    for (const auto& [name, v] : values) sub.emplace(registry()->require(name), MPoly(registry(), v));
    std::vector<MPoly> out;
    for (const auto& p : components) out.push_back(p.substitute(sub));
    return PolyMap{out, vars, s};
  }
};

// c_{n|s}: (s^n - 1)/(s - 1), and n for linear maps.
inline long eigen_count_expected(size_t n, int s) {
  if (s < 1) throw ScopeError("map degree must be positive");
  if (s == 1) return static_cast<long>(n);
  long p = 1;
  for (size_t i = 0; i < n; ++i) p *= s;
  return (p - 1) / (s - 1);
}

// A_i(x) - y^{s-1} x_i = 0 in the variables x_1..x_n, y.
inline PolySystem homogenized_eigen_system(const PolyMap& A) {
  const auto& reg = A.registry();
  const std::string y = fresh_name(*reg, "y");
  auto ext = reg->extended({y}, VarKind::main);
  MPoly yp = MPoly::variable(ext, y).pow(static_cast<unsigned>(A.s - 1));
  std::vector<MPoly> polys;
  for (size_t i = 0; i < A.n(); ++i)
    polys.push_back(A.components[i].in_registry(ext) - yp * MPoly::variable(ext, A.vars[i]));
  auto vars = A.vars;
  vars.push_back(y);
  return PolySystem::make(polys, vars, std::vector<int>(A.n(), A.s));
}

// x_i A_j - x_j A_i for i < j, or A_i x_j - A_j x_i for i != j when j is fixed; zero entries dropped.
inline std::vector<MPoly> cross_equations(const PolyMap& A, std::optional<size_t> fixed_j = {}) {
  const auto& reg = A.registry();
  std::vector<MPoly> out;
  auto x = [&](size_t i) { return MPoly::variable(reg, A.vars[i]); };
  for (size_t i = 0; i < A.n(); ++i)
    for (size_t j = 0; j < A.n(); ++j) {
      MPoly e(reg);
      if (fixed_j) {
        if (j != *fixed_j || i == j) continue;
        e = A.components[i] * x(j) - A.components[j] * x(i);
      } else {
        if (i >= j) continue;
        e = x(i) * A.components[j] - x(j) * A.components[i];
      }
      if (!e.is_zero()) out.push_back(e);
    }
  return out;
}

struct UnitMapCheck {
  bool unit = false;
  MPoly mu;  // A_i = mu x_i when unit
};

inline UnitMapCheck is_unit_map(const PolyMap& A) {
  UnitMapCheck out{false, MPoly(A.registry())};
  if (!cross_equations(A).empty()) return out;
  out.unit = true;
  for (size_t i = 0; i < A.n(); ++i) {
    if (A.components[i].is_zero()) continue;
    out.mu = exact_divide(A.components[i], MPoly::variable(A.registry(), A.vars[i]));
    break;
  }
  return out;
}

// Coefficients (in the parameters) of the cross equations; the map is a unit map exactly when all vanish.
inline std::vector<MPoly> unit_map_conditions(const PolyMap& A) {
  std::vector<MPoly> out;
  auto idx = A.var_indices();
  for (const auto& e : cross_equations(A))
    for (const auto& [m, c] : e.split(idx))
      if (std::find(out.begin(), out.end(), c) == out.end() && std::find(out.begin(), out.end(), -c) == out.end())
        out.push_back(c);
  return out;
}

// General lambda(z) of degree s-1 with symbolic coefficients lambda1..lambdaM.
struct LambdaSpace {
  RegistryPtr registry;
  std::vector<std::string> names;
  std::vector<Monomial> monomials;  // over the map variables, aligned with names
  std::vector<size_t> var_indices;  // map variables in `registry`

  size_t count() const { return names.size(); }

  MPoly evaluate(const std::vector<MPoly>& z) const {
    MPoly out(registry);
    for (size_t k = 0; k < names.size(); ++k) {
      MPoly term = MPoly::variable(registry, names[k]);
      for (size_t i = 0; i < z.size(); ++i)
        if (monomials[k][i]) term *= z[i].in_registry(registry).pow(monomials[k][i]);
      out += term;
    }
    return out;
  }

  MPoly form() const {
    std::vector<MPoly> z;
    for (size_t v : var_indices) z.push_back(MPoly::variable(registry, v));
    return evaluate(z);
  }
};

inline LambdaSpace lambda_space(const PolyMap& A) {
  LambdaSpace L;
  L.monomials = monomials_of_degree(A.n(), static_cast<uint32_t>(A.s - 1));
  std::vector<std::string> names;
  for (size_t k = 0; k < L.monomials.size(); ++k) names.push_back(fresh_name(*A.registry(), "lambda" + std::to_string(k + 1)));
  L.registry = A.registry()->extended(names, VarKind::parameter);
  L.names = names;
  L.var_indices = indices_of(*L.registry, A.vars);
  return L;
}

// R{A_i(z) - lambda(z) z_i}.
inline MPoly characteristic_polynomial(const PolyMap& A, const LambdaSpace& L) {
  if (A.n() > 3 || A.s > 3) throw ScopeError("characteristic polynomial is supported for n <= 3, s <= 3");
  MPoly lam = L.form();
  std::vector<MPoly> polys;
  for (size_t i = 0; i < A.n(); ++i)
    polys.push_back(A.components[i].in_registry(L.registry) - lam * MPoly::variable(L.registry, A.vars[i]));
  return macaulay_resultant(PolySystem::make(polys, A.vars, std::vector<int>(A.n(), A.s)));
}

inline MPoly map_resultant(const PolyMap& A) {
  return macaulay_resultant(PolySystem::make(A.components, A.vars, std::vector<int>(A.n(), A.s)));
}

enum class EigenKind { zero, unitary };

inline const char* to_string(EigenKind k) { return k == EigenKind::zero ? "zero" : "unitary"; }

struct Eigenvector {
  EigenKind kind = EigenKind::unitary;
  int multiplicity = 1;
  std::string source;  // "exact-parametric", "exact" or "numeric"
  // Exact paths: eigen-direction v with A(v) = scale v. The unitary vector is
  // v / scale^{1/(s-1)}; a parametric direction turns into a zero eigenvector where scale vanishes.
  std::vector<MPoly> direction;
  MPoly scale;
  bool exact_components = false;  // components = numerators / denominator
  std::vector<MPoly> numerators;
  MPoly denominator;
  std::vector<cplx> numeric;  // filled for parameter-free maps

  bool is_real(double tol = 1e-9) const {
    double big = 0;
    for (auto z : numeric) big = std::max(big, std::abs(z));
    for (auto z : numeric)
      if (std::abs(z.imag()) > tol * std::max(1.0, big)) return false;
    return !numeric.empty();
  }
};

struct UnitMapFamily {
  MPoly mu;                        // A_i = mu z_i
  std::string parameter;           // name of the family parameter, when a generator is given
  std::vector<MPoly> generator;    // unitary vectors of the family (n = 2, s = 2)
};

// Directions (1, xi) over the roots of an irreducible-over-Q factor of the cross form.
struct RootOrbit {
  UPoly xi_poly;
  int multiplicity = 1;
};

struct EigenReport {
  RegistryPtr registry;
  std::vector<std::string> vars;
  size_t n = 0;
  int s = 0;
  std::vector<Eigenvector> eigenvectors;
  long expected_count = 0;
  long found_count = 0;
  bool is_unit_map = false;
  std::optional<UnitMapFamily> family;
  MPoly resultant;
  bool coincident = false;
  bool complanar = false;
  bool rank_drop = false;
  std::vector<RootOrbit> orbits;
};

struct EigenOptions {
  double tolerance = 1e-9;  // residual bound for numeric eigenvectors
  double cluster = 1e-7;    // relative distance at which numeric roots are merged
  uint64_t seed = 0x5eed;
  bool force_numeric = false;  // n = 2: skip the exact path
};

namespace detail {

// Makes a constant vector primitive integral with its first nonzero entry positive.
inline std::vector<MPoly> primitive(std::vector<MPoly> v) {
  for (const auto& x : v)
    if (!x.is_constant()) return v;
  Integer den = 1, num = 0;
  for (const auto& x : v) {
    Rational q = x.constant_value();
    if (q == 0) continue;
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), q.get_num().get_mpz_t());
  }
  if (num == 0) return v;
  Rational f(den, num);
  f.canonicalize();
  for (const auto& x : v)
    if (x.constant_value() != 0) {
      if (x.constant_value() < 0) f = -f;
      break;
    }
  for (auto& x : v) x *= f;
  return v;
}

inline cplx principal_root(cplx z, int k) { return k == 1 ? z : std::pow(z, 1.0 / k); }

inline std::vector<cplx> to_numeric(const std::vector<MPoly>& v) {
  std::vector<cplx> out;
  for (const auto& x : v) out.push_back(to_cplx(x.constant_value()));
  return out;
}

inline Eigenvector exact_eigenvector(const PolyMap& A, std::vector<MPoly> v, int mult) {
  const bool parametric = A.parametric();
  v = primitive(std::move(v));
  Eigenvector e;
  e.multiplicity = mult;
  e.source = parametric ? "exact-parametric" : "exact";
  auto Av = A.apply(v);
  size_t i = 0;
  while (i < v.size() && v[i].is_zero()) ++i;
  if (i == v.size()) throw ComputationError("zero direction");
  auto c = try_divide(Av[i], v[i]);
  if (!c) throw ComputationError("direction is not an eigen-direction over the parameter ring");
  for (size_t j = 0; j < v.size(); ++j)
    if (Av[j] != *c * v[j]) throw ComputationError("direction is not an eigen-direction");
  e.direction = v;
  e.scale = *c;
  const auto& reg = A.registry();
  if (c->is_zero()) {
    e.kind = EigenKind::zero;
    e.exact_components = true;
    e.numerators = v;
    e.denominator = MPoly(reg, 1);
  } else {
    e.kind = EigenKind::unitary;
    std::optional<MPoly> root;
    if (A.s == 2) {
      root = *c;
    } else if (c->is_constant()) {
      if (auto r = rational_kth_root(c->constant_value(), static_cast<unsigned>(A.s - 1))) root = MPoly(reg, *r);
    } else {
      try {
        root = poly_kth_root(*c, static_cast<unsigned>(A.s - 1));
      } catch (const ComputationError&) {
      }
    }
    if (root) {
      e.exact_components = true;
      e.numerators = v;
      e.denominator = *root;
      if (root->is_constant()) {
        for (auto& x : e.numerators) x *= Rational(1) / root->constant_value();
        e.denominator = MPoly(reg, 1);
      }
    }
  }
  if (!parametric) {
    if (e.exact_components) {
      e.numeric = to_numeric(e.numerators);
      cplx d = to_cplx(e.denominator.constant_value());
      for (auto& z : e.numeric) z /= d;
    } else {
      cplx r = principal_root(to_cplx(c->constant_value()), A.s - 1);
      e.numeric = to_numeric(v);
      for (auto& z : e.numeric) z /= r;
    }
  }
  return e;
}

inline Eigenvector numeric_direction(const PolyMap& A, std::vector<cplx> v, int mult, double tol) {
  Eigenvector e;
  e.multiplicity = mult;
  e.source = "numeric";
  double big = 0;
  size_t at = 0;
  for (size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > big) big = std::abs(v[i]), at = i;
  cplx piv = v[at];
  for (auto& z : v) z /= piv;
  cplx c = A.apply(v)[at];
  if (std::abs(c) < tol) {
    e.kind = EigenKind::zero;
    e.numeric = v;
  } else {
    e.kind = EigenKind::unitary;
    cplx r = principal_root(c, A.s - 1);
    for (auto& z : v) z /= r;
    e.numeric = v;
  }
  return e;
}

// Best rational approximation by continued fractions, accepted only if it is an exact root.
inline std::optional<Rational> exact_rational_root(const UPoly& f, double x) {
  if (!std::isfinite(x)) return std::nullopt;
  long double r = x;
  Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int it = 0; it < 40; ++it) {
    long double a = std::floor(r);
    if (std::fabs(a) > 1e15L) break;
    Integer ai(static_cast<double>(a));
    Integer h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    h0 = h1, h1 = h2, k0 = k1, k1 = k2;
    Rational q(h1, k1);
    q.canonicalize();
    if (f(q) == 0) return q;
    long double frac = r - a;
    if (frac < 1e-18L || abs(k1) > Integer(1000000000)) break;
    r = 1 / frac;
  }
  return std::nullopt;
}

inline void set_flags(EigenReport& rep, double tol) {
  rep.found_count = 0;
  for (const auto& e : rep.eigenvectors) {
    rep.found_count += e.multiplicity;
    if (e.multiplicity > 1) rep.coincident = true;
  }
  const size_t n = rep.n;
  const size_t m = rep.eigenvectors.size();
  if (m < n) return;
  std::vector<size_t> pick(n);
  auto rec = [&](auto&& self, size_t k, size_t start) -> void {
    if (rep.complanar) return;
    if (k == n) {
      bool exact = true;
      for (size_t i : pick) exact = exact && !rep.eigenvectors[i].direction.empty();
      if (exact) {
        std::vector<std::vector<MPoly>> M;
        for (size_t i : pick) M.push_back(rep.eigenvectors[i].direction);
        if (bareiss_determinant(M, rep.registry).is_zero()) rep.complanar = true;
        return;
      }
      for (size_t i : pick)
        if (rep.eigenvectors[i].numeric.empty()) return;
      Eigen::MatrixXcd M(static_cast<long>(n), static_cast<long>(n));
      double scale = 1;
      for (size_t a = 0; a < n; ++a) {
        const auto& v = rep.eigenvectors[pick[a]].numeric;
        double nv = 0;
        for (size_t b = 0; b < n; ++b) nv += std::norm(v[b]);
        scale *= std::sqrt(nv);
        for (size_t b = 0; b < n; ++b) M(static_cast<long>(a), static_cast<long>(b)) = v[b];
      }
      if (std::abs(M.determinant()) < 100 * tol * scale) rep.complanar = true;
      return;
    }
    for (size_t i = start; i < m; ++i) {
      pick[k] = i;
      self(self, k + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
}

inline void solve_binary_exact(const PolyMap& A, EigenReport& rep) {
  const auto& reg = A.registry();
  auto idx = A.var_indices();
  const size_t x1 = idx[0], x2 = idx[1];
  MPoly P = cross_equations(A).front();
  // Powers of x1 and x2 dividing P.
  uint32_t k1 = UINT32_MAX, k2 = UINT32_MAX;
  for (const auto& [m, c] : P.terms()) k1 = std::min(k1, m[x1]), k2 = std::min(k2, m[x2]);
  Monomial strip(reg->size(), 0);
  strip[x1] = k1;
  strip[x2] = k2;
  MPoly rest = exact_divide(P, MPoly::monomial(reg, strip, 1));
  auto unitvec = [&](size_t i) {
    std::vector<MPoly> v(2, MPoly(reg));
    v[i] = MPoly(reg, 1);
    return v;
  };
  if (k1) rep.eigenvectors.push_back(exact_eigenvector(A, unitvec(1), static_cast<int>(k1)));
  if (k2) rep.eigenvectors.push_back(exact_eigenvector(A, unitvec(0), static_cast<int>(k2)));
  const uint32_t D = rest.degree_in(x2);
  if (D == 0) return;
  if (A.parametric()) {
    // The rest must be a power of a linear form over the parameter ring.
    MPoly lin = D == 1 ? rest : MPoly(reg);
    if (D > 1) {
      try {
        lin = poly_kth_root(rest, D);
      } catch (const ComputationError&) {
        throw ScopeError("parametric eigen-solving needs the cross form to split into linear factors; "
                         "supply parameter values");
      }
    }
    MPoly alpha = lin.coefficient(x1, 1), beta = lin.coefficient(x2, 1);
    rep.eigenvectors.push_back(exact_eigenvector(A, {beta, -alpha}, static_cast<int>(D)));
    return;
  }
  // xi = x2 / x1: rest(1, xi), squarefree parts with rational roots split off exactly.
  MPoly r1 = rest.substitute(x1, Rational(1));
  UPoly q = to_upoly(r1, x2);
  auto parts = squarefree_decomposition(q);
  for (size_t k = 0; k < parts.size(); ++k) {
    UPoly f = parts[k];
    const int mult = static_cast<int>(k + 1);
    if (f.degree() < 1) continue;
    std::vector<cplx> cf;
    for (const auto& c : f.c) cf.push_back(to_cplx(c));
    for (auto z : polynomial_roots(cf)) {
      if (std::abs(z.imag()) > 1e-8 * (1 + std::abs(z))) continue;
      auto root = exact_rational_root(f, z.real());
      if (!root) continue;
      auto [g, rem] = divmod(f, UPoly({-*root, Rational(1)}));
      if (!rem.is_zero()) continue;
      f = g;
      rep.eigenvectors.push_back(exact_eigenvector(A, {MPoly(reg, 1), MPoly(reg, *root)}, mult));
    }
    if (f.degree() < 1) continue;
    rep.orbits.push_back({f, mult});
    std::vector<cplx> rf;
    for (const auto& c : f.c) rf.push_back(to_cplx(c));
    for (auto z : polynomial_roots(rf)) rep.eigenvectors.push_back(numeric_direction(A, {1, z}, mult, 1e-12));
  }
}

inline void solve_numeric(const PolyMap& A, EigenReport& rep, const EigenOptions& opt) {
  auto sys = homogenized_eigen_system(A);
  auto roots = projective_roots(sys, opt.seed, opt.cluster);
  const size_t n = A.n();
  const double cls = std::sqrt(opt.cluster);
  std::vector<Eigenvector> zero, unitary;
  for (const auto& r : roots) {
    double big = 0;
    for (auto z : r.x) big = std::max(big, std::abs(z));
    std::vector<cplx> x(r.x.begin(), r.x.begin() + static_cast<long>(n));
    cplx y = r.x[n];
    double xb = 0;
    for (auto z : x) xb = std::max(xb, std::abs(z));
    if (xb < cls * big) continue;  // x = 0, y = 1: not an eigenvector
    if (std::abs(y) < cls * big) {
      auto e = numeric_direction(A, x, (r.multiplicity + A.s - 2) / (A.s - 1), INFINITY);
      e.kind = EigenKind::zero;
      zero.push_back(e);
      continue;
    }
    Eigenvector e;
    e.kind = EigenKind::unitary;
    e.source = "numeric";
    e.multiplicity = r.multiplicity;
    for (auto z : x) e.numeric.push_back(z / y);
    unitary.push_back(e);
  }
  // Solutions differing by an (s-1)-th root of unity in y give one eigenvector.
  auto same_direction = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    size_t at = 0;
    for (size_t i = 0; i < n; ++i)
      if (std::abs(a[i]) > std::abs(a[at])) at = i;
    if (std::abs(b[at]) == 0) return false;
    cplx ratio = a[at] / b[at];
    double scale = 0;
    for (size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a[i]));
    for (size_t i = 0; i < n; ++i)
      if (std::abs(a[i] - ratio * b[i]) > cls * scale) return false;
    return true;
  };
  std::vector<bool> used(unitary.size(), false);
  for (size_t i = 0; i < unitary.size(); ++i) {
    if (used[i]) continue;
    std::vector<size_t> cls_members{i};
    for (size_t j = i + 1; j < unitary.size(); ++j)
      if (!used[j] && same_direction(unitary[i].numeric, unitary[j].numeric)) cls_members.push_back(j), used[j] = true;
    // Prefer a real representative, then the smallest principal argument of the leading entry.
    size_t best = cls_members.front();
    auto key = [&](size_t k) {
      const auto& v = unitary[k].numeric;
      size_t at = 0;
      for (size_t t = 0; t < n; ++t)
        if (std::abs(v[t]) > std::abs(v[at])) at = t;
      return std::make_pair(unitary[k].is_real(1e-7) ? 0 : 1, std::abs(std::arg(v[at])));
    };
    for (size_t k : cls_members)
      if (key(k) < key(best)) best = k;
    rep.eigenvectors.push_back(unitary[best]);
  }
  for (auto& z : zero) {
    bool dup = false;
    for (const auto& e : rep.eigenvectors)
      if (e.kind == EigenKind::zero && same_direction(e.numeric, z.numeric)) dup = true;
    if (!dup) rep.eigenvectors.push_back(z);
  }
}

}  // namespace detail

// Eigenvector along a known eigen-direction v (exact; A(v) must be a multiple of v).
inline Eigenvector eigenvector_along(const PolyMap& A, std::vector<MPoly> v, int multiplicity = 1) {
  return detail::exact_eigenvector(A, std::move(v), multiplicity);
}

inline EigenReport solve_eigenvectors(const PolyMap& A, const EigenOptions& opt = {}) {
  if (A.n() < 2 || A.n() > 3 || A.s < 2 || A.s > 3)
    throw ScopeError("eigenvector solver supports 2 <= n <= 3 and 2 <= s <= 3");
  EigenReport rep;
  rep.registry = A.registry();
  rep.vars = A.vars;
  rep.n = A.n();
  rep.s = A.s;
  rep.expected_count = eigen_count_expected(A.n(), A.s);
  rep.resultant = map_resultant(A);
  auto unit = is_unit_map(A);
  if (unit.unit) {
    rep.is_unit_map = true;
    rep.rank_drop = true;
    UnitMapFamily fam;
    fam.mu = unit.mu;
    const auto& reg = A.registry();
    if (A.n() == 2 && A.s == 2 && !unit.mu.is_zero()) {
      // mu = m1 x1 + m2 x2: unitary family {mu(e) = 1}, zero eigenvectors on mu = 0.
      auto idx = A.var_indices();
      MPoly m1 = unit.mu.coefficient(idx[0], 1), m2 = unit.mu.coefficient(idx[1], 1);
      const std::string C = fresh_name(*reg, "C");
      auto ext = reg->extended({C}, VarKind::parameter);
      MPoly c = MPoly::variable(ext, C);
      auto nonzero_const = [](const MPoly& m) { return m.is_constant() && m.constant_value() != 0; };
      if (nonzero_const(m2)) {
        fam.parameter = C;
        fam.generator = {c, (MPoly(ext, 1) - m1.in_registry(ext) * c) * (Rational(1) / m2.constant_value())};
      } else if (nonzero_const(m1)) {
        fam.parameter = C;
        fam.generator = {(MPoly(ext, 1) - m2.in_registry(ext) * c) * (Rational(1) / m1.constant_value()), c};
      }
      rep.eigenvectors.push_back(detail::exact_eigenvector(A, {m2, -m1}, 1));
    }
    rep.family = fam;
    detail::set_flags(rep, opt.tolerance);
    rep.coincident = false;
    return rep;
  }
  if (A.n() == 2 && !opt.force_numeric) {
    detail::solve_binary_exact(A, rep);
  } else {
    if (A.parametric()) throw ScopeError("parametric maps are solved exactly for n = 2 only; supply parameter values");
    detail::solve_numeric(A, rep, opt);
  }
  detail::set_flags(rep, opt.tolerance);
  return rep;
}

// The hyperplane lambda(e) = 1 (unitary) or lambda(e) = 0 (zero) in lambda-coefficient space,
// as lhs = rhs with denominators cleared: lambda(v) = scale, resp. lambda(v) = 0.
struct LinearConstraint {
  MPoly lhs;
  MPoly rhs;
};

inline LinearConstraint eigenvalue_locus(const Eigenvector& e, const LambdaSpace& L) {
  if (e.direction.empty()) throw ScopeError("eigenvalue locus needs an exact eigen-direction");
  MPoly lhs = L.evaluate(e.direction);
  MPoly rhs = e.kind == EigenKind::zero ? MPoly(L.registry) : e.scale.in_registry(L.registry);
  return {lhs, rhs};
}

struct FactorizationCheck {
  bool pass = false;
  bool lambda_free = false;
  std::vector<MPoly> factors;  // divided out, each with multiplicity
  MPoly remainder;             // lambda-free part in the normalization prod (1 - lambda(e)) prod lambda(z)
  std::optional<Rational> unit_vs_resultant;  // remainder / R{A} when R{A} != 0
  std::string message;
};

// Divides ch by (scale - lambda(v)) per exact unitary vector, lambda(v) per zero vector and the
// normalized orbit product prod (1 - lambda(e)) per irrational class.
inline FactorizationCheck verify_factorization(const PolyMap& A, const EigenReport& rep, const MPoly& ch,
                                               const LambdaSpace& L) {
  FactorizationCheck out;
  if (rep.is_unit_map) {
    out.message = "unit map: the characteristic polynomial vanishes identically";
    out.pass = ch.is_zero();
    return out;
  }
  MPoly q = ch;
  MPoly norm(L.registry, 1);
  auto divide = [&](const MPoly& f, int k) {
    for (int i = 0; i < k; ++i) {
      auto r = try_divide(q, f);
      if (!r) return false;
      q = *r;
      out.factors.push_back(f);
    }
    return true;
  };
  for (const auto& e : rep.eigenvectors) {
    if (e.direction.empty()) continue;
    MPoly lv = L.evaluate(e.direction);
    MPoly f = e.kind == EigenKind::zero ? lv : e.scale.in_registry(L.registry) - lv;
    if (!divide(f, e.multiplicity)) {
      out.message = "division by a linear factor left a remainder";
      return out;
    }
    if (e.kind == EigenKind::unitary)
      for (int i = 0; i < e.multiplicity; ++i) norm *= e.scale.in_registry(L.registry);
  }
  if (!rep.orbits.empty()) {
    auto idx = L.var_indices;
    const std::string xi = fresh_name(*L.registry, "xi");
    auto ext = L.registry->extended({xi}, VarKind::parameter);
    const size_t xv = ext->require(xi);
    std::vector<MPoly> z{MPoly(ext, 1), MPoly::variable(ext, xv)};
    MPoly A1 = A.components[0].in_registry(ext).substitute(
        {{ext->require(A.vars[0]), MPoly(ext, 1)}, {ext->require(A.vars[1]), MPoly::variable(ext, xv)}});
    LambdaSpace Le = L;
    Le.registry = ext;
    MPoly lam = Le.evaluate(z);
    for (const auto& orb : rep.orbits) {
      MPoly G = univariate_resultant(from_upoly(orb.xi_poly, ext, xv), A1 - lam, xv);
      std::map<size_t, MPoly> zero_l;
      for (const auto& nm : L.names) zero_l.emplace(ext->require(nm), MPoly(ext));
      MPoly g0 = G.substitute(zero_l);
      if (!g0.is_zero()) G *= Rational(1) / g0.constant_value();
      if (!divide(G.in_registry(L.registry), orb.multiplicity)) {
        out.message = "division by an orbit factor left a remainder";
        return out;
      }
    }
  }
  out.lambda_free = true;
  for (const auto& nm : L.names)
    if (q.depends_on(L.registry->require(nm))) out.lambda_free = false;
  out.remainder = q * norm;
  if (!out.lambda_free) {
    out.message = "quotient still depends on lambda";
    return out;
  }
  MPoly R = rep.resultant.in_registry(L.registry);
  if (!R.is_zero()) {
    auto u = try_divide(out.remainder, R);
    if (u && u->is_constant()) out.unit_vs_resultant = u->constant_value();
    out.pass = out.unit_vs_resultant.has_value();
    if (!out.pass) out.message = "lambda-free part differs from the resultant by more than a constant";
  } else {
    out.pass = true;
  }
  return out;
}

struct CanonicalForm {
  std::vector<std::vector<MPoly>> basis;  // chosen eigenvectors (exact components)
  std::vector<EigenKind> kinds;
  PolyMap map;                            // components in the new coordinates
  std::string form;                       // "two-unitary", "unitary-zero", "zero-unitary", "two-zero"
  bool fixed_components_ok = false;
  std::vector<MPoly> free_components;     // coefficients of x1 x2, i.e. 2 A_i^{12}
};

// Change of basis sending two chosen eigenvectors of a quadratic map of the plane to the axes.
inline CanonicalForm canonical_form(const PolyMap& A, const Eigenvector& b1, const Eigenvector& b2) {
  if (A.n() != 2 || A.s != 2) throw ScopeError("canonical form is implemented for n = 2, s = 2");
  const auto& reg = A.registry();
  auto comps = [&](const Eigenvector& e) {
    if (!e.exact_components) throw ScopeError("canonical form needs eigenvectors with exact components");
    return std::make_pair(e.numerators, e.denominator.in_registry(reg));
  };
  auto [N1, D1] = comps(b1);
  auto [N2, D2] = comps(b2);
  MPoly t11 = N1[0] * D2, t21 = N1[1] * D2, t12 = N2[0] * D1, t22 = N2[1] * D1;
  MPoly det = t11 * t22 - t12 * t21;
  if (det.is_zero()) throw ScopeError("canonical basis vectors are linearly dependent");
  auto idx = A.var_indices();
  MPoly u1 = MPoly::variable(reg, idx[0]), u2 = MPoly::variable(reg, idx[1]);
  auto Au = A.apply({t11 * u1 + t12 * u2, t21 * u1 + t22 * u2});
  MPoly den = det * D1 * D2;
  std::vector<MPoly> B{t22 * Au[0] - t12 * Au[1], t11 * Au[1] - t21 * Au[0]};
  for (auto& b : B) {
    auto q = try_divide(b, den);
    if (!q) throw ComputationError("canonical form has non-polynomial coefficients in the parameters");
    b = *q;
  }
  CanonicalForm out;
  out.basis = {N1, N2};
  out.kinds = {b1.kind, b2.kind};
  out.map = PolyMap{B, A.vars, 2};
  bool ok = true;
  for (size_t j = 0; j < 2; ++j) {
    Monomial sq(2, 0);
    sq[j] = 2;
    for (size_t i = 0; i < 2; ++i) {
      MPoly c = B[i].split(idx).count(sq) ? B[i].split(idx).at(sq) : MPoly(reg);
      Rational want = (out.kinds[j] == EigenKind::unitary && i == j) ? 1 : 0;
      ok = ok && c == MPoly(reg, want);
    }
  }
  out.fixed_components_ok = ok;
  const Monomial cross{1, 1};
  for (size_t i = 0; i < 2; ++i) {
    auto sp = B[i].split(idx);
    out.free_components.push_back(sp.count(cross) ? sp.at(cross) : MPoly(reg));
  }
  const bool u1k = b1.kind == EigenKind::unitary, u2k = b2.kind == EigenKind::unitary;
  out.form = u1k && u2k ? "two-unitary" : (u1k ? "unitary-zero" : (u2k ? "zero-unitary" : "two-zero"));
  return out;
}

struct EigenComplanart {
  ComplanartResult result;
  PolySystem system;
};

inline EigenComplanart eigen_complanart(const PolyMap& A, const ComplanartOptions& opt = {}) {
  auto sys = homogenized_eigen_system(A);
  if (sys.dimension() > 4) throw ScopeError("eigen complanart needs n + 1 <= 4");
  return {complanart(sys, opt), sys};
}

// Which vanishing brackets explain a zero eigen complanart, from a parameter-free report:
// n eigenvectors complanar in x-space (the bracket with the x = 0, y = 1 solution), or n + 1
// solutions complanar in (x, y)-space.
inline std::vector<std::string> complanarity_witnesses(const EigenReport& rep, double tol = 1e-9) {
  std::vector<std::string> out;
  const size_t n = rep.n;
  std::vector<std::vector<cplx>> ext;
  std::vector<std::string> label;
  for (size_t i = 0; i < rep.eigenvectors.size(); ++i) {
    const auto& e = rep.eigenvectors[i];
    if (e.numeric.empty()) continue;
    for (int k = 0; k < e.multiplicity; ++k) {
      auto v = e.numeric;
      v.push_back(e.kind == EigenKind::unitary ? 1.0 : 0.0);
      ext.push_back(v);
      label.push_back("e" + std::to_string(i + 1));
    }
  }
  std::vector<cplx> origin(n + 1, 0);
  origin[n] = 1;
  ext.push_back(origin);
  label.push_back("o");
  std::vector<size_t> pick(n + 1);
  auto rec = [&](auto&& self, size_t k, size_t start) -> void {
    if (k == n + 1) {
      Eigen::MatrixXcd M(static_cast<long>(n + 1), static_cast<long>(n + 1));
      double scale = 1;
      for (size_t a = 0; a <= n; ++a) {
        double nv = 0;
        for (size_t b = 0; b <= n; ++b) {
          M(static_cast<long>(a), static_cast<long>(b)) = ext[pick[a]][b];
          nv += std::norm(ext[pick[a]][b]);
        }
        scale *= std::sqrt(nv);
      }
      if (std::abs(M.determinant()) > 100 * tol * scale) return;
      std::string s;
      bool with_origin = pick.back() == ext.size() - 1;
      for (size_t a = 0; a < (with_origin ? n : n + 1); ++a) s += (a ? ", " : "") + label[pick[a]];
      out.push_back(with_origin ? "complanar in x-space: " + s : "complanar in extended space: " + s);
      return;
    }
    for (size_t i = start; i < ext.size(); ++i) {
      pick[k] = i;
      self(self, k + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

}  // namespace nla
