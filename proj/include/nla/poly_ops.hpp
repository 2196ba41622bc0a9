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

#include <optional>
#include <utility>
#include <vector>

#include "nla/mpoly.hpp"

namespace nla {

inline std::vector<size_t> indices_of(const VarRegistry& reg, const std::vector<std::string>& names) {
  std::vector<size_t> out;
  for (const auto& n : names) out.push_back(reg.require(n));
  return out;
}

// Degree d when every term has total degree d in `vars`; nullopt otherwise.
// The zero polynomial has no degree and is rejected.
inline std::optional<int> homogeneity_degree(const MPoly& p, const std::vector<size_t>& vars) {
  if (p.is_zero()) throw ComputationError("the zero polynomial has no degree");
  std::optional<int> d;
  for (const auto& [m, c] : p.terms()) {
    int s = 0;
    for (size_t v : vars) s += static_cast<int>(m[v]);
    if (!d) {
      d = s;
    } else if (*d != s) {
      return std::nullopt;
    }
  }
  return d;
}

inline int require_homogeneous(const MPoly& p, const std::vector<size_t>& vars, std::optional<int> declared = {}) {
  if (p.is_zero()) {
    if (!declared) throw ScopeError("the zero polynomial needs a declared degree");
    return *declared;
  }
  auto d = homogeneity_degree(p, vars);
  if (!d) throw NotHomogeneous("polynomial is not homogeneous: " + p.to_string());
  if (declared && *d != *declared)
    throw NotHomogeneous("polynomial has degree " + std::to_string(*d) + ", declared " + std::to_string(*declared));
  return *d;
}

inline MPoly dehomogenize(const MPoly& p, size_t var) { return p.substitute(var, Rational(1)); }

// Inverse of dehomogenize for a form of known degree in `vars`.
inline MPoly homogenize(const MPoly& p, size_t var, int degree, const std::vector<size_t>& vars) {
  MPoly r(p.registry());
  for (const auto& [m, c] : p.terms()) {
    int s = 0;
    for (size_t v : vars)
      if (v != var) s += static_cast<int>(m[v]);
    if (s > degree) throw NotHomogeneous("term degree exceeds homogenization degree");
    Monomial mm = m;
    mm[var] = static_cast<uint32_t>(degree - s);
    r.add_term(mm, c);
  }
  return r;
}

struct TOrder {
  uint32_t order;
  MPoly coefficient;
};

// Lowest power of t present, with its (t-free) coefficient.
inline TOrder t_order(const MPoly& p, size_t t) {
  if (p.is_zero()) throw LimitNotEvaluable("t-order of an identically vanishing product");
  uint32_t k = p.degree_in(t);
  for (const auto& [m, c] : p.terms()) k = std::min(k, m[t]);
  return {k, p.coefficient(t, k)};
}

namespace detail {

inline MPoly kth_root_rec(const MPoly& p, unsigned k) {
  const auto& reg = p.registry();
  if (p.is_zero()) return p;
  if (p.is_constant()) {
    auto r = rational_kth_root(p.constant_value(), k);
    if (!r) throw NotPerfectPower("constant " + to_string(p.constant_value()) + " is not a perfect " +
                                  std::to_string(k) + "-th power");
    return MPoly(reg, *r);
  }
  auto vars = p.support_vars();
  size_t v = vars.back();
  auto coeffs = p.coefficients_in(v);
  uint32_t hi = static_cast<uint32_t>(coeffs.size() - 1);
  uint32_t lo = 0;
  while (coeffs[lo].is_zero()) ++lo;
  if (hi % k || lo % k) throw NotPerfectPower("degree pattern in '" + reg->name(v) + "' is not divisible by k");
  const uint32_t top = hi / k;
  const uint32_t count = top - lo / k;
  const MPoly zero(reg);
  auto P = [&](uint32_t j) -> const MPoly& { return j > hi ? zero : coeffs[hi - j]; };
  std::vector<MPoly> a;
  a.push_back(kth_root_rec(P(0), k));
  const MPoly& P0 = P(0);
  for (uint32_t m = 1; m <= count; ++m) {
    MPoly num = a[0] * P(m) * Rational(m);
    for (uint32_t i = 1; i < m; ++i) {
      long w = static_cast<long>(k + 1) * i - m;
      if (w == 0) continue;
      num -= a[i] * P(m - i) * Rational(w);
    }
    auto q = try_divide(num, P0 * Rational(static_cast<long>(k) * m));
    if (!q) throw NotPerfectPower("coefficient recurrence does not divide exactly");
    a.push_back(std::move(*q));
  }
  MPoly root(reg);
  MPoly vp = MPoly::variable(reg, v);
  for (uint32_t m = 0; m <= count; ++m) {
    if (a[m].is_zero()) continue;
    root += a[m] * vp.pow(top - m);
  }
  return root;
}

}  // namespace detail

// Exact k-th root over Q[vars]; throws NotPerfectPower if p is not a k-th power.
// For even k the representative with positive leading coefficient is returned.
inline MPoly poly_kth_root(const MPoly& p, unsigned k) {
  if (k == 0) throw ScopeError("k-th root with k = 0");
  if (k == 1 || p.is_zero()) return p;
  MPoly r = detail::kth_root_rec(p, k);
  if (r.pow(k) != p) throw NotPerfectPower("polynomial is not a perfect " + std::to_string(k) + "-th power");
  if (k % 2 == 0) r = r.sign_normalized();
  return r;
}

// Taylor expansion of a polynomial vector field around a point, grouped by total degree
// in the displacement variables. buckets[d][i] is the degree-d part of component i.
struct GradedExpansion {
  RegistryPtr registry;
  std::vector<std::string> displacement;
  std::vector<std::vector<MPoly>> buckets;

  int lowest_nonzero_degree() const {
    for (size_t d = 0; d < buckets.size(); ++d)
      for (const auto& p : buckets[d])
        if (!p.is_zero()) return static_cast<int>(d);
    return -1;
  }
};

// Substitutes vars[i] = point[i] + displacement[i] and splits by degree in the displacement.
// The resulting registry holds the displacement variables (main) followed by every other
// variable of the input registry that is not expanded.
inline GradedExpansion graded_expand(const std::vector<MPoly>& field, const std::vector<std::string>& vars,
                                     const std::vector<MPoly>& point,
                                     const std::vector<std::string>& displacement_names) {
  if (field.empty()) throw ScopeError("graded_expand: empty field");
  if (vars.size() != point.size() || vars.size() != displacement_names.size())
    throw ScopeError("graded_expand: dimension mismatch");
  const auto& src = field.front().registry();
  std::vector<std::string> names = displacement_names;
  std::vector<VarKind> kinds(names.size(), VarKind::main);
  for (size_t i = 0; i < src->size(); ++i) {
    if (std::find(vars.begin(), vars.end(), src->name(i)) != vars.end()) continue;
    names.push_back(src->name(i));
    kinds.push_back(VarKind::parameter);
  }
  auto reg = std::make_shared<const VarRegistry>(names, kinds);
  std::map<std::string, std::string> keep;
  std::map<size_t, MPoly> subst;
  for (size_t i = 0; i < vars.size(); ++i) {
    keep[vars[i]] = displacement_names[i];
    subst.emplace(i, point[i].in_registry(reg) + MPoly::variable(reg, i));
  }
  std::vector<size_t> dvars(vars.size());
  std::iota(dvars.begin(), dvars.end(), 0);
  GradedExpansion out{reg, displacement_names, {}};
  std::vector<MPoly> shifted;
  int maxdeg = 0;
  for (const auto& f : field) {
    MPoly g = f.renamed(reg, keep).substitute(subst);
    maxdeg = std::max(maxdeg, g.total_degree(dvars));
    shifted.push_back(std::move(g));
  }
  out.buckets.assign(maxdeg + 1, std::vector<MPoly>(field.size(), MPoly(reg)));
  for (size_t i = 0; i < shifted.size(); ++i) {
    for (const auto& [m, c] : shifted[i].terms()) {
      uint32_t d = 0;
      for (size_t v : dvars) d += m[v];
      out.buckets[d][i].add_term(m, c);
    }
  }
  return out;
}

}  // namespace nla
