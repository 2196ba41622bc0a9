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

#include <map>
#include <string>
#include <vector>

#include "nla/matrix.hpp"
#include "nla/poly_ops.hpp"

namespace nla {

// Homogeneous forms in an explicit block of main variables; every other registry
// variable is treated as a parameter.
struct PolySystem {
  std::vector<MPoly> polys;
  std::vector<std::string> main_vars;
  std::vector<int> degrees;

  static PolySystem make(std::vector<MPoly> polys, std::vector<std::string> main_vars,
                         std::vector<int> declared = {}) {
    if (polys.empty()) throw ScopeError("empty polynomial system");
    for (const auto& p : polys) polys.front().check(p);
    PolySystem s{std::move(polys), std::move(main_vars), {}};
    if (!declared.empty() && declared.size() != s.polys.size())
      throw ScopeError("declared degree list has the wrong length");
    auto idx = s.main_indices();
    for (size_t i = 0; i < s.polys.size(); ++i) {
      std::optional<int> d;
      if (!declared.empty()) d = declared[i];
      s.degrees.push_back(require_homogeneous(s.polys[i], idx, d));
    }
    return s;
  }

  const RegistryPtr& registry() const { return polys.front().registry(); }
  size_t dimension() const { return main_vars.size(); }
  std::vector<size_t> main_indices() const { return indices_of(*registry(), main_vars); }
  std::vector<size_t> parameter_indices() const {
    std::vector<size_t> out;
    auto m = main_indices();
    for (size_t i = 0; i < registry()->size(); ++i)
      if (std::find(m.begin(), m.end(), i) == m.end()) out.push_back(i);
    return out;
  }
  // Parameters that actually occur in some polynomial.
  std::vector<size_t> active_parameters() const {
    std::vector<size_t> out;
    for (size_t v : parameter_indices())
      for (const auto& p : polys)
        if (p.depends_on(v)) {
          out.push_back(v);
          break;
        }
    return out;
  }
  long root_count() const {
    long n = 1;
    for (int d : degrees) n *= d;
    return n;
  }
};

// Resultant of two binary forms in (u, v) with declared degrees; Res(u^df, v^dg) = 1.
inline MPoly sylvester_resultant(const MPoly& f, const MPoly& g, size_t u, size_t v, int df, int dg) {
  f.check(g);
  const auto& reg = f.registry();
  std::vector<MPoly> fc(df + 1, MPoly(reg)), gc(dg + 1, MPoly(reg));
  auto fill = [&](const MPoly& p, int d, std::vector<MPoly>& out) {
    for (const auto& [m, c] : p.terms()) {
      if (static_cast<int>(m[u] + m[v]) != d) throw NotHomogeneous("sylvester: form is not homogeneous of declared degree");
      Monomial mm = m;
      mm[u] = mm[v] = 0;
      out[m[v]].add_term(mm, c);
    }
  };
  fill(f, df, fc);
  fill(g, dg, gc);
  const int n = df + dg;
  if (n == 0) return MPoly(reg, 1);
  std::vector<std::vector<MPoly>> a(n, std::vector<MPoly>(n, MPoly(reg)));
  for (int r = 0; r < dg; ++r)
    for (int i = 0; i <= df; ++i) a[r][r + i] = fc[i];
  for (int r = 0; r < df; ++r)
    for (int i = 0; i <= dg; ++i) a[dg + r][r + i] = gc[i];
  return bareiss_determinant(std::move(a), reg);
}

inline MPoly sylvester_resultant(const MPoly& f, const MPoly& g, const std::string& u, const std::string& v) {
  const auto& reg = f.registry();
  std::vector<size_t> uv{reg->require(u), reg->require(v)};
  int df = require_homogeneous(f, uv), dg = require_homogeneous(g, uv);
  return sylvester_resultant(f, g, uv[0], uv[1], df, dg);
}

// Resultant of two polynomials in one variable, using their actual degrees.
inline MPoly univariate_resultant(const MPoly& f, const MPoly& g, size_t var) {
  f.check(g);
  const auto& reg = f.registry();
  auto fc = f.coefficients_in(var), gc = g.coefficients_in(var);
  const int df = static_cast<int>(fc.size()) - 1, dg = static_cast<int>(gc.size()) - 1;
  if (f.is_zero() || g.is_zero()) return MPoly(reg);
  const int n = df + dg;
  if (n == 0) return MPoly(reg, 1);
  std::vector<std::vector<MPoly>> a(n, std::vector<MPoly>(n, MPoly(reg)));
  for (int r = 0; r < dg; ++r)
    for (int i = 0; i <= df; ++i) a[r][r + i] = fc[df - i];
  for (int r = 0; r < df; ++r)
    for (int i = 0; i <= dg; ++i) a[dg + r][r + i] = gc[dg - i];
  return bareiss_determinant(std::move(a), reg);
}

// All exponent vectors of length n and total degree d, leading monomial first.
inline std::vector<Monomial> monomials_of_degree(size_t n, uint32_t d) {
  std::vector<Monomial> out;
  Monomial cur(n, 0);
  auto rec = [&](auto&& self, size_t i, uint32_t left) -> void {
    if (i + 1 == n) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (uint32_t e = left + 1; e-- > 0;) {
      cur[i] = e;
      self(self, i + 1, left - e);
    }
  };
  if (n == 0) {
    if (d == 0) out.emplace_back();
    return out;
  }
  rec(rec, 0, d);
  return out;
}

// Row/column bookkeeping of the Macaulay matrix for degrees d_1..d_n.
struct MacaulayLayout {
  std::vector<int> degrees;
  uint32_t D = 0;
  std::vector<Monomial> monomials;
  std::map<Monomial, size_t> index;
  std::vector<size_t> row_poly;
  std::vector<Monomial> row_shift;
  std::vector<size_t> nonreduced;

  explicit MacaulayLayout(std::vector<int> degs) : degrees(std::move(degs)) {
    const size_t n = degrees.size();
    int sum = 1;
    for (int d : degrees) sum += d - 1;
    D = static_cast<uint32_t>(sum);
    monomials = monomials_of_degree(n, D);
    for (size_t k = 0; k < monomials.size(); ++k) {
      const auto& m = monomials[k];
      index.emplace(m, k);
      int hits = 0;
      size_t first = n;
      for (size_t i = 0; i < n; ++i)
        if (m[i] >= static_cast<uint32_t>(degrees[i])) {
          ++hits;
          if (first == n) first = i;
        }
      Monomial shift = m;
      shift[first] -= degrees[first];
      row_poly.push_back(first);
      row_shift.push_back(std::move(shift));
      if (hits > 1) nonreduced.push_back(k);
    }
  }
};

// Sparse rows of the Macaulay matrix; `split[i]` lists (main exponents, coefficient) of F_i.
template <class C>
std::vector<std::vector<std::pair<size_t, C>>> macaulay_rows(
    const MacaulayLayout& L, const std::vector<std::vector<std::pair<Monomial, C>>>& split) {
  std::vector<std::vector<std::pair<size_t, C>>> rows(L.monomials.size());
  for (size_t k = 0; k < L.monomials.size(); ++k) {
    const auto& shift = L.row_shift[k];
    for (const auto& [e, c] : split[L.row_poly[k]]) {
      Monomial m = e;
      for (size_t i = 0; i < m.size(); ++i) m[i] += shift[i];
      rows[k].emplace_back(L.index.at(m), c);
    }
  }
  return rows;
}

namespace detail {

inline std::vector<std::vector<std::pair<Monomial, MPoly>>> split_system(const PolySystem& sys) {
  auto idx = sys.main_indices();
  std::vector<std::vector<std::pair<Monomial, MPoly>>> out;
  for (const auto& p : sys.polys) {
    std::vector<std::pair<Monomial, MPoly>> terms;
    for (auto& [e, c] : p.split(idx)) terms.emplace_back(e, c);
    out.push_back(std::move(terms));
  }
  return out;
}

inline MPoly macaulay_det(const MacaulayLayout& L, const std::vector<std::vector<std::pair<Monomial, MPoly>>>& split,
                          const RegistryPtr& reg, bool minor) {
  auto rows = macaulay_rows(L, split);
  std::vector<size_t> keep;
  if (minor) {
    keep = L.nonreduced;
  } else {
    keep.resize(L.monomials.size());
    std::iota(keep.begin(), keep.end(), 0);
  }
  std::vector<long> pos(L.monomials.size(), -1);
  for (size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = static_cast<long>(i);
  std::vector<std::vector<MPoly>> a(keep.size(), std::vector<MPoly>(keep.size(), MPoly(reg)));
  for (size_t i = 0; i < keep.size(); ++i)
    for (const auto& [col, c] : rows[keep[i]])
      if (pos[col] >= 0) a[i][pos[col]] += c;
  return bareiss_determinant(std::move(a), reg);
}

}  // namespace detail

// Multivariate resultant of n forms in n main variables, normalized so that
// Res(x_1^{d_1}, ..., x_n^{d_n}) = 1. For n = 2 this is the Sylvester resultant.
// When the extraneous minor vanishes identically the forms are perturbed to
// F_i + s x_i^{d_i}; the quotient is then a polynomial in s evaluated at s = 0.
enum class ResultantMethod { automatic, macaulay_matrix, perturbed };

inline MPoly macaulay_resultant(const PolySystem& sys, ResultantMethod method = ResultantMethod::automatic) {
  const size_t n = sys.dimension();
  if (sys.polys.size() != n) throw ScopeError("resultant needs as many forms as main variables");
  const auto& reg = sys.registry();
  for (const auto& p : sys.polys)
    if (p.is_zero()) return MPoly(reg);
  auto idx = sys.main_indices();
  if (n == 1) {
    return sys.polys[0].split(idx).begin()->second;
  }
  if (n == 2 && method == ResultantMethod::automatic)
    return sylvester_resultant(sys.polys[0], sys.polys[1], idx[0], idx[1], sys.degrees[0], sys.degrees[1]);
  MacaulayLayout L(sys.degrees);
  if (method != ResultantMethod::perturbed) {
    auto split = detail::split_system(sys);
    MPoly minor = detail::macaulay_det(L, split, reg, true);
    if (!minor.is_zero()) {
      MPoly full = detail::macaulay_det(L, split, reg, false);
      return exact_divide(full, minor);
    }
  }
  std::string s = fresh_name(*reg, "s");
  auto ext = reg->extended({s}, VarKind::parameter);
  std::vector<MPoly> pert;
  for (size_t i = 0; i < n; ++i) {
    Monomial m(ext->size(), 0);
    m[idx[i]] = sys.degrees[i];
    m.back() = 1;
    pert.push_back(sys.polys[i].in_registry(ext) + MPoly::monomial(ext, m, 1));
  }
  PolySystem psys{pert, sys.main_vars, sys.degrees};
  auto psplit = detail::split_system(psys);
  MPoly pminor = detail::macaulay_det(L, psplit, ext, true);
  MPoly pfull = detail::macaulay_det(L, psplit, ext, false);
  MPoly q = exact_divide(pfull, pminor).substitute(ext->size() - 1, Rational(0));
  return q.in_registry(reg);
}

// Resultant with respect to `vars`: remaining variables become parameters.
inline MPoly eliminate(const std::vector<MPoly>& polys, const std::vector<std::string>& vars) {
  return macaulay_resultant(PolySystem::make(polys, vars));
}

// R{f_1, ..., f_{n-1}, g}: g is placed last.
inline MPoly poisson_eval(const PolySystem& sys, const MPoly& g) {
  if (sys.polys.size() + 1 != sys.dimension()) throw ScopeError("poisson_eval needs n-1 forms in n variables");
  auto polys = sys.polys;
  polys.push_back(g);
  auto degs = sys.degrees;
  degs.push_back(require_homogeneous(g, sys.main_indices()));
  return macaulay_resultant(PolySystem{polys, sys.main_vars, degs});
}

// Coefficients of R{f_1, ..., f_{n-1}, sum_i g^i x_i} in the symbols g^i: entry for the
// multiset {j_1 <= ... <= j_N} is the coefficient of g^{j_1} ... g^{j_N}.
struct VietaTensor {
  size_t n = 0;
  long N = 0;
  std::map<std::vector<int>, MPoly> entries;
};

inline VietaTensor vieta_tensor(const PolySystem& sys) {
  const auto& reg = sys.registry();
  const size_t n = sys.dimension();
  std::vector<std::string> gnames;
  auto ext = reg;
  for (size_t i = 0; i < n; ++i) {
    gnames.push_back(fresh_name(*ext, "g" + std::to_string(i + 1)));
    ext = ext->extended({gnames.back()}, VarKind::parameter);
  }
  std::vector<MPoly> polys;
  for (const auto& p : sys.polys) polys.push_back(p.in_registry(ext));
  MPoly g(ext);
  for (size_t i = 0; i < n; ++i) g += MPoly::variable(ext, gnames[i]) * MPoly::variable(ext, sys.main_vars[i]);
  PolySystem esys{polys, sys.main_vars, sys.degrees};
  MPoly r = poisson_eval(esys, g);
  auto gidx = indices_of(*ext, gnames);
  VietaTensor out{n, sys.root_count(), {}};
  for (auto& [e, c] : r.split(gidx)) {
    std::vector<int> key;
    for (size_t i = 0; i < n; ++i)
      for (uint32_t k = 0; k < e[i]; ++k) key.push_back(static_cast<int>(i) + 1);
    out.entries.emplace(key, c.in_registry(reg));
  }
  return out;
}

}  // namespace nla
