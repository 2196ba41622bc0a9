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
#include <optional>
#include <vector>

#include "nla/matrix.hpp"
#include "nla/resultant.hpp"

namespace nla {

// A homogeneous form over a field: exponent vectors over the main variables only.
template <class F>
using SparseForm = std::map<Monomial, typename F::value_type>;

template <class F>
SparseForm<F> form_multiply(const F& f, const SparseForm<F>& a, const SparseForm<F>& b) {
  SparseForm<F> r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Monomial m = ma;
      for (size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
      auto& slot = r.try_emplace(m, f.zero()).first->second;
      slot = f.add(slot, f.mul(ca, cb));
    }
  for (auto it = r.begin(); it != r.end();) it = f.is_zero(it->second) ? r.erase(it) : std::next(it);
  return r;
}

// Substitutes x_k = sum_j T[k][j] u_j.
template <class F>
SparseForm<F> compose_linear(const F& f, const SparseForm<F>& form,
                             const std::vector<std::vector<typename F::value_type>>& T) {
  const size_t n = T.size();
  std::vector<SparseForm<F>> lin(n);
  for (size_t k = 0; k < n; ++k)
    for (size_t j = 0; j < n; ++j) {
      if (f.is_zero(T[k][j])) continue;
      Monomial m(n, 0);
      m[j] = 1;
      lin[k][m] = T[k][j];
    }
  std::vector<std::vector<SparseForm<F>>> powers(n);
  SparseForm<F> one{{Monomial(n, 0), f.one()}};
  SparseForm<F> out;
  for (const auto& [m, c] : form) {
    SparseForm<F> term{{Monomial(n, 0), c}};
    for (size_t k = 0; k < n; ++k) {
      auto& pk = powers[k];
      if (pk.empty()) pk.push_back(one);
      while (pk.size() <= m[k]) pk.push_back(form_multiply(f, pk.back(), lin[k]));
      if (m[k]) term = form_multiply(f, term, pk[m[k]]);
    }
    for (const auto& [mm, cc] : term) {
      auto& slot = out.try_emplace(mm, f.zero()).first->second;
      slot = f.add(slot, cc);
    }
  }
  for (auto it = out.begin(); it != out.end();) it = f.is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

// Macaulay resultant over a field; nullopt when the extraneous minor vanishes.
template <class F>
std::optional<typename F::value_type> field_resultant(const F& f, const std::vector<SparseForm<F>>& forms,
                                                      const std::vector<int>& degrees) {
  const size_t n = forms.size();
  if (n == 1) {
    Monomial m(1, static_cast<uint32_t>(degrees[0]));
    auto it = forms[0].find(m);
    return it == forms[0].end() ? f.zero() : it->second;
  }
  MacaulayLayout L(degrees);
  std::vector<std::vector<std::pair<Monomial, typename F::value_type>>> split;
  for (const auto& fm : forms) split.emplace_back(fm.begin(), fm.end());
  auto rows = macaulay_rows(L, split);
  auto det_of = [&](const std::vector<size_t>& keep) {
    std::vector<long> pos(L.monomials.size(), -1);
    for (size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = static_cast<long>(i);
    FMatrix<F> a(keep.size(), keep.size(), f.zero());
    for (size_t i = 0; i < keep.size(); ++i)
      for (const auto& [col, c] : rows[keep[i]])
        if (pos[col] >= 0) a(i, pos[col]) = f.add(a(i, pos[col]), c);
    return determinant(f, std::move(a));
  };
  auto minor = det_of(L.nonreduced);
  if (f.is_zero(minor)) return std::nullopt;
  std::vector<size_t> all(L.monomials.size());
  std::iota(all.begin(), all.end(), 0);
  return f.mul(det_of(all), f.inv(minor));
}

// Finite-dimensional algebra F[x_1..x_{n-1}]/(f_i(x, 1)) of a system of n-1 forms in n
// variables with no root on x_n = 0. ops[k] is multiplication by x_k/x_n in the monomial
// basis; rho is the resultant of the forms restricted to x_n = 0.
template <class F>
struct QuotientAlgebra {
  size_t n = 0;
  size_t dim = 0;
  std::vector<Monomial> basis;
  std::vector<FMatrix<F>> ops;
  std::vector<typename F::value_type> unit;  // coordinates of 1
  typename F::value_type rho{};
};

template <class F>
std::optional<QuotientAlgebra<F>> build_quotient(const F& f, const std::vector<SparseForm<F>>& forms,
                                                 const std::vector<int>& degrees) {
  const size_t k = forms.size();
  const size_t n = k + 1;
  long N = 1;
  for (int d : degrees) N *= d;
  // Resultant at infinity.
  std::vector<SparseForm<F>> bar(k);
  for (size_t i = 0; i < k; ++i)
    for (const auto& [m, c] : forms[i]) {
      if (m[n - 1]) continue;
      bar[i].emplace(Monomial(m.begin(), m.end() - 1), c);
    }
  QuotientAlgebra<F> Q;
  Q.n = n;
  if (k == 0) return std::nullopt;
  auto rho = field_resultant(f, bar, degrees);
  if (!rho || f.is_zero(*rho)) return std::nullopt;
  Q.rho = *rho;
  uint32_t d = 0;
  for (int r : degrees) d += static_cast<uint32_t>(r - 1);
  // Columns: degree d+1 monomials, those free of x_n first.
  auto mons = monomials_of_degree(n, d + 1);
  std::stable_partition(mons.begin(), mons.end(), [&](const Monomial& m) { return m[n - 1] == 0; });
  std::map<Monomial, size_t> col;
  for (size_t i = 0; i < mons.size(); ++i) col.emplace(mons[i], i);
  std::vector<std::vector<std::pair<size_t, typename F::value_type>>> rows;
  for (size_t i = 0; i < k; ++i) {
    for (const auto& shift : monomials_of_degree(n, d + 1 - degrees[i])) {
      std::vector<std::pair<size_t, typename F::value_type>> row;
      for (const auto& [m, c] : forms[i]) {
        Monomial mm = m;
        for (size_t j = 0; j < n; ++j) mm[j] += shift[j];
        row.emplace_back(col.at(mm), c);
      }
      rows.push_back(std::move(row));
    }
  }
  FMatrix<F> M(rows.size(), mons.size(), f.zero());
  for (size_t i = 0; i < rows.size(); ++i)
    for (const auto& [j, c] : rows[i]) M(i, j) = f.add(M(i, j), c);
  auto piv = rref(f, M);
  std::vector<long> pivot_row(mons.size(), -1);
  for (size_t r = 0; r < piv.size(); ++r) pivot_row[piv[r]] = static_cast<long>(r);
  std::map<Monomial, size_t> bidx;
  for (size_t j = 0; j < mons.size(); ++j) {
    if (pivot_row[j] >= 0) continue;
    if (mons[j][n - 1] == 0) return std::nullopt;
    Monomial b = mons[j];
    b[n - 1] -= 1;
    bidx.emplace(b, Q.basis.size());
    Q.basis.push_back(b);
  }
  if (static_cast<long>(Q.basis.size()) != N) return std::nullopt;
  Q.dim = Q.basis.size();
  // 1 = x_n^{d+1} / x_n^{d+1}: normal form of x_n^{d+1}, read in the basis c / x_n.
  {
    Q.unit.assign(Q.dim, f.zero());
    Monomial top(n, 0);
    top[n - 1] = d + 1;
    const size_t j = col.at(top);
    if (pivot_row[j] < 0) {
      Monomial c = top;
      c[n - 1] -= 1;
      Q.unit[bidx.at(c)] = f.one();
    } else {
      const size_t r = static_cast<size_t>(pivot_row[j]);
      for (size_t jj = 0; jj < mons.size(); ++jj) {
        if (pivot_row[jj] >= 0 || f.is_zero(M(r, jj))) continue;
        Monomial c = mons[jj];
        c[n - 1] -= 1;
        Q.unit[bidx.at(c)] = f.neg(M(r, jj));
      }
    }
  }
  for (size_t var = 0; var + 1 < n; ++var) {
    FMatrix<F> op(Q.dim, Q.dim, f.zero());
    for (size_t b = 0; b < Q.dim; ++b) {
      Monomial m = Q.basis[b];
      m[var] += 1;
      size_t j = col.at(m);
      if (pivot_row[j] < 0) {
        Monomial c = m;
        c[n - 1] -= 1;
        op(bidx.at(c), b) = f.one();
        continue;
      }
      const size_t r = static_cast<size_t>(pivot_row[j]);
      for (size_t jj = 0; jj < mons.size(); ++jj) {
        if (pivot_row[jj] >= 0 || f.is_zero(M(r, jj))) continue;
        Monomial c = mons[jj];
        c[n - 1] -= 1;
        op(bidx.at(c), b) = f.neg(M(r, jj));
      }
    }
    Q.ops.push_back(std::move(op));
  }
  return Q;
}

// Reduces a polynomial over Q to a form over F: parameters take the given values.
template <class F>
SparseForm<F> specialize_form(const F& f, const MPoly& p, const std::vector<size_t>& main,
                              const std::vector<size_t>& params, const std::vector<typename F::value_type>& values) {
  SparseForm<F> out;
  for (const auto& [m, c] : p.terms()) {
    Monomial key(main.size());
    for (size_t i = 0; i < main.size(); ++i) key[i] = m[main[i]];
    auto v = f.from(c);
    for (size_t i = 0; i < params.size(); ++i)
      if (m[params[i]]) v = f.mul(v, f.pow(values[i], m[params[i]]));
    auto& slot = out.try_emplace(key, f.zero()).first->second;
    slot = f.add(slot, v);
  }
  for (auto it = out.begin(); it != out.end();) it = f.is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

// g(X_1, ..., X_n) for commuting matrices X_k.
template <class F>
FMatrix<F> evaluate_form(const F& f, const SparseForm<F>& g, const std::vector<FMatrix<F>>& X, size_t dim) {
  std::vector<std::vector<FMatrix<F>>> powers(X.size());
  FMatrix<F> out(dim, dim, f.zero());
  for (const auto& [m, c] : g) {
    FMatrix<F> term = identity(f, dim);
    for (size_t k = 0; k < X.size(); ++k) {
      if (!m[k]) continue;
      auto& pk = powers[k];
      if (pk.empty()) pk.push_back(X[k]);
      while (pk.size() < m[k]) pk.push_back(multiply(f, pk.back(), X[k]));
      term = multiply(f, term, pk[m[k] - 1]);
    }
    for (size_t i = 0; i < dim; ++i)
      for (size_t j = 0; j < dim; ++j) out(i, j) = f.add(out(i, j), f.mul(c, term(i, j)));
  }
  return out;
}

}  // namespace nla
