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

#include <utility>
#include <vector>

#include "nla/base.hpp"
#include "nla/mpoly.hpp"

namespace nla {

// Dense univariate polynomial over Q, coefficients low to high, no trailing zeros.
struct UPoly {
  std::vector<Rational> c;

  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs) : c(std::move(coeffs)) { trim(); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  const Rational& lead() const { return c.back(); }

  Rational operator()(const Rational& x) const {
    Rational v = 0;
    for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
  }

  UPoly derivative() const {
    std::vector<Rational> d;
    for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<long>(i));
    return UPoly(d);
  }

  UPoly monic() const {
    if (is_zero()) return *this;
    UPoly r = *this;
    Rational l = lead();
    for (auto& x : r.c) x /= l;
    return r;
  }

  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.c.size() + b.c.size() - 1, Rational(0));
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return UPoly(r);
  }

  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c == b.c; }
};

// a = q b + r with deg r < deg b.
inline std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw ComputationError("division by the zero polynomial");
  std::vector<Rational> r = a.c;
  if (a.degree() < b.degree()) return {UPoly(), a};
  std::vector<Rational> q(a.c.size() - b.c.size() + 1, Rational(0));
  for (size_t i = q.size(); i-- > 0;) {
    Rational f = r[i + b.c.size() - 1] / b.lead();
    q[i] = f;
    if (f == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) r[i + j] -= f * b.c[j];
  }
  return {UPoly(q), UPoly(r)};
}

inline UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// Yun: p = lc * prod_k f_k^k with f_k squarefree and pairwise coprime. Entry k-1 holds f_k.
inline std::vector<UPoly> squarefree_decomposition(const UPoly& p) {
  if (p.degree() < 1) return {};
  std::vector<UPoly> out;
  UPoly a = p.monic();
  UPoly d = a.derivative();
  UPoly g = gcd(a, d);
  UPoly b = divmod(a, g).first;
  UPoly c = divmod(d, g).first;
  UPoly e = UPoly(c.c);
  {
    auto db = b.derivative();
    std::vector<Rational> diff(std::max(c.c.size(), db.c.size()), Rational(0));
    for (size_t i = 0; i < c.c.size(); ++i) diff[i] += c.c[i];
    for (size_t i = 0; i < db.c.size(); ++i) diff[i] -= db.c[i];
    e = UPoly(diff);
  }
  while (b.degree() > 0) {
    UPoly f = gcd(b, e);
    out.push_back(f);
    b = divmod(b, f).first;
    c = divmod(e, f).first;
    auto db = b.derivative();
    std::vector<Rational> diff(std::max(c.c.size(), db.c.size()), Rational(0));
    for (size_t i = 0; i < c.c.size(); ++i) diff[i] += c.c[i];
    for (size_t i = 0; i < db.c.size(); ++i) diff[i] -= db.c[i];
    e = UPoly(diff);
  }
  return out;
}

// Coefficients of p in var; p must not involve any other variable.
inline UPoly to_upoly(const MPoly& p, size_t var) {
  std::vector<Rational> c;
  for (const auto& q : p.coefficients_in(var)) c.push_back(q.constant_value());
  return UPoly(c);
}

inline MPoly from_upoly(const UPoly& p, const RegistryPtr& reg, size_t var) {
  MPoly out(reg);
  for (size_t i = 0; i < p.c.size(); ++i) {
    Monomial m(reg->size(), 0);
    m[var] = static_cast<uint32_t>(i);
    out.add_term(m, p.c[i]);
  }
  return out;
}

}  // namespace nla
