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
#include <complex>
#include <map>
#include <numeric>
#include <vector>

#include "nla/base.hpp"
#include "nla/registry.hpp"

namespace nla {

using Monomial = std::vector<uint32_t>;

inline uint32_t total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0u); }

// Graded-lex with the first registry variable ranked highest; "less" means "comes first".
struct GrlexDescending {
  bool operator()(const Monomial& a, const Monomial& b) const {
    uint32_t da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return b < a;
  }
};

inline bool divides(const Monomial& a, const Monomial& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

// Sparse multivariate polynomial with rational coefficients over a shared registry.
// Terms are kept sorted leading-term first; zero coefficients are never stored.
class MPoly {
 public:
  using Terms = std::map<Monomial, Rational, GrlexDescending>;

  MPoly() : reg_(std::make_shared<const VarRegistry>()) {}
  explicit MPoly(RegistryPtr reg) : reg_(std::move(reg)) {}
  MPoly(RegistryPtr reg, const Rational& c) : reg_(std::move(reg)) {
    if (c != 0) terms_.emplace(Monomial(reg_->size(), 0), c);
  }

  static MPoly variable(RegistryPtr reg, std::string_view name) {
    size_t i = reg->require(name);
    return variable(std::move(reg), i);
  }
  static MPoly variable(RegistryPtr reg, size_t index) {
    Monomial m(reg->size(), 0);
    m.at(index) = 1;
    return monomial(std::move(reg), std::move(m), 1);
  }
  static MPoly monomial(RegistryPtr reg, Monomial m, const Rational& c) {
    MPoly p(std::move(reg));
    if (m.size() != p.reg_->size()) throw RegistryMismatch("monomial length does not match registry");
    if (c != 0) p.terms_.emplace(std::move(m), c);
    return p;
  }

  const RegistryPtr& registry() const { return reg_; }
  const Terms& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && nla::total_degree(terms_.begin()->first) == 0);
  }
  Rational constant_value() const {
    if (!is_constant()) throw ComputationError("polynomial is not constant: " + to_string());
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
  }
  Rational constant_term() const {
    auto it = terms_.find(Monomial(reg_->size(), 0));
    return it == terms_.end() ? Rational(0) : it->second;
  }

  const Monomial& leading_monomial() const {
    if (terms_.empty()) throw ComputationError("leading term of zero polynomial");
    return terms_.begin()->first;
  }
  const Rational& leading_coefficient() const {
    if (terms_.empty()) throw ComputationError("leading term of zero polynomial");
    return terms_.begin()->second;
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  MPoly& operator+=(const MPoly& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MPoly& operator-=(const MPoly& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  MPoly& operator*=(const Rational& c) {
    if (c == 0) {
      terms_.clear();
    } else {
      for (auto& [m, v] : terms_) v *= c;
    }
    return *this;
  }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(MPoly a, const Rational& c) { return a *= c; }
  friend MPoly operator*(const Rational& c, MPoly a) { return a *= c; }
  MPoly operator-() const {
    MPoly r = *this;
    for (auto& [m, v] : r.terms_) v = -v;
    return r;
  }

  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    a.check(b);
    MPoly r(a.reg_);
    if (a.is_zero() || b.is_zero()) return r;
    const size_t n = a.reg_->size();
    Monomial m(n);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        for (size_t i = 0; i < n; ++i) m[i] = ma[i] + mb[i];
        r.add_term(m, ca * cb);
      }
    }
    return r;
  }

  MPoly pow(unsigned e) const {
    MPoly result(reg_, 1);
    MPoly base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    if (!same_registry(a.reg_, b.reg_)) return false;
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  uint32_t degree_in(size_t var) const {
    uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
    return d;
  }
  int total_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max<int>(d, nla::total_degree(m));
    return d;
  }
  // Total degree restricted to a subset of variables (-1 for the zero polynomial).
  int total_degree(const std::vector<size_t>& vars) const {
    int d = -1;
    for (const auto& [m, c] : terms_) {
      int s = 0;
      for (size_t v : vars) s += m[v];
      d = std::max(d, s);
    }
    return d;
  }
  bool depends_on(size_t var) const {
    for (const auto& [m, c] : terms_)
      if (m[var]) return true;
    return false;
  }
  std::vector<size_t> support_vars() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < reg_->size(); ++i)
      if (depends_on(i)) out.push_back(i);
    return out;
  }

  // Coefficient of var^k, as a polynomial free of var.
  MPoly coefficient(size_t var, uint32_t k) const {
    MPoly r(reg_);
    for (const auto& [m, c] : terms_) {
      if (m[var] != k) continue;
      Monomial mm = m;
      mm[var] = 0;
      r.terms_.emplace(std::move(mm), c);
    }
    return r;
  }
  std::vector<MPoly> coefficients_in(size_t var) const {
    std::vector<MPoly> out(degree_in(var) + 1, MPoly(reg_));
    for (const auto& [m, c] : terms_) {
      Monomial mm = m;
      mm[var] = 0;
      out[m[var]].terms_.emplace(std::move(mm), c);
    }
    return out;
  }

  // Splits the polynomial along a block of variables: exponent pattern over `vars`
  // mapped to the coefficient polynomial in the remaining variables.
  std::map<Monomial, MPoly, GrlexDescending> split(const std::vector<size_t>& vars) const {
    std::map<Monomial, MPoly, GrlexDescending> out;
    for (const auto& [m, c] : terms_) {
      Monomial key(vars.size());
      Monomial rest = m;
      for (size_t i = 0; i < vars.size(); ++i) {
        key[i] = m[vars[i]];
        rest[vars[i]] = 0;
      }
      auto it = out.try_emplace(key, MPoly(reg_)).first;
      it->second.add_term(rest, c);
    }
    return out;
  }

  MPoly derivative(size_t var) const {
    MPoly r(reg_);
    for (const auto& [m, c] : terms_) {
      if (!m[var]) continue;
      Monomial mm = m;
      mm[var] -= 1;
      r.add_term(mm, c * m[var]);
    }
    return r;
  }

  // Simultaneous substitution var -> value; values must share this registry.
  MPoly substitute(const std::map<size_t, MPoly>& values) const {
    for (const auto& [v, p] : values) check(p);
    std::map<size_t, std::vector<MPoly>> powers;
    for (const auto& [v, p] : values) powers[v].push_back(MPoly(reg_, 1));
    auto power = [&](size_t v, uint32_t e) -> const MPoly& {
      auto& list = powers[v];
      while (list.size() <= e) list.push_back(list.back() * values.at(v));
      return list[e];
    };
    MPoly r(reg_);
    for (const auto& [m, c] : terms_) {
      Monomial rest = m;
      MPoly term(reg_);
      for (const auto& [v, p] : values) rest[v] = 0;
      term.terms_.emplace(rest, c);
      for (const auto& [v, p] : values)
        if (m[v]) term = term * power(v, m[v]);
      r += term;
    }
    return r;
  }
  MPoly substitute(size_t var, const MPoly& value) const { return substitute({{var, value}}); }
  MPoly substitute(size_t var, const Rational& value) const { return substitute(var, MPoly(reg_, value)); }

  // Re-expresses the polynomial over another registry, matching variables by name.
  MPoly in_registry(const RegistryPtr& target) const {
    if (same_registry(reg_, target)) {
      MPoly r = *this;
      r.reg_ = target;
      return r;
    }
    std::vector<std::optional<size_t>> map(reg_->size());
    for (size_t i = 0; i < reg_->size(); ++i) map[i] = target->index_of(reg_->name(i));
    MPoly r(target);
    for (const auto& [m, c] : terms_) {
      Monomial mm(target->size(), 0);
      for (size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (!map[i]) throw RegistryMismatch("variable '" + reg_->name(i) + "' missing from target registry");
        mm[*map[i]] += m[i];
      }
      r.add_term(mm, c);
    }
    return r;
  }

  // Like in_registry but first renames variables (old name -> new name).
  MPoly renamed(const RegistryPtr& target, const std::map<std::string, std::string>& renames) const {
    MPoly r(target);
    std::vector<size_t> map(reg_->size());
    std::vector<bool> used(reg_->size(), false);
    for (const auto& [m, c] : terms_)
      for (size_t i = 0; i < m.size(); ++i)
        if (m[i]) used[i] = true;
    for (size_t i = 0; i < reg_->size(); ++i) {
      if (!used[i]) continue;
      auto it = renames.find(reg_->name(i));
      const std::string& nm = it == renames.end() ? reg_->name(i) : it->second;
      auto idx = target->index_of(nm);
      if (!idx) throw RegistryMismatch("variable '" + nm + "' missing from target registry");
      map[i] = *idx;
    }
    for (const auto& [m, c] : terms_) {
      Monomial mm(target->size(), 0);
      for (size_t i = 0; i < m.size(); ++i)
        if (m[i]) mm[map[i]] += m[i];
      r.add_term(mm, c);
    }
    return r;
  }

  // Generic evaluation: `conv` maps a Rational coefficient into T.
  template <class T, class Conv>
  T evaluate_with(const std::vector<T>& values, Conv conv, T zero, T one) const {
    if (values.size() != reg_->size()) throw RegistryMismatch("evaluation point has wrong length");
    T sum = zero;
    for (const auto& [m, c] : terms_) {
      T term = conv(c);
      for (size_t i = 0; i < m.size(); ++i)
        for (uint32_t k = 0; k < m[i]; ++k) term = term * values[i];
      sum = sum + term;
    }
    (void)one;
    return sum;
  }

  Rational evaluate(const std::vector<Rational>& values) const {
    return evaluate_with<Rational>(values, [](const Rational& c) { return c; }, Rational(0), Rational(1));
  }

  // Assignment by name; every variable occurring in the polynomial must be assigned.
  Rational evaluate_at(const std::map<std::string, Rational>& assignment) const {
    std::vector<Rational> v(reg_->size(), Rational(0));
    for (size_t i : support_vars()) {
      auto it = assignment.find(reg_->name(i));
      if (it == assignment.end()) throw ScopeError("evaluate: no value for variable '" + reg_->name(i) + "'");
      v[i] = it->second;
    }
    return evaluate(v);
  }

  std::complex<double> evaluate_numeric(const std::vector<std::complex<double>>& values) const {
    return evaluate_with<std::complex<double>>(
        values, [](const Rational& c) { return std::complex<double>(c.get_d(), 0.0); }, {0.0, 0.0}, {1.0, 0.0});
  }

  // Monic-free sign normalization: leading coefficient positive.
  MPoly sign_normalized() const {
    if (!terms_.empty() && terms_.begin()->second < 0) return -*this;
    return *this;
  }

  std::string to_string() const;

  void check(const MPoly& o) const {
    if (!same_registry(reg_, o.reg_)) throw RegistryMismatch("operands live in different variable registries");
  }

 private:
  RegistryPtr reg_;
  Terms terms_;
};

inline MPoly operator+(MPoly a, const Rational& c) { return a += MPoly(a.registry(), c); }
inline MPoly operator-(MPoly a, const Rational& c) { return a -= MPoly(a.registry(), c); }
inline MPoly operator-(const Rational& c, const MPoly& a) { return MPoly(a.registry(), c) - a; }

// Exact division; std::nullopt when b does not divide a.
inline std::optional<MPoly> try_divide(const MPoly& a, const MPoly& b) {
  a.check(b);
  if (b.is_zero()) throw ComputationError("division by the zero polynomial");
  MPoly q(a.registry());
  if (b.is_constant()) {
    MPoly r = a;
    r *= Rational(1) / b.constant_value();
    return r;
  }
  MPoly r = a;
  const Monomial& lb = b.leading_monomial();
  const Rational& cb = b.leading_coefficient();
  const size_t n = lb.size();
  while (!r.is_zero()) {
    const Monomial& lr = r.leading_monomial();
    if (!divides(lb, lr)) return std::nullopt;
    Monomial m(n);
    for (size_t i = 0; i < n; ++i) m[i] = lr[i] - lb[i];
    Rational c = r.leading_coefficient() / cb;
    q.add_term(m, c);
    MPoly t = MPoly::monomial(a.registry(), m, c);
    r -= t * b;
  }
  return q;
}

inline MPoly exact_divide(const MPoly& a, const MPoly& b) {
  auto q = try_divide(a, b);
  if (!q) throw ComputationError("exact division failed: divisor does not divide dividend");
  return *q;
}

inline std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = abs(c);
    bool neg = c < 0;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += reg_->name(i);
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    if (mono.empty()) {
      out += nla::to_string(a);
    } else if (a == 1) {
      out += mono;
    } else {
      out += nla::to_string(a) + "*" + mono;
    }
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const MPoly& p) { return os << p.to_string(); }

}  // namespace nla
