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

#include <random>
#include <string>
#include <vector>

#include "nla/mpoly.hpp"
#include "nla/parse.hpp"

namespace nla::testing {

inline MPoly P(const std::string& text, const RegistryPtr& reg) { return parse_poly(text, reg); }

inline Rational random_rational(std::mt19937_64& rng, int lim = 9, int denlim = 4) {
  std::uniform_int_distribution<int> num(-lim, lim), den(1, denlim);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline MPoly random_poly(std::mt19937_64& rng, const RegistryPtr& reg, int terms, int maxdeg) {
  MPoly p(reg);
  std::uniform_int_distribution<int> e(0, maxdeg);
  for (int k = 0; k < terms; ++k) {
    Monomial m(reg->size());
    for (auto& x : m) x = e(rng);
    p.add_term(m, random_rational(rng));
  }
  return p;
}

// Random form of degree d in the given variables with small integer coefficients.
inline MPoly random_form(std::mt19937_64& rng, const RegistryPtr& reg, const std::vector<size_t>& vars, int d,
                         int lim = 5) {
  std::uniform_int_distribution<int> c(-lim, lim);
  MPoly p(reg);
  auto rec = [&](auto&& self, size_t i, int left, Monomial& m) -> void {
    if (i + 1 == vars.size()) {
      m[vars[i]] = left;
      p.add_term(m, c(rng));
      m[vars[i]] = 0;
      return;
    }
    for (int e = 0; e <= left; ++e) {
      m[vars[i]] = e;
      self(self, i + 1, left - e, m);
    }
    m[vars[i]] = 0;
  };
  Monomial m(reg->size(), 0);
  rec(rec, 0, d, m);
  return p;
}

}  // namespace nla::testing
