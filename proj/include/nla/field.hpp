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

#include <cstdint>
#include <random>

#include "nla/base.hpp"

namespace nla {

// Field policies used by the dense linear algebra templates.

struct RationalField {
  using value_type = Rational;
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from(const Rational& q) const { return q; }
  value_type from_int(long v) const { return v; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type inv(const value_type& a) const {
    if (a == 0) throw ComputationError("inverse of zero");
    return 1 / a;
  }
  value_type pow(value_type a, uint64_t e) const {
    value_type r = 1;
    for (; e; e >>= 1, a *= a)
      if (e & 1) r *= a;
    return r;
  }
  bool is_zero(const value_type& a) const { return a == 0; }
};

// Integers modulo an odd prime p < 2^62.
class PrimeField {
 public:
  using value_type = uint64_t;

  explicit PrimeField(uint64_t p) : p_(p) {}
  uint64_t modulus() const { return p_; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(long v) const {
    long r = v % static_cast<long>(p_);
    return static_cast<uint64_t>(r < 0 ? r + static_cast<long>(p_) : r);
  }
  value_type from(const Integer& z) const {
    return mpz_fdiv_ui(z.get_mpz_t(), p_);
  }
  // Throws ComputationError when the denominator vanishes mod p.
  value_type from(const Rational& q) const {
    value_type d = from(q.get_den());
    if (d == 0) throw ComputationError("denominator vanishes modulo prime");
    return mul(from(q.get_num()), inv(d));
  }
  value_type add(value_type a, value_type b) const {
    uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
  value_type neg(value_type a) const { return a ? p_ - a : 0; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p_);
  }
  value_type pow(value_type a, uint64_t e) const {
    value_type r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  value_type inv(value_type a) const {
    if (a == 0) throw ComputationError("inverse of zero modulo prime");
    int64_t t = 0, nt = 1;
    int64_t r = static_cast<int64_t>(p_), nr = static_cast<int64_t>(a);
    while (nr) {
      int64_t q = r / nr;
      int64_t tmp = t - q * nt;
      t = nt;
      nt = tmp;
      tmp = r - q * nr;
      r = nr;
      nr = tmp;
    }
    return t < 0 ? static_cast<uint64_t>(t + static_cast<int64_t>(p_)) : static_cast<uint64_t>(t);
  }
  bool is_zero(value_type a) const { return a == 0; }

  value_type random(std::mt19937_64& rng) const { return std::uniform_int_distribution<uint64_t>(1, p_ - 1)(rng); }

 private:
  uint64_t p_;
};

// Descending list of primes just below 2^62, found with GMP's primality test.
inline uint64_t nth_large_prime(size_t index) {
  static std::vector<uint64_t> cache;
  while (cache.size() <= index) {
    uint64_t start = cache.empty() ? (uint64_t(1) << 62) - 1 : cache.back() - 2;
    Integer z(std::to_string(start));
    if (z % 2 == 0) z -= 1;
    while (mpz_probab_prime_p(z.get_mpz_t(), 30) == 0) z -= 2;
    cache.push_back(std::stoull(z.get_str()));
  }
  return cache[index];
}

}  // namespace nla
