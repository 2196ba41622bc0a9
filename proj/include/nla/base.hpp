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

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nla {

using Integer = mpz_class;
using Rational = mpq_class;

// Error kinds map onto CLI exit codes: parse 2, scope 3, computation 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const { return 4; }
};

class ParseError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 2; }
};

class ScopeError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return 3; }
};

class ComputationError : public Error {
 public:
  using Error::Error;
};

class RegistryMismatch : public Error {
 public:
  using Error::Error;
};

class NotHomogeneous : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NotPerfectPower : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class LimitNotEvaluable : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "p", "-p", "p/q" and plain decimals such as "0.25".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t first = s.find_first_not_of(" \t");
  if (first == std::string::npos) throw ParseError("empty number");
  s = s.substr(first);
  auto dot = s.find('.');
  if (dot != std::string::npos && s.find('/') == std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac = s.size() - dot - 1;
    Integer num;
    if (num.set_str(digits == "-" || digits.empty() ? "0" : digits, 10) != 0)
      throw ParseError("malformed number '" + s + "'");
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  Rational q;
  if (q.set_str(s, 10) != 0) throw ParseError("malformed number '" + s + "'");
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

// Exact k-th root of an integer, if one exists. Even k requires a non-negative argument.
inline std::optional<Integer> integer_kth_root(const Integer& z, unsigned k) {
  if (k == 0) return std::nullopt;
  if (k == 1) return z;
  if (z < 0 && k % 2 == 0) return std::nullopt;
  Integer a = abs(z);
  Integer r;
  if (mpz_root(r.get_mpz_t(), a.get_mpz_t(), k) == 0) return std::nullopt;
  if (z < 0) r = -r;
  return r;
}

inline std::optional<Rational> rational_kth_root(const Rational& q, unsigned k) {
  auto n = integer_kth_root(q.get_num(), k);
  if (!n) return std::nullopt;
  auto d = integer_kth_root(q.get_den(), k);
  if (!d) return std::nullopt;
  Rational r(*n, *d);
  r.canonicalize();
  return r;
}

inline Rational rational_pow(const Rational& q, unsigned e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), e);
  return r;
}

inline unsigned long binomial(unsigned long n, unsigned long k) {
  if (k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r.get_ui();
}

inline unsigned long factorial(unsigned long n) {
  unsigned long r = 1;
  for (unsigned long i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace nla
