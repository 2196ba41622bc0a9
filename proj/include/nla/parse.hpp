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

#include <cctype>
#include <string>
#include <string_view>

#include "nla/mpoly.hpp"

namespace nla {

namespace detail {

// Recursive-descent reader for sums and products of rationals and registry variables.
// Grammar: expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)* ;
// unary := ('+'|'-') unary | power ; power := atom ('^' integer)? ;
// atom := number | identifier | '(' expr ')'.
class PolyReader {
 public:
  PolyReader(std::string_view text, RegistryPtr reg) : s_(text), reg_(std::move(reg)) {}

  MPoly read() {
    MPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial '" + std::string(s_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MPoly expr() {
    MPoly acc = term();
    for (;;) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  MPoly term() {
    MPoly acc = unary();
    for (;;) {
      if (eat('*')) {
        acc = acc * unary();
      } else if (eat('/')) {
        MPoly d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division is only allowed by a non-zero constant");
        acc *= Rational(1) / d.constant_value();
      } else {
        return acc;
      }
    }
  }

  MPoly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  MPoly power() {
    MPoly base = atom();
    if (eat('^')) {
      skip();
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      unsigned long e = std::stoul(std::string(s_.substr(start, pos_ - start)));
      if (e > 100000) fail("exponent too large");
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  MPoly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MPoly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      return MPoly(reg_, parse_rational(s_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      auto idx = reg_->index_of(name);
      if (!idx) fail("unknown variable '" + name + "'");
      return MPoly::variable(reg_, *idx);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  RegistryPtr reg_;
  size_t pos_ = 0;
};

}  // namespace detail

inline MPoly parse_poly(std::string_view text, const RegistryPtr& reg) { return detail::PolyReader(text, reg).read(); }

}  // namespace nla
