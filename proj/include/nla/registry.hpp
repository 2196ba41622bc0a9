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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nla/base.hpp"

namespace nla {

enum class VarKind { main, parameter };

// Ordered list of named variables. Position in the list fixes the monomial order:
// earlier variables rank higher under graded-lex.
class VarRegistry {
 public:
  VarRegistry() = default;

  VarRegistry(std::vector<std::string> names, std::vector<VarKind> kinds)
      : names_(std::move(names)), kinds_(std::move(kinds)) {
    if (names_.size() != kinds_.size()) throw ScopeError("registry: names and kinds differ in length");
    for (size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw ParseError("registry: empty variable name");
      for (size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j]) throw ParseError("registry: duplicate variable '" + names_[i] + "'");
    }
  }

  static std::shared_ptr<const VarRegistry> make(const std::vector<std::string>& main,
                                                 const std::vector<std::string>& params = {}) {
    std::vector<std::string> names = main;
    std::vector<VarKind> kinds(main.size(), VarKind::main);
    for (const auto& p : params) {
      names.push_back(p);
      kinds.push_back(VarKind::parameter);
    }
    return std::make_shared<const VarRegistry>(std::move(names), std::move(kinds));
  }

  size_t size() const { return names_.size(); }
  const std::string& name(size_t i) const { return names_.at(i); }
  VarKind kind(size_t i) const { return kinds_.at(i); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<size_t> index_of(std::string_view n) const {
    for (size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == n) return i;
    return std::nullopt;
  }

  size_t require(std::string_view n) const {
    auto i = index_of(n);
    if (!i) throw ParseError("unknown variable '" + std::string(n) + "'");
    return *i;
  }

  std::vector<size_t> indices_of_kind(VarKind k) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < kinds_.size(); ++i)
      if (kinds_[i] == k) out.push_back(i);
    return out;
  }

  std::vector<std::string> names_of_kind(VarKind k) const {
    std::vector<std::string> out;
    for (size_t i : indices_of_kind(k)) out.push_back(names_[i]);
    return out;
  }

  // Copy with extra variables appended; names already present are skipped.
  std::shared_ptr<const VarRegistry> extended(const std::vector<std::string>& extra, VarKind k) const {
    auto names = names_;
    auto kinds = kinds_;
    for (const auto& e : extra) {
      if (index_of(e)) continue;
      names.push_back(e);
      kinds.push_back(k);
    }
    return std::make_shared<const VarRegistry>(std::move(names), std::move(kinds));
  }

  friend bool operator==(const VarRegistry& a, const VarRegistry& b) {
    return a.names_ == b.names_ && a.kinds_ == b.kinds_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<VarKind> kinds_;
};

using RegistryPtr = std::shared_ptr<const VarRegistry>;

inline bool same_registry(const RegistryPtr& a, const RegistryPtr& b) {
  return a == b || (a && b && *a == *b);
}

// Returns a name not present in the registry, starting from `base`.
inline std::string fresh_name(const VarRegistry& reg, const std::string& base) {
  if (!reg.index_of(base)) return base;
  for (int i = 0;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!reg.index_of(cand)) return cand;
  }
}

}  // namespace nla
