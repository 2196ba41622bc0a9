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
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "nla/interpolate.hpp"
#include "nla/poly_ops.hpp"
#include "nla/quotient.hpp"
#include "nla/resultant.hpp"

namespace nla {

// Variables for m copies ("blocks") of an n-dimensional root, plus the deformation
// parameter t. Block b is named <letter>1..<letter>n with letters x, y, z, w, ...
struct RootSpace {
  RegistryPtr registry;
  std::vector<std::vector<std::string>> blocks;
  std::string t;

  size_t dimension() const { return blocks.empty() ? 0 : blocks[0].size(); }
  size_t arity() const { return blocks.size(); }
  MPoly var(size_t block, size_t i) const { return MPoly::variable(registry, blocks[block][i]); }
  std::vector<size_t> block_indices(size_t block) const { return indices_of(*registry, blocks[block]); }
  size_t t_index() const { return registry->require(t); }
};

inline RootSpace root_space(const RegistryPtr& base, size_t n, size_t m) {
  static const std::string letters = "xyzwuvpqrs";
  RootSpace s;
  std::vector<std::string> names;
  for (char c : letters) {
    if (s.blocks.size() == m) break;
    std::vector<std::string> block;
    bool clash = false;
    for (size_t i = 0; i < n; ++i) {
      block.push_back(std::string(1, c) + std::to_string(i + 1));
      if (base->index_of(block.back())) clash = true;
    }
    if (clash) continue;
    names.insert(names.end(), block.begin(), block.end());
    s.blocks.push_back(std::move(block));
  }
  if (s.blocks.size() < m) throw ScopeError("too many root blocks");
  s.t = fresh_name(*base, "t");
  s.registry = base->extended(names, VarKind::main)->extended({s.t}, VarKind::parameter);
  return s;
}

inline RootSpace root_space(size_t n, size_t m) { return root_space(VarRegistry::make({}, {}), n, m); }

// A function of several roots, homogeneous in each block. When `factors` is non-empty,
// poly is the product of factors[b], each depending on block b only.
struct RootFunction {
  RootSpace space;
  std::vector<int> degrees;
  MPoly poly;
  std::vector<MPoly> factors;

  size_t arity() const { return degrees.size(); }
};

inline RootFunction make_root_function(const RootSpace& space, const MPoly& poly) {
  RootFunction g{space, {}, poly.in_registry(space.registry), {}};
  for (size_t b = 0; b < space.arity(); ++b) g.degrees.push_back(require_homogeneous(g.poly, space.block_indices(b)));
  return g;
}

// Absolutely antisymmetric form eps(x, y, ...) = det of the block matrix.
inline RootFunction epsilon_form(const RootSpace& space) {
  const size_t n = space.dimension();
  if (space.arity() != n) throw ScopeError("epsilon form needs as many blocks as coordinates");
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  MPoly e(space.registry);
  do {
    int inversions = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    Monomial m(space.registry->size(), 0);
    for (size_t b = 0; b < n; ++b) m[space.registry->require(space.blocks[b][perm[b]])] = 1;
    e.add_term(m, inversions % 2 ? -1 : 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return RootFunction{space, std::vector<int>(n, 1), e, {}};
}

namespace detail {

inline RootFunction block_product(const RootSpace& space, const std::vector<int>& degrees,
                                  const std::vector<Rational>& weights) {
  if (degrees.size() != space.arity()) throw ScopeError("block degree list does not match the arity");
  RootFunction g{space, degrees, MPoly(space.registry, 1), {}};
  for (size_t b = 0; b < space.arity(); ++b) {
    MPoly l(space.registry);
    for (size_t i = 0; i < space.dimension(); ++i) l += space.var(b, i) * weights[i];
    g.factors.push_back(l.pow(degrees[b]));
    g.poly *= g.factors.back();
  }
  return g;
}

}  // namespace detail

// prod_b (sum_i block_b,i)^{d_b}
inline RootFunction default_g1(const RootSpace& space, const std::vector<int>& degrees) {
  return detail::block_product(space, degrees, std::vector<Rational>(space.dimension(), 1));
}

inline RootFunction default_g1(size_t n, const std::vector<int>& degrees) {
  return default_g1(root_space(n, degrees.size()), degrees);
}

// prod_b l(block_b)^{d_b} with one random positive linear form l shared by all blocks,
// so the result is symmetric under block permutations.
inline RootFunction random_g1(const RootSpace& space, const std::vector<int>& degrees, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(1, 9);
  std::vector<Rational> w;
  for (size_t i = 0; i < space.dimension(); ++i) w.emplace_back(dist(rng));
  return detail::block_product(space, degrees, w);
}

namespace detail {

// Group ids in order of first appearance; returns the number of groups.
inline size_t check_pattern(const std::vector<int>& pattern) {
  int next = 0;
  for (int g : pattern) {
    if (g < 0 || g > next) throw ScopeError("repetition pattern must number groups in order of first appearance");
    if (g == next) ++next;
  }
  return static_cast<size_t>(next);
}

}  // namespace detail

// prod over index tuples matching `pattern` of g(Lambda^(i_1), ..., Lambda^(i_m)), computed by
// eliminating one block at a time against the system (the root function goes last).
inline MPoly product_over_roots(const PolySystem& sys, const RootFunction& g, const std::vector<int>& pattern) {
  const auto& S = g.space;
  const size_t n = sys.dimension();
  if (S.dimension() != n) throw ScopeError("root function blocks do not match the system dimension");
  if (sys.polys.size() + 1 != n) throw ScopeError("products over roots need n-1 forms in n variables");
  if (pattern.size() != g.arity()) throw ScopeError("pattern length does not match the root function arity");
  const size_t groups = detail::check_pattern(pattern);
  std::vector<size_t> rep(groups, SIZE_MAX);
  std::vector<int> gdeg(groups, 0);
  std::map<size_t, MPoly> subst;
  for (size_t b = 0; b < pattern.size(); ++b) {
    size_t k = static_cast<size_t>(pattern[b]);
    gdeg[k] += g.degrees[b];
    if (rep[k] == SIZE_MAX) {
      rep[k] = b;
      continue;
    }
    for (size_t i = 0; i < n; ++i) subst.emplace(S.registry->require(S.blocks[b][i]), S.var(rep[k], i));
  }
  MPoly h = subst.empty() ? g.poly : g.poly.substitute(subst);
  // Each elimination multiplies the degree in the remaining blocks by N.
  long scale = 1;
  for (size_t k = 0; k < groups; ++k, scale *= sys.root_count()) {
    if (h.is_zero()) return h;
    const auto& names = S.blocks[rep[k]];
    std::map<std::string, std::string> ren;
    for (size_t i = 0; i < n; ++i) ren.emplace(sys.main_vars[i], names[i]);
    std::vector<MPoly> polys;
    for (const auto& p : sys.polys) polys.push_back(p.renamed(S.registry, ren));
    polys.push_back(h);
    auto degs = sys.degrees;
    degs.push_back(static_cast<int>(gdeg[k] * scale));
    h = macaulay_resultant(PolySystem::make(polys, names, degs));
  }
  return h;
}

// One factor of the limit formula: the product over `pattern` raised to `exponent`.
struct LimitFactor {
  std::vector<int> pattern;
  int exponent;
  bool numerator;
};

// Products over tuples with coincident indices cancel between numerator and denominator.
inline std::vector<LimitFactor> limit_formula(size_t n) {
  switch (n) {
    case 2:
      return {{{0, 1}, 1, true}, {{0, 0}, 1, false}};
    case 3:
      return {{{0, 1, 2}, 1, true}, {{0, 0, 0}, 2, true}, {{0, 0, 1}, 3, false}};
    case 4:
      return {{{0, 1, 2, 3}, 1, true},
              {{0, 0, 0, 1}, 8, true},
              {{0, 0, 1, 1}, 3, true},
              {{0, 0, 1, 2}, 6, false},
              {{0, 0, 0, 0}, 6, false}};
    default:
      throw ScopeError("limit formula is available for n = 2, 3, 4 only");
  }
}

enum class LimitMethod { automatic, symbolic, modular };

struct LimitOptions {
  LimitMethod method = LimitMethod::automatic;
  uint64_t seed = 0x5eed;
  // Interpolate the k-th root of the limit instead of the limit itself (k odd).
  unsigned root = 1;
  size_t max_dimension = 1024;  // tensor-space size guard for the modular engine
};

// Symbolic evaluation: every product over roots is an explicit polynomial in t.
inline MPoly symbolic_limit(const PolySystem& sys, const RootFunction& g0, const RootFunction& g1) {
  const auto& S = g0.space;
  const size_t t = S.t_index();
  RootFunction g{S, g0.degrees, g0.poly + MPoly::variable(S.registry, t) * g1.poly.in_registry(S.registry), {}};
  MPoly num(S.registry, 1), den(S.registry, 1);
  long kn = 0, kd = 0;
  for (const auto& fac : limit_formula(sys.dimension())) {
    MPoly p = product_over_roots(sys, g, fac.pattern);
    if (p.is_zero()) throw LimitNotEvaluable("limit not evaluable with this g1: a product over roots vanishes identically");
    auto o = t_order(p, t);
    (fac.numerator ? num : den) *= o.coefficient.pow(fac.exponent);
    (fac.numerator ? kn : kd) += static_cast<long>(o.order) * fac.exponent;
  }
  if (kn < kd) throw LimitNotEvaluable("limit not evaluable with this g1: denominator vanishes to higher order");
  if (kn > kd) return MPoly(sys.registry());
  auto q = try_divide(num, den);
  if (!q) throw ComputationError("limit is not a polynomial");
  return q->in_registry(sys.registry());
}

namespace detail {

// A sum of Kronecker products; groups[k] is a polynomial in the k-th root slot, stored as
// (exponent vector over the n coordinates, coefficient).
using GroupPoly = std::vector<std::pair<Monomial, Rational>>;
using KronTerm = std::vector<GroupPoly>;

inline GroupPoly group_poly(const MPoly& p, const std::vector<std::vector<size_t>>& slots_idx,
                            const std::vector<size_t>& slots, size_t n, bool complete = true) {
  std::map<Monomial, Rational> acc;
  for (const auto& [m, c] : p.terms()) {
    Monomial e(n, 0);
    uint32_t used = 0;
    for (size_t b : slots)
      for (size_t i = 0; i < n; ++i) {
        e[i] += m[slots_idx[b][i]];
        used += m[slots_idx[b][i]];
      }
    if (complete && used != total_degree(m)) throw ScopeError("root functions may involve block variables only");
    acc[e] += c;
  }
  GroupPoly out;
  for (auto& [e, c] : acc)
    if (c != 0) out.emplace_back(e, c);
  return out;
}

inline std::vector<KronTerm> kron_terms(const RootFunction& g, const std::vector<int>& pattern, size_t groups) {
  const auto& S = g.space;
  const size_t n = S.dimension();
  std::vector<std::vector<size_t>> idx;
  for (size_t b = 0; b < S.arity(); ++b) idx.push_back(S.block_indices(b));
  std::vector<std::vector<size_t>> members(groups);
  for (size_t b = 0; b < pattern.size(); ++b) members[static_cast<size_t>(pattern[b])].push_back(b);
  std::vector<KronTerm> out;
  if (!g.factors.empty()) {
    KronTerm term;
    for (size_t k = 0; k < groups; ++k) {
      MPoly prod(S.registry, 1);
      for (size_t b : members[k]) prod *= g.factors[b];
      term.push_back(group_poly(prod, idx, members[k], n));
    }
    out.push_back(std::move(term));
    return out;
  }
  std::vector<size_t> all(S.arity());
  std::iota(all.begin(), all.end(), 0);
  group_poly(g.poly, idx, all, n);
  std::map<std::vector<Monomial>, Rational> acc;
  for (const auto& [m, c] : g.poly.terms()) {
    MPoly single = MPoly::monomial(S.registry, m, 1);
    std::vector<Monomial> key;
    for (size_t k = 0; k < groups; ++k) key.push_back(group_poly(single, idx, members[k], n, false).front().first);
    acc[key] += c;
  }
  for (const auto& [key, c] : acc) {
    if (c == 0) continue;
    KronTerm term;
    for (size_t k = 0; k < groups; ++k) term.push_back({{key[k], k == 0 ? c : Rational(1)}});
    out.push_back(std::move(term));
  }
  return out;
}

// target += A_0 (x) A_1 (x) ... (x) A_{m-1}
template <class F>
void kron_accumulate(const F& f, FMatrix<F>& target, const std::vector<const FMatrix<F>*>& mats) {
  using V = typename F::value_type;
  struct Entry {
    size_t i, j;
    V v;
  };
  std::vector<std::vector<Entry>> nz(mats.size());
  for (size_t k = 0; k < mats.size(); ++k)
    for (size_t i = 0; i < mats[k]->rows(); ++i)
      for (size_t j = 0; j < mats[k]->cols(); ++j)
        if (!f.is_zero((*mats[k])(i, j))) nz[k].push_back({i, j, (*mats[k])(i, j)});
  auto rec = [&](auto&& self, size_t k, size_t row, size_t col, V v) -> void {
    if (k == mats.size()) {
      target(row, col) = f.add(target(row, col), v);
      return;
    }
    const size_t dim = mats[k]->rows();
    for (const auto& e : nz[k]) self(self, k + 1, row * dim + e.i, col * dim + e.j, f.mul(v, e.v));
  };
  rec(rec, 0, 0, 0, f.one());
}

// Coefficients (low to high in t) of det(E + t G).
template <class F>
std::vector<typename F::value_type> det_pencil(const F& f, const FMatrix<F>& E, const FMatrix<F>& G,
                                               std::mt19937_64& rng) {
  using V = typename F::value_type;
  const size_t D = E.rows();
  for (int attempt = 0; attempt < 6; ++attempt) {
    V t0 = f.random(rng);
    FMatrix<F> B(D, D, f.zero());
    for (size_t i = 0; i < D; ++i)
      for (size_t j = 0; j < D; ++j) B(i, j) = f.add(E(i, j), f.mul(t0, G(i, j)));
    auto inv = inverse(f, B);
    if (!inv) continue;
    V detB = determinant(f, B);
    auto c = characteristic_coefficients(f, multiply(f, *inv, G));
    // det(I + sK) = sum_i (-1)^i c_{D-i} s^i, then s = t - t0.
    std::vector<V> out{f.zero()};
    for (size_t i = D + 1; i-- > 0;) {
      V e = i % 2 ? f.neg(c[D - i]) : c[D - i];
      std::vector<V> next(out.size() + 1, f.zero());
      for (size_t k = 0; k < out.size(); ++k) {
        next[k + 1] = f.add(next[k + 1], out[k]);
        next[k] = f.sub(next[k], f.mul(out[k], t0));
      }
      next[0] = f.add(next[0], e);
      out = std::move(next);
    }
    for (auto& v : out) v = f.mul(v, detB);
    while (out.size() > 1 && f.is_zero(out.back())) out.pop_back();
    return out;
  }
  // B singular for every sampled t0: the pencil is (almost surely) singular.
  return {f.zero()};
}

}  // namespace detail

// Evaluates all products over roots of g0 + t g1 at a parameter point modulo a prime, using
// multiplication operators of the quotient algebra of the system.
class LimitEngine {
 public:
  LimitEngine(const PolySystem& sys, const RootFunction& g0, const RootFunction& g1, size_t max_dimension)
      : sys_(sys), main_(sys.main_indices()), params_(sys.active_parameters()) {
    const size_t n = sys.dimension();
    if (g0.space.dimension() != n || g1.space.dimension() != n || g0.arity() != n || g1.arity() != n)
      throw ScopeError("root functions do not match the system");
    if (g0.degrees != g1.degrees) throw ScopeError("g0 and g1 must have the same block degrees");
    N_ = sys.root_count();
    for (const auto& fac : limit_formula(n)) {
      Factor F;
      F.spec = fac;
      F.groups = detail::check_pattern(fac.pattern);
      F.g0 = detail::kron_terms(g0, fac.pattern, F.groups);
      F.g1 = detail::kron_terms(g1, fac.pattern, F.groups);
      long D = 1;
      for (size_t k = 0; k < F.groups; ++k) D *= N_;
      if (static_cast<size_t>(D) > max_dimension)
        throw ScopeError("tensor space of dimension " + std::to_string(D) + " exceeds the engine limit");
      int total = std::accumulate(g0.degrees.begin(), g0.degrees.end(), 0);
      long rho_exp = total;
      for (size_t k = 1; k < F.groups; ++k) rho_exp *= N_;
      F.rho_exponent = rho_exp;
      factors_.push_back(std::move(F));
    }
  }

  const std::vector<size_t>& parameters() const { return params_; }
  const std::vector<LimitFactor> formula() const {
    std::vector<LimitFactor> out;
    for (const auto& F : factors_) out.push_back(F.spec);
    return out;
  }

  // Per factor: coefficients of the product over roots as a polynomial in t.
  std::vector<std::vector<uint64_t>> products(const PrimeField& f, const std::vector<uint64_t>& values,
                                              std::mt19937_64& rng) const {
    const size_t n = sys_.dimension();
    std::vector<SparseForm<PrimeField>> forms;
    for (const auto& p : sys_.polys) forms.push_back(specialize_form(f, p, main_, params_, values));
    std::optional<QuotientAlgebra<PrimeField>> Q;
    std::vector<std::vector<uint64_t>> T(n, std::vector<uint64_t>(n, 0));
    for (int attempt = 0; attempt < 4 && !Q; ++attempt) {
      for (size_t i = 0; i < n; ++i) std::fill(T[i].begin(), T[i].end(), 0), T[i][i] = 1;
      if (attempt > 0)
        for (size_t i = 0; i + 1 < n; ++i) T[n - 1][i] = f.random(rng);
      std::vector<SparseForm<PrimeField>> sheared;
      for (const auto& fm : forms) sheared.push_back(attempt ? compose_linear(f, fm, T) : fm);
      Q = build_quotient(f, sheared, sys_.degrees);
    }
    if (!Q) throw BadPoint("quotient algebra unavailable at this point");
    const size_t N = Q->dim;
    std::vector<FMatrix<PrimeField>> X;
    for (size_t k = 0; k < n; ++k) {
      FMatrix<PrimeField> x(N, N, 0);
      for (size_t j = 0; j < n; ++j) {
        if (!T[k][j]) continue;
        if (j + 1 == n) {
          for (size_t i = 0; i < N; ++i) x(i, i) = f.add(x(i, i), T[k][j]);
          continue;
        }
        for (size_t a = 0; a < N; ++a)
          for (size_t b = 0; b < N; ++b) x(a, b) = f.add(x(a, b), f.mul(T[k][j], Q->ops[j](a, b)));
      }
      X.push_back(std::move(x));
    }
    std::map<Monomial, FMatrix<PrimeField>> mono;
    auto mono_op = [&](const Monomial& e) -> const FMatrix<PrimeField>& {
      auto it = mono.find(e);
      if (it != mono.end()) return it->second;
      FMatrix<PrimeField> r = identity(f, N);
      for (size_t k = 0; k < n; ++k)
        for (uint32_t p = 0; p < e[k]; ++p) r = multiply(f, r, X[k]);
      return mono.emplace(e, std::move(r)).first->second;
    };
    auto group_op = [&](const detail::GroupPoly& gp) {
      FMatrix<PrimeField> r(N, N, 0);
      for (const auto& [e, c] : gp) {
        const auto& m = mono_op(e);
        uint64_t cc = f.from(c);
        for (size_t a = 0; a < N; ++a)
          for (size_t b = 0; b < N; ++b) r(a, b) = f.add(r(a, b), f.mul(cc, m(a, b)));
      }
      return r;
    };
    auto assemble = [&](const std::vector<detail::KronTerm>& terms, size_t D) {
      FMatrix<PrimeField> M(D, D, 0);
      for (const auto& term : terms) {
        std::vector<FMatrix<PrimeField>> ops;
        for (const auto& gp : term) ops.push_back(group_op(gp));
        std::vector<const FMatrix<PrimeField>*> ptrs;
        for (const auto& o : ops) ptrs.push_back(&o);
        detail::kron_accumulate(f, M, ptrs);
      }
      return M;
    };
    std::vector<std::vector<uint64_t>> out;
    for (const auto& F : factors_) {
      size_t D = 1;
      for (size_t k = 0; k < F.groups; ++k) D *= N;
      auto coeffs = detail::det_pencil(f, assemble(F.g0, D), assemble(F.g1, D), rng);
      uint64_t scale = f.pow(Q->rho, static_cast<uint64_t>(F.rho_exponent));
      for (auto& c : coeffs) c = f.mul(c, scale);
      out.push_back(std::move(coeffs));
    }
    return out;
  }

 private:
  struct Factor {
    LimitFactor spec;
    size_t groups = 0;
    std::vector<detail::KronTerm> g0, g1;
    long rho_exponent = 0;
  };
  PolySystem sys_;
  std::vector<size_t> main_;
  std::vector<size_t> params_;
  long N_ = 0;
  std::vector<Factor> factors_;
};

namespace detail {

// Generic t-order of every product over roots, from a few random parameter points.
inline std::vector<size_t> generic_orders(const LimitEngine& engine, std::mt19937_64& rng) {
  const auto formula = engine.formula();
  std::vector<size_t> order(formula.size(), SIZE_MAX);
  PrimeField f(nth_large_prime(0));
  int ok = 0;
  for (int attempt = 0; ok < 3 && attempt < 20; ++attempt) {
    std::vector<uint64_t> x(engine.parameters().size());
    for (auto& v : x) v = f.random(rng);
    try {
      auto prods = engine.products(f, x, rng);
      for (size_t i = 0; i < prods.size(); ++i)
        for (size_t k = 0; k < prods[i].size(); ++k)
          if (!f.is_zero(prods[i][k])) {
            order[i] = std::min(order[i], k);
            break;
          }
      ++ok;
    } catch (const BadPoint&) {
    }
  }
  if (ok == 0) throw ComputationError("no usable sample point for the limit (are the roots isolated?)");
  for (size_t o : order)
    if (o == SIZE_MAX)
      throw LimitNotEvaluable("limit not evaluable with this g1: a product over roots vanishes identically");
  return order;
}

// Value of the limit at a point, given the generic orders; BadPoint when the denominator vanishes.
inline uint64_t limit_value(const PrimeField& f, const std::vector<LimitFactor>& formula,
                            const std::vector<size_t>& order, const std::vector<std::vector<uint64_t>>& prods) {
  uint64_t num = 1, den = 1;
  for (size_t i = 0; i < formula.size(); ++i) {
    const auto& c = prods[i];
    for (size_t k = 0; k < std::min(order[i], c.size()); ++k)
      if (!f.is_zero(c[k])) throw ComputationError("t-order below the generic order");
    uint64_t v = order[i] < c.size() ? c[order[i]] : 0;
    auto& acc = formula[i].numerator ? num : den;
    acc = f.mul(acc, f.pow(v, static_cast<uint64_t>(formula[i].exponent)));
  }
  if (f.is_zero(den)) throw BadPoint("denominator vanishes at this point");
  return f.mul(num, f.inv(den));
}

}  // namespace detail

// Upper bound on the degree of the complanart in each variable of `vars`.
inline std::vector<int> complanart_degree_bounds(const PolySystem& sys, const std::vector<size_t>& vars) {
  const size_t n = sys.dimension();
  const long N = sys.root_count();
  const long c = static_cast<long>(binomial(static_cast<unsigned long>(N - 1), n - 1));
  std::vector<int> out;
  for (size_t v : vars) {
    long d = 0;
    for (size_t i = 0; i < sys.polys.size(); ++i) d += 2 * c * (N / sys.degrees[i]) * sys.polys[i].degree_in(v);
    out.push_back(static_cast<int>(d));
  }
  return out;
}

// The limit evaluated modulo primes and interpolated over the system's parameters. With
// opt.root = k (odd) the k-th root is interpolated instead, using primes p = 2 mod 3 so that
// cube roots are unique.
inline MPoly modular_limit(const PolySystem& sys, const RootFunction& g0, const RootFunction& g1,
                           const LimitOptions& opt) {
  if (opt.root != 1 && opt.root != 3) throw ScopeError("modular root interpolation supports k = 1 or 3");
  LimitEngine engine(sys, g0, g1, opt.max_dimension);
  const auto formula = engine.formula();
  const auto& params = engine.parameters();
  std::mt19937_64 rng(opt.seed);
  auto order = detail::generic_orders(engine, rng);
  long kn = 0, kd = 0;
  for (size_t i = 0; i < formula.size(); ++i) (formula[i].numerator ? kn : kd) += static_cast<long>(order[i]) * formula[i].exponent;
  if (kn < kd) throw LimitNotEvaluable("limit not evaluable with this g1: denominator vanishes to higher order");
  if (kn > kd) return MPoly(sys.registry());

  BlackBox bb = [&](const PrimeField& f, const std::vector<uint64_t>& x) -> uint64_t {
    uint64_t v = detail::limit_value(f, formula, order, engine.products(f, x, rng));
    if (opt.root == 3) v = f.pow(v, (2 * f.modulus() - 1) / 3);
    return v;
  };
  InterpolationOptions io;
  io.seed = opt.seed ^ 0x9e3779b97f4a7c15ULL;
  io.degree_bounds = complanart_degree_bounds(sys, params);
  unsigned k = static_cast<unsigned>(factorial(sys.dimension()) / 2);
  for (auto& d : io.degree_bounds) d *= static_cast<int>(opt.root == 1 ? k : 1);
  if (opt.root == 3) io.prime_filter = [](uint64_t p) { return p % 3 == 2; };
  auto coeffs = interpolate_rational(bb, params.size(), io);
  const auto& reg = sys.registry();
  MPoly out(reg);
  for (const auto& [m, c] : coeffs) {
    Monomial full(reg->size(), 0);
    for (size_t i = 0; i < params.size(); ++i) full[params[i]] = m[i];
    out.add_term(full, c);
  }
  return out;
}

// Sign relating the complanart to the squared epsilon product over root sets.
inline int complanart_unit(size_t n, long N) {
  unsigned long sets = binomial(static_cast<unsigned long>(N), n);
  unsigned long k = factorial(n) / 2;
  return (sets * k) % 2 ? -1 : 1;
}

namespace detail {

inline std::vector<std::vector<size_t>> subsets(size_t N, size_t n) {
  std::vector<std::vector<size_t>> out;
  std::vector<size_t> cur;
  auto rec = [&](auto&& self, size_t start) -> void {
    if (cur.size() == n) {
      out.push_back(cur);
      return;
    }
    for (size_t i = start; i < N; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace detail

// rho^{2 C(N-1, n-1)} prod over n-sets of roots of eps^2, from the quotient algebra A. In the
// idempotent basis of the exterior power, w = u_1 ^ ... ^ u_{n-1} ^ 1 has coordinates eps(Lambda_I)
// and v = 1 ^ l ^ ... ^ l^{n-1} has Vandermonde coordinates. Krylov matrices of w and v under the
// derivation induced by l give prod w_I / prod v_I = det W / det K, and prod v_I^2 is a power of
// the discriminant of the characteristic polynomial of l. Returns 0 when l has a repeated
// eigenvalue (a multiple root) and nullopt when the Krylov matrix is singular.
template <class F>
std::optional<typename F::value_type> exterior_value(const F& f, const QuotientAlgebra<F>& Q, std::mt19937_64& rng) {
  using V = typename F::value_type;
  const size_t n = Q.n, N = Q.dim;
  auto apply = [&](const FMatrix<F>& A, const std::vector<V>& v) {
    std::vector<V> r(N, f.zero());
    for (size_t i = 0; i < N; ++i)
      for (size_t j = 0; j < N; ++j)
        if (!f.is_zero(A(i, j)) && !f.is_zero(v[j])) r[i] = f.add(r[i], f.mul(A(i, j), v[j]));
    return r;
  };
  FMatrix<F> L(N, N, f.zero());
  for (size_t k = 0; k + 1 < n; ++k) {
    V c = f.random(rng);
    for (size_t i = 0; i < N; ++i)
      for (size_t j = 0; j < N; ++j) L(i, j) = f.add(L(i, j), f.mul(c, Q.ops[k](i, j)));
  }
  // Discriminant of the characteristic polynomial chi of L: (-1)^{N(N-1)/2} det chi'(L).
  auto chi = characteristic_coefficients(f, L);
  FMatrix<F> P(N, N, f.zero());
  for (size_t i = N; i >= 1; --i) {
    P = multiply(f, P, L);
    V c = f.mul(chi[i], f.from_int(static_cast<long>(i)));
    for (size_t r = 0; r < N; ++r) P(r, r) = f.add(P(r, r), c);
  }
  V disc = determinant(f, P);
  if ((N * (N - 1) / 2) % 2) disc = f.neg(disc);
  if (f.is_zero(disc)) return f.zero();
  std::vector<std::vector<V>> Y, Vs;
  for (size_t k = 0; k + 1 < n; ++k) Y.push_back(apply(Q.ops[k], Q.unit));
  Y.push_back(Q.unit);
  Vs.push_back(Q.unit);
  for (size_t k = 1; k < n; ++k) Vs.push_back(apply(L, Vs.back()));
  const auto sets = detail::subsets(N, n);
  const size_t M = sets.size();
  std::map<std::vector<size_t>, size_t> index;
  for (size_t i = 0; i < M; ++i) index.emplace(sets[i], i);
  auto wedge = [&](const std::vector<std::vector<V>>& rows) {
    std::vector<V> out(M);
    for (size_t s = 0; s < M; ++s) {
      FMatrix<F> m(n, n, f.zero());
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) m(a, b) = rows[a][sets[s][b]];
      out[s] = determinant(f, m);
    }
    return out;
  };
  // Derivation induced by L on the exterior power, as a sparse list per column.
  std::vector<std::vector<std::pair<size_t, V>>> Dcols(M);
  for (size_t s = 0; s < M; ++s) {
    const auto& J = sets[s];
    for (size_t pos = 0; pos < n; ++pos)
      for (size_t r = 0; r < N; ++r) {
        V a = L(r, J[pos]);
        if (f.is_zero(a)) continue;
        if (r != J[pos] && std::find(J.begin(), J.end(), r) != J.end()) continue;
        std::vector<size_t> K2 = J;
        K2[pos] = r;
        // Sign of the permutation sorting K2.
        int inv = 0;
        for (size_t x = 0; x < n; ++x)
          for (size_t y = x + 1; y < n; ++y) inv += K2[x] > K2[y];
        std::sort(K2.begin(), K2.end());
        Dcols[s].emplace_back(index.at(K2), inv % 2 ? f.neg(a) : a);
      }
  }
  auto krylov = [&](std::vector<V> v) {
    FMatrix<F> K(M, M, f.zero());
    for (size_t j = 0; j < M; ++j) {
      for (size_t i = 0; i < M; ++i) K(i, j) = v[i];
      std::vector<V> next(M, f.zero());
      for (size_t s = 0; s < M; ++s) {
        if (f.is_zero(v[s])) continue;
        for (const auto& [t, a] : Dcols[s]) next[t] = f.add(next[t], f.mul(a, v[s]));
      }
      v = std::move(next);
    }
    return determinant(f, std::move(K));
  };
  V detK = krylov(wedge(Vs));
  if (f.is_zero(detK)) return std::nullopt;
  V ratio = f.mul(krylov(wedge(Y)), f.inv(detK));
  const long N1 = static_cast<long>(N);
  V out = f.pow(Q.rho, 2 * binomial(static_cast<unsigned long>(N1 - 1), n - 1));
  out = f.mul(out, f.mul(ratio, ratio));
  return f.mul(out, f.pow(disc, binomial(static_cast<unsigned long>(N1 - 2), n - 2)));
}

// Complanart (in the sign convention of complanart()) from exterior powers of the quotient
// algebra, interpolated over the parameters. Independent of the t-limit construction.
inline MPoly exterior_complanart(const PolySystem& sys, uint64_t seed = 0x5eed) {
  const size_t n = sys.dimension();
  if (sys.polys.size() + 1 != n) throw ScopeError("complanart needs n-1 forms in n variables");
  const long N = sys.root_count();
  const auto main = sys.main_indices();
  const auto params = sys.active_parameters();
  std::mt19937_64 rng(seed);
  const int unit = complanart_unit(n, N);
  BlackBox bb = [&](const PrimeField& f, const std::vector<uint64_t>& x) -> uint64_t {
    std::vector<SparseForm<PrimeField>> forms;
    for (const auto& p : sys.polys) forms.push_back(specialize_form(f, p, main, params, x));
    for (int attempt = 0; attempt < 4; ++attempt) {
      std::vector<SparseForm<PrimeField>> sheared = forms;
      if (attempt > 0) {
        std::vector<std::vector<uint64_t>> T(n, std::vector<uint64_t>(n, 0));
        for (size_t i = 0; i < n; ++i) T[i][i] = 1;
        for (size_t i = 0; i + 1 < n; ++i) T[n - 1][i] = f.random(rng);
        for (auto& fm : sheared) fm = compose_linear(f, fm, T);
      }
      auto Q = build_quotient(f, sheared, sys.degrees);
      if (!Q) continue;
      auto v = exterior_value(f, *Q, rng);
      if (!v) throw BadPoint("singular Krylov matrix");
      return unit > 0 ? *v : f.neg(*v);
    }
    throw BadPoint("quotient algebra unavailable at this point");
  };
  InterpolationOptions io;
  io.seed = seed ^ 0x51ed270b27a3f1c5ULL;
  io.degree_bounds = complanart_degree_bounds(sys, params);
  auto coeffs = interpolate_rational(bb, params.size(), io);
  const auto& reg = sys.registry();
  MPoly out(reg);
  for (const auto& [m, c] : coeffs) {
    Monomial full(reg->size(), 0);
    for (size_t i = 0; i < params.size(); ++i) full[params[i]] = m[i];
    out.add_term(full, c);
  }
  return out;
}

// prod over pairwise-distinct root tuples of g0, as the t -> 0 limit of the product formula
// for g = g0 + t g1. Raises LimitNotEvaluable when this g1 is degenerate for the system.
inline MPoly distinct_product_limit(const PolySystem& sys, const RootFunction& g0, const RootFunction& g1,
                                    LimitOptions opt = {}) {
  const size_t n = sys.dimension();
  limit_formula(n);
  if (sys.polys.size() + 1 != n) throw ScopeError("the limit needs n-1 forms in n variables");
  bool symbolic = opt.method == LimitMethod::symbolic || (opt.method == LimitMethod::automatic && n == 2);
  if (symbolic) return symbolic_limit(sys, g0, g1);
  opt.root = 1;
  return modular_limit(sys, g0, g1, opt);
}

struct ComplanartResult {
  MPoly raw_power;  // C^k; left empty by the exterior route when k > 3
  bool raw_power_available = true;
  MPoly complanart;
  size_t n = 0;
  long N = 0;
  unsigned k = 1;  // n!/2
  bool shortcut_applied = false;
  int g1_attempts = 0;
  std::string g1;      // text of the g1 that worked
  std::string method;  // "shortcut", "symbolic", "modular", "modular-root", "exterior"
};

// limit: the t -> 0 limit of products over roots. exterior: exterior powers of the quotient
// algebra. automatic takes the limit unless its tensor spaces exceed max_dimension.
enum class ComplanartRoute { automatic, limit, exterior };

struct ComplanartOptions {
  ComplanartRoute route = ComplanartRoute::automatic;
  LimitMethod method = LimitMethod::automatic;
  uint64_t seed = 0x5eed;
  int random_g1 = 3;
  // For n = 3, interpolate the cube root directly and check the cube against the limit.
  bool interpolate_root = true;
  size_t max_dimension = 1024;
};

namespace detail {

// Checks C^3 against independent limit evaluations modulo primes where cubing is not injective.
inline void check_cube(const PolySystem& sys, const RootFunction& g0, const RootFunction& g1, const MPoly& C,
                       const LimitOptions& opt) {
  LimitEngine engine(sys, g0, g1, opt.max_dimension);
  const auto formula = engine.formula();
  const auto& params = engine.parameters();
  std::mt19937_64 rng(opt.seed + 17);
  auto order = generic_orders(engine, rng);
  long kn = 0, kd = 0;
  for (size_t i = 0; i < formula.size(); ++i) (formula[i].numerator ? kn : kd) += static_cast<long>(order[i]) * formula[i].exponent;
  if (kn != kd) {
    if (!C.is_zero()) throw NotPerfectPower("limit vanishes but the interpolated root does not");
    return;
  }
  int checked = 0;
  for (size_t pi = 0; checked < 2 && pi < 64; ++pi) {
    uint64_t p = nth_large_prime(pi);
    if (p % 3 != 1) continue;
    PrimeField f(p);
    std::vector<uint64_t> x(params.size());
    for (auto& v : x) v = f.random(rng);
    uint64_t raw;
    try {
      raw = limit_value(f, formula, order, engine.products(f, x, rng));
    } catch (const BadPoint&) {
      continue;
    }
    auto form = specialize_form(f, C, {}, params, x);
    uint64_t c = form.empty() ? 0 : form.begin()->second;
    if (f.pow(c, 3) != raw) throw NotPerfectPower("limit is not the cube of the interpolated root");
    ++checked;
  }
}

}  // namespace detail

inline ComplanartResult complanart(const PolySystem& sys, const ComplanartOptions& opt = {}) {
  const size_t n = sys.dimension();
  if (n < 2) throw ScopeError("complanart needs at least two variables");
  if (sys.polys.size() + 1 != n) throw ScopeError("complanart needs n-1 forms in n variables");
  ComplanartResult res;
  res.n = n;
  res.N = sys.root_count();
  res.k = static_cast<unsigned>(factorial(n) / 2);
  const auto& reg = sys.registry();
  if (res.N < static_cast<long>(n)) {
    res.raw_power = MPoly(reg, 1);
    res.complanart = MPoly(reg, 1);
    res.shortcut_applied = true;
    res.method = "shortcut";
    return res;
  }
  if (n > 4) throw ScopeError("complanart is implemented for n = 2, 3, 4 (or N < n)");
  for (const auto& p : sys.polys)
    if (p.is_zero()) throw ScopeError("complanart of a system with a zero form");
  bool exterior = opt.route == ComplanartRoute::exterior;
  if (opt.route == ComplanartRoute::automatic && n > 2 && opt.method != LimitMethod::symbolic) {
    unsigned long D = 1;
    for (size_t i = 0; i < n; ++i) D *= static_cast<unsigned long>(res.N);
    exterior = D > opt.max_dimension;
  }
  if (exterior) {
    res.complanart = exterior_complanart(sys, opt.seed);
    res.raw_power_available = res.k <= 3;
    res.raw_power = res.raw_power_available ? res.complanart.pow(res.k) : MPoly(reg);
    res.g1_attempts = 0;
    res.method = "exterior";
    return res;
  }
  auto space = root_space(reg, n, n);
  auto g0 = epsilon_form(space);
  std::mt19937_64 rng(opt.seed);
  std::string last_error;
  for (int attempt = 0; attempt <= opt.random_g1; ++attempt) {
    auto g1 = attempt == 0 ? default_g1(space, g0.degrees) : random_g1(space, g0.degrees, rng);
    res.g1_attempts = attempt + 1;
    res.g1 = g1.poly.to_string();
    LimitOptions lo;
    lo.method = opt.method;
    lo.seed = opt.seed + static_cast<uint64_t>(attempt);
    lo.max_dimension = opt.max_dimension;
    try {
      bool symbolic = opt.method == LimitMethod::symbolic || (opt.method == LimitMethod::automatic && n == 2);
      if (!symbolic && opt.interpolate_root && n == 3) {
        lo.root = 3;
        res.complanart = modular_limit(sys, g0, g1, lo);
        res.raw_power = res.complanart.pow(3);
        detail::check_cube(sys, g0, g1, res.complanart, lo);
        res.method = "modular-root";
        return res;
      }
      res.raw_power = distinct_product_limit(sys, g0, g1, lo);
      res.method = symbolic ? "symbolic" : "modular";
      res.complanart = res.raw_power.is_zero() ? res.raw_power : poly_kth_root(res.raw_power, res.k);
      return res;
    } catch (const LimitNotEvaluable& e) {
      last_error = e.what();
    }
  }
  throw LimitNotEvaluable(last_error + " (after " + std::to_string(opt.random_g1 + 1) + " choices of g1)");
}

struct DegreeCheckEntry {
  size_t equation = 0;
  long expected = 0;
  long observed = 0;
  std::string method;  // "direct": coefficient symbols of the equation; "scaled": f_i -> s f_i
  bool pass = false;
};

struct DegreeCheckReport {
  std::vector<DegreeCheckEntry> entries;
  bool pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
  }
};

// deg of C in the coefficients of f_i equals 2 C(N-1, n-1) N / r_i.
inline DegreeCheckReport complanart_degree_check(const ComplanartResult& result, const PolySystem& sys,
                                                 const ComplanartOptions& opt = {}) {
  if (result.shortcut_applied) throw ScopeError("degree check needs a complanart computed without the shortcut");
  const size_t n = sys.dimension();
  const long N = sys.root_count();
  const long c = static_cast<long>(binomial(static_cast<unsigned long>(N - 1), n - 1));
  const auto& reg = sys.registry();
  auto main = sys.main_indices();
  DegreeCheckReport rep;
  for (size_t i = 0; i < sys.polys.size(); ++i) {
    DegreeCheckEntry e;
    e.equation = i;
    e.expected = 2 * c * N / sys.degrees[i];
    // Direct when every term of f_i carries exactly one parameter of degree one, found in no other f_j.
    std::vector<size_t> symbols;
    bool direct = true;
    for (const auto& [m, coef] : sys.polys[i].terms()) {
      size_t count = 0, which = 0;
      for (size_t v = 0; v < reg->size(); ++v) {
        if (std::find(main.begin(), main.end(), v) != main.end() || !m[v]) continue;
        count += m[v];
        which = v;
      }
      if (count != 1) {
        direct = false;
        break;
      }
      for (size_t j = 0; j < sys.polys.size(); ++j)
        if (j != i && sys.polys[j].depends_on(which)) direct = false;
      symbols.push_back(which);
    }
    if (direct) {
      e.method = "direct";
      e.observed = static_cast<long>(result.complanart.total_degree(symbols));
    } else {
      e.method = "scaled";
      std::string s = fresh_name(*reg, "s");
      auto ext = reg->extended({s}, VarKind::parameter);
      std::vector<MPoly> polys;
      for (size_t j = 0; j < sys.polys.size(); ++j) {
        MPoly p = sys.polys[j].in_registry(ext);
        if (j == i) p *= MPoly::variable(ext, s);
        polys.push_back(p);
      }
      auto scaled = complanart(PolySystem{polys, sys.main_vars, sys.degrees}, opt);
      e.observed = static_cast<long>(scaled.complanart.degree_in(ext->require(s)));
      // The scaled complanart must also specialize back to the original one at s = 1.
      if (scaled.complanart.substitute(ext->require(s), Rational(1)).in_registry(reg) != result.complanart)
        e.observed = -1;
    }
    e.pass = e.observed == e.expected;
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace nla
