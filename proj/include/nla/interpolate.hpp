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

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "nla/field.hpp"
#include "nla/mpoly.hpp"

namespace nla {

// Raised by a black box when a sample point is unlucky (e.g. a vanishing pivot).
struct BadPoint : ComputationError {
  using ComputationError::ComputationError;
};

using ModPoly = std::map<Monomial, uint64_t>;
using BlackBox = std::function<uint64_t(const PrimeField&, const std::vector<uint64_t>&)>;

namespace detail {

// Newton-form interpolation of several value streams sharing the same nodes.
class NewtonStreams {
 public:
  NewtonStreams(const PrimeField& f, size_t streams) : f_(f), coef_(streams) {}

  // Adds a node; returns true when every stream's new divided difference vanished.
  bool add(uint64_t x, const std::vector<uint64_t>& values) {
    bool all_zero = true;
    for (size_t s = 0; s < coef_.size(); ++s) {
      // Evaluate current interpolant at x with Horner in Newton form.
      auto& c = coef_[s];
      uint64_t v = 0;
      for (size_t i = c.size(); i-- > 0;) v = f_.add(f_.mul(v, f_.sub(x, i < nodes_.size() ? nodes_[i] : 0)), c[i]);
      if (c.empty()) v = 0;
      uint64_t w = 1;
      for (uint64_t node : nodes_) w = f_.mul(w, f_.sub(x, node));
      uint64_t diff = f_.mul(f_.sub(values[s], v), f_.inv(w));
      if (diff) all_zero = false;
      c.push_back(diff);
    }
    nodes_.push_back(x);
    return all_zero;
  }

  size_t size() const { return nodes_.size(); }

  // Monomial-basis coefficients (low to high) of stream s.
  std::vector<uint64_t> monomial(size_t s) const {
    const auto& c = coef_[s];
    std::vector<uint64_t> p;
    for (size_t i = c.size(); i-- > 0;) {
      // p = p * (x - nodes_[i]) + c[i]
      std::vector<uint64_t> q(p.size() + 1, 0);
      for (size_t k = 0; k < p.size(); ++k) {
        q[k + 1] = f_.add(q[k + 1], p[k]);
        q[k] = f_.sub(q[k], f_.mul(p[k], nodes_[i]));
      }
      q[0] = f_.add(q[0], c[i]);
      p = std::move(q);
    }
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
  }

 private:
  const PrimeField& f_;
  std::vector<uint64_t> nodes_;
  std::vector<std::vector<uint64_t>> coef_;
};

// Solves sum_s c_s v_s^r = a_r (r = 0..T-1) for c; nodes must be distinct.
inline std::vector<uint64_t> transposed_vandermonde(const PrimeField& f, const std::vector<uint64_t>& v,
                                                    const std::vector<uint64_t>& a) {
  const size_t T = v.size();
  std::vector<uint64_t> Z{1};
  for (uint64_t node : v) {
    std::vector<uint64_t> q(Z.size() + 1, 0);
    for (size_t k = 0; k < Z.size(); ++k) {
      q[k + 1] = f.add(q[k + 1], Z[k]);
      q[k] = f.sub(q[k], f.mul(Z[k], node));
    }
    Z = std::move(q);
  }
  std::vector<uint64_t> c(T);
  std::vector<uint64_t> q(T);
  for (size_t s = 0; s < T; ++s) {
    // Synthetic division Z / (x - v_s).
    uint64_t carry = 0;
    for (size_t k = T; k-- > 0;) {
      carry = f.add(Z[k + 1], f.mul(carry, v[s]));
      q[k] = carry;
    }
    uint64_t num = 0, den = 0;
    for (size_t r = 0; r < T; ++r) num = f.add(num, f.mul(q[r], a[r]));
    for (size_t r = T; r-- > 0;) den = f.add(f.mul(den, v[s]), q[r]);
    c[s] = f.mul(num, f.inv(den));
  }
  return c;
}

inline uint64_t monomial_value(const PrimeField& f, const Monomial& m, const std::vector<uint64_t>& x) {
  uint64_t r = 1;
  for (size_t i = 0; i < m.size(); ++i)
    if (m[i]) r = f.mul(r, f.pow(x[i], m[i]));
  return r;
}

inline uint64_t eval_modpoly(const PrimeField& f, const ModPoly& p, const std::vector<uint64_t>& x) {
  uint64_t r = 0;
  for (const auto& [m, c] : p) r = f.add(r, f.mul(c, monomial_value(f, m, x)));
  return r;
}

// Coefficients on a known support: evaluate at powers of a random point.
inline std::optional<ModPoly> interpolate_on_support(const PrimeField& f, const BlackBox& bb,
                                                     const std::vector<Monomial>& support, size_t nvars,
                                                     std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      std::vector<uint64_t> gamma(nvars);
      for (auto& g : gamma) g = f.random(rng);
      std::vector<uint64_t> nodes;
      for (const auto& m : support) nodes.push_back(monomial_value(f, m, gamma));
      auto sorted = nodes;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
      // Points sigma * gamma^r keep the samples off special loci such as the all-ones point.
      std::vector<uint64_t> sigma(nvars);
      for (auto& x : sigma) x = f.random(rng);
      std::vector<uint64_t> vals;
      std::vector<uint64_t> pt = sigma;
      for (size_t r = 0; r < support.size(); ++r) {
        vals.push_back(bb(f, pt));
        for (size_t i = 0; i < nvars; ++i) pt[i] = f.mul(pt[i], gamma[i]);
      }
      auto c = transposed_vandermonde(f, nodes, vals);
      for (size_t s = 0; s < support.size(); ++s) c[s] = f.mul(c[s], f.inv(monomial_value(f, support[s], sigma)));
      ModPoly p;
      for (size_t s = 0; s < support.size(); ++s)
        if (c[s]) p.emplace(support[s], c[s]);
      std::vector<uint64_t> check(nvars);
      for (auto& x : check) x = f.random(rng);
      if (eval_modpoly(f, p, check) != bb(f, check)) return std::nullopt;
      return p;
    } catch (const BadPoint&) {
    }
  }
  return std::nullopt;
}

}  // namespace detail

struct InterpolationOptions {
  std::vector<int> degree_bounds;  // per variable; < 0 means unknown
  int max_degree = 400;
  size_t max_primes = 400;
  uint64_t seed = 1;
  std::function<bool(uint64_t)> prime_filter;  // primes failing the filter are skipped
};

// Zippel's sparse interpolation of a polynomial black box over F_p.
inline ModPoly zippel(const PrimeField& f, const BlackBox& bb, size_t nvars, const InterpolationOptions& opt,
                      std::mt19937_64& rng) {
  auto bound = [&](size_t j) {
    return j < opt.degree_bounds.size() && opt.degree_bounds[j] >= 0 ? opt.degree_bounds[j] : opt.max_degree;
  };
  for (int attempt = 0; attempt < 4; ++attempt) {
    try {
      if (nvars == 0) {
        uint64_t v = bb(f, {});
        return v ? ModPoly{{Monomial{}, v}} : ModPoly{};
      }
      std::vector<uint64_t> alpha(nvars);
      for (auto& a : alpha) a = f.random(rng);
      // Skeleton over the first j variables, with coefficients as streams.
      std::vector<Monomial> skel{Monomial{}};
      for (size_t j = 0; j < nvars; ++j) {
        const size_t T = skel.size();
        std::vector<uint64_t> gamma(j);
        std::vector<uint64_t> nodes;
        for (int tries = 0;; ++tries) {
          for (auto& g : gamma) g = f.random(rng);
          nodes.clear();
          for (const auto& m : skel) nodes.push_back(detail::monomial_value(f, m, gamma));
          auto sorted = nodes;
          std::sort(sorted.begin(), sorted.end());
          if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) break;
          if (tries > 8) throw ComputationError("interpolation: cannot separate skeleton monomials");
        }
        std::vector<uint64_t> sigma(j);
        for (auto& x : sigma) x = f.random(rng);
        std::vector<uint64_t> sigma_inv;
        for (const auto& m : skel) sigma_inv.push_back(f.inv(detail::monomial_value(f, m, sigma)));
        detail::NewtonStreams ns(f, T);
        int quiet = 0;
        const int cap = bound(j) + 1;
        while (static_cast<int>(ns.size()) < cap + 2) {
          uint64_t beta = f.random(rng);
          std::vector<uint64_t> pt(nvars);
          for (size_t i = j + 1; i < nvars; ++i) pt[i] = alpha[i];
          pt[j] = beta;
          std::vector<uint64_t> vals;
          std::vector<uint64_t> pw = sigma;
          for (size_t r = 0; r < T; ++r) {
            for (size_t i = 0; i < j; ++i) pt[i] = pw[i];
            vals.push_back(bb(f, pt));
            for (size_t i = 0; i < j; ++i) pw[i] = f.mul(pw[i], gamma[i]);
          }
          auto c = j == 0 ? vals : detail::transposed_vandermonde(f, nodes, vals);
          for (size_t s = 0; s < T; ++s) c[s] = f.mul(c[s], sigma_inv[s]);
          bool zero = ns.add(beta, c);
          quiet = zero ? quiet + 1 : 0;
          if (quiet >= 2 || static_cast<int>(ns.size()) >= cap + 1) break;
        }
        if (static_cast<int>(ns.size()) >= cap + 2 && quiet < 2)
          throw ComputationError("interpolation: degree bound exceeded");
        std::vector<Monomial> next;
        ModPoly full;
        for (size_t s = 0; s < T; ++s) {
          auto uni = ns.monomial(s);
          for (size_t e = 0; e < uni.size(); ++e) {
            if (!uni[e]) continue;
            Monomial m(nvars, 0);
            for (size_t i = 0; i < j; ++i) m[i] = skel[s][i];
            m[j] = static_cast<uint32_t>(e);
            if (j + 1 == nvars) full.emplace(m, uni[e]);
            Monomial key(m.begin(), m.begin() + j + 1);
            next.push_back(key);
          }
        }
        if (j + 1 == nvars) {
          std::vector<uint64_t> check(nvars);
          for (auto& x : check) x = f.random(rng);
          if (detail::eval_modpoly(f, full, check) != bb(f, check)) throw BadPoint("interpolation check failed");
          return full;
        }
        if (next.empty()) return ModPoly{};
        skel = std::move(next);
      }
    } catch (const BadPoint&) {
    }
  }
  throw ComputationError("interpolation failed after repeated attempts");
}

// Rational number congruent to a modulo M with |num|, den <= sqrt(M/2).
inline std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& M) {
  Integer bound;
  Integer half = M / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  Integer r0 = M, r1 = a % M;
  if (r1 < 0) r1 += M;
  Integer t0 = 0, t1 = 1;
  while (r1 > bound) {
    Integer q = r0 / r1;
    Integer r2 = r0 - q * r1;
    Integer t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  Integer g;
  mpz_gcd(g.get_mpz_t(), t1.get_mpz_t(), M.get_mpz_t());
  if (g != 1) return std::nullopt;
  Rational q(r1, t1);
  q.canonicalize();
  return q;
}

// Interpolates a polynomial with rational coefficients from modular black-box samples,
// combining primes by CRT until the rational reconstruction is stable.
inline std::map<Monomial, Rational> interpolate_rational(const BlackBox& bb, size_t nvars,
                                                         const InterpolationOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::vector<Monomial> support;
  std::map<Monomial, Integer> residue;
  Integer modulus = 1;
  std::optional<std::map<Monomial, Rational>> previous;
  size_t used = 0;
  for (size_t pi = 0, tried = 0; tried < opt.max_primes; ++pi) {
    if (opt.prime_filter && !opt.prime_filter(nth_large_prime(pi))) continue;
    ++tried;
    PrimeField f(nth_large_prime(pi));
    ModPoly image;
    try {
      if (support.empty() && used == 0) {
        image = zippel(f, bb, nvars, opt, rng);
        for (const auto& [m, c] : image) support.push_back(m);
      } else {
        auto got = detail::interpolate_on_support(f, bb, support, nvars, rng);
        if (!got) {
          image = zippel(f, bb, nvars, opt, rng);
          for (const auto& [m, c] : image)
            if (!std::count(support.begin(), support.end(), m))
              throw ComputationError("interpolation: support changed between primes");
        } else {
          image = *got;
        }
      }
    } catch (const BadPoint&) {
      continue;
    } catch (const ComputationError& e) {
      if (std::string(e.what()).find("denominator vanishes") != std::string::npos) continue;
      throw;
    }
    ++used;
    Integer p(std::to_string(f.modulus()));
    for (const auto& m : support) {
      auto it = image.find(m);
      Integer a(std::to_string(it == image.end() ? 0 : it->second));
      Integer& r = residue[m];
      // r' = r + M * ((a - r) * M^{-1} mod p)
      Integer minv, diff = (a - r) % p;
      if (diff < 0) diff += p;
      mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), p.get_mpz_t());
      Integer k = (diff * minv) % p;
      r += modulus * k;
    }
    modulus *= p;
    std::map<Monomial, Rational> rec;
    bool ok = true;
    for (const auto& m : support) {
      auto q = rational_reconstruct(residue[m], modulus);
      if (!q) {
        ok = false;
        break;
      }
      if (*q != 0) rec.emplace(m, *q);
    }
    if (ok && previous && *previous == rec) return rec;
    previous = ok ? std::optional(rec) : std::nullopt;
  }
  throw ComputationError("interpolation did not stabilize within the prime budget");
}

}  // namespace nla
