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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "nla/complanart.hpp"
#include "nla/quotient.hpp"
#include "nla/resultant.hpp"

namespace nla {

using cplx = std::complex<double>;

namespace detail {

template <class C>
C horner(const std::vector<C>& c, C z) {
  C v = 0;
  for (size_t i = c.size(); i-- > 0;) v = v * z + c[i];
  return v;
}

}  // namespace detail

// Roots of sum_i c_i z^i (coefficients low to high) from the companion matrix, polished
// by Newton steps in extended precision. Leading zero coefficients are dropped.
inline std::vector<cplx> polynomial_roots(std::vector<cplx> c) {
  while (!c.empty() && c.back() == cplx(0)) c.pop_back();
  if (c.size() <= 1) return {};
  const size_t d = c.size() - 1;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<long>(d), static_cast<long>(d));
  for (size_t i = 1; i < d; ++i) M(static_cast<long>(i), static_cast<long>(i - 1)) = 1;
  for (size_t i = 0; i < d; ++i) M(static_cast<long>(i), static_cast<long>(d - 1)) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  using L = std::complex<long double>;
  std::vector<L> cl(c.begin(), c.end()), dc;
  for (size_t i = 1; i < cl.size(); ++i) dc.push_back(cl[i] * static_cast<long double>(i));
  std::vector<cplx> roots;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    L z = es.eigenvalues()(i);
    for (int it = 0; it < 8; ++it) {
      L dv = detail::horner(dc, z);
      if (std::abs(dv) == 0) break;
      L step = detail::horner(cl, z) / dv;
      z -= step;
      if (std::abs(step) <= 1e-18L * (1 + std::abs(z))) break;
    }
    roots.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return roots;
}

inline cplx to_cplx(const Rational& q) { return cplx(q.get_d(), 0); }

struct OracleResult {
  cplx value;                      // rho^{2 C(N-1, n-1)} prod over root sets of eps^2
  std::vector<std::vector<cplx>> roots;  // normalized with last coordinate 1 (after the shear)
  double min_separation = 0;       // smallest distance between two roots
  bool multiplicity_suspected = false;
};

// The squared epsilon product of the definition, from numerically computed roots at a fully
// rational parameter point. A random unimodular change of coordinates is applied first; the
// product is invariant under it and it keeps roots finite and their projections distinct.
inline OracleResult numeric_complanart_oracle(const PolySystem& sys, const std::map<std::string, Rational>& point,
                                              uint64_t seed = 7) {
  const size_t n = sys.dimension();
  if (n != 2 && n != 3) throw ScopeError("numeric oracle supports n = 2, 3");
  if (sys.polys.size() + 1 != n) throw ScopeError("numeric oracle needs n-1 forms in n variables");
  const long N = sys.root_count();
  auto reg = VarRegistry::make(sys.main_vars, {});
  std::vector<MPoly> polys;
  for (const auto& p : sys.polys) {
    MPoly q = p;
    for (size_t v : sys.parameter_indices()) {
      if (!p.depends_on(v)) continue;
      auto it = point.find(sys.registry()->name(v));
      if (it == point.end()) throw ScopeError("missing value for parameter " + sys.registry()->name(v));
      q = q.substitute(v, it->second);
    }
    polys.push_back(q.in_registry(reg));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-3, 3);
  // x -> U L x with unit triangular L, U.
  std::map<size_t, MPoly> lower, upper;
  for (size_t i = 0; i < n; ++i) {
    MPoly l = MPoly::variable(reg, i), u = MPoly::variable(reg, i);
    for (size_t j = 0; j < i; ++j) l += MPoly::variable(reg, j) * Rational(dist(rng));
    for (size_t j = i + 1; j < n; ++j) u += MPoly::variable(reg, j) * Rational(dist(rng));
    lower.emplace(i, l);
    upper.emplace(i, u);
  }
  for (auto& p : polys) p = p.substitute(lower).substitute(upper);
  OracleResult out;
  auto sep = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0;
    for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
  };
  Rational rho;
  if (n == 2) {
    auto cs = polys[0].coefficients_in(0);
    rho = cs.size() > static_cast<size_t>(sys.degrees[0]) ? cs[sys.degrees[0]].constant_value() : Rational(0);
    std::vector<cplx> c;
    for (const auto& q : polys[0].substitute(1, Rational(1)).coefficients_in(0)) c.push_back(to_cplx(q.constant_value()));
    for (auto z : polynomial_roots(c)) out.roots.push_back({z, 1});
  } else {
    // rho: resultant of the forms at x_3 = 0; then eliminate x_2 from the affine system.
    rho = sylvester_resultant(polys[0].substitute(2, Rational(0)), polys[1].substitute(2, Rational(0)), 0, 1,
                              sys.degrees[0], sys.degrees[1])
              .constant_value();
    MPoly a1 = polys[0].substitute(2, Rational(1)), a2 = polys[1].substitute(2, Rational(1));
    MPoly r = univariate_resultant(a1, a2, 1);
    std::vector<cplx> c;
    for (const auto& q : r.coefficients_in(0)) c.push_back(to_cplx(q.constant_value()));
    auto a1c = a1.coefficients_in(1);
    for (auto x : polynomial_roots(c)) {
      std::vector<cplx> yc;
      for (const auto& q : a1c) {
        std::vector<cplx> vals{x, 0, 1};
        yc.push_back(q.evaluate_numeric(vals));
      }
      cplx best = 0;
      double err = INFINITY;
      for (auto y : polynomial_roots(yc)) {
        double e = std::abs(a2.evaluate_numeric({x, y, 1}));
        if (e < err) err = e, best = y;
      }
      out.roots.push_back({x, best, 1});
    }
  }
  if (static_cast<long>(out.roots.size()) != N)
    throw ComputationError("numeric oracle found " + std::to_string(out.roots.size()) + " roots, expected " +
                           std::to_string(N));
  out.min_separation = INFINITY;
  for (size_t i = 0; i < out.roots.size(); ++i)
    for (size_t j = i + 1; j < out.roots.size(); ++j) out.min_separation = std::min(out.min_separation, sep(out.roots[i], out.roots[j]));
  out.multiplicity_suspected = out.min_separation < 1e-6;
  cplx prod = 1;
  std::vector<size_t> pick(n);
  auto rec = [&](auto&& self, size_t k, size_t start) -> void {
    if (k == n) {
      Eigen::MatrixXcd M(static_cast<long>(n), static_cast<long>(n));
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) M(static_cast<long>(a), static_cast<long>(b)) = out.roots[pick[a]][b];
      cplx d = M.determinant();
      prod *= d * d;
      return;
    }
    for (size_t i = start; i < out.roots.size(); ++i) {
      pick[k] = i;
      self(self, k + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  const long e = 2 * static_cast<long>(binomial(static_cast<unsigned long>(N - 1), n - 1));
  out.value = prod * std::pow(rho.get_d(), static_cast<double>(e));
  return out;
}

namespace detail {

using lcplx = std::complex<long double>;

inline lcplx eval_ld(const MPoly& p, const std::vector<lcplx>& x) {
  return p.evaluate_with<lcplx>(
      x,
      [](const Rational& c) {
        return lcplx(static_cast<long double>(c.get_num().get_d()) / static_cast<long double>(c.get_den().get_d()));
      },
      lcplx(0), lcplx(1));
}

}  // namespace detail

struct ProjectiveRoot {
  std::vector<cplx> x;
  int multiplicity = 1;
};

// Roots of n-1 parameter-free forms in n variables, with multiplicities. The quotient
// algebra is built exactly (after a random shear that keeps roots off the hyperplane at
// infinity); eigenvectors of a random multiplication operator give the roots, which are
// then polished by Newton steps in extended precision and clustered with relative
// tolerance cluster_tol.
inline std::vector<ProjectiveRoot> projective_roots(const PolySystem& sys, uint64_t seed = 11,
                                                    double cluster_tol = 1e-7) {
  const size_t n = sys.dimension();
  if (sys.polys.size() + 1 != n) throw ScopeError("projective roots need n-1 forms in n variables");
  if (!sys.active_parameters().empty()) throw ScopeError("projective roots need a parameter-free system");
  RationalField Q;
  const auto main = sys.main_indices();
  const auto& reg = sys.registry();
  std::vector<SparseForm<RationalField>> forms;
  for (const auto& p : sys.polys) forms.push_back(specialize_form(Q, p, main, {}, {}));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> small(-3, 3);
  std::uniform_real_distribution<double> unit(-1, 1);
  for (int attempt = 0; attempt < 12; ++attempt) {
    // x_n = u_n + sum_j c_j u_j, x_k = u_k otherwise.
    std::vector<std::vector<Rational>> T(n, std::vector<Rational>(n, Rational(0)));
    for (size_t i = 0; i < n; ++i) T[i][i] = 1;
    if (attempt > 0)
      for (size_t j = 0; j + 1 < n; ++j) T[n - 1][j] = small(rng) + (attempt > 4 ? Rational(1, 7) : Rational(0));
    std::vector<SparseForm<RationalField>> sheared;
    for (const auto& f : forms) sheared.push_back(compose_linear(Q, f, T));
    auto A = build_quotient(Q, sheared, sys.degrees);
    if (!A) continue;
    const long D = static_cast<long>(A->dim);
    std::vector<Eigen::MatrixXd> ops;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(D, D);
    for (const auto& op : A->ops) {
      Eigen::MatrixXd M(D, D);
      for (long i = 0; i < D; ++i)
        for (long j = 0; j < D; ++j) M(i, j) = op(static_cast<size_t>(i), static_cast<size_t>(j)).get_d();
      L += unit(rng) * M;
      ops.push_back(std::move(M));
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(L.transpose().cast<cplx>());
    if (es.info() != Eigen::Success) continue;
    // Newton on the affine chart u_n = 1.
    std::vector<std::vector<MPoly>> jac(n - 1);
    for (size_t i = 0; i + 1 < n; ++i)
      for (size_t k = 0; k < n; ++k) jac[i].push_back(sys.polys[i].derivative(main[k]));
    auto to_x = [&](const std::vector<detail::lcplx>& u) {
      std::vector<detail::lcplx> full(reg->size(), 0);
      for (size_t k = 0; k < n; ++k) {
        detail::lcplx v = 0;
        for (size_t j = 0; j < n; ++j) v += static_cast<long double>(T[k][j].get_d()) * u[j];
        full[main[k]] = v;
      }
      return full;
    };
    std::vector<std::vector<detail::lcplx>> roots;
    for (long c = 0; c < D; ++c) {
      Eigen::VectorXcd w = es.eigenvectors().col(c);
      std::vector<detail::lcplx> u(n, 1);
      const cplx norm = w.squaredNorm();
      for (size_t k = 0; k + 1 < n; ++k) u[k] = w.dot(ops[k].transpose().cast<cplx>() * w) / norm;
      for (int it = 0; it < 80; ++it) {
        auto x = to_x(u);
        Eigen::Matrix<detail::lcplx, Eigen::Dynamic, Eigen::Dynamic> J(n - 1, n - 1);
        Eigen::Matrix<detail::lcplx, Eigen::Dynamic, 1> F(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
          F(static_cast<long>(i)) = detail::eval_ld(sys.polys[i], x);
          std::vector<detail::lcplx> dx(n);
          for (size_t k = 0; k < n; ++k) dx[k] = detail::eval_ld(jac[i][k], x);
          for (size_t j = 0; j + 1 < n; ++j) {
            detail::lcplx v = 0;
            for (size_t k = 0; k < n; ++k) v += dx[k] * static_cast<long double>(T[k][j].get_d());
            J(static_cast<long>(i), static_cast<long>(j)) = v;
          }
        }
        Eigen::Matrix<detail::lcplx, Eigen::Dynamic, 1> step = J.fullPivLu().solve(F);
        long double size = 0, scale = 1;
        for (long j = 0; j < step.size(); ++j) {
          if (!std::isfinite(std::abs(step(j)))) size = INFINITY;
          size = std::max(size, std::abs(step(j)));
          scale = std::max(scale, std::abs(u[static_cast<size_t>(j)]));
        }
        if (!std::isfinite(size)) break;
        for (size_t j = 0; j + 1 < n; ++j) u[j] -= step(static_cast<long>(j));
        if (size <= 1e-17L * scale) break;
      }
      roots.push_back(u);
    }
    std::vector<ProjectiveRoot> out;
    std::vector<std::vector<detail::lcplx>> reps;
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
      if (used[i]) continue;
      std::vector<size_t> members{i};
      for (size_t j = i + 1; j < roots.size(); ++j) {
        if (used[j]) continue;
        long double d = 0, scale = 1;
        for (size_t k = 0; k + 1 < n; ++k) {
          d = std::max(d, std::abs(roots[i][k] - roots[j][k]));
          scale = std::max(scale, std::abs(roots[i][k]));
        }
        if (d <= cluster_tol * scale) members.push_back(j), used[j] = true;
      }
      std::vector<detail::lcplx> mean(n, 0);
      for (size_t m : members)
        for (size_t k = 0; k < n; ++k) mean[k] += roots[m][k];
      for (auto& v : mean) v /= static_cast<long double>(members.size());
      auto x = to_x(mean);
      ProjectiveRoot r;
      for (size_t k = 0; k < n; ++k) r.x.push_back(cplx(static_cast<double>(x[main[k]].real()), static_cast<double>(x[main[k]].imag())));
      r.multiplicity = static_cast<int>(members.size());
      out.push_back(std::move(r));
    }
    return out;
  }
  throw ComputationError("the system does not have finitely many roots, or no chart was found for them");
}

// |a - b| / max(|a|, |b|, floor)
inline double relative_difference(cplx a, cplx b, double floor = 1e-300) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace nla
