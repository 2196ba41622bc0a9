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

#include <cmath>
#include <array>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nla/eigen.hpp"
#include "nla/poly_ops.hpp"

namespace nla {

// z' = f(z) with one component per variable in `vars`.
struct VectorField {
  std::vector<MPoly> components;
  std::vector<std::string> vars;

  static VectorField make(std::vector<MPoly> components, std::vector<std::string> vars) {
    if (components.size() != vars.size()) throw ScopeError("a vector field needs one component per variable");
    if (components.empty()) throw ScopeError("empty vector field");
    for (const auto& p : components) components.front().check(p);
    indices_of(*components.front().registry(), vars);
    return VectorField{std::move(components), std::move(vars)};
  }
  static VectorField of(const PolyMap& A) { return VectorField{A.components, A.vars}; }

  size_t n() const { return vars.size(); }
  const RegistryPtr& registry() const { return components.front().registry(); }
};

// Double-precision evaluator for a parameter-free field.
class CompiledField {
 public:
  explicit CompiledField(const VectorField& f) : n_(f.n()) {
    auto idx = indices_of(*f.registry(), f.vars);
    for (const auto& p : f.components) {
      std::vector<Term> terms;
      for (const auto& [m, c] : p.terms()) {
        Term t{c.get_d(), std::vector<uint32_t>(n_, 0)};
        for (size_t v = 0; v < m.size(); ++v) {
          if (!m[v]) continue;
          auto it = std::find(idx.begin(), idx.end(), v);
          if (it == idx.end()) throw ScopeError("vector field depends on parameter " + f.registry()->name(v));
          t.exps[static_cast<size_t>(it - idx.begin())] = m[v];
        }
        terms.push_back(std::move(t));
      }
      comps_.push_back(std::move(terms));
    }
  }

  size_t n() const { return n_; }

  void operator()(const std::vector<double>& x, std::vector<double>& out) const {
    out.assign(n_, 0.0);
    for (size_t i = 0; i < n_; ++i)
      for (const auto& t : comps_[i]) {
        double v = t.coef;
        for (size_t k = 0; k < n_; ++k)
          for (uint32_t e = 0; e < t.exps[k]; ++e) v *= x[k];
        out[i] += v;
      }
  }

 private:
  struct Term {
    double coef;
    std::vector<uint32_t> exps;
  };
  size_t n_;
  std::vector<std::vector<Term>> comps_;
};

enum class Termination { normal, blow_up_guard, step_limit, non_finite };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::normal: return "normal";
    case Termination::blow_up_guard: return "blow-up-guard";
    case Termination::step_limit: return "step-limit";
    case Termination::non_finite: return "non-finite";
  }
  return "?";
}

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  Termination termination = Termination::normal;
  bool backward = false;  // integrated in reversed time; `times` still increase
};

struct IntegrateOptions {
  double dt = 1e-3;
  long max_steps = 100000;
  double blow_up_norm = 1e9;
  std::optional<double> t_end;  // stop normally here; otherwise run until max_steps
  bool backward = false;
  long record_every = 1;
};

// Fixed-step classical RK4.
inline Trajectory integrate(const CompiledField& f, std::vector<double> x, const IntegrateOptions& opt = {}) {
  if (!(opt.dt > 0)) throw ScopeError("integration step must be positive");
  if (x.size() != f.n()) throw ScopeError("initial state has the wrong dimension");
  const size_t n = f.n();
  const double h = opt.backward ? -opt.dt : opt.dt;
  Trajectory tr;
  tr.backward = opt.backward;
  tr.times.push_back(0);
  tr.states.push_back(x);
  std::vector<double> k1, k2, k3, k4, tmp(n);
  auto norm = [](const std::vector<double>& v) {
    double s = 0;
    for (double z : v) s += z * z;
    return std::sqrt(s);
  };
  double t = 0;
  for (long step = 1; step <= opt.max_steps; ++step) {
    f(x, k1);
    for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    f(tmp, k2);
    for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    f(tmp, k3);
    for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    f(tmp, k4);
    for (size_t i = 0; i < n; ++i) tmp[i] = x[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    t = static_cast<double>(step) * opt.dt;
    bool finite = true;
    for (double z : tmp) finite = finite && std::isfinite(z);
    if (!finite) {
      tr.termination = Termination::non_finite;
      return tr;
    }
    x = tmp;
    const bool guard = norm(x) > opt.blow_up_norm;
    const bool end = opt.t_end && t >= *opt.t_end - 0.5 * opt.dt;
    if (guard || end || step == opt.max_steps || step % opt.record_every == 0) {
      tr.times.push_back(t);
      tr.states.push_back(x);
    }
    if (guard) {
      tr.termination = Termination::blow_up_guard;
      return tr;
    }
    if (end) {
      tr.termination = Termination::normal;
      return tr;
    }
  }
  tr.termination = Termination::step_limit;
  return tr;
}

inline Trajectory integrate(const VectorField& f, std::vector<double> x, const IntegrateOptions& opt = {}) {
  return integrate(CompiledField(f), std::move(x), opt);
}

// Largest |x_i(t) x_j(0) - x_j(t) x_i(0)| / (|x(t)| |x(0)|) along a trajectory: zero for motion on a ray.
inline double ratio_drift(const Trajectory& tr) {
  const auto& x0 = tr.states.front();
  double n0 = 0;
  for (double z : x0) n0 += z * z;
  n0 = std::sqrt(n0);
  double worst = 0;
  for (const auto& x : tr.states) {
    double nx = 0;
    for (double z : x) nx += z * z;
    nx = std::sqrt(nx);
    if (nx == 0 || n0 == 0) continue;
    for (size_t i = 0; i < x.size(); ++i)
      for (size_t j = i + 1; j < x.size(); ++j)
        worst = std::max(worst, std::abs(x[i] * x0[j] - x[j] * x0[i]) / (nx * n0));
  }
  return worst;
}

// x(t) = f(t) e along a unitary eigenvector, with f' = f^s.
struct EigenSolution {
  bool constant = false;  // zero eigenvector: x(t) = f0 v
  double f0 = 0;
  int s = 0;
  double t0 = std::numeric_limits<double>::infinity();
  std::vector<cplx> direction;

  cplx f(double t) const {
    if (constant) return f0;
    if (s == 1) return f0 * std::exp(t);
    cplx base = 1.0 - static_cast<double>(s - 1) * std::pow(cplx(f0), s - 1) * t;
    return f0 / std::pow(base, 1.0 / (s - 1));
  }
  std::vector<cplx> state(double t) const {
    std::vector<cplx> out;
    for (auto z : direction) out.push_back(f(t) * z);
    return out;
  }
};

inline EigenSolution eigen_solution(const PolyMap& A, const Eigenvector& e, double f0, double tol = 1e-9) {
  if (f0 == 0) throw ScopeError("eigen solution needs f0 != 0");
  if (e.numeric.empty()) throw ScopeError("eigen solution needs numeric eigenvector components");
  auto Ae = A.apply(e.numeric);
  double big = 0;
  for (auto z : e.numeric) big = std::max(big, std::abs(z));
  for (size_t i = 0; i < Ae.size(); ++i) {
    cplx want = e.kind == EigenKind::unitary ? e.numeric[i] : 0.0;
    if (std::abs(Ae[i] - want) > tol * std::max(1.0, std::pow(big, A.s)))
      throw ComputationError("vector is not an eigenvector of the map");
  }
  EigenSolution out;
  out.f0 = f0;
  out.s = A.s;
  out.direction = e.numeric;
  if (e.kind == EigenKind::zero) {
    out.constant = true;
    return out;
  }
  if (A.s >= 2) out.t0 = 1.0 / ((A.s - 1) * std::pow(f0, A.s - 1));
  return out;
}

enum class Verdict { unstable_real, unstable_complex, indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::unstable_real: return "unstable-real";
    case Verdict::unstable_complex: return "unstable-complex";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

struct StabilityVerdict {
  Verdict verdict = Verdict::indeterminate;
  std::string evidence;
  std::optional<size_t> witness;  // index into the report's eigenvectors
  std::string note;
};

// Stability of the origin for z' = A(z) from the eigenvectors of A.
inline StabilityVerdict stability_verdict(const PolyMap& A, const EigenReport& rep) {
  StabilityVerdict out;
  std::optional<size_t> real_w, complex_w;
  for (size_t i = 0; i < rep.eigenvectors.size(); ++i) {
    const auto& e = rep.eigenvectors[i];
    if (e.kind != EigenKind::unitary) continue;
    const bool real = e.numeric.empty() ? e.exact_components : e.is_real(1e-9);
    if (real && !real_w) real_w = i;
    if (!complex_w) complex_w = i;
  }
  if (rep.is_unit_map && rep.family && !rep.family->mu.is_zero()) {
    out.verdict = Verdict::unstable_real;
    out.evidence = "unit map: every vector with mu(e) = 1 is a unitary eigenvector";
    return out;
  }
  if (real_w) {
    out.verdict = Verdict::unstable_real;
    out.witness = real_w;
    out.evidence = "real unitary eigenvector";
    return out;
  }
  if (complex_w) {
    out.verdict = Verdict::unstable_complex;
    out.witness = complex_w;
    out.evidence = "complex unitary eigenvector";
    return out;
  }
  if (!rep.resultant.is_zero()) {
    out.verdict = Verdict::unstable_complex;
    out.evidence = "nonzero resultant R{A} = " + rep.resultant.to_string();
    return out;
  }
  out.verdict = Verdict::indeterminate;
  out.evidence = "no unitary eigenvectors and R{A} = 0";
  if (A.n() == 2 && rep.eigenvectors.size() == 2) {
    bool all_zero = true;
    for (const auto& e : rep.eigenvectors) all_zero = all_zero && e.kind == EigenKind::zero;
    if (all_zero)
      out.note = "a map with only zero eigenvectors can still have an unstable origin: for x1 -> 0, "
                 "x2 -> b x1 x2 trajectories leave the origin although no unitary eigenvector exists";
  }
  return out;
}

// Ratio coordinates xi_i = x_i / x_pivot, with dxi_i/dt' = A_i(xi) - A_pivot(xi) xi_i and xi_pivot = 1.
struct ReducedField {
  VectorField field;             // over the ratio variables
  std::vector<size_t> others;    // map-variable index for each ratio variable
  size_t pivot = 0;
  std::optional<MPoly> P;        // n = 2: the single reduced polynomial
};

inline ReducedField projective_reduce(const PolyMap& A, size_t pivot = 0) {
  if (pivot >= A.n()) throw ScopeError("pivot out of range");
  const auto& reg = A.registry();
  std::vector<std::string> names;
  ReducedField out;
  out.pivot = pivot;
  for (size_t i = 0; i < A.n(); ++i) {
    if (i == pivot) continue;
    out.others.push_back(i);
    names.push_back(fresh_name(*reg, A.n() == 2 ? "xi" : "xi" + std::to_string(i + 1)));
  }
  auto ext = reg->extended(names, VarKind::main);
  std::vector<MPoly> z;
  for (size_t i = 0, k = 0; i < A.n(); ++i) z.push_back(i == pivot ? MPoly(ext, 1) : MPoly::variable(ext, names[k++]));
  PolyMap Ae{std::vector<MPoly>(), A.vars, A.s};
  for (const auto& c : A.components) Ae.components.push_back(c.in_registry(ext));
  auto Az = Ae.apply(z);
  std::vector<MPoly> comps;
  for (size_t k = 0; k < out.others.size(); ++k) comps.push_back(Az[out.others[k]] - Az[pivot] * z[out.others[k]]);
  out.field = VectorField{comps, names};
  if (A.n() == 2) out.P = comps.front();
  return out;
}

struct QuadratureTerm {
  cplx root;
  int multiplicity = 1;
  std::vector<cplx> laurent;  // laurent[k-1]: coefficient of (xi - root)^{-k}
};

// Partial fractions of 1/P for the separable equation dxi / P(xi) = dt'.
struct QuadratureData {
  std::vector<QuadratureTerm> terms;
  std::optional<Rational> constant;  // P constant: xi = constant * t' + C
};

inline QuadratureData quadrature_data(const MPoly& P, size_t var) {
  if (P.is_zero()) throw ScopeError("reduced polynomial vanishes identically: the map does not move points");
  for (size_t v = 0; v < P.registry()->size(); ++v)
    if (v != var && P.depends_on(v)) throw ScopeError("quadrature data needs a parameter-free polynomial");
  QuadratureData out;
  UPoly u = to_upoly(P, var);
  if (u.degree() == 0) {
    out.constant = u.c[0];
    return out;
  }
  auto parts = squarefree_decomposition(u);
  std::vector<cplx> pc;
  for (const auto& c : u.c) pc.push_back(to_cplx(c));
  const size_t d = pc.size() - 1;
  for (size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].degree() < 1) continue;
    const int m = static_cast<int>(k + 1);
    std::vector<cplx> fc;
    for (const auto& c : parts[k].c) fc.push_back(to_cplx(c));
    for (auto r : polynomial_roots(fc)) {
      // Taylor coefficients of P at r, then 1/Q with Q(h) = P(r + h) / h^m.
      std::vector<cplx> t(d + 1, 0.0), cur = pc;
      for (size_t j = 0; j <= d; ++j) {
        cplx v = 0;
        for (size_t i = cur.size(); i-- > 0;) v = v * r + cur[i];
        t[j] = v;
        // synthetic division by (xi - r)
        std::vector<cplx> q(cur.size() > 1 ? cur.size() - 1 : 0, 0.0);
        cplx carry = 0;
        for (size_t i = cur.size(); i-- > 1;) {
          carry = carry * r + cur[i];
          q[i - 1] = carry;
        }
        cur = q;
      }
      std::vector<cplx> q(t.begin() + m, t.end());
      std::vector<cplx> inv(static_cast<size_t>(m), 0.0);
      inv[0] = 1.0 / q[0];
      for (size_t i = 1; i < inv.size(); ++i) {
        cplx s = 0;
        for (size_t j = 1; j <= i && j < q.size(); ++j) s += q[j] * inv[i - j];
        inv[i] = -s / q[0];
      }
      QuadratureTerm term{r, m, {}};
      for (int kk = 1; kk <= m; ++kk) term.laurent.push_back(inv[static_cast<size_t>(m - kk)]);
      out.terms.push_back(term);
    }
  }
  return out;
}

// Taylor coefficients of a univariate P at a point.
inline std::vector<double> taylor_at(const UPoly& P, double r) {
  std::vector<double> c;
  for (const auto& x : P.c) c.push_back(x.get_d());
  std::vector<double> out;
  while (!c.empty()) {
    double v = 0;
    for (size_t i = c.size(); i-- > 0;) v = v * r + c[i];
    out.push_back(v);
    std::vector<double> q(c.size() - 1, 0.0);
    double carry = 0;
    for (size_t i = c.size(); i-- > 1;) {
      carry = carry * r + c[i];
      q[i - 1] = carry;
    }
    c = q;
  }
  return out;
}

struct Annotation {
  std::string kind;  // eigen-direction, stationary-line, double-eigenvector, unit-map, no-unitary
  std::vector<double> vector;
  std::string label;
  int multiplicity = 1;
  int leading_order = 0;       // double-eigenvector: order of the reduced field at the direction
  double leading_coefficient = 0;
  bool one_sided = false;      // reduced field keeps its sign across the direction
};

struct PortraitOptions {
  int ring_seeds = 24;
  double radius = 1;
  double dt = 1e-3;
  long steps = 3000;
  double blow_up_norm = 1e9;
  long record_every = 10;
  EigenOptions eigen;
};

struct Portrait {
  std::vector<Trajectory> trajectories;
  std::vector<std::vector<double>> seeds;  // one per trajectory
  std::vector<Annotation> annotations;
  EigenReport report;
  StabilityVerdict verdict;
  bool complanart_zero = false;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline std::string rational_string(const Rational& q) { return q.get_str(); }

// Direction label with exact entries when available.
inline std::string direction_label(const Eigenvector& e) {
  std::string s = "(";
  if (e.exact_components) {
    for (size_t i = 0; i < e.numerators.size(); ++i) {
      MPoly v = e.numerators[i];
      if (e.denominator.is_constant()) v *= Rational(1) / e.denominator.constant_value();
      s += (i ? ", " : "") + v.to_string();
    }
  } else {
    for (size_t i = 0; i < e.numeric.size(); ++i) s += (i ? ", " : "") + fmt(e.numeric[i].real());
  }
  return s + ")";
}

}  // namespace detail

inline Portrait phase_portrait(const PolyMap& A, const PortraitOptions& opt = {}) {
  if (A.n() != 2) throw ScopeError("phase portraits are two-dimensional");
  if (A.parametric()) throw ScopeError("phase portraits need numeric parameter values");
  Portrait out;
  out.report = solve_eigenvectors(A, opt.eigen);
  out.verdict = stability_verdict(A, out.report);
  CompiledField field(VectorField::of(A));
  const auto& rep = out.report;
  std::vector<std::vector<double>> dirs;
  if (rep.is_unit_map) {
    Annotation a;
    a.kind = "unit-map";
    a.label = "unit map, mu = " + rep.family->mu.to_string() + ": every vector is an eigenvector, trajectories are rays";
    out.annotations.push_back(a);
  }
  if (!rep.is_unit_map) {
    auto red = projective_reduce(A, 0);
    auto red2 = projective_reduce(A, 1);
    const size_t xi1 = red.field.registry()->require(red.field.vars[0]);
    const size_t xi2 = red2.field.registry()->require(red2.field.vars[0]);
    UPoly P1 = to_upoly(*red.P, xi1), P2 = to_upoly(*red2.P, xi2);
    bool unitary = false;
    for (const auto& e : rep.eigenvectors) {
      if (!e.is_real(1e-9)) continue;
      std::vector<double> v{e.numeric[0].real(), e.numeric[1].real()};
      double nv = std::hypot(v[0], v[1]);
      dirs.push_back({v[0] / nv, v[1] / nv});
      Annotation a;
      a.vector = v;
      a.multiplicity = e.multiplicity;
      if (e.kind == EigenKind::unitary) {
        unitary = true;
        a.kind = "eigen-direction";
        a.label = "unitary eigenvector " + detail::direction_label(e);
      } else {
        a.kind = "stationary-line";
        const auto& d = e.direction.empty() ? std::vector<MPoly>{} : e.direction;
        if (!d.empty() && d[0].is_zero())
          a.label = "x1 = 0: zero eigenvector, every point is stationary";
        else if (!d.empty() && d[1].is_zero())
          a.label = "x2 = 0: zero eigenvector, every point is stationary";
        else if (!d.empty())
          a.label = "x1/" + d[0].to_string() + " = x2/" + d[1].to_string() + ": zero eigenvector, every point is stationary";
        else
          a.label = "zero eigenvector " + detail::direction_label(e) + ", every point is stationary";
      }
      out.annotations.push_back(a);
      if (e.multiplicity >= 2) {
        // reduced scalar field around the direction, in the better-conditioned chart
        const bool chart1 = std::abs(v[0]) >= std::abs(v[1]);
        auto tay = chart1 ? taylor_at(P1, v[1] / v[0]) : taylor_at(P2, v[0] / v[1]);
        Annotation d;
        d.kind = "double-eigenvector";
        d.vector = v;
        d.multiplicity = e.multiplicity;
        double scale = 0;
        for (double c : tay) scale = std::max(scale, std::abs(c));
        for (size_t k = 0; k < tay.size(); ++k)
          if (std::abs(tay[k]) > 1e-9 * scale) {
            d.leading_order = static_cast<int>(k);
            d.leading_coefficient = tay[k];
            break;
          }
        d.one_sided = d.leading_order % 2 == 0;
        d.label = "eigenvector " + detail::direction_label(e) + " of multiplicity " + std::to_string(e.multiplicity) +
                  ": reduced field " + detail::fmt(d.leading_coefficient) + " zeta^" + std::to_string(d.leading_order);
        out.annotations.push_back(d);
      }
    }
    if (!unitary) {
      Annotation a;
      a.kind = "no-unitary";
      a.label = "no real unitary eigenvector: stability is " + std::string(to_string(out.verdict.verdict));
      out.annotations.push_back(a);
    }
    auto C = eigen_complanart(A).result.complanart;
    out.complanart_zero = C.is_zero();
  }
  // seeds: a ring plus points on both sides of each real eigen-direction
  std::vector<std::vector<double>> seeds;
  const double pi = std::acos(-1.0);
  for (int k = 0; k < opt.ring_seeds; ++k) {
    double th = 2 * pi * (k + 0.5) / opt.ring_seeds;
    seeds.push_back({opt.radius * std::cos(th), opt.radius * std::sin(th)});
  }
  for (const auto& d : dirs)
    for (double sgn : {1.0, -1.0})
      for (double rot : {0.0, 0.05, -0.05}) {
        double c = std::cos(rot), s = std::sin(rot), r = 0.5 * opt.radius * sgn;
        seeds.push_back({r * (c * d[0] - s * d[1]), r * (s * d[0] + c * d[1])});
      }
  for (const auto& x0 : seeds)
    for (bool back : {false, true}) {
      IntegrateOptions io;
      io.dt = opt.dt;
      io.max_steps = opt.steps;
      io.blow_up_norm = opt.blow_up_norm;
      io.backward = back;
      io.record_every = opt.record_every;
      out.trajectories.push_back(integrate(field, x0, io));
      out.seeds.push_back(x0);
    }
  return out;
}

// The quadratic part of the reaction system around the stationary point X = (0, 1, 0), with
// X4 = 1 - X1 - X2 - X3, in displacements d1, d2, d3. Rate constants stay symbolic unless given.
inline PolyMap kinetics_map(const std::optional<std::array<Rational, 3>>& K = {}) {
  auto reg = VarRegistry::make({"X1", "X2", "X3"}, {"K24", "K31", "K34"});
  auto X1 = MPoly::variable(reg, "X1"), X2 = MPoly::variable(reg, "X2"), X3 = MPoly::variable(reg, "X3");
  auto K24 = MPoly::variable(reg, "K24"), K31 = MPoly::variable(reg, "K31"), K34 = MPoly::variable(reg, "K34");
  MPoly X4 = MPoly(reg, 1) - X1 - X2 - X3;
  MPoly r34 = K34 * X3 * X4, r31 = K31 * X1 * X3, r24 = K24 * X2 * X4 * X4;
  std::vector<MPoly> field{r34 - r31 + r24, r34 + r31 - r24, -r34 - r31 + r24};
  auto g = graded_expand(field, {"X1", "X2", "X3"}, {MPoly(reg), MPoly(reg, 1), MPoly(reg)}, {"d1", "d2", "d3"});
  for (const auto& p : g.buckets.at(1))
    if (!p.is_zero()) throw ComputationError("stationary point has a nonzero linear part");
  PolyMap A = PolyMap::make(g.buckets.at(2), {"d1", "d2", "d3"}, 2);
  if (K) A = A.specialized({{"K24", (*K)[0]}, {"K31", (*K)[1]}, {"K34", (*K)[2]}});
  return A;
}

// CSV: t, x1..xn per row.
inline std::string to_csv(const Trajectory& tr, const std::vector<std::string>& vars) {
  std::ostringstream os;
  os.precision(12);
  os << "t";
  for (const auto& v : vars) os << "," << v;
  os << "\n";
  for (size_t i = 0; i < tr.times.size(); ++i) {
    os << (tr.backward ? -tr.times[i] : tr.times[i]);
    for (double z : tr.states[i]) os << "," << z;
    os << "\n";
  }
  return os.str();
}

// SVG of a two-dimensional portrait on [-view, view]^2.
inline std::string to_svg(const Portrait& p, double view = 2.0, int size = 600) {
  std::ostringstream os;
  os.precision(5);
  const double sc = size / (2 * view);
  auto X = [&](double x) { return (x + view) * sc; };
  auto Y = [&](double y) { return (view - y) * sc; };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
     << size << " " << size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"0\" y1=\"" << Y(0) << "\" x2=\"" << size << "\" y2=\"" << Y(0) << "\" stroke=\"#bbb\"/>\n";
  os << "<line x1=\"" << X(0) << "\" y1=\"0\" x2=\"" << X(0) << "\" y2=\"" << size << "\" stroke=\"#bbb\"/>\n";
  for (const auto& a : p.annotations) {
    if (a.vector.empty() || a.kind == "double-eigenvector") continue;
    double nv = std::hypot(a.vector[0], a.vector[1]);
    double ux = a.vector[0] / nv * 3 * view, uy = a.vector[1] / nv * 3 * view;
    const char* color = a.kind == "stationary-line" ? "#c00" : "#06c";
    os << "<line x1=\"" << X(-ux) << "\" y1=\"" << Y(-uy) << "\" x2=\"" << X(ux) << "\" y2=\"" << Y(uy)
       << "\" stroke=\"" << color << "\" stroke-width=\"2\" stroke-dasharray=\"6,4\"><title>" << a.label
       << "</title></line>\n";
  }
  for (const auto& tr : p.trajectories) {
    os << "<polyline fill=\"none\" stroke=\"" << (tr.backward ? "#888" : "#222") << "\" stroke-width=\"1\" points=\"";
    for (const auto& x : tr.states) {
      if (std::abs(x[0]) > 10 * view || std::abs(x[1]) > 10 * view) break;
      os << X(x[0]) << "," << Y(x[1]) << " ";
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nla
