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
#include <gtest/gtest.h>

#include "nla/eigen.hpp"
#include "test_util.hpp"

using namespace nla;
using nla::testing::P;

namespace {

RegistryPtr ab_reg() { return VarRegistry::make({"x1", "x2"}, {"a", "b"}); }

PolyMap qmap(const RegistryPtr& reg) {
  return PolyMap::make({P("x1^2 + 2*a*x1*x2", reg), P("x2^2 + 2*b*x1*x2", reg)}, {"x1", "x2"});
}

PolyMap qmap_at(const Rational& a, const Rational& b) {
  auto reg = ab_reg();
  return qmap(reg).specialized({{"a", a}, {"b", b}});
}

const Eigenvector* find_direction(const EigenReport& rep, const std::vector<MPoly>& v) {
  for (const auto& e : rep.eigenvectors) {
    if (e.direction.size() != v.size()) continue;
    // proportional: v_i d_j = v_j d_i
    if ((v[0] * e.direction[1] - v[1] * e.direction[0]).is_zero()) return &e;
  }
  return nullptr;
}

void expect_unitary_residual(const PolyMap& A, const Eigenvector& e, double tol) {
  auto Ae = A.apply(e.numeric);
  for (size_t i = 0; i < Ae.size(); ++i) {
    cplx want = e.kind == EigenKind::unitary ? e.numeric[i] : 0.0;
    EXPECT_LT(std::abs(Ae[i] - want), tol) << i;
  }
}

}  // namespace

TEST(Eigen, CountFormula) {
  EXPECT_EQ(eigen_count_expected(2, 2), 3);
  EXPECT_EQ(eigen_count_expected(3, 2), 7);
  EXPECT_EQ(eigen_count_expected(2, 3), 4);
  EXPECT_EQ(eigen_count_expected(3, 1), 3);
}

TEST(Eigen, HomogenizedSystemOfQMap) {
  auto reg = ab_reg();
  auto sys = homogenized_eigen_system(qmap(reg));
  ASSERT_EQ(sys.dimension(), 3u);
  EXPECT_EQ(sys.main_vars[2], "y");
  auto r = sys.registry();
  EXPECT_EQ(sys.polys[0], P("x1^2 + 2*a*x1*x2 - x1*y", r));
  EXPECT_EQ(sys.polys[1], P("x2^2 + 2*b*x1*x2 - x2*y", r));
  EXPECT_EQ(sys.degrees, (std::vector<int>{2, 2}));
}

TEST(Eigen, HomogenizedSystemOfLinearMap) {
  auto reg = VarRegistry::make({"x1", "x2"}, {});
  auto A = PolyMap::make({P("2*x1 + x2", reg), P("x1 - x2", reg)}, {"x1", "x2"});
  auto sys = homogenized_eigen_system(A);
  EXPECT_EQ(sys.polys[0], P("x1 + x2", sys.registry()));
  EXPECT_EQ(sys.polys[1], P("x1 - 2*x2", sys.registry()));
}

TEST(Eigen, CrossEquations) {
  auto reg = ab_reg();
  auto eqs = cross_equations(qmap(reg));
  ASSERT_EQ(eqs.size(), 1u);
  EXPECT_EQ(eqs[0], P("(1 - 2*a)*x1*x2^2 - (1 - 2*b)*x1^2*x2", reg));

  auto r50 = VarRegistry::make({"x1", "x2"}, {"p11", "p12", "p22", "q11", "q12", "q22"});
  auto A50 = PolyMap::make({P("p11*x1^2 + 2*p12*x1*x2 + p22*x2^2", r50), P("q11*x1^2 + 2*q12*x1*x2 + q22*x2^2", r50)},
                           {"x1", "x2"});
  auto e50 = cross_equations(A50);
  ASSERT_EQ(e50.size(), 1u);
  EXPECT_EQ(e50[0], P("q11*x1^3 + (2*q12 - p11)*x2*x1^2 + (q22 - 2*p12)*x2^2*x1 - p22*x2^3", r50));
  auto cond = unit_map_conditions(A50);
  ASSERT_EQ(cond.size(), 4u);
  EXPECT_EQ(cond[0], P("q11", r50));
  EXPECT_EQ(cond[1], P("2*q12 - p11", r50));
  EXPECT_EQ(cond[2], P("q22 - 2*p12", r50));
  EXPECT_EQ(cond[3], P("-p22", r50));

  auto unit = PolyMap::make({P("x1^2 + 3*x1*x2", reg), P("x1*x2 + 3*x2^2", reg)}, {"x1", "x2"});
  EXPECT_TRUE(cross_equations(unit).empty());
  auto fixed = cross_equations(qmap(reg), 1);
  ASSERT_EQ(fixed.size(), 1u);
  EXPECT_EQ(fixed[0], -eqs[0]);
}

TEST(Eigen, UnitMapDetection) {
  auto A = qmap_at(Rational(1, 2), Rational(1, 2));
  auto u = is_unit_map(A);
  EXPECT_TRUE(u.unit);
  EXPECT_EQ(u.mu, P("x1 + x2", A.registry()));
  EXPECT_FALSE(is_unit_map(qmap_at(0, 0)).unit);
}

TEST(Eigen, QMapGeneric) {
  auto reg = ab_reg();
  auto A = qmap(reg);
  auto rep = solve_eigenvectors(A);
  EXPECT_EQ(rep.expected_count, 3);
  EXPECT_EQ(rep.found_count, 3);
  EXPECT_FALSE(rep.is_unit_map);
  EXPECT_EQ(rep.resultant, P("1 - 4*a*b", reg));
  ASSERT_EQ(rep.eigenvectors.size(), 3u);
  for (const auto& e : rep.eigenvectors) {
    EXPECT_EQ(e.kind, EigenKind::unitary);
    EXPECT_EQ(e.source, "exact-parametric");
    ASSERT_TRUE(e.exact_components);
    // A(n/d) = n/d  <=>  A(n) = d n
    auto An = A.apply(e.numerators);
    for (size_t i = 0; i < 2; ++i) EXPECT_EQ(An[i], e.denominator * e.numerators[i]);
  }
  auto e3 = find_direction(rep, {P("1 - 2*a", reg), P("1 - 2*b", reg)});
  ASSERT_NE(e3, nullptr);
  EXPECT_EQ(e3->denominator, P("1 - 4*a*b", reg));
  EXPECT_EQ(e3->numerators[0], P("1 - 2*a", reg));
  EXPECT_EQ(e3->numerators[1], P("1 - 2*b", reg));
  auto e1 = find_direction(rep, {P("1", reg), P("0", reg)});
  ASSERT_NE(e1, nullptr);
  EXPECT_EQ(e1->scale, P("1", reg));
  EXPECT_NE(find_direction(rep, {P("0", reg), P("1", reg)}), nullptr);
}

TEST(Eigen, QMapAtMinusOne) {
  auto A = qmap_at(-1, -1);
  auto rep = solve_eigenvectors(A);
  ASSERT_EQ(rep.eigenvectors.size(), 3u);
  EXPECT_EQ(rep.found_count, 3);
  EXPECT_FALSE(rep.coincident);
  const auto& reg = A.registry();
  auto e3 = find_direction(rep, {P("1", reg), P("1", reg)});
  ASSERT_NE(e3, nullptr);
  EXPECT_EQ(e3->numerators[0], P("-1", reg));
  EXPECT_EQ(e3->numerators[1], P("-1", reg));
  for (const auto& e : rep.eigenvectors) {
    EXPECT_EQ(e.source, "exact");
    expect_unitary_residual(A, e, 1e-12);
  }
}

TEST(Eigen, QMapZeroEigenvectorIffResultantVanishes) {
  auto A = qmap_at(-1, Rational(-1, 4));
  auto rep = solve_eigenvectors(A);
  EXPECT_EQ(rep.resultant, MPoly(A.registry()));
  int zeros = 0;
  for (const auto& e : rep.eigenvectors)
    if (e.kind == EigenKind::zero) {
      ++zeros;
      EXPECT_EQ(e.direction[0], MPoly(A.registry(), 2));
      EXPECT_EQ(e.direction[1], MPoly(A.registry(), 1));
      expect_unitary_residual(A, e, 1e-14);
    }
  EXPECT_EQ(zeros, 1);
  // no zero eigenvectors off the curve 4ab = 1
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    Rational a = nla::testing::random_rational(rng), b = nla::testing::random_rational(rng);
    auto r = solve_eigenvectors(qmap_at(a, b));
    bool has_zero = false;
    for (const auto& e : r.eigenvectors) has_zero = has_zero || e.kind == EigenKind::zero;
    EXPECT_EQ(has_zero, 4 * a * b == 1);
  }
  // symbolic zero eigenvector on the curve, as a parametric direction
  auto reg = VarRegistry::make({"x1", "x2"}, {"a"});
  auto Ab = PolyMap::make({P("x1^2 + 2*a*x1*x2", reg), P("4*a*x2^2 + 2*x1*x2", reg)}, {"x1", "x2"});
  auto rb = solve_eigenvectors(Ab);
  int zb = 0;
  for (const auto& e : rb.eigenvectors)
    if (e.kind == EigenKind::zero) ++zb;
  EXPECT_EQ(zb, 1);
}

TEST(Eigen, QMapDoubleEigenvector) {
  auto A = qmap_at(1, Rational(1, 2));
  auto rep = solve_eigenvectors(A);
  EXPECT_TRUE(rep.coincident);
  ASSERT_EQ(rep.eigenvectors.size(), 2u);
  auto e1 = find_direction(rep, {P("1", A.registry()), P("0", A.registry())});
  ASSERT_NE(e1, nullptr);
  EXPECT_EQ(e1->multiplicity, 2);
  EXPECT_EQ(rep.found_count, 3);
}

TEST(Eigen, QMapUnitFamily) {
  auto A = qmap_at(Rational(1, 2), Rational(1, 2));
  auto rep = solve_eigenvectors(A);
  EXPECT_TRUE(rep.is_unit_map);
  EXPECT_TRUE(rep.rank_drop);
  ASSERT_TRUE(rep.family);
  EXPECT_EQ(rep.family->mu, P("x1 + x2", A.registry()));
  ASSERT_EQ(rep.family->generator.size(), 2u);
  auto ext = rep.family->generator[0].registry();
  EXPECT_EQ(rep.family->generator[0], P("C", ext));
  EXPECT_EQ(rep.family->generator[1], P("1 - C", ext));
  // every member of the family is unitary
  for (int c = -3; c <= 3; ++c) {
    std::vector<MPoly> v{MPoly(A.registry(), c), MPoly(A.registry(), 1 - c)};
    auto Av = A.apply(v);
    EXPECT_EQ(Av[0], v[0]);
    EXPECT_EQ(Av[1], v[1]);
  }
  ASSERT_EQ(rep.eigenvectors.size(), 1u);
  EXPECT_EQ(rep.eigenvectors[0].kind, EigenKind::zero);
  EXPECT_EQ(rep.eigenvectors[0].direction[0], -rep.eigenvectors[0].direction[1]);
}

TEST(Eigen, NoUnitaryMap) {
  auto reg = VarRegistry::make({"x1", "x2"}, {"b"});
  auto A = PolyMap::make({P("0", reg), P("b*x1*x2", reg)}, {"x1", "x2"}, 2);
  auto rep = solve_eigenvectors(A);
  EXPECT_EQ(rep.resultant, MPoly(reg));
  ASSERT_EQ(rep.eigenvectors.size(), 2u);
  for (const auto& e : rep.eigenvectors) EXPECT_EQ(e.kind, EigenKind::zero);
  EXPECT_NE(find_direction(rep, {P("1", reg), P("0", reg)}), nullptr);
  EXPECT_NE(find_direction(rep, {P("0", reg), P("1", reg)}), nullptr);
}

TEST(Eigen, CharacteristicPolynomialOfQMap) {
  auto reg = ab_reg();
  auto A = qmap(reg);
  auto L = lambda_space(A);
  ASSERT_EQ(L.count(), 2u);
  EXPECT_EQ(L.names, (std::vector<std::string>{"lambda1", "lambda2"}));
  auto ch = characteristic_polynomial(A, L);
  auto lr = L.registry;
  MPoly want = P("(1 - lambda1)*(1 - lambda2)*(1 - 4*a*b - lambda1*(1 - 2*a) - lambda2*(1 - 2*b))", lr);
  auto u = try_divide(ch, want);
  ASSERT_TRUE(u);
  ASSERT_TRUE(u->is_constant());
  EXPECT_NE(u->constant_value(), 0);
  // lambda = 0 gives R{A}
  MPoly at0 = ch.substitute({{lr->require("lambda1"), MPoly(lr)}, {lr->require("lambda2"), MPoly(lr)}});
  EXPECT_EQ(at0, map_resultant(A).in_registry(lr) * u->constant_value());
}

TEST(Eigen, FactorizationOfQMap) {
  auto reg = ab_reg();
  auto A = qmap(reg);
  auto L = lambda_space(A);
  auto ch = characteristic_polynomial(A, L);
  auto rep = solve_eigenvectors(A);
  auto f = verify_factorization(A, rep, ch, L);
  EXPECT_TRUE(f.pass) << f.message;
  EXPECT_TRUE(f.lambda_free);
  EXPECT_EQ(f.factors.size(), 3u);
  ASSERT_TRUE(f.unit_vs_resultant);
  EXPECT_EQ(f.remainder, P("1 - 4*a*b", L.registry) * *f.unit_vs_resultant);

  // degenerate: 1 - 4ab = 0 leaves (1 - l1)(1 - l2) lambda(v)
  auto Ad = qmap_at(-1, Rational(-1, 4));
  auto Ld = lambda_space(Ad);
  auto chd = characteristic_polynomial(Ad, Ld);
  auto repd = solve_eigenvectors(Ad);
  auto fd = verify_factorization(Ad, repd, chd, Ld);
  EXPECT_TRUE(fd.pass) << fd.message;
  EXPECT_TRUE(fd.lambda_free);
  EXPECT_EQ(fd.factors.size(), 3u);
  EXPECT_TRUE(fd.remainder.is_constant());
  EXPECT_NE(fd.remainder.constant_value(), 0);
  EXPECT_EQ(fd.factors[2], P("2*lambda1 + lambda2", Ld.registry));

  // unit map: ch vanishes identically
  auto Au = qmap_at(Rational(1, 2), Rational(1, 2));
  auto Lu = lambda_space(Au);
  auto chu = characteristic_polynomial(Au, Lu);
  EXPECT_TRUE(chu.is_zero());
  EXPECT_TRUE(verify_factorization(Au, solve_eigenvectors(Au), chu, Lu).pass);
}

TEST(Eigen, NonFactorizableGuard) {
  auto reg = ab_reg();
  auto A = qmap(reg);
  auto L = lambda_space(A);
  MPoly fake = P("1 + lambda1^2 + lambda2^2", L.registry);
  auto f = verify_factorization(A, solve_eigenvectors(A), fake, L);
  EXPECT_FALSE(f.pass);
}

TEST(Eigen, EigenvalueLocus) {
  auto reg = ab_reg();
  auto A = qmap(reg);
  auto L = lambda_space(A);
  auto rep = solve_eigenvectors(A);
  auto lr = L.registry;
  auto e1 = find_direction(rep, {P("1", reg), P("0", reg)});
  auto c1 = eigenvalue_locus(*e1, L);
  EXPECT_EQ(c1.lhs - c1.rhs, P("lambda1 - 1", lr));
  auto e3 = find_direction(rep, {P("1 - 2*a", reg), P("1 - 2*b", reg)});
  auto c3 = eigenvalue_locus(*e3, L);
  EXPECT_EQ(c3.lhs, P("lambda1*(1 - 2*a) + lambda2*(1 - 2*b)", lr));
  EXPECT_EQ(c3.rhs, P("1 - 4*a*b", lr));

  auto Ad = qmap_at(-1, Rational(-1, 4));
  auto Ld = lambda_space(Ad);
  for (const auto& e : solve_eigenvectors(Ad).eigenvectors)
    if (e.kind == EigenKind::zero) {
      auto c = eigenvalue_locus(e, Ld);
      EXPECT_EQ(c.lhs, P("2*lambda1 + lambda2", Ld.registry));  // proportional to 3 l1 + 3/2 l2
      EXPECT_TRUE(c.rhs.is_zero());
    }
}

TEST(Eigen, RandomFactorization) {
  std::mt19937_64 rng(77);
  auto reg = VarRegistry::make({"x1", "x2"}, {});
  auto idx = indices_of(*reg, {"x1", "x2"});
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 20; ++trial) {
    auto A = PolyMap::make({nla::testing::random_form(rng, reg, idx, 2), nla::testing::random_form(rng, reg, idx, 2)},
                           {"x1", "x2"}, 2);
    if (map_resultant(A).is_zero()) continue;
    auto C = eigen_complanart(A);
    if (C.result.complanart.is_zero()) continue;
    auto rep = solve_eigenvectors(A);
    EXPECT_EQ(rep.found_count, 3);
    auto L = lambda_space(A);
    auto ch = characteristic_polynomial(A, L);
    auto f = verify_factorization(A, rep, ch, L);
    EXPECT_TRUE(f.pass) << f.message << " " << A.components[0] << " ; " << A.components[1];
    for (const auto& e : rep.eigenvectors) {
      EXPECT_EQ(e.kind, EigenKind::unitary);
      expect_unitary_residual(A, e, 1e-9);
    }
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(Eigen, RandomCubicBinaryCount) {
  std::mt19937_64 rng(5);
  auto reg = VarRegistry::make({"x1", "x2"}, {});
  auto idx = indices_of(*reg, {"x1", "x2"});
  int checked = 0;
  for (int trial = 0; trial < 20 && checked < 8; ++trial) {
    auto A = PolyMap::make({nla::testing::random_form(rng, reg, idx, 3), nla::testing::random_form(rng, reg, idx, 3)},
                           {"x1", "x2"}, 3);
    if (map_resultant(A).is_zero()) continue;
    auto rep = solve_eigenvectors(A);
    if (rep.coincident) continue;
    EXPECT_EQ(rep.found_count, 4);
    for (const auto& e : rep.eigenvectors) expect_unitary_residual(A, e, 1e-9);
    // the numeric path agrees on the count
    EigenOptions o;
    o.force_numeric = true;
    auto rn = solve_eigenvectors(A, o);
    EXPECT_EQ(rn.found_count, 4);
    for (const auto& e : rn.eigenvectors) expect_unitary_residual(A, e, 1e-9);
    ++checked;
  }
  EXPECT_GE(checked, 5);
}

TEST(Eigen, NumericTernary) {
  std::mt19937_64 rng(9);
  auto reg = VarRegistry::make({"x1", "x2", "x3"}, {});
  auto idx = indices_of(*reg, {"x1", "x2", "x3"});
  int checked = 0;
  for (int trial = 0; trial < 10 && checked < 3; ++trial) {
    std::vector<MPoly> comps;
    for (int i = 0; i < 3; ++i) comps.push_back(nla::testing::random_form(rng, reg, idx, 2));
    auto A = PolyMap::make(comps, {"x1", "x2", "x3"}, 2);
    if (map_resultant(A).is_zero()) continue;
    auto rep = solve_eigenvectors(A);
    EXPECT_EQ(rep.expected_count, 7);
    EXPECT_EQ(rep.found_count, 7);
    for (const auto& e : rep.eigenvectors) {
      EXPECT_EQ(e.kind, EigenKind::unitary);
      expect_unitary_residual(A, e, 1e-9);
      // cross equations vanish at every eigenvector
      std::vector<cplx> x(reg->size(), 0);
      for (size_t i = 0; i < 3; ++i) x[idx[i]] = e.numeric[i];
      for (const auto& c : cross_equations(A)) EXPECT_LT(std::abs(c.evaluate_numeric(x)), 1e-9);
    }
    ++checked;
  }
  EXPECT_GE(checked, 3);
}

TEST(Eigen, NumericTernaryWithZeroEigenvector) {
  // A_3 vanishes on (0, 0, 1): z3 direction is a zero eigenvector
  auto reg = VarRegistry::make({"x1", "x2", "x3"}, {});
  auto A = PolyMap::make({P("x1^2 + x2*x3 + x1*x3", reg), P("x2^2 - x1*x3 + 2*x2*x3", reg), P("x1*x2 + 3*x1*x3 - x2*x3", reg)},
                         {"x1", "x2", "x3"});
  EXPECT_TRUE(map_resultant(A).is_zero());
  auto rep = solve_eigenvectors(A);
  int zeros = 0;
  for (const auto& e : rep.eigenvectors) {
    expect_unitary_residual(A, e, 1e-9);
    if (e.kind == EigenKind::zero) ++zeros;
  }
  EXPECT_GE(zeros, 1);
}

TEST(Eigen, IrrationalDirections) {
  // cross form has an irreducible quadratic factor: directions over Q(sqrt 2)
  auto reg = VarRegistry::make({"x1", "x2"}, {});
  auto A = PolyMap::make({P("x1^2 + x2^2", reg), P("2*x1*x2 + x1^2", reg)}, {"x1", "x2"});
  auto rep = solve_eigenvectors(A);
  EXPECT_EQ(rep.found_count, 3);
  for (const auto& e : rep.eigenvectors) expect_unitary_residual(A, e, 1e-9);
  auto L = lambda_space(A);
  auto f = verify_factorization(A, rep, characteristic_polynomial(A, L), L);
  EXPECT_TRUE(f.pass) << f.message;
}

TEST(Eigen, CanonicalFormIdentity) {
  auto reg = ab_reg();
  auto A = qmap(reg);
  auto rep = solve_eigenvectors(A);
  auto e1 = find_direction(rep, {P("1", reg), P("0", reg)});
  auto e2 = find_direction(rep, {P("0", reg), P("1", reg)});
  auto cf = canonical_form(A, *e1, *e2);
  EXPECT_EQ(cf.form, "two-unitary");
  EXPECT_TRUE(cf.fixed_components_ok);
  EXPECT_EQ(cf.map.components[0], A.components[0]);
  EXPECT_EQ(cf.map.components[1], A.components[1]);
  EXPECT_EQ(cf.free_components[0], P("2*a", reg));
  EXPECT_EQ(cf.free_components[1], P("2*b", reg));
}

TEST(Eigen, CanonicalFormRoundTrip) {
  auto reg = ab_reg();
  auto A = qmap(reg);
  // A'(z) = M^{-1} A(M z), M = [[2, 1], [1, 1]], M^{-1} = [[1, -1], [-1, 2]]
  auto x1 = P("x1", reg), x2 = P("x2", reg);
  auto Am = A.apply({2 * x1 + x2, x1 + x2});
  auto Ap = PolyMap::make({Am[0] - Am[1], 2 * Am[1] - Am[0]}, {"x1", "x2"});
  auto b1 = eigenvector_along(Ap, {P("1", reg), P("-1", reg)});
  auto b2 = eigenvector_along(Ap, {P("-1", reg), P("2", reg)});
  auto cf = canonical_form(Ap, b1, b2);
  EXPECT_TRUE(cf.fixed_components_ok);
  EXPECT_EQ(cf.map.components[0], A.components[0]);
  EXPECT_EQ(cf.map.components[1], A.components[1]);
}

TEST(Eigen, CanonicalFormTwoZero) {
  auto reg = VarRegistry::make({"x1", "x2"}, {});
  auto A = PolyMap::make({P("0", reg), P("3*x1*x2", reg)}, {"x1", "x2"}, 2);
  auto rep = solve_eigenvectors(A);
  ASSERT_EQ(rep.eigenvectors.size(), 2u);
  auto cf = canonical_form(A, rep.eigenvectors[0], rep.eigenvectors[1]);
  EXPECT_EQ(cf.form, "two-zero");
  EXPECT_TRUE(cf.fixed_components_ok);
}

TEST(Eigen, CanonicalFormUnitaryZero) {
  auto A = qmap_at(-1, Rational(-1, 4));
  auto rep = solve_eigenvectors(A);
  const Eigenvector *u = nullptr, *z = nullptr;
  for (const auto& e : rep.eigenvectors) (e.kind == EigenKind::zero ? z : u) = &e;
  ASSERT_TRUE(u && z);
  auto cf = canonical_form(A, *u, *z);
  EXPECT_EQ(cf.form, "unitary-zero");
  EXPECT_TRUE(cf.fixed_components_ok);
  EXPECT_THROW(canonical_form(A, *u, *u), ScopeError);
}

TEST(Eigen, EigenComplanartOfQMap) {
  auto reg = ab_reg();
  auto C = eigen_complanart(qmap(reg));
  auto want = P("(1 - 2*a)^4*(1 - 2*b)^4", C.result.complanart.registry());
  auto u = try_divide(C.result.complanart, want);
  ASSERT_TRUE(u && u->is_constant());

  // a = 1/2: C vanishes and e3 coincides with e2
  auto Ah = qmap_at(Rational(1, 2), 3);
  EXPECT_TRUE(eigen_complanart(Ah).result.complanart.is_zero());
  auto rep = solve_eigenvectors(Ah);
  EXPECT_TRUE(rep.coincident);
  auto e2 = find_direction(rep, {P("0", Ah.registry()), P("1", Ah.registry())});
  ASSERT_NE(e2, nullptr);
  EXPECT_EQ(e2->multiplicity, 2);

  // a = b = -1: C = 81 * 81 and three distinct eigenvectors
  auto Am = qmap_at(-1, -1);
  auto Cm = eigen_complanart(Am).result.complanart;
  ASSERT_TRUE(Cm.is_constant());
  EXPECT_EQ(abs(Cm.constant_value()), 81 * 81);
  auto rm = solve_eigenvectors(Am);
  EXPECT_FALSE(rm.coincident);
  EXPECT_EQ(rm.eigenvectors.size(), 3u);
}

TEST(Eigen, ComplanarityWitnesses) {
  auto rep = solve_eigenvectors(qmap_at(Rational(1, 2), 3));
  auto w = complanarity_witnesses(rep);
  EXPECT_FALSE(w.empty());
  EXPECT_TRUE(complanarity_witnesses(solve_eigenvectors(qmap_at(-1, -1))).empty());
}

TEST(Eigen, ScopeErrors) {
  auto reg = VarRegistry::make({"x1", "x2"}, {"a"});
  auto A = PolyMap::make({P("a*x2^2", reg), P("x1^2", reg)}, {"x1", "x2"});
  EXPECT_THROW(solve_eigenvectors(A), ScopeError);
  EXPECT_THROW(PolyMap::make({P("x1^2", reg), P("x2", reg)}, {"x1", "x2"}), NotHomogeneous);
  EXPECT_THROW(PolyMap::make({P("x1^2", reg)}, {"x1", "x2"}), ScopeError);
}

TEST(Eigen, FixedIndexCrossEquationsSuffice) {
  std::mt19937_64 rng(21);
  auto reg = VarRegistry::make({"x1", "x2", "x3"}, {});
  auto idx = indices_of(*reg, {"x1", "x2", "x3"});
  std::vector<MPoly> comps;
  for (int i = 0; i < 3; ++i) comps.push_back(nla::testing::random_form(rng, reg, idx, 2));
  auto A = PolyMap::make(comps, {"x1", "x2", "x3"}, 2);
  auto fixed = cross_equations(A, 2);
  ASSERT_EQ(fixed.size(), 2u);
  auto roots = projective_roots(PolySystem::make(fixed, A.vars));
  int kept = 0;
  for (const auto& r : roots) {
    double big = 0;
    for (auto z : r.x) big = std::max(big, std::abs(z));
    if (std::abs(r.x[2]) < 1e-6 * big) continue;  // x_j = 0 is outside the chart
    std::vector<cplx> x(3);
    for (size_t i = 0; i < 3; ++i) x[idx[i]] = r.x[i] / r.x[2];
    for (const auto& c : cross_equations(A)) EXPECT_LT(std::abs(c.evaluate_numeric(x)), 1e-9);
    kept += r.multiplicity;
  }
  EXPECT_EQ(kept, 7);
}

TEST(Eigen, NumericTernaryCubic) {
  std::mt19937_64 rng(13);
  auto reg = VarRegistry::make({"x1", "x2", "x3"}, {});
  auto idx = indices_of(*reg, {"x1", "x2", "x3"});
  std::vector<MPoly> comps;
  for (int i = 0; i < 3; ++i) comps.push_back(nla::testing::random_form(rng, reg, idx, 3, 3));
  auto A = PolyMap::make(comps, {"x1", "x2", "x3"}, 3);
  auto rep = solve_eigenvectors(A);
  EXPECT_EQ(rep.expected_count, 13);
  EXPECT_EQ(rep.found_count, 13);
  for (const auto& e : rep.eigenvectors) expect_unitary_residual(A, e, 1e-9);
}
