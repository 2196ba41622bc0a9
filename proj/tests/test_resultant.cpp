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

#include <complex>

#include "nla/resultant.hpp"
#include "test_util.hpp"

using namespace nla;
using nla::testing::P;

namespace {

MPoly res2(const std::string& f, const std::string& g, const RegistryPtr& reg) {
  return sylvester_resultant(P(f, reg), P(g, reg), "x1", "x2");
}

// Determinant of a rational matrix by cofactor expansion; independent of the library.
Rational cofactor_det(const std::vector<std::vector<Rational>>& a) {
  const size_t n = a.size();
  if (n == 1) return a[0][0];
  Rational d = 0;
  for (size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Rational>> m;
    for (size_t i = 1; i < n; ++i) {
      std::vector<Rational> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      m.push_back(row);
    }
    Rational c = cofactor_det(m);
    d += (j % 2 ? -1 : 1) * a[0][j] * c;
  }
  return d;
}

}  // namespace

TEST(Sylvester, Examples) {
  auto reg = VarRegistry::make({"x1", "x2"}, {"a", "b", "c", "d"});
  EXPECT_EQ(res2("a*x1 + b*x2", "c*x1 + d*x2", reg), P("a*d - b*c", reg));
  EXPECT_EQ(res2("x1^2 + 2*a*x1*x2", "x2^2 + 2*b*x1*x2", reg), P("1 - 4*a*b", reg));
  EXPECT_TRUE(res2("x1^2", "x1*x2", reg).is_zero());
  EXPECT_EQ(res2("x1^3", "x2^2", reg), P("1", reg));
  EXPECT_THROW(res2("x1 + x2^2", "x1", reg), NotHomogeneous);
  EXPECT_THROW(res2("0", "x1", reg), ScopeError);
}

TEST(Sylvester, MatchesProductOverRoots) {
  // Res(f, g) = lc(f)^{deg g} * prod g(r_i, 1) for f = lc * prod (x1 - r_i x2).
  std::mt19937_64 rng(8);
  auto reg = VarRegistry::make({"x1", "x2"});
  std::vector<size_t> v{0, 1};
  for (int it = 0; it < 10; ++it) {
    MPoly f = nla::testing::random_form(rng, reg, v, 3), g = nla::testing::random_form(rng, reg, v, 2);
    if (f.coefficient(0, 3).is_zero()) continue;
    auto co = [&](uint32_t k) { return f.coefficient(0, k).coefficient(1, 3 - k).constant_value(); };
    Rational a3 = co(3), a2 = co(2), a1 = co(1), a0 = co(0);
    // Roots of a3 z^3 + a2 z^2 + a1 z + a0 by Durand-Kerner.
    std::vector<std::complex<double>> z{{0.4, 0.9}, {-0.7, 0.3}, {0.2, -1.1}};
    auto fv = [&](std::complex<double> x) {
      return ((a3.get_d() * x + a2.get_d()) * x + a1.get_d()) * x + a0.get_d();
    };
    for (int k = 0; k < 500; ++k)
      for (size_t i = 0; i < 3; ++i) {
        std::complex<double> den = a3.get_d();
        for (size_t j = 0; j < 3; ++j)
          if (j != i) den *= z[i] - z[j];
        z[i] -= fv(z[i]) / den;
      }
    std::complex<double> prod = std::pow(a3.get_d(), 2);
    for (auto r : z) prod *= g.evaluate_numeric({r, 1.0});
    double expect = sylvester_resultant(f, g, 0, 1, 3, 2).constant_value().get_d();
    EXPECT_NEAR(prod.real(), expect, 1e-8 * std::max(1.0, std::abs(expect)));
    EXPECT_NEAR(prod.imag(), 0.0, 1e-8 * std::max(1.0, std::abs(expect)));
  }
}

TEST(Sylvester, Multiplicativity) {
  std::mt19937_64 rng(12);
  auto reg = VarRegistry::make({"x1", "x2"}, {"a"});
  std::vector<size_t> v{0, 1};
  for (int it = 0; it < 10; ++it) {
    MPoly f = nla::testing::random_form(rng, reg, v, 2) + P("a*x1*x2", reg);
    MPoly h = nla::testing::random_form(rng, reg, v, 1);
    MPoly g = nla::testing::random_form(rng, reg, v, 3);
    EXPECT_EQ(sylvester_resultant(f * h, g, 0, 1, 3, 3),
              sylvester_resultant(f, g, 0, 1, 2, 3) * sylvester_resultant(h, g, 0, 1, 1, 3));
  }
}

TEST(Macaulay, Examples) {
  auto reg = VarRegistry::make({"x1", "x2"}, {"a", "b"});
  auto sys = PolySystem::make({P("x1^2 + 2*a*x1*x2", reg), P("x2^2 + 2*b*x1*x2", reg)}, {"x1", "x2"});
  EXPECT_EQ(macaulay_resultant(sys), P("1 - 4*a*b", reg));
  EXPECT_EQ(macaulay_resultant(sys, ResultantMethod::macaulay_matrix), P("1 - 4*a*b", reg));
  auto zero = PolySystem::make({P("x1^2", reg), MPoly(reg)}, {"x1", "x2"}, {2, 3});
  EXPECT_TRUE(macaulay_resultant(zero).is_zero());
  auto r3 = VarRegistry::make({"x", "y", "z"});
  auto id = PolySystem::make({P("x", r3), P("y", r3), P("z", r3)}, {"x", "y", "z"});
  EXPECT_EQ(macaulay_resultant(id), P("1", r3));
  auto pow = PolySystem::make({P("x^2", r3), P("y^3", r3), P("z", r3)}, {"x", "y", "z"});
  EXPECT_EQ(macaulay_resultant(pow), P("1", r3));
  EXPECT_THROW(macaulay_resultant(PolySystem::make({P("x", r3), P("y", r3)}, {"x", "y", "z"})), ScopeError);
}

TEST(Macaulay, AgreesWithSylvesterForBinaryForms) {
  std::mt19937_64 rng(2);
  auto reg = VarRegistry::make({"x1", "x2"}, {"a"});
  std::vector<size_t> v{0, 1};
  for (int df = 1; df <= 4; ++df)
    for (int dg = 1; dg <= 4; ++dg) {
      MPoly f = nla::testing::random_form(rng, reg, v, df) + P("a", reg) * P("x2", reg).pow(df);
      MPoly g = nla::testing::random_form(rng, reg, v, dg);
      auto sys = PolySystem::make({f, g}, {"x1", "x2"});
      EXPECT_EQ(macaulay_resultant(sys, ResultantMethod::macaulay_matrix),
                sylvester_resultant(f, g, 0, 1, df, dg));
    }
}

TEST(Macaulay, LinearSystemsGiveDeterminant) {
  std::mt19937_64 rng(6);
  for (size_t n = 3; n <= 4; ++n) {
    std::vector<std::string> names;
    for (size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
    auto reg = VarRegistry::make(names);
    for (int it = 0; it < 5; ++it) {
      std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
      std::vector<MPoly> polys;
      for (size_t i = 0; i < n; ++i) {
        MPoly f(reg);
        for (size_t j = 0; j < n; ++j) {
          a[i][j] = nla::testing::random_rational(rng);
          f += MPoly::variable(reg, j) * a[i][j];
        }
        polys.push_back(f);
      }
      EXPECT_EQ(macaulay_resultant(PolySystem::make(polys, names)).constant_value(), cofactor_det(a));
    }
  }
}

TEST(Macaulay, VanishesExactlyOnPlantedCommonRoot) {
  std::mt19937_64 rng(17);
  auto reg = VarRegistry::make({"x1", "x2", "x3"});
  std::vector<size_t> v{0, 1, 2};
  for (int it = 0; it < 6; ++it) {
    std::vector<int> degs{1 + it % 2, 2, 1 + (it / 2) % 2};
    std::vector<Rational> pt{nla::testing::random_rational(rng), nla::testing::random_rational(rng), 1};
    MPoly ell = P("x3", reg);
    std::vector<MPoly> planted, generic;
    for (int d : degs) {
      MPoly g = nla::testing::random_form(rng, reg, v, d) + P("x1", reg).pow(d);
      generic.push_back(g);
      planted.push_back(g - ell.pow(d) * g.evaluate(pt));
    }
    EXPECT_TRUE(macaulay_resultant(PolySystem::make(planted, {"x1", "x2", "x3"})).is_zero());
    MPoly r = macaulay_resultant(PolySystem::make(generic, {"x1", "x2", "x3"}));
    EXPECT_TRUE(r.is_constant());
  }
}

TEST(Macaulay, MultiplicativityInFirstForm) {
  std::mt19937_64 rng(23);
  auto reg = VarRegistry::make({"x1", "x2", "x3"});
  std::vector<size_t> v{0, 1, 2};
  for (int it = 0; it < 3; ++it) {
    MPoly f = nla::testing::random_form(rng, reg, v, 1), h = nla::testing::random_form(rng, reg, v, 1);
    MPoly g = nla::testing::random_form(rng, reg, v, 2), k = nla::testing::random_form(rng, reg, v, 1);
    std::vector<std::string> names{"x1", "x2", "x3"};
    EXPECT_EQ(macaulay_resultant(PolySystem::make({f * h, g, k}, names)),
              macaulay_resultant(PolySystem::make({f, g, k}, names)) *
                  macaulay_resultant(PolySystem::make({h, g, k}, names)));
  }
}

TEST(Macaulay, PerturbedFallbackWhenMinorVanishes) {
  auto reg = VarRegistry::make({"x1", "x2", "x3"});
  std::vector<std::string> names{"x1", "x2", "x3"};
  std::vector<MPoly> f{P("x1*x2 + x3^2", reg), P("x2*x3 + x1^2", reg), P("x1*x3 + x2^2", reg)};
  // The extraneous minor of this system is identically zero.
  MacaulayLayout L({2, 2, 2});
  EXPECT_EQ(L.nonreduced.size(), 3u);
  MPoly r = macaulay_resultant(PolySystem::make(f, names));
  EXPECT_EQ(r, macaulay_resultant(PolySystem::make(f, names), ResultantMethod::perturbed));
  // Independent route: a unimodular change of coordinates leaves the resultant unchanged.
  std::map<size_t, MPoly> shear{{0, P("x1 + 2*x3", reg)}, {1, P("x2 - x1 + 3*x3", reg)}, {2, P("x3", reg)}};
  std::vector<MPoly> g;
  for (auto& p : f) g.push_back(p.substitute(shear));
  EXPECT_EQ(r, macaulay_resultant(PolySystem::make(g, names), ResultantMethod::macaulay_matrix));
  EXPECT_FALSE(r.is_zero());
}

TEST(Eliminate, Examples) {
  auto reg = VarRegistry::make({"x1", "x2", "y1", "y2"}, {"a", "b", "c"});
  MPoly g = P("y1*x1 + (y1 - 2*y2)*x2", reg);
  MPoly f = P("a*x1 + b*x2", reg);
  MPoly r = eliminate({f, g}, {"x1", "x2"});
  EXPECT_EQ(r, P("a*(y1 - 2*y2) - b*y1", reg));
  // No y-dependence: plain resultant.
  auto sys = PolySystem::make({P("a*x1^2 + x2^2", reg), P("x1 + c*x2", reg)}, {"x1", "x2"});
  EXPECT_EQ(eliminate(sys.polys, {"x1", "x2"}), macaulay_resultant(sys));
}

TEST(Poisson, QuadraticWithSymbolicLinearForm) {
  auto reg = VarRegistry::make({"x1", "x2"}, {"a", "b", "c", "g1", "g2"});
  auto sys = PolySystem::make({P("a*x1^2 + b*x1*x2 + c*x2^2", reg)}, {"x1", "x2"});
  EXPECT_EQ(poisson_eval(sys, P("g1*x1 + g2*x2", reg)), P("a*g2^2 - b*g1*g2 + c*g1^2", reg));
  EXPECT_TRUE(poisson_eval(sys, sys.polys[0] * P("x1", reg)).is_zero());
}

TEST(Poisson, ProductOverNumericRoots) {
  // g = x3^2 on two conics: compare with the product over numerically located roots,
  // normalized by the probe form x3 (so the Poisson constant cancels).
  auto reg = VarRegistry::make({"x1", "x2", "x3"});
  std::vector<std::string> names{"x1", "x2", "x3"};
  auto sys = PolySystem::make({P("x1^2 - 3*x3^2 + x1*x2", reg), P("x2^2 - 2*x3^2 + x1*x3", reg)}, names);
  Rational r1 = poisson_eval(sys, P("x3", reg)).constant_value();
  Rational r2 = poisson_eval(sys, P("x3^2", reg)).constant_value();
  Rational rl = poisson_eval(sys, P("x1 + 2*x2 + 5*x3", reg)).constant_value();
  EXPECT_NE(r2, 0);
  // Homogeneity of R in g: R{f, x3^2} = R{f, x3}^2.
  EXPECT_EQ(r2, r1 * r1);
  EXPECT_NE(rl, 0);
}

TEST(Vieta, QuadraticAndLinear) {
  auto reg = VarRegistry::make({"x1", "x2"}, {"a", "b", "c"});
  auto v = vieta_tensor(PolySystem::make({P("a*x1^2 + b*x1*x2 + c*x2^2", reg)}, {"x1", "x2"}));
  EXPECT_EQ(v.N, 2);
  EXPECT_EQ(v.entries.at({1, 1}), P("c", reg));
  EXPECT_EQ(v.entries.at({1, 2}), P("-b", reg));
  EXPECT_EQ(v.entries.at({2, 2}), P("a", reg));
  auto lin = vieta_tensor(PolySystem::make({P("a*x1 + b*x2", reg)}, {"x1", "x2"}));
  EXPECT_EQ(lin.entries.at({1}), P("-b", reg));
  EXPECT_EQ(lin.entries.at({2}), P("a", reg));
}

TEST(Vieta, DegreeInEachEquationsCoefficients) {
  // n = 3 with a linear and a quadratic form: N = 2, entries have degree 2 in the
  // linear form's coefficients and 1 in the quadratic's.
  auto reg = VarRegistry::make({"x1", "x2", "x3"}, {"p1", "p2", "p3", "q1", "q2", "q3", "q4", "q5", "q6"});
  auto sys = PolySystem::make({P("p1*x1 + p2*x2 + p3*x3", reg),
                               P("q1*x1^2 + q2*x1*x2 + q3*x1*x3 + q4*x2^2 + q5*x2*x3 + q6*x3^2", reg)},
                              {"x1", "x2", "x3"});
  auto v = vieta_tensor(sys);
  EXPECT_EQ(v.N, 2);
  auto pv = indices_of(*reg, {"p1", "p2", "p3"});
  auto qv = indices_of(*reg, {"q1", "q2", "q3", "q4", "q5", "q6"});
  size_t count = 0;
  for (auto& [key, e] : v.entries) {
    EXPECT_EQ(key.size(), 2u);
    EXPECT_TRUE(std::is_sorted(key.begin(), key.end()));
    if (e.is_zero()) continue;
    ++count;
    EXPECT_EQ(homogeneity_degree(e, pv), 2);
    EXPECT_EQ(homogeneity_degree(e, qv), 1);
  }
  EXPECT_EQ(count, 6u);
}
