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

#include "nla/interpolate.hpp"
#include "nla/quotient.hpp"
#include "test_util.hpp"

using namespace nla;
using nla::testing::P;

namespace {

uint64_t reduce(const PrimeField& f, const MPoly& constant) { return f.from(constant.constant_value()); }

}  // namespace

TEST(Quotient, PoissonAgreesWithExactResultant) {
  std::mt19937_64 rng(7);
  PrimeField f(nth_large_prime(0));
  auto reg = VarRegistry::make({"x1", "x2", "x3"}, {});
  std::vector<size_t> main{0, 1, 2};
  for (auto degs : std::vector<std::vector<int>>{{1, 2, 2}, {2, 2, 1}, {2, 1, 3}, {2, 2, 2}}) {
    std::vector<MPoly> polys;
    for (int d : degs) polys.push_back(nla::testing::random_form(rng, reg, main, d));
    auto sys = PolySystem::make(polys, {"x1", "x2", "x3"});
    uint64_t exact = reduce(f, macaulay_resultant(sys));
    std::vector<SparseForm<PrimeField>> forms;
    for (const auto& p : polys) forms.push_back(specialize_form(f, p, main, {}, {}));
    auto fr = field_resultant(f, forms, degs);
    if (fr) {
      EXPECT_EQ(*fr, exact);
    }
    std::vector<SparseForm<PrimeField>> head(forms.begin(), forms.end() - 1);
    auto Q = build_quotient(f, head, {degs[0], degs[1]});
    ASSERT_TRUE(Q.has_value());
    EXPECT_EQ(Q->dim, static_cast<size_t>(degs[0] * degs[1]));
    auto X = Q->ops;
    X.push_back(identity(f, Q->dim));
    uint64_t via = f.mul(f.pow(Q->rho, degs[2]), determinant(f, evaluate_form(f, forms[2], X, Q->dim)));
    EXPECT_EQ(via, exact);
  }
}

TEST(Quotient, OperatorsCommute) {
  std::mt19937_64 rng(3);
  PrimeField f(nth_large_prime(1));
  auto reg = VarRegistry::make({"x1", "x2", "x3", "x4"}, {});
  std::vector<size_t> main{0, 1, 2, 3};
  std::vector<SparseForm<PrimeField>> forms;
  for (int d : {2, 2, 1}) forms.push_back(specialize_form(f, nla::testing::random_form(rng, reg, main, d), main, {}, {}));
  auto Q = build_quotient(f, forms, {2, 2, 1});
  ASSERT_TRUE(Q.has_value());
  EXPECT_EQ(Q->dim, 4u);
  for (size_t a = 0; a < 3; ++a)
    for (size_t b = 0; b < 3; ++b) EXPECT_EQ(multiply(f, Q->ops[a], Q->ops[b]), multiply(f, Q->ops[b], Q->ops[a]));
}

TEST(Quotient, RootAtInfinityIsRejected) {
  PrimeField f(nth_large_prime(0));
  auto reg = VarRegistry::make({"x", "y", "z"}, {});
  std::vector<size_t> main{0, 1, 2};
  std::vector<SparseForm<PrimeField>> forms{specialize_form(f, P("x*y + z^2", reg), main, {}, {}),
                                            specialize_form(f, P("x^2 - y*z", reg), main, {}, {})};
  // (0:1:0) is a common root on z = 0.
  EXPECT_FALSE(build_quotient(f, forms, {2, 2}).has_value());
}

TEST(Interpolate, TransposedVandermonde) {
  PrimeField f(nth_large_prime(0));
  std::vector<uint64_t> v{2, 5, 11, 17}, c{3, 0, 7, 1}, a;
  for (uint64_t r = 0; r < 4; ++r) {
    uint64_t s = 0;
    for (size_t i = 0; i < 4; ++i) s = f.add(s, f.mul(c[i], f.pow(v[i], r)));
    a.push_back(s);
  }
  EXPECT_EQ(detail::transposed_vandermonde(f, v, a), c);
}

TEST(Interpolate, RationalReconstruction) {
  Integer M = Integer(1000003) * 1000033;
  Rational q(-17, 45);
  Integer inv;
  Integer den = 45;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), M.get_mpz_t());
  Integer a = ((-17 * inv) % M + M) % M;
  auto r = rational_reconstruct(a, M);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r, q);
}

TEST(Interpolate, RecoversSparseRationalPolynomial) {
  auto reg = VarRegistry::make({"a", "b", "c"}, {});
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    MPoly target = nla::testing::random_poly(rng, reg, 6, 7);
    target += P("1234567891011/13", reg) * P("a^3*b*c^2", reg);
    BlackBox bb = [&](const PrimeField& f, const std::vector<uint64_t>& x) {
      std::vector<size_t> all{0, 1, 2};
      auto form = specialize_form(f, target, {}, all, x);
      return form.empty() ? uint64_t(0) : form.begin()->second;
    };
    InterpolationOptions opt;
    opt.degree_bounds = {10, 10, 10};
    auto got = interpolate_rational(bb, 3, opt);
    MPoly back(reg);
    for (const auto& [m, c] : got) back.add_term(m, c);
    EXPECT_EQ(back, target);
  }
}

TEST(Interpolate, ZeroAndConstant) {
  BlackBox zero = [](const PrimeField&, const std::vector<uint64_t>&) { return uint64_t(0); };
  EXPECT_TRUE(interpolate_rational(zero, 2, {}).empty());
  BlackBox five = [](const PrimeField& f, const std::vector<uint64_t>&) { return f.from(Rational(5, 3)); };
  auto got = interpolate_rational(five, 2, {});
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got.begin()->second, Rational(5, 3));
}
