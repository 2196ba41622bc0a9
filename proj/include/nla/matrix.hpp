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

#include <optional>
#include <utility>
#include <vector>

#include "nla/field.hpp"
#include "nla/mpoly.hpp"

namespace nla {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  T& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }
  T* row(size_t i) { return data_.data() + i * cols_; }
  const T* row(size_t i) const { return data_.data() + i * cols_; }

  void swap_rows(size_t a, size_t b) {
    if (a == b) return;
    for (size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

template <class F>
using FMatrix = Matrix<typename F::value_type>;

template <class F>
FMatrix<F> identity(const F& f, size_t n) {
  FMatrix<F> I(n, n, f.zero());
  for (size_t i = 0; i < n; ++i) I(i, i) = f.one();
  return I;
}

template <class F>
FMatrix<F> multiply(const F& f, const FMatrix<F>& a, const FMatrix<F>& b) {
  FMatrix<F> c(a.rows(), b.cols(), f.zero());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k) {
      const auto& aik = a(i, k);
      if (f.is_zero(aik)) continue;
      for (size_t j = 0; j < b.cols(); ++j) c(i, j) = f.add(c(i, j), f.mul(aik, b(k, j)));
    }
  return c;
}

// Gaussian elimination determinant.
template <class F>
typename F::value_type determinant(const F& f, FMatrix<F> a) {
  const size_t n = a.rows();
  if (n != a.cols()) throw ScopeError("determinant of a non-square matrix");
  auto det = f.one();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && f.is_zero(a(piv, c))) ++piv;
    if (piv == n) return f.zero();
    if (piv != c) {
      a.swap_rows(piv, c);
      det = f.neg(det);
    }
    det = f.mul(det, a(c, c));
    auto inv = f.inv(a(c, c));
    for (size_t r = c + 1; r < n; ++r) {
      if (f.is_zero(a(r, c))) continue;
      auto factor = f.mul(a(r, c), inv);
      for (size_t j = c; j < n; ++j) a(r, j) = f.sub(a(r, j), f.mul(factor, a(c, j)));
    }
  }
  return det;
}

// In-place reduced row echelon form; returns pivot columns in order.
template <class F>
std::vector<size_t> rref(const F& f, FMatrix<F>& a) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    size_t piv = r;
    while (piv < a.rows() && f.is_zero(a(piv, c))) ++piv;
    if (piv == a.rows()) continue;
    a.swap_rows(piv, r);
    auto inv = f.inv(a(r, c));
    for (size_t j = c; j < a.cols(); ++j) a(r, j) = f.mul(a(r, j), inv);
    for (size_t i = 0; i < a.rows(); ++i) {
      if (i == r || f.is_zero(a(i, c))) continue;
      auto factor = a(i, c);
      for (size_t j = c; j < a.cols(); ++j) a(i, j) = f.sub(a(i, j), f.mul(factor, a(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F>
std::optional<FMatrix<F>> inverse(const F& f, const FMatrix<F>& a) {
  const size_t n = a.rows();
  FMatrix<F> aug(n, 2 * n, f.zero());
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = f.one();
  }
  auto piv = rref(f, aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  FMatrix<F> inv(n, n, f.zero());
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

// Characteristic polynomial det(x I - A) via Hessenberg reduction; coefficients low to high.
template <class F>
std::vector<typename F::value_type> characteristic_coefficients(const F& f, FMatrix<F> h) {
  const size_t n = h.rows();
  for (size_t j = 0; j + 2 < n; ++j) {
    size_t piv = j + 1;
    while (piv < n && f.is_zero(h(piv, j))) ++piv;
    if (piv == n) continue;
    if (piv != j + 1) {
      h.swap_rows(piv, j + 1);
      for (size_t i = 0; i < n; ++i) std::swap(h(i, piv), h(i, j + 1));
    }
    auto inv = f.inv(h(j + 1, j));
    for (size_t i = j + 2; i < n; ++i) {
      if (f.is_zero(h(i, j))) continue;
      auto u = f.mul(h(i, j), inv);
      for (size_t k = 0; k < n; ++k) h(i, k) = f.sub(h(i, k), f.mul(u, h(j + 1, k)));
      for (size_t k = 0; k < n; ++k) h(k, j + 1) = f.add(h(k, j + 1), f.mul(u, h(k, i)));
    }
  }
  using V = typename F::value_type;
  std::vector<std::vector<V>> p(n + 1);
  p[0] = {f.one()};
  for (size_t m = 1; m <= n; ++m) {
    std::vector<V> cur(m + 1, f.zero());
    const auto& prev = p[m - 1];
    for (size_t k = 0; k < prev.size(); ++k) {
      cur[k + 1] = f.add(cur[k + 1], prev[k]);
      cur[k] = f.sub(cur[k], f.mul(h(m - 1, m - 1), prev[k]));
    }
    V t = f.one();
    for (size_t i = m - 1; i >= 1; --i) {
      t = f.mul(t, h(i, i - 1));
      if (f.is_zero(t)) break;
      V coef = f.mul(h(i - 1, m - 1), t);
      if (!f.is_zero(coef))
        for (size_t k = 0; k < p[i - 1].size(); ++k) cur[k] = f.sub(cur[k], f.mul(coef, p[i - 1][k]));
    }
    p[m] = std::move(cur);
  }
  return p[n];
}

// Fraction-free Bareiss determinant for matrices of polynomials.
inline MPoly bareiss_determinant(std::vector<std::vector<MPoly>> a, const RegistryPtr& reg) {
  const size_t n = a.size();
  if (n == 0) return MPoly(reg, 1);
  for (const auto& row : a)
    if (row.size() != n) throw ScopeError("determinant of a non-square matrix");
  bool negate = false;
  MPoly prev(reg, 1);
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      size_t piv = k + 1;
      while (piv < n && a[piv][k].is_zero()) ++piv;
      if (piv == n) return MPoly(reg);
      std::swap(a[k], a[piv]);
      negate = !negate;
    } else {
      // Prefer a constant pivot so exact divisions stay cheap.
      if (!a[k][k].is_constant()) {
        for (size_t r = k + 1; r < n; ++r) {
          if (!a[r][k].is_zero() && a[r][k].is_constant()) {
            std::swap(a[k], a[r]);
            negate = !negate;
            break;
          }
        }
      }
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        MPoly v = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        a[i][j] = prev.is_constant() ? v * (Rational(1) / prev.constant_value()) : exact_divide(v, prev);
      }
      a[i][k] = MPoly(reg);
    }
    prev = a[k][k];
  }
  MPoly d = a[n - 1][n - 1];
  return negate ? -d : d;
}

}  // namespace nla
