#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "abelianizer/combinatorics.hpp"
#include "abelianizer/scalar.hpp"

namespace abelianizer {

/// Dense square matrix over Q; entry (row, col) maps basis vector col to row.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  static Matrix identity(std::size_t dim) {
    Matrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t dim() const { return dim_; }
  Scalar& operator()(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return a_[r * dim_ + c]; }

  bool is_zero() const {
    for (const auto& x : a_)
      if (x != 0) return false;
    return true;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    Matrix out(x.dim_);
    for (std::size_t i = 0; i < x.dim_; ++i)
      for (std::size_t l = 0; l < x.dim_; ++l) {
        const Scalar& xil = x(i, l);
        if (xil == 0) continue;
        for (std::size_t j = 0; j < x.dim_; ++j)
          if (y(l, j) != 0) out(i, j) += xil * y(l, j);
      }
    return out;
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  Matrix& operator*=(const Scalar& s) {
    for (auto& x : a_) x *= s;
    return *this;
  }
  friend Matrix operator+(Matrix x, const Matrix& y) { return x += y; }
  friend Matrix operator-(Matrix x, const Matrix& y) { return x -= y; }
  friend Matrix operator*(Matrix x, const Scalar& s) { return x *= s; }
  friend bool operator==(const Matrix& x, const Matrix& y) { return x.a_ == y.a_; }

  std::vector<Scalar> column(std::size_t c) const {
    std::vector<Scalar> v(dim_);
    for (std::size_t r = 0; r < dim_; ++r) v[r] = (*this)(r, c);
    return v;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Scalar> a_;
};

/// Laurent polynomial in z with matrix coefficients: z-power -> matrix.
using LaurentMatrix = std::map<int, Matrix>;

inline void accumulate(LaurentMatrix& target, int zpow, const Matrix& m) {
  if (m.is_zero()) return;
  auto it = target.find(zpow);
  if (it == target.end()) {
    target.emplace(zpow, m);
  } else {
    it->second += m;
    if (it->second.is_zero()) target.erase(it);
  }
}

inline LaurentMatrix operator*(const LaurentMatrix& x, const Matrix& y) {
  LaurentMatrix out;
  for (const auto& [p, m] : x) accumulate(out, p, m * y);
  return out;
}

inline LaurentMatrix operator*(const Matrix& x, const LaurentMatrix& y) {
  LaurentMatrix out;
  for (const auto& [p, m] : y) accumulate(out, p, x * m);
  return out;
}

/// Data of the quantum differential system of a space whose quantum
/// multiplication by the divisors D_1..D_r is polynomial in the Novikov
/// variables: mult[i] maps a multidegree to the matrix of its q^d part
/// (the zero multidegree holds the classical cup product).
struct QuantumSystem {
  std::size_t dim = 0;
  int rank = 1;
  std::vector<std::map<Multidegree, Matrix>> mult;
};

/// Fundamental solution of z dS/dt_i = S (D_i *) with the ansatz
/// S = e^{sum t_i D_i / z} (Id + sum_{d != 0} q^d R_d). Along a direction
/// with d_i > 0 the coefficients satisfy
///
///   z d_i R_d + [D_i cup, R_d] = sum_{0 != d' <= d} R_{d-d'} A^{(i)}_{d'},
///
/// and because ad(D_i cup) is nilpotent the operator on the left is inverted
/// by the finite series sum_j (-ad)^j / (z d_i)^{j+1}.
inline std::map<Multidegree, LaurentMatrix> solve_fundamental(const QuantumSystem& sys, int max_total_degree) {
  std::map<Multidegree, LaurentMatrix> R;
  const Multidegree zero = Multidegree::zero(sys.rank);
  R[zero][0] = Matrix::identity(sys.dim);
  for (int t = 1; t <= max_total_degree; ++t) {
    for (const auto& d : lifts(t, sys.rank)) {
      std::size_t dir = 0;
      while (d[dir] == 0) ++dir;
      const auto& mult = sys.mult[dir];
      const Matrix& cls = mult.at(zero);
      LaurentMatrix rhs;
      for (const auto& [dq, A] : mult) {
        if (dq.is_zero()) continue;
        Multidegree rest = d - dq;
        if (!rest.effective()) continue;
        auto it = R.find(rest);
        if (it == R.end()) continue;
        for (const auto& [p, m] : it->second * A) accumulate(rhs, p, m);
      }
      LaurentMatrix sol;
      LaurentMatrix term = rhs;
      Scalar inv = 1;
      inv /= d[dir];
      Scalar factor = inv;
      int shift = -1;
      while (!term.empty()) {
        for (const auto& [p, m] : term) accumulate(sol, p + shift, m * factor);
        LaurentMatrix next;
        for (const auto& [p, m] : term) accumulate(next, p, cls * m - m * cls);
        term = std::move(next);
        factor *= -inv;
        --shift;
      }
      R[d] = std::move(sol);
    }
  }
  return R;
}

}  // namespace abelianizer
