#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "abelianizer/scalar.hpp"

namespace abelianizer {

using Exponent = std::vector<int>;

inline int total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

/// Sparse multivariate polynomial with exact rational coefficients. Terms
/// are kept in lexicographic exponent order with no zero coefficients.
class Polynomial {
 public:
  using Terms = std::map<Exponent, Scalar>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Scalar& c) {
    Polynomial p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t i) {
    Exponent e(nvars, 0);
    e.at(i) = 1;
    Polynomial p(nvars);
    p.add_term(e, 1);
    return p;
  }

  static Polynomial monomial(const Exponent& e, const Scalar& c = 1) {
    Polynomial p(e.size());
    p.add_term(e, c);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Scalar coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add_term(const Exponent& e, const Scalar& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    adopt_arity(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    adopt_arity(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  Polynomial& operator*=(const Scalar& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Scalar& s) { return a *= s; }
  friend Polynomial operator*(const Scalar& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out(std::max(a.nvars_, b.nvars_));
    Exponent e(out.nvars_, 0);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < out.nvars_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }

  Polynomial operator-() const {
    Polynomial out = *this;
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.terms_ == b.terms_;
  }

  Polynomial pow(unsigned k) const {
    Polynomial out = constant(nvars_, 1);
    for (unsigned i = 0; i < k; ++i) out = out * *this;
    return out;
  }

  /// Keeps only terms accepted by `keep(exponent)`.
  template <typename Pred>
  Polynomial filtered(Pred keep) const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_)
      if (keep(e)) out.terms_.emplace(e, c);
    return out;
  }

  /// Applies a variable permutation: variable i becomes variable perm[i].
  Polynomial permuted(std::span<const int> perm) const {
    Polynomial out(nvars_);
    Exponent f(nvars_, 0);
    for (const auto& [e, c] : terms_) {
      for (std::size_t i = 0; i < nvars_; ++i) f[static_cast<std::size_t>(perm[i])] = e[i];
      out.add_term(f, c);
    }
    return out;
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    int d = total_degree(terms_.begin()->first);
    return std::all_of(terms_.begin(), terms_.end(),
                       [d](const auto& t) { return total_degree(t.first) == d; });
  }

  std::string str(std::span<const std::string> names = {}) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Scalar mag = abs(c);
      os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
      bool unit = (total_degree(e) == 0);
      if (mag != 1 || unit) os << to_display(mag);
      bool need_dot = (mag != 1 && !unit);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (need_dot) os << "*";
        need_dot = true;
        os << (i < names.size() ? names[i] : "x" + std::to_string(i + 1));
        if (e[i] > 1) os << "^" << e[i];
      }
      first = false;
    }
    return os.str();
  }

 private:
  void adopt_arity(const Polynomial& o) {
    if (nvars_ == 0 && terms_.empty()) nvars_ = o.nvars_;
  }

  std::size_t nvars_ = 0;
  Terms terms_;
};

}  // namespace abelianizer
