#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "abelianizer/combinatorics.hpp"
#include "abelianizer/polynomial.hpp"
#include "abelianizer/report.hpp"
#include "abelianizer/scalar.hpp"

namespace abelianizer {

/// The abelian quotient (P^{n-1})^k. Unlike BoxSpec this allows k >= n
/// (e.g. P^1 x P^1 is k=2, n=2).
struct ProductSpace {
  int k = 1;
  int n = 2;

  ProductSpace() = default;
  ProductSpace(int k_, int n_) : k(k_), n(n_) {
    if (k < 1 || n < 2) throw Error("invalid product of projective spaces");
  }
  explicit ProductSpace(const BoxSpec& box) : ProductSpace(box.k, box.n) {}

  int dim() const { return k * (n - 1); }
  std::size_t nvars() const { return static_cast<std::size_t>(k); }

  int num_monomials() const {
    int m = 1;
    for (int i = 0; i < k; ++i) m *= n;
    return m;
  }

  /// Monomial index: exponents read as base-n digits, H_1 most significant.
  int index_of(const Exponent& e) const {
    int idx = 0;
    for (int a : e) idx = idx * n + a;
    return idx;
  }

  Exponent exponent_of(int idx) const {
    Exponent e(nvars(), 0);
    for (int i = k - 1; i >= 0; --i) {
      e[static_cast<std::size_t>(i)] = idx % n;
      idx /= n;
    }
    return e;
  }

  Exponent top() const { return Exponent(nvars(), n - 1); }

  /// c^2 = (-1)^{binom(k,2)} / k!
  Scalar c_squared() const {
    mpz_class fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    long pairs = static_cast<long>(k) * (k - 1) / 2;
    Scalar out(mpz_class(1), fact);
    out.canonicalize();
    return (pairs % 2) ? Scalar(-out) : out;
  }

  friend bool operator==(const ProductSpace&, const ProductSpace&) = default;
};

/// "H1^2*H3" for exponent (2,0,1); "1" for the unit.
inline std::string monomial_label(const Exponent& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += "H" + std::to_string(i + 1);
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out.empty() ? "1" : out;
}

/// A value a + b*c with c the formal square root in omega. Only one of the
/// two parts is ever populated by a homogeneous computation.
struct CScalar {
  Scalar value;
  int cgrade = 0;

  friend bool operator==(const CScalar&, const CScalar&) = default;
};

/// Element of H^*((P^{n-1})^k) tensored with Q[c]/(c^2 - c_squared).
class PClass {
 public:
  PClass() = default;
  explicit PClass(const ProductSpace& space, int cgrade = 0)
      : space_(space), poly_(space.nvars()), cgrade_(cgrade) {}
  PClass(const ProductSpace& space, Polynomial poly, int cgrade = 0)
      : space_(space), poly_(std::move(poly)), cgrade_(cgrade) {
    reduce();
  }

  static PClass one(const ProductSpace& space) {
    return PClass(space, Polynomial::constant(space.nvars(), 1));
  }

  static PClass monomial(const ProductSpace& space, const Exponent& e, const Scalar& c = 1) {
    return PClass(space, Polynomial::monomial(e, c));
  }

  /// H_i, 0-based.
  static PClass hyperplane(const ProductSpace& space, int i) {
    return PClass(space, Polynomial::variable(space.nvars(), static_cast<std::size_t>(i)));
  }

  const ProductSpace& space() const { return space_; }
  const Polynomial& poly() const { return poly_; }
  int cgrade() const { return cgrade_; }
  bool is_zero() const { return poly_.is_zero(); }

  friend PClass cup(const PClass& a, const PClass& b) {
    if (!(a.space_ == b.space_)) throw Error("cup: mismatched spaces");
    PClass out(a.space_, a.poly_ * b.poly_, a.cgrade_ + b.cgrade_);
    return out;
  }

  friend PClass operator*(const PClass& a, const PClass& b) { return cup(a, b); }

  PClass& operator+=(const PClass& o) {
    check_compatible(o);
    poly_ += o.poly_;
    return *this;
  }
  PClass& operator-=(const PClass& o) {
    check_compatible(o);
    poly_ -= o.poly_;
    return *this;
  }
  PClass& operator*=(const Scalar& s) {
    poly_ *= s;
    return *this;
  }
  friend PClass operator+(PClass a, const PClass& b) { return a += b; }
  friend PClass operator-(PClass a, const PClass& b) { return a -= b; }
  friend PClass operator*(PClass a, const Scalar& s) { return a *= s; }
  friend PClass operator*(const Scalar& s, PClass a) { return a *= s; }

  friend bool operator==(const PClass& a, const PClass& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.space_ == b.space_ && a.cgrade_ == b.cgrade_ && a.poly_ == b.poly_;
  }

  /// Coefficient of the top monomial prod H_i^{n-1}, carrying the cgrade.
  CScalar integrate() const { return {poly_.coefficient(space_.top()), cgrade_}; }

  /// Scalar integral; throws if the result has odd cgrade and is nonzero.
  Scalar integrate_rational() const {
    CScalar s = integrate();
    if (s.cgrade != 0 && s.value != 0) throw ParityError("integral has odd c-grade");
    return s.value;
  }

  int degree() const {
    if (poly_.is_zero()) return -1;
    return total_degree(poly_.terms().begin()->first);
  }

  std::string str() const {
    std::vector<std::string> names;
    for (int i = 1; i <= space_.k; ++i) names.push_back("H" + std::to_string(i));
    std::string body = poly_.str(names);
    if (cgrade_ == 0) return body;
    return poly_.size() > 1 ? "c*(" + body + ")" : "c*" + body;
  }

  /// Stable list of (exponent, numerator, denominator, cgrade) records.
  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [e, c] : poly_.terms()) {
      arr.push_back({{"exponent", e},
                     {"numerator", c.get_num().get_str()},
                     {"denominator", c.get_den().get_str()},
                     {"cgrade", cgrade_}});
    }
    return arr;
  }

  static PClass from_json(const ProductSpace& space, const nlohmann::json& arr) {
    Polynomial p(space.nvars());
    int cg = 0;
    for (const auto& rec : arr) {
      Scalar c(mpz_class(rec.at("numerator").get<std::string>()),
               mpz_class(rec.at("denominator").get<std::string>()));
      c.canonicalize();
      p.add_term(rec.at("exponent").get<Exponent>(), c);
      cg = rec.at("cgrade").get<int>();
    }
    return PClass(space, std::move(p), cg);
  }

 private:
  void check_compatible(const PClass& o) {
    if (!(space_ == o.space_)) throw Error("mismatched spaces");
    if (o.is_zero()) return;
    if (is_zero()) cgrade_ = o.cgrade_;
    if (cgrade_ != o.cgrade_) throw ParityError("adding classes of different c-grade");
  }

  void reduce() {
    const int n = space_.n;
    poly_ = poly_.filtered([n](const Exponent& e) {
      return std::all_of(e.begin(), e.end(), [n](int a) { return a < n; });
    });
    while (cgrade_ >= 2) {
      poly_ *= space_.c_squared();
      cgrade_ -= 2;
    }
  }

  ProductSpace space_;
  Polynomial poly_;
  int cgrade_ = 0;
};

/// Permutes H_i -> H_{w(i)}; the scalar c is left fixed, so omega picks up sign(w).
inline PClass weyl_action(std::span<const int> w, const PClass& a) {
  if (static_cast<int>(w.size()) != a.space().k) throw Error("weyl_action: wrong permutation size");
  return PClass(a.space(), a.poly().permuted(w), a.cgrade());
}

/// Delta = prod_{i<j} (H_i - H_j) as a bare polynomial.
inline Polynomial vandermonde(int k) {
  auto nv = static_cast<std::size_t>(k);
  Polynomial out = Polynomial::constant(nv, 1);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      out = out * (Polynomial::variable(nv, static_cast<std::size_t>(i)) -
                   Polynomial::variable(nv, static_cast<std::size_t>(j)));
  return out;
}

inline PClass delta(const ProductSpace& space) { return PClass(space, vandermonde(space.k)); }

/// omega = c * prod_{i<j} (H_i - H_j), cgrade 1.
inline PClass omega(const ProductSpace& space) { return PClass(space, vandermonde(space.k), 1); }

/// Schur lift S_lambda(H_1..H_k), reduced modulo H_i^n.
inline PClass lift(const Partition& lambda, const BoxSpec& box) {
  if (!lambda.fits(box)) throw OutsideBoxError("partition " + lambda.str() + " outside box");
  return PClass(ProductSpace(box), schur_polynomial(lambda, box.k));
}

/// Coefficients in the Schubert basis of Gr(k,n).
class SchubertVector {
 public:
  using Coeffs = std::map<Partition, Scalar, GradedOrder>;

  SchubertVector() = default;
  explicit SchubertVector(const BoxSpec& box) : box_(box) {}

  static SchubertVector basis(const BoxSpec& box, const Partition& lambda) {
    SchubertVector v(box);
    v.add(lambda, 1);
    return v;
  }

  const BoxSpec& box() const { return box_; }
  const Coeffs& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  Scalar operator[](const Partition& p) const {
    auto it = coeffs_.find(p);
    return it == coeffs_.end() ? Scalar(0) : it->second;
  }

  void add(const Partition& p, const Scalar& c) {
    if (!p.fits(box_)) throw OutsideBoxError("partition " + p.str() + " outside box");
    if (c == 0) return;
    auto [it, inserted] = coeffs_.try_emplace(p, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) coeffs_.erase(it);
    }
  }

  SchubertVector& operator+=(const SchubertVector& o) {
    for (const auto& [p, c] : o.coeffs_) add(p, c);
    return *this;
  }
  SchubertVector& operator-=(const SchubertVector& o) {
    for (const auto& [p, c] : o.coeffs_) add(p, -c);
    return *this;
  }
  SchubertVector& operator*=(const Scalar& s) {
    if (s == 0) coeffs_.clear();
    for (auto& [p, c] : coeffs_) c *= s;
    return *this;
  }
  friend SchubertVector operator+(SchubertVector a, const SchubertVector& b) { return a += b; }
  friend SchubertVector operator-(SchubertVector a, const SchubertVector& b) { return a -= b; }
  friend SchubertVector operator*(const Scalar& s, SchubertVector a) { return a *= s; }
  friend bool operator==(const SchubertVector& a, const SchubertVector& b) {
    return a.coeffs_ == b.coeffs_;
  }

  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (const auto& [p, c] : coeffs_) {
      if (!out.empty()) out += " + ";
      out += (c == 1 ? "" : to_display(c) + "*") + "s" + p.str();
    }
    return out;
  }

 private:
  BoxSpec box_;
  Coeffs coeffs_;
};

inline PClass lift(const SchubertVector& v) {
  ProductSpace space(v.box());
  PClass out(space);
  for (const auto& [p, c] : v.coeffs()) out += lift(p, v.box()) * c;
  return out;
}

/// Classical product sigma_lambda . sigma_mu on Gr(k,n) with coefficients
/// read off by integrating against omega^2 on the abelian quotient.
inline SchubertVector martin_cup_Gr(const Partition& lambda, const Partition& mu, const BoxSpec& box) {
  ProductSpace space(box);
  const PClass w = omega(space);
  const PClass base = w * w * lift(lambda, box) * lift(mu, box);
  SchubertVector out(box);
  const int target = lambda.weight() + mu.weight();
  for (const auto& nu : box_partitions(box)) {
    if (nu.weight() != target) continue;
    out.add(nu, (base * lift(complement(nu, box), box)).integrate_rational());
  }
  return out;
}

/// Inverts v -> lift(v) * omega. The basis {S_lambda * omega} has the alternants
/// a_{lambda+delta} as bare polynomials, so the coefficient of S_lambda is the
/// coefficient of H^{lambda + delta}; the reconstruction is then verified exactly.
inline SchubertVector divide_by_omega(const PClass& phi, const BoxSpec& box) {
  ProductSpace space(box);
  SchubertVector out(box);
  if (phi.is_zero()) return out;
  if (phi.cgrade() != 1) throw NotInSpanError("divide_by_omega: input must have c-grade 1");
  const int k = box.k;
  for (const auto& lam : box_partitions(box)) {
    Exponent e(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) e[static_cast<std::size_t>(i)] = lam[static_cast<std::size_t>(i)] + k - 1 - i;
    out.add(lam, phi.poly().coefficient(e));
  }
  if (!(lift(out) * omega(space) == phi)) {
    throw NotInSpanError("divide_by_omega: class is not in the span of S_lambda * omega");
  }
  return out;
}

/// int_P w^2 S_lambda S_mu = delta_{mu, lambda^v} for every pair of box
/// partitions of complementary weight.
inline CheckReport check_martin(const BoxSpec& box) {
  CheckReport rep;
  rep.name = "martin";
  const ProductSpace space(box);
  const PClass w2 = omega(space) * omega(space);
  const auto basis = box_partitions(box);
  for (const auto& lam : basis) {
    const PClass left = w2 * lift(lam, box);
    for (const auto& mu : basis) {
      if (lam.weight() + mu.weight() != box.dim()) continue;
      ++rep.instances;
      const Scalar got = (left * lift(mu, box)).integrate_rational();
      const Scalar expect = mu == complement(lam, box) ? 1 : 0;
      if (got != expect) rep.fail(lam.str() + mu.str(), to_display(expect), to_display(got));
    }
  }
  return rep;
}

}  // namespace abelianizer
