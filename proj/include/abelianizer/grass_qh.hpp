#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "abelianizer/cohomology.hpp"
#include "abelianizer/combinatorics.hpp"
#include "abelianizer/qde.hpp"
#include "abelianizer/report.hpp"
#include "abelianizer/scalar.hpp"

namespace abelianizer {

/// Schubert vector with polynomial coefficients in one Novikov variable q:
/// q-power -> SchubertVector.
using QSchubertVector = std::map<int, SchubertVector>;

inline void accumulate(QSchubertVector& target, int qpow, const SchubertVector& v) {
  if (v.is_zero()) return;
  auto it = target.find(qpow);
  if (it == target.end()) {
    target.emplace(qpow, v);
  } else {
    it->second += v;
    if (it->second.is_zero()) target.erase(it);
  }
}

/// Series in q and z with coefficients V: (q_power, z_power) -> V.
template <typename V>
using ZSeries = std::map<std::pair<int, int>, V>;

/// Product s_lambda * s_mu in k variables, expanded in Schur polynomials
/// with at most k rows. The coefficient of s_nu is the coefficient of
/// x^{nu + delta} in s_lambda * s_mu * a_delta.
inline std::map<Partition, Scalar> schur_product_k_rows(const Partition& lambda, const Partition& mu, int k) {
  Polynomial prod = schur_polynomial(lambda, k) * schur_polynomial(mu, k) * vandermonde(k);
  std::map<Partition, Scalar> out;
  for (const auto& [e, c] : prod.terms()) {
    bool decreasing = true;
    for (std::size_t i = 1; i < e.size(); ++i)
      if (e[i] >= e[i - 1]) decreasing = false;
    if (!decreasing) continue;
    std::vector<int> parts(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) parts[i] = e[i] - (k - 1 - static_cast<int>(i));
    out.emplace(Partition(std::move(parts)), c);
  }
  return out;
}

/// Small quantum cohomology of Gr(k,n) via the rim-hook rule.
class GrassmannianQH {
 public:
  explicit GrassmannianQH(const BoxSpec& box, RimHookSign rule = kDefaultRimHookSign)
      : box_(box), rule_(rule), basis_(box_partitions(box)) {}

  const BoxSpec& box() const { return box_; }
  const std::vector<Partition>& basis() const { return basis_; }
  RimHookSign rule() const { return rule_; }

  std::size_t index_of(const Partition& p) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] == p) return i;
    throw OutsideBoxError("partition " + p.str() + " outside box");
  }

  QSchubertVector quantum_cup(const Partition& lambda, const Partition& mu) const {
    if (!lambda.fits(box_)) throw OutsideBoxError("partition " + lambda.str() + " outside box");
    if (!mu.fits(box_)) throw OutsideBoxError("partition " + mu.str() + " outside box");
    {
      std::lock_guard lock(mutex_);
      auto it = cache_.find({lambda, mu});
      if (it != cache_.end()) return it->second;
    }
    QSchubertVector out;
    for (const auto& [nu, c] : schur_product_k_rows(lambda, mu, box_.k)) {
      RimHookResult r = rim_hook_reduce(nu, box_, rule_);
      if (!r.reduced) continue;
      SchubertVector v(box_);
      v.add(*r.reduced, c * r.sign);
      accumulate(out, r.q_power, v);
    }
    std::lock_guard lock(mutex_);
    cache_.emplace(std::make_pair(lambda, mu), out);
    return out;
  }

  /// Q^d coefficient of the pairing of sigma_lambda * sigma_mu with sigma_nu.
  Scalar three_point(const Partition& lambda, const Partition& mu, const Partition& nu, Degree d) const {
    if (d < 0) return 0;
    if (lambda.weight() + mu.weight() + nu.weight() != box_.dim() + box_.n * d) return 0;
    auto prod = quantum_cup(lambda, mu);
    auto it = prod.find(d);
    if (it == prod.end()) return 0;
    return it->second[complement(nu, box_)];
  }

  /// <sigma_lambda, sigma_mu>_{0,2,d} = (1/d) <sigma_1, sigma_lambda, sigma_mu>_{0,3,d}.
  Scalar two_point(const Partition& lambda, const Partition& mu, Degree d) const {
    if (d < 1) throw Error("two-point invariant needs d >= 1");
    Scalar v = three_point(Partition{1}, lambda, mu, d);
    v /= d;
    return v;
  }

  /// Matrices of quantum multiplication by sigma_(1): q^0 and q^1 parts.
  QuantumSystem divisor_system() const {
    QuantumSystem sys;
    sys.dim = basis_.size();
    sys.rank = 1;
    sys.mult.resize(1);
    Matrix cls(sys.dim), quant(sys.dim);
    for (std::size_t col = 0; col < basis_.size(); ++col) {
      for (const auto& [qp, vec] : quantum_cup(Partition{1}, basis_[col])) {
        if (qp > 1) throw InvariantViolation("divisor product with q^2 term");
        for (const auto& [p, c] : vec.coeffs()) (qp == 0 ? cls : quant)(index_of(p), col) = c;
      }
    }
    sys.mult[0][Multidegree{0}] = cls;
    sys.mult[0][Multidegree{1}] = quant;
    return sys;
  }

 private:
  BoxSpec box_;
  RimHookSign rule_;
  std::vector<Partition> basis_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<Partition, Partition>, QSchubertVector> cache_;
};

inline QSchubertVector quantum_cup_Gr(const Partition& lambda, const Partition& mu, const BoxSpec& box,
                                      RimHookSign rule = kDefaultRimHookSign) {
  return GrassmannianQH(box, rule).quantum_cup(lambda, mu);
}

inline Scalar three_point_Gr(const Partition& lambda, const Partition& mu, const Partition& nu, Degree d,
                             const BoxSpec& box, RimHookSign rule = kDefaultRimHookSign) {
  return GrassmannianQH(box, rule).three_point(lambda, mu, nu, d);
}

inline Scalar two_point_Gr(const Partition& lambda, const Partition& mu, Degree d, const BoxSpec& box) {
  return GrassmannianQH(box).two_point(lambda, mu, d);
}

/// Small J-function of Gr(k,n) along the divisor direction, with the
/// exponential e^{t sigma_1 / z} factored out:
///   J = z e^{t sigma_1/z} (1 + sum_d q^d R_d(1)).
/// `fundamental` keeps every column, i.e. z d/dt_b J for each basis element b.
struct GrassJFunction {
  BoxSpec box;
  std::vector<Partition> basis;
  std::map<Multidegree, LaurentMatrix> fundamental;

  /// z * R_d applied to basis vector `col`, as (q, z) -> SchubertVector.
  ZSeries<SchubertVector> column(std::size_t col) const {
    ZSeries<SchubertVector> out;
    for (const auto& [d, lm] : fundamental) {
      for (const auto& [p, m] : lm) {
        SchubertVector v(box);
        for (std::size_t r = 0; r < basis.size(); ++r) v.add(basis[r], m(r, col));
        if (!v.is_zero()) out.emplace(std::make_pair(d[0], p + 1), v);
      }
    }
    return out;
  }

  ZSeries<SchubertVector> series() const { return column(0); }
};

/// z_trunc, when nonnegative, drops terms more than z_trunc orders below the
/// leading z-power 1 - n d of each q^d coefficient.
inline GrassJFunction j_function_Gr(const BoxSpec& box, int q_trunc, int z_trunc = -1) {
  GrassmannianQH qh(box);
  GrassJFunction J{box, qh.basis(), solve_fundamental(qh.divisor_system(), q_trunc)};
  if (z_trunc >= 0) {
    for (auto& [d, lm] : J.fundamental) {
      const int floor = 1 - box.n * d[0] - z_trunc - 1;  // z-power of R_d is one less than of J
      for (auto it = lm.begin(); it != lm.end();) it = (it->first < floor) ? lm.erase(it) : std::next(it);
    }
  }
  return J;
}

template <typename V>
nlohmann::json zseries_to_json(const ZSeries<V>& s, const std::function<std::vector<std::pair<std::string, Scalar>>(const V&)>& flatten) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [qz, v] : s) {
    for (const auto& [label, c] : flatten(v)) {
      arr.push_back({{"q_power", qz.first},
                     {"z_power", qz.second},
                     {"basis", label},
                     {"numerator", c.get_num().get_str()},
                     {"denominator", c.get_den().get_str()}});
    }
  }
  return arr;
}

inline nlohmann::json to_json(const ZSeries<SchubertVector>& s) {
  return zseries_to_json<SchubertVector>(s, [](const SchubertVector& v) {
    std::vector<std::pair<std::string, Scalar>> out;
    for (const auto& [p, c] : v.coeffs()) out.emplace_back(p.str(), c);
    return out;
  });
}

/// Every Q^d coefficient of every 3-point constant with d <= max_degree must
/// be a nonnegative integer.
inline CheckReport check_nonnegativity(const BoxSpec& box, int max_degree, RimHookSign rule) {
  CheckReport rep;
  rep.name = "calibration";
  const GrassmannianQH qh(box, rule);
  for (const auto& a : qh.basis())
    for (const auto& b : qh.basis())
      for (const auto& c : qh.basis())
        for (Degree d = 0; d <= max_degree; ++d) {
          if (a.weight() + b.weight() + c.weight() != box.dim() + box.n * d) continue;
          ++rep.instances;
          const Scalar v = qh.three_point(a, b, c, d);
          if (v < 0 || !is_integral(v)) {
            rep.fail(a.str() + b.str() + c.str() + " d=" + std::to_string(d), ">= 0", to_string(v));
          }
        }
  return rep;
}

/// (a * b) * c = a * (b * c) for all box triples.
inline CheckReport check_associativity(const GrassmannianQH& qh) {
  CheckReport rep;
  rep.name = "grass-associativity";
  auto times = [&](const QSchubertVector& x, const Partition& p) {
    QSchubertVector out;
    for (const auto& [q, v] : x)
      for (const auto& [lam, c] : v.coeffs())
        for (const auto& [q2, w] : qh.quantum_cup(lam, p)) accumulate(out, q + q2, c * w);
    return out;
  };
  for (const auto& a : qh.basis())
    for (const auto& b : qh.basis())
      for (const auto& c : qh.basis()) {
        ++rep.instances;
        const auto left = times(qh.quantum_cup(a, b), c);
        const auto right = times(qh.quantum_cup(b, c), a);
        if (left != right) rep.fail(a.str() + b.str() + c.str(), "associative", "differs");
      }
  return rep;
}

}  // namespace abelianizer
