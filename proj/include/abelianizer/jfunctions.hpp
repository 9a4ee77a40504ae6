#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "abelianizer/cohomology.hpp"
#include "abelianizer/combinatorics.hpp"
#include "abelianizer/correspondence.hpp"
#include "abelianizer/grass_qh.hpp"
#include "abelianizer/qde.hpp"
#include "abelianizer/report.hpp"
#include "abelianizer/scalar.hpp"

namespace abelianizer {

/// Laurent polynomial in z with PClass coefficients: z-power -> class.
using ZPClass = std::map<int, PClass>;

inline void accumulate(ZPClass& target, int zpow, const PClass& c) {
  if (c.is_zero()) return;
  auto it = target.find(zpow);
  if (it == target.end()) {
    target.emplace(zpow, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) target.erase(it);
  }
}

inline ZPClass operator*(const ZPClass& a, const ZPClass& b) {
  ZPClass out;
  for (const auto& [p, x] : a)
    for (const auto& [q, y] : b) accumulate(out, p + q, x * y);
  return out;
}

// ---------------------------------------------------------------------------
// Abelian J-function
// ---------------------------------------------------------------------------

/// Quantum multiplication by H on P^{n-1} in the basis 1, H, ..., H^{n-1}.
inline QuantumSystem projective_system(int n) {
  QuantumSystem sys;
  sys.dim = static_cast<std::size_t>(n);
  sys.rank = 1;
  sys.mult.resize(1);
  Matrix cls(sys.dim), quant(sys.dim);
  for (int a = 0; a + 1 < n; ++a) cls(static_cast<std::size_t>(a + 1), static_cast<std::size_t>(a)) = 1;
  quant(0, static_cast<std::size_t>(n - 1)) = 1;
  sys.mult[0][Multidegree{0}] = cls;
  sys.mult[0][Multidegree{1}] = quant;
  return sys;
}

/// Quantum multiplication by H_1, ..., H_k on (P^{n-1})^k in the monomial basis.
inline QuantumSystem product_system(const ProductSpace& space) {
  QuantumSystem sys;
  const int count = space.num_monomials();
  sys.dim = static_cast<std::size_t>(count);
  sys.rank = space.k;
  sys.mult.resize(static_cast<std::size_t>(space.k));
  for (int i = 0; i < space.k; ++i) {
    Matrix cls(sys.dim), quant(sys.dim);
    for (int idx = 0; idx < count; ++idx) {
      Exponent e = space.exponent_of(idx);
      auto ui = static_cast<std::size_t>(i);
      if (e[ui] + 1 < space.n) {
        ++e[ui];
        cls(static_cast<std::size_t>(space.index_of(e)), static_cast<std::size_t>(idx)) = 1;
      } else {
        e[ui] = 0;
        quant(static_cast<std::size_t>(space.index_of(e)), static_cast<std::size_t>(idx)) = 1;
      }
    }
    Multidegree unit = Multidegree::zero(space.k);
    sys.mult[static_cast<std::size_t>(i)][unit] = cls;
    std::vector<int> ei(static_cast<std::size_t>(space.k), 0);
    ei[static_cast<std::size_t>(i)] = 1;
    sys.mult[static_cast<std::size_t>(i)][Multidegree(ei)] = quant;
  }
  return sys;
}

/// Small J-function of (P^{n-1})^k with e^{t H / z} factored out:
/// coefficients[d~] = J^{d~}, including the leading z (J^0 = z).
struct AbelianJFunction {
  ProductSpace space;
  std::map<Multidegree, ZPClass> coefficients;
};

/// Per-factor QDE on P^{n-1} (column of the unit), then tensored over the
/// k factors. q_trunc bounds the total degree; z_trunc, when nonnegative,
/// keeps only terms within z_trunc orders of the leading power 1 - n|d|.
inline AbelianJFunction j_function_P(const ProductSpace& space, int q_trunc, int z_trunc = -1) {
  const auto factor = solve_fundamental(projective_system(space.n), q_trunc);
  // per-factor z R_d(1) as polynomials in H_i
  std::vector<std::vector<ZPClass>> per(static_cast<std::size_t>(space.k));
  for (int i = 0; i < space.k; ++i) {
    auto& v = per[static_cast<std::size_t>(i)];
    for (int d = 0; d <= q_trunc; ++d) {
      ZPClass s;
      for (const auto& [p, m] : factor.at(Multidegree{d})) {
        PClass c(space);
        for (int a = 0; a < space.n; ++a) {
          const Scalar& x = m(static_cast<std::size_t>(a), 0);
          if (x == 0) continue;
          Exponent e(space.nvars(), 0);
          e[static_cast<std::size_t>(i)] = a;
          c += PClass::monomial(space, e, x);
        }
        accumulate(s, p, c);
      }
      v.push_back(std::move(s));
    }
  }
  AbelianJFunction J{space, {}};
  for (int t = 0; t <= q_trunc; ++t) {
    for (const auto& d : lifts(t, space.k)) {
      ZPClass prod;
      prod.emplace(1, PClass::one(space));
      for (int i = 0; i < space.k; ++i) prod = prod * per[static_cast<std::size_t>(i)][static_cast<std::size_t>(d[static_cast<std::size_t>(i)])];
      if (z_trunc >= 0) {
        const int floor = 1 - space.n * t - z_trunc;
        for (auto it = prod.begin(); it != prod.end();) it = it->first < floor ? prod.erase(it) : std::next(it);
      }
      J.coefficients.emplace(d, std::move(prod));
    }
  }
  return J;
}

inline ZPClass column_as_classes(const ProductSpace& space, const LaurentMatrix& lm, std::size_t col) {
  ZPClass out;
  for (const auto& [p, m] : lm) {
    PClass c(space);
    for (std::size_t r = 0; r < m.dim(); ++r)
      if (m(r, col) != 0) c += PClass::monomial(space, space.exponent_of(static_cast<int>(r)), m(r, col));
    accumulate(out, p + 1, c);
  }
  return out;
}

/// J-function from the full product QDE (not factorized); compared against
/// j_function_P to check that the tensor-ring ODE factorizes.
inline CheckReport check_tensor_consistency(const ProductSpace& space, int q_trunc) {
  CheckReport rep;
  rep.name = "j-tensor";
  const auto full = solve_fundamental(product_system(space), q_trunc);
  const auto J = j_function_P(space, q_trunc);
  for (const auto& [d, lm] : full) {
    ++rep.instances;
    ZPClass got = column_as_classes(space, lm, 0);
    const auto& expect = J.coefficients.at(d);
    bool same = got.size() == expect.size();
    if (same)
      for (const auto& [p, c] : got) same = same && expect.count(p) && expect.at(p) == c;
    if (!same) rep.fail("J^" + d.str(), "tensor product of factors", "differs");
  }
  return rep;
}

/// z d/dt_i J = (H_i + z d_i) J^{d~} per coefficient: column H_i of the
/// fundamental solution equals (H_i + z d_i) times the unit column.
inline CheckReport check_divisor_derivative(const ProductSpace& space, int q_trunc) {
  CheckReport rep;
  rep.name = "j-divisor-derivative";
  const auto full = solve_fundamental(product_system(space), q_trunc);
  for (const auto& [d, lm] : full) {
    const ZPClass unit = column_as_classes(space, lm, 0);
    for (int i = 0; i < space.k; ++i) {
      ++rep.instances;
      Exponent e(space.nvars(), 0);
      e[static_cast<std::size_t>(i)] = 1;
      const ZPClass got = column_as_classes(space, lm, static_cast<std::size_t>(space.index_of(e)));
      ZPClass factor;
      accumulate(factor, 0, PClass::hyperplane(space, i));
      accumulate(factor, 1, PClass::one(space) * Scalar(d[static_cast<std::size_t>(i)]));
      const ZPClass expect = factor * unit;
      bool same = got.size() == expect.size();
      if (same)
        for (const auto& [p, c] : got) same = same && expect.count(p) && expect.at(p) == c;
      if (!same) rep.fail("d/dt_" + std::to_string(i + 1) + " J^" + d.str(), "(H_i + z d_i) J", "differs");
    }
  }
  return rep;
}

/// Same identity on Gr(k,n): R_d(sigma_1) = (sigma_1 u + z d) R_d(1).
inline CheckReport check_divisor_derivative_Gr(const BoxSpec& box, int q_trunc) {
  CheckReport rep;
  rep.name = "j-divisor-derivative-grass";
  const GrassJFunction J = j_function_Gr(box, q_trunc);
  const auto unit = J.column(0);
  std::size_t idx = 0;
  while (!(J.basis[idx] == Partition{1})) ++idx;
  const auto div = J.column(idx);
  std::map<std::pair<int, int>, SchubertVector> expect;
  auto add = [&](std::pair<int, int> key, const SchubertVector& v) {
    auto it = expect.find(key);
    if (it == expect.end()) {
      expect.emplace(key, v);
    } else {
      it->second += v;
    }
  };
  for (const auto& [qz, v] : unit) {
    SchubertVector cup(box);
    for (const auto& [p, c] : v.coeffs()) cup += c * martin_cup_Gr(Partition{1}, p, box);
    add(qz, cup);
    add({qz.first, qz.second + 1}, Scalar(qz.first) * v);
  }
  for (auto it = expect.begin(); it != expect.end();) it = it->second.is_zero() ? expect.erase(it) : std::next(it);
  // the q^0 entry of the sigma_1 column is z sigma_1, which is the same identity at d = 0
  for (const auto& [qz, v] : div) {
    ++rep.instances;
    auto it = expect.find(qz);
    if (it == expect.end() || !(it->second == v)) {
      rep.fail("q^" + std::to_string(qz.first) + " z^" + std::to_string(qz.second), it == expect.end() ? "0" : it->second.str(),
               v.str());
    }
  }
  if (div.size() != expect.size()) rep.fail("term count", std::to_string(expect.size()), std::to_string(div.size()));
  return rep;
}

// ---------------------------------------------------------------------------
// I-function
// ---------------------------------------------------------------------------

/// coefficients[d] = sum over (z-power -> class), cgrade 0, e^{t~ H/z} factored out.
struct ISeries {
  BoxSpec box;
  std::map<Degree, ZPClass> coefficients;
};

/// I_d = (-1)^{eps(d)} sum_{d~ -> d} prod_{i<j} ((H_i - H_j) + z (d_i - d_j)) J^{d~}.
inline ISeries i_function(const BoxSpec& box, int d_trunc, int z_trunc = -1) {
  const ProductSpace space(box);
  const AbelianJFunction J = j_function_P(space, d_trunc);
  ISeries I{box, {}};
  for (Degree d = 0; d <= d_trunc; ++d) {
    ZPClass total;
    for (const auto& dt : lifts(d, box.k)) {
      ZPClass roots;
      roots.emplace(0, PClass::one(space));
      for (int i = 0; i < box.k; ++i)
        for (int j = i + 1; j < box.k; ++j) {
          ZPClass f;
          accumulate(f, 0, PClass::hyperplane(space, i) - PClass::hyperplane(space, j));
          accumulate(f, 1, PClass::one(space) * Scalar(dt[static_cast<std::size_t>(i)] - dt[static_cast<std::size_t>(j)]));
          roots = roots * f;
        }
      for (const auto& [p, c] : roots * J.coefficients.at(dt)) accumulate(total, p, c);
    }
    const int sign = sign_of_parity(epsilon(d, box.k));
    for (auto& [p, c] : total) c *= Scalar(sign);
    if (z_trunc >= 0) {
      const int floor = 1 - box.n * d - z_trunc;
      for (auto it = total.begin(); it != total.end();) it = it->first < floor ? total.erase(it) : std::next(it);
    }
    I.coefficients.emplace(d, std::move(total));
  }
  return I;
}

/// Every coefficient transforms by the sign character under the Weyl group.
inline CheckReport check_anti_invariance(const ISeries& I) {
  CheckReport rep;
  rep.name = "i-anti-invariance";
  const int k = I.box.k;
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    const int sign = sign_of_parity(permutation_parity(perm));
    for (const auto& [d, series] : I.coefficients)
      for (const auto& [p, c] : series) {
        ++rep.instances;
        if (!(weyl_action(perm, c) == c * Scalar(sign))) {
          rep.fail("I_" + std::to_string(d) + " z^" + std::to_string(p), "anti-invariant", c.str());
        }
      }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return rep;
}

inline nlohmann::json to_json(const ISeries& I) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [d, series] : I.coefficients)
    for (const auto& [p, c] : series)
      for (const auto& [e, x] : c.poly().terms()) {
        arr.push_back({{"q_power", d},
                       {"z_power", p},
                       {"basis", monomial_label(e)},
                       {"numerator", x.get_num().get_str()},
                       {"denominator", x.get_den().get_str()}});
      }
  return arr;
}

// ---------------------------------------------------------------------------
// J-I correspondence
// ---------------------------------------------------------------------------

/// Solution of I = sum_b C^b z d/dt_b (J~_Gr u w) at the small locus with
/// exponentials factored out. C^b = D^b / c; D^b maps (q-power, z-power)
/// to a rational coefficient. The residual collects what no choice of C can
/// absorb (it must be empty).
struct CSolution {
  BoxSpec box;
  std::map<Partition, std::map<std::pair<int, int>, Scalar>, GradedOrder> d_coeffs;
  std::map<std::pair<int, int>, PClass> residual;
  std::size_t unchecked_terms = 0;

  bool consistent() const { return residual.empty(); }

  /// True when only C^{empty} is nonzero and it is the constant 1/c.
  bool collapses() const {
    for (const auto& [b, m] : d_coeffs) {
      for (const auto& [qz, v] : m) {
        const bool unit = b.length() == 0 && qz == std::make_pair(0, 0);
        if (unit ? v != 1 : v != 0) return false;
      }
    }
    return d_coeffs.count(Partition{}) && d_coeffs.at(Partition{}).count({0, 0});
  }

  /// C^b as c times a rational series, using 1/c = c / c^2.
  std::string describe(const Scalar& c_squared) const {
    std::string out;
    for (const auto& [b, m] : d_coeffs) {
      if (m.empty()) continue;
      out += "C^" + b.str() + " = c*(";
      bool first = true;
      for (const auto& [qz, v] : m) {
        Scalar x = v / c_squared;
        out += (first ? "" : " + ") + to_display(x) + " q^" + std::to_string(qz.first) + " z^" + std::to_string(qz.second);
        first = false;
      }
      out += "); ";
    }
    return out.empty() ? "all C^i = 0" : out;
  }
};

/// With z_depth >= 0 the residual is only inspected within z_depth orders
/// below the leading Grassmannian power 1 - n d; terms further down are
/// counted in unchecked_terms.
inline CSolution solve_c_coefficients(const ISeries& I, const GrassJFunction& J, int d_trunc, int z_depth = -1) {
  const BoxSpec& box = I.box;
  const ProductSpace space(box);
  const PClass dlt = delta(space);
  CSolution sol{box, {}, {}, 0};
  std::vector<ZSeries<SchubertVector>> cols;
  for (std::size_t b = 0; b < J.basis.size(); ++b) cols.push_back(J.column(b));
  // lifted columns: (q, z) -> lift(coeff) * Delta
  std::vector<std::map<std::pair<int, int>, PClass>> lifted(cols.size());
  for (std::size_t b = 0; b < cols.size(); ++b)
    for (const auto& [qz, v] : cols[b]) lifted[b].emplace(qz, lift(v) * dlt);
  for (const auto& b : J.basis) sol.d_coeffs[b];

  for (Degree d = 0; d <= d_trunc; ++d) {
    ZPClass r;
    if (auto it = I.coefficients.find(d); it != I.coefficients.end()) r = it->second;
    for (Degree dp = 0; dp < d; ++dp) {
      for (std::size_t b = 0; b < J.basis.size(); ++b) {
        for (const auto& [qz, coeff] : sol.d_coeffs[J.basis[b]]) {
          if (qz.first != dp) continue;
          for (const auto& [lqz, cls] : lifted[b]) {
            if (lqz.first != d - dp) continue;
            accumulate(r, lqz.second + qz.second, cls * (-coeff));
          }
        }
      }
    }
    std::vector<int> positive;
    for (const auto& [p, c] : r)
      if (p >= 1) positive.push_back(p);
    for (int p : positive) {
      PClass phi = r.at(p);
      SchubertVector v = divide_by_omega(PClass(space, phi.poly(), 1), box);
      for (const auto& [b, c] : v.coeffs()) {
        sol.d_coeffs[b][{d, p - 1}] = c;
        accumulate(r, p, lift(b, box) * dlt * (-c));
      }
    }
    for (const auto& [p, c] : r) {
      if (z_depth >= 0 && p < 1 - box.n * d - z_depth) {
        ++sol.unchecked_terms;
        continue;
      }
      sol.residual.emplace(std::make_pair(d, p), c);
    }
  }
  for (auto it = sol.d_coeffs.begin(); it != sol.d_coeffs.end();) {
    it = it->second.empty() ? sol.d_coeffs.erase(it) : std::next(it);
  }
  return sol;
}

inline CheckReport check_j_i(const BoxSpec& box, int d_trunc, int z_depth, CSolution* out = nullptr) {
  CheckReport rep;
  rep.name = "j-i";
  const ISeries I = i_function(box, d_trunc);
  const GrassJFunction J = j_function_Gr(box, d_trunc);
  CSolution sol = solve_c_coefficients(I, J, d_trunc, z_depth);
  for (const auto& [d, s] : I.coefficients) rep.instances += s.size();
  for (const auto& [key, c] : sol.residual) {
    rep.fail("residual q^" + std::to_string(key.first) + " z^" + std::to_string(key.second), "0", c.str());
  }
  if (sol.unchecked_terms > 0) {
    rep.notes.push_back(std::to_string(sol.unchecked_terms) + " terms below the z-depth window");
  }
  rep.notes.push_back(sol.describe(ProductSpace(box).c_squared()));
  rep.notes.push_back(sol.collapses() ? "C^i collapse to c^{-1} delta_{i,0}" : "C^i do not collapse");
  if (out) *out = std::move(sol);
  return rep;
}

// ---------------------------------------------------------------------------
// Deformed flatness of the family recovered from I
// ---------------------------------------------------------------------------

/// z d/dt (e^{t sigma_1/z} V) with the exponential stripped again:
/// sigma_1 u V + z q dV/dq.
inline ZSeries<SchubertVector> divisor_derivative(const ZSeries<SchubertVector>& v, const BoxSpec& box) {
  ZSeries<SchubertVector> out;
  auto add = [&](std::pair<int, int> key, const SchubertVector& x) {
    if (x.is_zero()) return;
    auto it = out.find(key);
    if (it == out.end()) {
      out.emplace(key, x);
    } else {
      it->second += x;
      if (it->second.is_zero()) out.erase(it);
    }
  };
  for (const auto& [qz, x] : v) {
    SchubertVector cup(box);
    for (const auto& [p, c] : x.coeffs()) cup += c * martin_cup_Gr(Partition{1}, p, box);
    add(qz, cup);
    add({qz.first, qz.second + 1}, Scalar(qz.first) * x);
  }
  return out;
}

/// V = (c I) / w read in the Schubert basis. Its first divisor derivative
/// must be the sigma_1 column of the Grassmannian fundamental solution, and
/// its second must be sum_{e,c} m_{e,c} q^e (column c), where sigma_1 * sigma_1
/// = sum m_{e,c} q^e sigma_c.
inline CheckReport check_deformed_flatness(const BoxSpec& box, int d_trunc) {
  CheckReport rep;
  rep.name = "deformed-flatness";
  const ProductSpace space(box);
  const ISeries I = i_function(box, d_trunc);
  ZSeries<SchubertVector> V;
  for (const auto& [d, s] : I.coefficients)
    for (const auto& [p, c] : s) {
      SchubertVector x = divide_by_omega(PClass(space, c.poly(), 1), box);
      if (!x.is_zero()) V.emplace(std::make_pair(d, p), x);
    }
  const GrassJFunction J = j_function_Gr(box, d_trunc);
  const GrassmannianQH qh(box);
  auto column_of = [&](const Partition& p) { return J.column(qh.index_of(p)); };
  auto compare = [&](const std::string& what, const ZSeries<SchubertVector>& got, const ZSeries<SchubertVector>& expect) {
    std::set<std::pair<int, int>> keys;
    for (const auto& [k, v] : got)
      if (k.first <= d_trunc) keys.insert(k);
    for (const auto& [k, v] : expect)
      if (k.first <= d_trunc) keys.insert(k);
    for (const auto& k : keys) {
      ++rep.instances;
      SchubertVector a = got.count(k) ? got.at(k) : SchubertVector(box);
      SchubertVector b = expect.count(k) ? expect.at(k) : SchubertVector(box);
      if (!(a == b)) rep.fail(what + " q^" + std::to_string(k.first) + " z^" + std::to_string(k.second), b.str(), a.str());
    }
  };
  const auto W1 = divisor_derivative(V, box);
  compare("first", W1, column_of(Partition{1}));
  const auto W2 = divisor_derivative(W1, box);
  ZSeries<SchubertVector> expect;
  for (const auto& [e, vec] : qh.quantum_cup(Partition{1}, Partition{1})) {
    for (const auto& [p, m] : vec.coeffs()) {
      for (const auto& [qz, x] : column_of(p)) {
        auto key = std::make_pair(qz.first + e, qz.second);
        auto it = expect.find(key);
        if (it == expect.end()) {
          expect.emplace(key, m * x);
        } else {
          it->second += m * x;
        }
      }
    }
  }
  for (auto it = expect.begin(); it != expect.end();) it = it->second.is_zero() ? expect.erase(it) : std::next(it);
  compare("second", W2, expect);
  return rep;
}

}  // namespace abelianizer
