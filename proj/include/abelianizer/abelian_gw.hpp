#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "abelianizer/cohomology.hpp"
#include "abelianizer/combinatorics.hpp"
#include "abelianizer/report.hpp"
#include "abelianizer/scalar.hpp"

namespace abelianizer {

// ---------------------------------------------------------------------------
// GWKey / MemoStore
// ---------------------------------------------------------------------------

/// Canonical key of a primary genus-zero invariant of (P^{n-1})^k with
/// monomial insertions. Insertions are stored sorted, so the key is
/// invariant under permutations.
struct GWKey {
  int k = 0;
  int n = 0;
  std::vector<int> degree;
  std::vector<int> insertions;  // sorted monomial indices

  GWKey() = default;
  GWKey(const ProductSpace& space, const Multidegree& d, std::vector<int> ins)
      : k(space.k), n(space.n), degree(d.components()), insertions(std::move(ins)) {
    std::sort(insertions.begin(), insertions.end());
  }

  friend bool operator==(const GWKey&, const GWKey&) = default;

  /// "k,n;(d1,..,dk);(a..)(a..)..." with insertions as exponent vectors.
  std::string str() const {
    ProductSpace space(k, n);
    std::string out = std::to_string(k) + "," + std::to_string(n) + ";" + Multidegree(degree).str() + ";";
    for (int idx : insertions) out += Multidegree(space.exponent_of(idx)).str();
    return out;
  }

  static GWKey parse(const std::string& text) {
    auto bad = [&] { return Error("malformed cache key: " + text); };
    auto s1 = text.find(';');
    auto s2 = text.find(';', s1 == std::string::npos ? s1 : s1 + 1);
    if (s1 == std::string::npos || s2 == std::string::npos) throw bad();
    GWKey key;
    if (std::sscanf(text.substr(0, s1).c_str(), "%d,%d", &key.k, &key.n) != 2) throw bad();
    ProductSpace space(key.k, key.n);
    auto parse_tuple = [&](const std::string& t) {
      if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw bad();
      std::vector<int> v;
      std::stringstream ss(t.substr(1, t.size() - 2));
      std::string item;
      while (std::getline(ss, item, ',')) v.push_back(std::stoi(item));
      return v;
    };
    key.degree = parse_tuple(text.substr(s1 + 1, s2 - s1 - 1));
    if (static_cast<int>(key.degree.size()) != key.k) throw bad();
    std::string rest = text.substr(s2 + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      auto close = rest.find(')', pos);
      if (close == std::string::npos) throw bad();
      auto e = parse_tuple(rest.substr(pos, close - pos + 1));
      if (static_cast<int>(e.size()) != key.k) throw bad();
      key.insertions.push_back(space.index_of(e));
      pos = close + 1;
    }
    std::sort(key.insertions.begin(), key.insertions.end());
    return key;
  }
};

struct GWKeyHash {
  std::size_t operator()(const GWKey& key) const noexcept {
    std::size_t h = static_cast<std::size_t>(key.k) * 1000003u ^ static_cast<std::size_t>(key.n);
    auto mix = [&h](int v) { h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (int v : key.degree) mix(v);
    mix(-1);
    for (int v : key.insertions) mix(v);
    return h;
  }
};

inline constexpr const char* kCacheVersion = "abelian-gw-cache v1";

/// Memo table of reconstructed invariants. Readers share a lock; writers
/// are serialized. Re-inserting a key must reproduce the stored value.
class MemoStore {
 public:
  std::optional<Scalar> find(const GWKey& key) const {
    std::shared_lock lock(mutex_);
    auto it = table_.find(key);
    if (it == table_.end()) {
      misses_.fetch_add(1, std::memory_order_relaxed);
      return std::nullopt;
    }
    hits_.fetch_add(1, std::memory_order_relaxed);
    return it->second;
  }

  void insert(const GWKey& key, const Scalar& value) {
    std::unique_lock lock(mutex_);
    auto [it, inserted] = table_.try_emplace(key, value);
    if (!inserted && it->second != value) {
      throw InvariantViolation("memo store: recomputed " + key.str() + " = " + to_display(value) +
                               " but stored " + to_display(it->second));
    }
  }

  /// Replaces a stored value unconditionally (used to build negative controls).
  void overwrite(const GWKey& key, const Scalar& value) {
    std::unique_lock lock(mutex_);
    table_[key] = value;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return table_.size();
  }

  void clear() {
    std::unique_lock lock(mutex_);
    table_.clear();
  }

  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }

  /// Snapshot of all entries, sorted by key string.
  std::vector<std::pair<std::string, Scalar>> entries() const {
    std::vector<std::pair<std::string, Scalar>> out;
    {
      std::shared_lock lock(mutex_);
      out.reserve(table_.size());
      for (const auto& [k, v] : table_) out.emplace_back(k.str(), v);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  void save(const std::string& path) const {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw Error("cannot write cache file " + path);
    os << kCacheVersion << "\n";
    for (const auto& [k, v] : entries()) os << k << "\t" << to_string(v) << "\n";
    if (!os) throw Error("failed writing cache file " + path);
  }

  /// Merges a cache file; a missing file is not an error, a wrong header is.
  void load(const std::string& path) {
    std::ifstream is(path);
    if (!is) return;
    std::string line;
    if (!std::getline(is, line)) return;
    if (line != kCacheVersion) {
      throw CacheVersionError("cache file " + path + " has version '" + line + "', expected '" +
                              kCacheVersion + "'");
    }
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw CacheVersionError("cache file " + path + ": malformed record at line " + std::to_string(lineno));
      }
      try {
        insert(GWKey::parse(line.substr(0, tab)), parse_scalar(line.substr(tab + 1)));
      } catch (const InvariantViolation&) {
        throw;
      } catch (const Error& e) {
        throw CacheVersionError("cache file " + path + ": " + e.what());
      }
    }
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<GWKey, Scalar, GWKeyHash> table_;
  mutable std::atomic<std::size_t> hits_{0};
  mutable std::atomic<std::size_t> misses_{0};
};

// ---------------------------------------------------------------------------
// Small quantum ring of (P^{n-1})^k: tensor of Q[H_i, Q_i]/(H_i^n - Q_i)
// ---------------------------------------------------------------------------

/// Class with polynomial Novikov coefficients: multidegree -> PClass.
using QPClass = std::map<Multidegree, PClass>;

inline void accumulate(QPClass& target, const Multidegree& d, const PClass& c) {
  if (c.is_zero()) return;
  auto it = target.find(d);
  if (it == target.end()) {
    target.emplace(d, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) target.erase(it);
  }
}

inline QPClass small_quantum_product_P(const PClass& a, const PClass& b) {
  const ProductSpace& space = a.space();
  if (!(space == b.space())) throw Error("small_quantum_product_P: mismatched spaces");
  const int n = space.n;
  QPClass out;
  int cg = a.cgrade() + b.cgrade();
  Exponent r(space.nvars());
  std::vector<int> q(space.nvars());
  for (const auto& [ea, ca] : a.poly().terms()) {
    for (const auto& [eb, cb] : b.poly().terms()) {
      for (std::size_t i = 0; i < space.nvars(); ++i) {
        int s = ea[i] + eb[i];
        q[i] = s / n;
        r[i] = s % n;
      }
      accumulate(out, Multidegree(q), PClass(space, Polynomial::monomial(r, ca * cb), cg));
    }
  }
  return out;
}

inline QPClass small_quantum_product_P(const QPClass& a, const QPClass& b) {
  QPClass out;
  for (const auto& [da, ca] : a)
    for (const auto& [db, cb] : b)
      for (const auto& [dc, cc] : small_quantum_product_P(ca, cb)) accumulate(out, da + db + dc, cc);
  return out;
}

/// <a, b, c>_{0,3,d}: the Q^d coefficient of the pairing of a * b with c.
inline CScalar three_point(const PClass& a, const PClass& b, const PClass& c, const Multidegree& d) {
  const ProductSpace& space = a.space();
  if (!d.effective()) return {0, 0};
  const int lhs = a.degree() + b.degree() + c.degree();
  if (a.is_zero() || b.is_zero() || c.is_zero() || lhs != space.dim() + space.n * d.total()) return {0, 0};
  auto prod = small_quantum_product_P(a, b);
  auto it = prod.find(d);
  if (it == prod.end()) return {0, 0};
  return (it->second * c).integrate();
}

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------

/// How a WDVV step factors an insertion. Both policies factor an insertion
/// of minimal codimension, which makes the recursion terminate; they differ
/// in tie-breaking, the divisor split off, and the two partner slots.
enum class PivotPolicy { Primary, Alternate };

/// Genus-zero primary invariants of (P^{n-1})^k.
///
/// Algorithm per call: dimension filter, degree-zero and fundamental-class
/// axioms, divisor axiom (m >= 4), small-ring three-point base case, and for
/// m >= 4 without divisors one WDVV relation. For the WDVV step with pivot
/// X = delta * g' and partners a, b and background S, the relation used is
///
///   sum_{S1+S2=S, d1+d2=d} sum_e <delta, a, S1, T_e>_{d1} <T^e, g', b, S2>_{d2}
///     = sum_{S1+S2=S, d1+d2=d} sum_e <delta, g', S1, T_e>_{d1} <T^e, a, b, S2>_{d2},
///
/// T_e running over monomials and T^e its Poincare dual monomial. The term
/// (d1 = 0, S1 = {}) on the right is the target <X, a, b, S>_d. The matching
/// term on the left is <delta*a, g', b, S>_d, whose minimal codimension is
/// smaller; every other term has smaller degree or fewer marks.
class AbelianGW {
 public:
  AbelianGW(const ProductSpace& space, MemoStore& store, PivotPolicy policy = PivotPolicy::Primary)
      : space_(space), store_(store), policy_(policy) {
    const int count = space.num_monomials();
    exps_.resize(static_cast<std::size_t>(count));
    codim_.resize(static_cast<std::size_t>(count));
    dual_.resize(static_cast<std::size_t>(count));
    times_h_.assign(static_cast<std::size_t>(count), std::vector<int>(space.nvars(), -1));
    for (int idx = 0; idx < count; ++idx) {
      auto e = space.exponent_of(idx);
      auto u = static_cast<std::size_t>(idx);
      exps_[u] = e;
      codim_[u] = total_degree(e);
      Exponent de(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) de[i] = space.n - 1 - e[i];
      dual_[u] = space.index_of(de);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] + 1 < space.n) {
          Exponent f = e;
          ++f[i];
          times_h_[u][i] = space.index_of(f);
        }
      }
    }
    for (int idx = 0; idx < count; ++idx) by_codim_[codim_[static_cast<std::size_t>(idx)]].push_back(idx);
  }

  const ProductSpace& space() const { return space_; }
  MemoStore& store() const { return store_; }

  int codim(int idx) const { return codim_[static_cast<std::size_t>(idx)]; }
  int dual(int idx) const { return dual_[static_cast<std::size_t>(idx)]; }
  int hyperplane(int i) const {
    Exponent e(space_.nvars(), 0);
    e[static_cast<std::size_t>(i)] = 1;
    return space_.index_of(e);
  }
  const std::vector<int>& monomials_of_codim(int c) const {
    static const std::vector<int> empty;
    auto it = by_codim_.find(c);
    return it == by_codim_.end() ? empty : it->second;
  }

  /// Dimension constraint: sum codim = dim + n|d| + m - 3.
  bool dimension_ok(int codim_sum, int marks, const Multidegree& d) const {
    return codim_sum == space_.dim() + space_.n * d.total() + marks - 3;
  }

  GWKey key(std::vector<int> ins, const Multidegree& d) const { return GWKey(space_, d, std::move(ins)); }

  /// Invariant with monomial insertions (indices into the monomial basis).
  Scalar invariant(std::vector<int> ins, const Multidegree& d) const {
    if (!d.effective()) return 0;
    const int m = static_cast<int>(ins.size());
    int csum = 0;
    for (int x : ins) csum += codim(x);
    if (!dimension_ok(csum, m, d)) return 0;
    if (d.is_zero()) return m == 3 ? classical_triple(ins[0], ins[1], ins[2]) : Scalar(0);
    if (m == 3) return three_point_monomial(ins[0], ins[1], ins[2], d);
    if (std::any_of(ins.begin(), ins.end(), [&](int x) { return codim(x) == 0; })) return 0;

    std::sort(ins.begin(), ins.end());
    GWKey k = key(ins, d);
    if (auto hit = store_.find(k)) return *hit;

    Scalar value;
    if (m <= 2) {
      std::size_t i = 0;
      while (d[i] == 0) ++i;
      auto withh = ins;
      withh.push_back(hyperplane(static_cast<int>(i)));
      value = invariant(std::move(withh), d) / Scalar(d[i]);
    } else if (auto div = std::find_if(ins.begin(), ins.end(), [&](int x) { return codim(x) == 1; });
               div != ins.end()) {
      std::size_t i = 0;
      while (exps_[static_cast<std::size_t>(*div)][i] == 0) ++i;
      auto rest = ins;
      rest.erase(rest.begin() + (div - ins.begin()));
      value = Scalar(d[i]) * invariant(std::move(rest), d);
    } else {
      value = wdvv_step(ins, d);
    }
    if (m >= 3 && !is_integral(value)) {
      throw InvariantViolation("non-integral invariant " + k.str() + " = " + to_display(value));
    }
    store_.insert(k, value);
    return value;
  }

  /// Multilinear extension to arbitrary homogeneous classes. The result
  /// carries the total c-grade (c^2 folded into the value).
  CScalar invariant(std::span<const PClass> classes, const Multidegree& d) const {
    int cg = 0;
    int csum = 0;
    for (const auto& c : classes) {
      if (c.is_zero()) return {0, 0};
      cg += c.cgrade();
      csum += c.degree();
    }
    Scalar fold = 1;
    while (cg >= 2) {
      fold *= space_.c_squared();
      cg -= 2;
    }
    if (!d.effective() || !dimension_ok(csum, static_cast<int>(classes.size()), d)) return {0, cg};
    std::vector<int> ins(classes.size());
    Scalar total = 0;
    std::function<void(std::size_t, const Scalar&)> rec = [&](std::size_t i, const Scalar& coeff) {
      if (i == classes.size()) {
        total += coeff * invariant(ins, d);
        return;
      }
      for (const auto& [e, c] : classes[i].poly().terms()) {
        ins[i] = space_.index_of(e);
        rec(i + 1, coeff * c);
      }
    };
    rec(0, fold);
    return {total, cg};
  }

  /// sum_{S1+S2=S, d1+d2=d} sum_e <g1, g2, S1, T_e>_{d1} <T^e, g3, g4, S2>_{d2}.
  /// With skip_in_place, omits the (d1 = 0, S1 = {}) term.
  Scalar wdvv_side(int g1, int g2, int g3, int g4, std::span<const int> background, const Multidegree& d,
                   bool skip_in_place = false) const {
    Scalar total = 0;
    const std::size_t s = background.size();
    const auto splits = sub_multidegrees(d);
    std::vector<int> f1, f2;
    for (unsigned mask = 0; mask < (1u << s); ++mask) {
      int c1 = codim(g1) + codim(g2);
      int n1 = 0;
      for (std::size_t j = 0; j < s; ++j)
        if (mask & (1u << j)) {
          c1 += codim(background[j]);
          ++n1;
        }
      for (const auto& d1 : splits) {
        if (skip_in_place && mask == 0 && d1.is_zero()) continue;
        const Multidegree d2 = d - d1;
        // codim of T_e fixed by the first factor's dimension constraint
        const int ce = space_.dim() + space_.n * d1.total() + (3 + n1) - 3 - c1;
        for (int e : monomials_of_codim(ce)) {
          f1.assign({g1, g2});
          f2.assign({dual(e), g3, g4});
          for (std::size_t j = 0; j < s; ++j) ((mask & (1u << j)) ? f1 : f2).push_back(background[j]);
          f1.push_back(e);
          Scalar a = invariant(f1, d1);
          if (a == 0) continue;
          Scalar b = invariant(f2, d2);
          total += a * b;
        }
      }
    }
    return total;
  }

  /// Structure-constant 3-point invariant via the closed form per factor:
  /// <H^a, H^b, H^c>_{d} on P^{n-1} is 1 iff a + b + c = n - 1 + n d.
  Scalar three_point_monomial(int a, int b, int c, const Multidegree& d) const {
    const auto& ea = exps_[static_cast<std::size_t>(a)];
    const auto& eb = exps_[static_cast<std::size_t>(b)];
    const auto& ec = exps_[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < space_.nvars(); ++i) {
      if (ea[i] + eb[i] + ec[i] != space_.n - 1 + space_.n * d[i]) return 0;
    }
    return 1;
  }

 private:
  Scalar classical_triple(int a, int b, int c) const { return three_point_monomial(a, b, c, Multidegree::zero(space_.k)); }

  Scalar wdvv_step(const std::vector<int>& ins, const Multidegree& d) const {
    // ins is sorted, all codims >= 2, m >= 4
    std::size_t pivot = 0;
    for (std::size_t j = 1; j < ins.size(); ++j) {
      bool better = codim(ins[j]) < codim(ins[pivot]) ||
                    (codim(ins[j]) == codim(ins[pivot]) &&
                     (policy_ == PivotPolicy::Primary ? ins[j] > ins[pivot] : ins[j] < ins[pivot]));
      if (better) pivot = j;
    }
    const int x = ins[pivot];
    const auto& ex = exps_[static_cast<std::size_t>(x)];
    std::size_t var = 0;
    if (policy_ == PivotPolicy::Primary) {
      while (ex[var] == 0) ++var;
    } else {
      var = ex.size() - 1;
      while (ex[var] == 0) --var;
    }
    Exponent ep = ex;
    --ep[var];
    const int gprime = space_.index_of(ep);
    const int delta = hyperplane(static_cast<int>(var));

    std::vector<int> rest = ins;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pivot));
    int a, b;
    std::vector<int> background;
    if (policy_ == PivotPolicy::Primary) {
      a = rest[0];
      b = rest[1];
      background.assign(rest.begin() + 2, rest.end());
    } else {
      a = rest[rest.size() - 1];
      b = rest[rest.size() - 2];
      background.assign(rest.begin(), rest.end() - 2);
    }
    Scalar lhs = wdvv_side(delta, a, gprime, b, background, d);
    Scalar rhs_rest = wdvv_side(delta, gprime, a, b, background, d, /*skip_in_place=*/true);
    return lhs - rhs_rest;
  }

  ProductSpace space_;
  MemoStore& store_;
  PivotPolicy policy_;
  std::vector<Exponent> exps_;
  std::vector<int> codim_;
  std::vector<int> dual_;
  std::vector<std::vector<int>> times_h_;
  std::map<int, std::vector<int>> by_codim_;
};

/// Checks WDVV for every 4-multiset of monomials, every background multiset
/// with at most max_marks - 3 entries and every multidegree of total degree
/// <= max_degree: the three pairings (12|34), (13|24), (14|23) must agree.
inline CheckReport check_wdvv(const AbelianGW& gw, int max_degree, int max_marks) {
  CheckReport rep;
  rep.name = "wdvv-abelian";
  const ProductSpace& space = gw.space();
  const int count = space.num_monomials();
  std::vector<Multidegree> degrees;
  for (int t = 0; t <= max_degree; ++t)
    for (auto& d : lifts(t, space.k)) degrees.push_back(d);

  std::vector<int> quad(4);
  std::vector<int> bg;
  std::function<void(int, int)> each_bg;
  auto run_equation = [&]() {
    int csum = 0;
    for (int x : quad) csum += gw.codim(x);
    for (int x : bg) csum += gw.codim(x);
    for (const auto& d : degrees) {
      if (csum != space.dim() + space.n * d.total() + static_cast<int>(bg.size())) continue;
      ++rep.instances;
      Scalar p12 = gw.wdvv_side(quad[0], quad[1], quad[2], quad[3], bg, d);
      Scalar p13 = gw.wdvv_side(quad[0], quad[2], quad[1], quad[3], bg, d);
      Scalar p14 = gw.wdvv_side(quad[0], quad[3], quad[1], quad[2], bg, d);
      if (p12 != p13 || p12 != p14) {
        std::string key = "d=" + d.str() + " quad=";
        for (int x : quad) key += Multidegree(space.exponent_of(x)).str();
        key += " bg=";
        for (int x : bg) key += Multidegree(space.exponent_of(x)).str();
        rep.fail(key, to_display(p12), to_display(p13) + " | " + to_display(p14));
      }
    }
  };
  each_bg = [&](int start, int left) {
    run_equation();
    if (left == 0) return;
    for (int x = start; x < count; ++x) {
      bg.push_back(x);
      each_bg(x, left - 1);
      bg.pop_back();
    }
  };
  for (quad[0] = 0; quad[0] < count; ++quad[0])
    for (quad[1] = quad[0]; quad[1] < count; ++quad[1])
      for (quad[2] = quad[1]; quad[2] < count; ++quad[2])
        for (quad[3] = quad[2]; quad[3] < count; ++quad[3]) each_bg(0, std::max(0, max_marks - 3));
  return rep;
}

}  // namespace abelianizer
