#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "abelianizer/polynomial.hpp"
#include "abelianizer/scalar.hpp"

namespace abelianizer {

/// The k x (n-k) rectangle housing the Schubert basis of Gr(k,n).
struct BoxSpec {
  int k = 1;
  int n = 2;

  BoxSpec() = default;
  BoxSpec(int k_, int n_) : k(k_), n(n_) {
    if (k <= 0 || n <= k) {
      throw Error("invalid box: need 0 < k < n, got k=" + std::to_string(k) +
                  " n=" + std::to_string(n));
    }
  }

  int rows() const { return k; }
  int cols() const { return n - k; }
  int dim() const { return k * (n - k); }

  friend bool operator==(const BoxSpec&, const BoxSpec&) = default;
};

/// Young diagram stored as weakly decreasing positive parts.
class Partition {
 public:
  Partition() = default;
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 0 || (i > 0 && parts_[i] > parts_[i - 1])) {
        throw Error("not a partition: " + raw_str(parts_));
      }
    }
  }

  const std::vector<int>& parts() const { return parts_; }
  std::size_t length() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

  /// Part i (0-based) with implicit trailing zeros.
  int operator[](std::size_t i) const { return i < parts_.size() ? parts_[i] : 0; }

  bool fits(const BoxSpec& box) const {
    return static_cast<int>(parts_.size()) <= box.rows() && (empty() || parts_[0] <= box.cols());
  }

  std::string str() const { return raw_str(parts_); }

  static Partition parse(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
      throw Error("malformed partition: " + std::string(text));
    }
    std::vector<int> parts;
    std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) throw Error("malformed partition: " + std::string(text));
      std::size_t pos = 0;
      int v = 0;
      try {
        v = std::stoi(item, &pos);
      } catch (const std::exception&) {
        throw Error("malformed partition: " + std::string(text));
      }
      if (pos != item.size()) throw Error("malformed partition: " + std::string(text));
      parts.push_back(v);
    }
    return Partition(std::move(parts));
  }

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.parts_ <=> b.parts_; }

 private:
  static std::string raw_str(const std::vector<int>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out + "]";
  }

  std::vector<int> parts_;
};

/// Graded order: by weight, then lexicographically decreasing.
struct GradedOrder {
  bool operator()(const Partition& a, const Partition& b) const {
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    return a.parts() > b.parts();
  }
};

/// Effective curve class on (P^{n-1})^k.
class Multidegree {
 public:
  Multidegree() = default;
  explicit Multidegree(std::vector<int> d) : d_(std::move(d)) {}
  Multidegree(std::initializer_list<int> d) : d_(d) {}
  static Multidegree zero(int k) { return Multidegree(std::vector<int>(static_cast<std::size_t>(k), 0)); }

  const std::vector<int>& components() const { return d_; }
  int operator[](std::size_t i) const { return d_[i]; }
  int& operator[](std::size_t i) { return d_[i]; }
  std::size_t size() const { return d_.size(); }
  int total() const { return std::accumulate(d_.begin(), d_.end(), 0); }
  bool is_zero() const { return std::all_of(d_.begin(), d_.end(), [](int x) { return x == 0; }); }
  bool effective() const { return std::all_of(d_.begin(), d_.end(), [](int x) { return x >= 0; }); }

  std::string str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < d_.size(); ++i) out += (i ? "," : "") + std::to_string(d_[i]);
    return out + ")";
  }

  friend Multidegree operator+(const Multidegree& a, const Multidegree& b) {
    Multidegree out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.d_[i] += b.d_[i];
    return out;
  }
  friend Multidegree operator-(const Multidegree& a, const Multidegree& b) {
    Multidegree out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.d_[i] -= b.d_[i];
    return out;
  }

  friend bool operator==(const Multidegree&, const Multidegree&) = default;
  friend auto operator<=>(const Multidegree&, const Multidegree&) = default;

 private:
  std::vector<int> d_;
};

/// Curve class on Gr(k,n); the Picard group is Z.
using Degree = int;

inline std::vector<Partition> box_partitions(const BoxSpec& box) {
  std::vector<Partition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int row, int maxpart) {
    out.emplace_back(cur);
    if (row == box.rows()) return;
    for (int p = 1; p <= maxpart; ++p) {
      cur.push_back(p);
      rec(row + 1, p);
      cur.pop_back();
    }
  };
  rec(0, box.cols());
  std::sort(out.begin(), out.end(), GradedOrder{});
  return out;
}

/// All partitions with at most `rows` parts and weight w (no column bound).
inline std::vector<Partition> partitions_of(int w, int rows) {
  std::vector<Partition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int left, int maxpart) {
    if (left == 0) {
      out.emplace_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) == rows) return;
    for (int p = std::min(left, maxpart); p >= 1; --p) {
      cur.push_back(p);
      rec(left - p, p);
      cur.pop_back();
    }
  };
  rec(w, w);
  return out;
}

inline Partition complement(const Partition& lambda, const BoxSpec& box) {
  if (!lambda.fits(box)) throw OutsideBoxError("partition " + lambda.str() + " outside box");
  std::vector<int> parts(static_cast<std::size_t>(box.rows()));
  for (int i = 0; i < box.rows(); ++i) {
    parts[static_cast<std::size_t>(i)] =
        box.cols() - lambda[static_cast<std::size_t>(box.rows() - 1 - i)];
  }
  return Partition(std::move(parts));
}

/// h_m(x_1..x_k): sum of all monomials of degree m.
inline Polynomial complete_homogeneous(int m, int k) {
  auto nv = static_cast<std::size_t>(k);
  Polynomial out(nv);
  if (m < 0) return out;
  Exponent e(nv, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == nv) {
      e[i] = left;
      out.add_term(e, 1);
      return;
    }
    for (int a = left; a >= 0; --a) {
      e[i] = a;
      rec(i + 1, left - a);
    }
  };
  rec(0, m);
  return out;
}

inline int permutation_parity(std::span<const int> perm) {
  int parity = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) parity ^= 1;
  return parity;
}

/// S_lambda(x_1..x_k) from the Jacobi-Trudi determinant det(h_{lambda_i - i + j}).
inline Polynomial schur_polynomial(const Partition& lambda, int k) {
  if (static_cast<int>(lambda.length()) > k) {
    throw Error("partition " + lambda.str() + " has more than " + std::to_string(k) + " parts");
  }
  auto nv = static_cast<std::size_t>(k);
  const std::size_t len = lambda.length();
  if (len == 0) return Polynomial::constant(nv, 1);

  std::vector<std::vector<Polynomial>> h(len, std::vector<Polynomial>(len));
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = 0; j < len; ++j)
      h[i][j] = complete_homogeneous(lambda[i] - static_cast<int>(i) + static_cast<int>(j), k);

  std::vector<int> perm(len);
  std::iota(perm.begin(), perm.end(), 0);
  Polynomial det(nv);
  do {
    Polynomial term = Polynomial::constant(nv, permutation_parity(perm) ? -1 : 1);
    for (std::size_t i = 0; i < len && !term.is_zero(); ++i) term = term * h[i][static_cast<std::size_t>(perm[i])];
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

/// All multidegrees (d_1..d_k) with d_i >= 0 summing to d.
inline std::vector<Multidegree> lifts(Degree d, int k) {
  std::vector<Multidegree> out;
  if (d < 0) return out;
  std::vector<int> cur(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == k - 1) {
      cur[static_cast<std::size_t>(i)] = left;
      out.emplace_back(cur);
      return;
    }
    for (int a = left; a >= 0; --a) {
      cur[static_cast<std::size_t>(i)] = a;
      rec(i + 1, left - a);
    }
  };
  rec(0, d);
  return out;
}

/// All multidegrees e with 0 <= e <= d componentwise.
inline std::vector<Multidegree> sub_multidegrees(const Multidegree& d) {
  std::vector<Multidegree> out;
  std::vector<int> cur(d.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == d.size()) {
      out.emplace_back(cur);
      return;
    }
    for (int a = 0; a <= d[i]; ++a) {
      cur[i] = a;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

/// Parity of the Novikov specialization sign for Gr(k,n): (k-1)d mod 2.
inline int epsilon(Degree d, int k) { return static_cast<int>((static_cast<long>(k - 1) * d) & 1); }

// ---------------------------------------------------------------------------
// Rim hooks
// ---------------------------------------------------------------------------

/// Per-hook sign rule for quantum reduction. The two classical candidates
/// are (-1)^{k - height} and (-1)^{height - 1}; they differ exactly when k
/// is even. `kDefaultRimHookSign` is pinned by the nonnegativity calibration
/// in the acceptance suite.
enum class RimHookSign { KMinusHeight, HeightMinusOne };

inline constexpr RimHookSign kDefaultRimHookSign = RimHookSign::KMinusHeight;

inline int hook_sign(int height, int k, RimHookSign rule) {
  int parity = (rule == RimHookSign::KMinusHeight) ? (k - height) : (height - 1);
  return sign_of_parity(((parity % 2) + 2) % 2);
}

/// beta-numbers lambda_i + k - i (i = 1..k), strictly decreasing.
inline std::vector<int> beta_numbers(const Partition& lambda, int k) {
  std::vector<int> b(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) b[static_cast<std::size_t>(i)] = lambda[static_cast<std::size_t>(i)] + k - 1 - i;
  return b;
}

inline Partition from_beta_numbers(std::vector<int> b) {
  std::sort(b.begin(), b.end(), std::greater<>());
  const int k = static_cast<int>(b.size());
  std::vector<int> parts(b.size());
  for (int i = 0; i < k; ++i) parts[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - (k - 1 - i);
  return Partition(std::move(parts));
}

struct HookRemoval {
  Partition result;
  int height = 0;
};

/// Removes the size-`size` border strip ending in row `row` (0-based) if one
/// exists. In beta-number language this lowers beta_row by `size`.
inline std::optional<HookRemoval> remove_rim_hook(const Partition& lambda, int k, int size, int row) {
  auto b = beta_numbers(lambda, k);
  const int target = b[static_cast<std::size_t>(row)] - size;
  if (target < 0) return std::nullopt;
  if (std::find(b.begin(), b.end(), target) != b.end()) return std::nullopt;
  int between = 0;
  for (int x : b)
    if (x > target && x < b[static_cast<std::size_t>(row)]) ++between;
  b[static_cast<std::size_t>(row)] = target;
  return HookRemoval{from_beta_numbers(std::move(b)), between + 1};
}

struct RimHookResult {
  int sign = 1;
  int q_power = 0;
  std::optional<Partition> reduced;  // nullopt: the class vanishes
};

/// Reduces a partition with at most k rows into the k x (n-k) box by
/// stripping n-rim hooks. Each strip contributes one power of q and a sign.
inline RimHookResult rim_hook_reduce(const Partition& lambda, const BoxSpec& box,
                                     RimHookSign rule = kDefaultRimHookSign) {
  const int k = box.rows();
  const int n = box.n;
  if (static_cast<int>(lambda.length()) > k) {
    throw Error("partition " + lambda.str() + " has more than k rows");
  }
  RimHookResult res;
  Partition cur = lambda;
  while (!cur.fits(box)) {
    // Only the first row can exceed the box (lambda_1 > n-k <=> beta_1 >= n).
    auto step = remove_rim_hook(cur, k, n, 0);
    if (!step) {
      res.reduced.reset();
      res.sign = 0;
      return res;
    }
    res.sign *= hook_sign(step->height, k, rule);
    ++res.q_power;
    cur = step->result;
  }
  res.reduced = cur;
  return res;
}

}  // namespace abelianizer
