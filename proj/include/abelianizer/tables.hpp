#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "abelianizer/abelian_gw.hpp"
#include "abelianizer/combinatorics.hpp"
#include "abelianizer/correspondence.hpp"
#include "abelianizer/scalar.hpp"

namespace abelianizer {

inline constexpr const char* kTableSchema = "table v1";

struct TableRow {
  std::string degree;
  std::string insertions;
  Scalar value;
};

/// Every dimension-admissible l-point invariant of Gr(k,n) with d <= max_degree,
/// in increasing degree and then generation order of the multisets.
inline std::vector<TableRow> grass_table(const Correspondence& corr, int points, int max_degree) {
  std::vector<TableRow> rows;
  if (points < 2) return rows;
  for (Degree d = 0; d <= max_degree; ++d) {
    for (const auto& ms : admissible_multisets(corr.box(), points, d)) {
      std::string label;
      for (std::size_t i = 0; i < ms.size(); ++i) label += (i ? ";" : "") + ms[i].str();
      rows.push_back({std::to_string(d), label, corr.invariant(ms, d)});
    }
  }
  return rows;
}

/// Effective multidegrees of total degree <= max_total, by total then
/// lexicographically decreasing.
inline std::vector<Multidegree> multidegrees_up_to(int k, int max_total) {
  std::vector<Multidegree> out;
  for (int t = 0; t <= max_total; ++t)
    for (auto& d : lifts(t, k)) out.push_back(std::move(d));
  return out;
}

/// Every dimension-admissible l-point invariant of (P^{n-1})^k with monomial
/// insertions and total degree <= max_degree.
inline std::vector<TableRow> abelian_table(const AbelianGW& gw, int points, int max_degree) {
  std::vector<TableRow> rows;
  const ProductSpace& space = gw.space();
  if (points < 3) return rows;
  const int count = space.num_monomials();
  for (const auto& d : multidegrees_up_to(space.k, max_degree)) {
    const int target = space.dim() + space.n * d.total() + points - 3;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int from, int left) {
      if (static_cast<int>(cur.size()) == points) {
        if (left != 0) return;
        std::string label;
        for (std::size_t i = 0; i < cur.size(); ++i)
          label += (i ? ";" : "") + monomial_label(space.exponent_of(cur[i]));
        rows.push_back({d.str(), label, gw.invariant(cur, d)});
        return;
      }
      for (int idx = from; idx < count; ++idx) {
        const int c = gw.codim(idx);
        if (c > left) continue;
        cur.push_back(idx);
        rec(idx, left - c);
        cur.pop_back();
      }
    };
    if (target >= 0) rec(0, target);
  }
  return rows;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

/// Writes rows as json, csv or markdown; throws Error on another format.
inline void write_table(std::ostream& os, const std::vector<TableRow>& rows, const std::string& format) {
  if (format == "csv") {
    os << "degree,insertions,value\n";
    for (const auto& r : rows)
      os << csv_field(r.degree) << "," << csv_field(r.insertions) << "," << to_display(r.value) << "\n";
  } else if (format == "markdown") {
    os << "| degree | insertions | value |\n| --- | --- | --- |\n";
    for (const auto& r : rows) os << "| " << r.degree << " | " << r.insertions << " | " << to_display(r.value) << " |\n";
  } else if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back({{"degree", r.degree}, {"insertions", r.insertions}, {"value", to_display(r.value)}});
    os << nlohmann::json{{"schema", kTableSchema}, {"rows", arr}}.dump(2) << "\n";
  } else {
    throw Error("unknown format '" + format + "'");
  }
}

}  // namespace abelianizer
