// Computes a few Grassmannian invariants through the abelian side and
// compares each against the quantum Pieri oracle.
#include <iostream>

#include "abelianizer/abelianizer.hpp"

namespace az = abelianizer;

int main() {
  const az::BoxSpec box(2, 4);
  az::MemoStore store;
  const az::Correspondence corr(box, store);

  const az::Partition line{1}, plane({2, 1}), pt({2, 2});
  struct Case {
    std::vector<az::Partition> parts;
    az::Degree d;
  };
  const std::vector<Case> cases{{{line, plane, pt}, 1}, {{pt, pt, pt}, 2}, {{line, line, line, line, pt}, 1}};

  int bad = 0;
  for (const auto& c : cases) {
    const az::Scalar value = corr.invariant(c.parts, c.d);
    std::cout << "<";
    for (std::size_t i = 0; i < c.parts.size(); ++i) std::cout << (i ? ", " : "") << c.parts[i].str();
    std::cout << ">_" << c.d << " = " << az::to_display(value);
    if (c.parts.size() == 3) {
      const az::Scalar expect = corr.oracle().three_point(c.parts[0], c.parts[1], c.parts[2], c.d);
      std::cout << " (oracle " << az::to_display(expect) << ")";
      bad += value != expect;
    }
    std::cout << "\n";
  }

  az::CSolution sol;
  const auto rep = az::check_j_i(box, 2, 8, &sol);
  std::cout << "J-I: " << (rep.pass() ? "consistent" : "inconsistent") << ", "
            << sol.describe(az::ProductSpace(box).c_squared()) << "\n";
  bad += !rep.pass();
  return bad == 0 ? 0 : 1;
}
