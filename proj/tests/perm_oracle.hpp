#pragma once

// Brute-force coset structure of a finite permutation pair, computed from
// element sets only. Test-side oracle, independent of the library's engine.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace hecke::testing {

using P = std::vector<std::uint16_t>;

inline P pmul(const P& x, const P& y) {
  P out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[y[i]];
  return out;
}

inline P pinv(const P& x) {
  P out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[x[i]] = static_cast<std::uint16_t>(i);
  return out;
}

inline std::vector<P> closure(const std::vector<P>& gens, std::size_t degree) {
  P e(degree);
  for (std::size_t i = 0; i < degree; ++i) e[i] = static_cast<std::uint16_t>(i);
  std::set<P> seen{e};
  std::vector<P> todo{e};
  while (!todo.empty()) {
    auto x = todo.back();
    todo.pop_back();
    for (const auto& g : gens) {
      auto y = pmul(x, g);
      if (seen.insert(y).second) todo.push_back(y);
    }
  }
  return {seen.begin(), seen.end()};
}

struct OracleClass {
  std::set<P> elements;
  std::set<std::set<P>> right_cosets;  // Hx
  std::set<std::set<P>> left_cosets;   // xH
};

struct PermOracle {
  std::vector<P> G, H;
  std::vector<OracleClass> classes;  // classes[0] = H

  std::set<P> right_coset(const P& x) const {
    std::set<P> out;
    for (const auto& h : H) out.insert(pmul(h, x));
    return out;
  }
  std::set<P> left_coset(const P& x) const {
    std::set<P> out;
    for (const auto& h : H) out.insert(pmul(x, h));
    return out;
  }
  std::set<P> double_coset(const P& x) const {
    std::set<P> out;
    for (const auto& a : H)
      for (const auto& b : H) out.insert(pmul(pmul(a, x), b));
    return out;
  }
  std::size_t class_of(const P& x) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i].elements.count(x)) return i;
    return classes.size();
  }

  /// Structure constant of T_a * T_b at class c: number of right cosets Hy with
  /// x y^-1 in class a and y in class b, for a fixed x in class c.
  long structure_constant(std::size_t a, std::size_t b, std::size_t c) const {
    const P& x = *classes[c].elements.begin();
    long count = 0;
    for (const auto& coset : classes[b].right_cosets) {
      const P& y = *coset.begin();
      if (classes[a].elements.count(pmul(x, pinv(y)))) ++count;
    }
    return count;
  }
};

inline PermOracle perm_oracle(const std::vector<P>& g_gens, const std::vector<P>& h_gens) {
  const auto degree = g_gens.front().size();
  PermOracle o;
  o.G = closure(g_gens, degree);
  o.H = closure(h_gens, degree);
  std::set<P> covered;
  auto add = [&](const P& x) {
    OracleClass c;
    c.elements = o.double_coset(x);
    for (const auto& y : c.elements) {
      c.right_cosets.insert(o.right_coset(y));
      c.left_cosets.insert(o.left_coset(y));
    }
    covered.insert(c.elements.begin(), c.elements.end());
    o.classes.push_back(std::move(c));
  };
  add(o.H.front());  // identity is the least element
  for (const auto& x : o.G)
    if (!covered.count(x)) add(x);
  return o;
}

}  // namespace hecke::testing
