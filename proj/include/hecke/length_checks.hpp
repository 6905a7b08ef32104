#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hecke/hecke_algebra.hpp"
#include "hecke/length.hpp"

namespace hecke {

struct LengthAxiomReport {
  std::size_t classes = 0;
  std::size_t products = 0;  // (d1, d2, d) triples checked for subadditivity
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// l(HeH) = 0, l(inv d) = l(d), and l(d) <= l(d1) + l(d2) for every d in the
/// support of T_{d1} * T_{d2}, over the classes of word length <= half_radius.
/// Characteristic lengths are compared as integers (L(d) <= L(d1) L(d2)).
LengthAxiomReport check_length_axioms(HeckeAlgebra& algebra, const LengthFunction& l, std::uint32_t half_radius);

}  // namespace hecke
