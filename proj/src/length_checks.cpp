#include "hecke/length_checks.hpp"

#include <cmath>

namespace hecke {

namespace {

std::string name(const LengthFunction& l) { return std::string(length_kind_name(l.kind())); }

}  // namespace

LengthAxiomReport check_length_axioms(HeckeAlgebra& algebra, const LengthFunction& l, std::uint32_t half_radius) {
  LengthAxiomReport report;
  auto& store = algebra.store();
  const auto classes = store.class_ball(half_radius);
  report.classes = classes.size();

  auto fail = [&](std::string what) { report.failures.push_back(name(l) + ": " + std::move(what)); };

  const auto e = l.try_at(CosetStore::identity_class());
  if (!e || *e != 0) fail("l(HeH) != 0");

  for (auto d : classes) {
    const auto v = l.try_at(d);
    const auto vi = l.try_at(store.invert_double_coset(d));
    if (!v || !vi) {
      fail("undefined on class " + std::to_string(d.value) + " or its inverse");
      continue;
    }
    if (*v < 0) fail("negative on class " + std::to_string(d.value));
    if (*v != *vi) fail("asymmetric on class " + std::to_string(d.value));
  }

  const bool multiplicative = l.kind() == LengthKind::Characteristic;
  auto as_int = [](double v) { return std::llround(std::exp(v)); };
  for (auto d1 : classes) {
    for (auto d2 : classes) {
      const auto a = l.try_at(d1);
      const auto b = l.try_at(d2);
      if (!a || !b) continue;
      for (const auto& [d, n] : algebra.basis_product(d1, d2)) {
        ++report.products;
        const auto c = l.try_at(d);
        if (!c) {
          fail("undefined on product class " + std::to_string(d.value));
          continue;
        }
        const bool holds = multiplicative ? as_int(*c) <= as_int(*a) * as_int(*b) : *c <= *a + *b;
        if (!holds)
          fail("subadditivity fails: class " + std::to_string(d.value) + " in T" + std::to_string(d1.value) + "*T" +
               std::to_string(d2.value));
      }
    }
  }
  return report;
}

}  // namespace hecke
