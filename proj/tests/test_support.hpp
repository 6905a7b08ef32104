#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hecke/hecke_pair.hpp"

namespace hecke::testing {

using Rng = std::mt19937_64;

inline GroupElement random_word(const std::vector<GroupElement>& alphabet, const GroupElement& identity,
                                std::size_t length, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  GroupElement g = identity;
  for (std::size_t i = 0; i < length; ++i) g = mul(g, alphabet[pick(rng)]);
  return g;
}

/// Random word in S u S^-1, or in the probes and their inverses for pairs
/// without a finite generating set.
inline GroupElement random_g(const HeckePair& pair, std::size_t max_length, Rng& rng) {
  std::uniform_int_distribution<std::size_t> len(0, max_length);
  if (pair.finitely_generated) return random_word(pair.symmetric_generators(), pair.identity(), len(rng), rng);
  auto alphabet = pair.probes;
  for (const auto& p : pair.probes) alphabet.push_back(inv(p));
  return random_word(alphabet, pair.identity(), len(rng), rng);
}

inline GroupElement random_h(const HeckePair& pair, std::size_t max_length, Rng& rng) {
  const auto hs = pair.symmetric_h_generators();
  if (hs.empty()) return pair.identity();
  std::uniform_int_distribution<std::size_t> len(0, max_length);
  return random_word(hs, pair.identity(), len(rng), rng);
}

inline std::shared_ptr<const HeckePair> shared_pair(const std::string& label) {
  return std::make_shared<const HeckePair>(make_pair(label));
}

/// Finitely generated catalog labels.
inline std::vector<std::string> fg_labels() {
  std::vector<std::string> out;
  for (const auto& label : catalog_labels())
    if (make_pair(label).finitely_generated) out.push_back(label);
  return out;
}

}  // namespace hecke::testing

#include "hecke/hecke_algebra.hpp"

namespace hecke::testing {

/// Random element supported on classes of word length <= radius, with small
/// rational coefficients.
inline HeckeElement random_element(const CosetStore& store, std::uint32_t radius, Rng& rng,
                                   std::size_t max_terms = 3) {
  const auto classes = store.class_ball(radius);
  std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
  std::uniform_int_distribution<std::size_t> terms(1, max_terms);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  HeckeElement f(store);
  const auto n = terms(rng);
  for (std::size_t i = 0; i < n; ++i) {
    Rational c(num(rng), den(rng));
    c.canonicalize();
    f.add(classes[pick(rng)], c);
  }
  return f;
}

}  // namespace hecke::testing

namespace hecke::testing {

/// Support radii for the three factors of a triple product. Exponential-growth
/// pairs use a permutation of (3, 2, 1) so the product stays within radius 6;
/// the others use radius 3 throughout.
inline std::array<std::uint32_t, 3> triple_radii(const HeckePair& pair, Rng& rng) {
  const bool tree = pair.kind() == GroupKind::SpecialLinear || pair.kind() == GroupKind::ProjectiveSpecialLinear;
  if (!tree) return {3, 3, 3};
  std::array<std::uint32_t, 3> r{3, 2, 1};
  std::shuffle(r.begin(), r.end(), rng);
  return r;
}

}  // namespace hecke::testing
