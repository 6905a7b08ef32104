#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hecke/hecke_algebra.hpp"

namespace hecke {

struct SuiteReport {
  std::string name;
  std::size_t checks = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  void expect(bool condition, const std::string& what) {
    ++checks;
    if (!condition && failures.size() < 50) failures.push_back(what);
  }
};

/// Random element on the given classes with small signed rational
/// coefficients.
HeckeElement random_element(const CosetStore& store, const std::vector<DoubleCosetId>& classes, std::mt19937_64& rng,
                            std::size_t max_terms);

/// Classes of L, R, delta and every structure constant of the permutation
/// catalog pairs against the exhaustive group-algebra oracle.
SuiteReport finite_oracle_suite();

/// Associativity, unit, anti-multiplicativity of the involution and
/// (f*)* = f on every catalog pair, `cases` random triples each.
SuiteReport algebra_law_suite(std::size_t cases, std::uint64_t seed);

/// Length axioms for every built-in length on every finitely generated
/// catalog pair, and the averaged-length bound on the dihedral radius-8 ball.
SuiteReport length_axiom_suite();

/// Radius at which the regression snapshot of a catalog pair is taken.
std::uint32_t golden_radius(const std::string& label);

/// Regression document: store snapshot, growth counts, unimodularity values
/// and the structure constants among classes of word length <= 1.
nlohmann::json golden_document(const std::string& label);

/// Compares golden_document for every catalog pair with <dir>/<label>.json.
SuiteReport golden_suite(const std::string& dir);

/// File name used for a label (':' replaced by '_').
std::string golden_file_name(const std::string& label);

}  // namespace hecke
