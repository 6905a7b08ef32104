#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hecke/coset_store.hpp"

namespace hecke {

enum class LengthKind { WordSchreier, Characteristic, Indicator, AveragedFiniteH, Custom };

std::string_view length_kind_name(LengthKind kind);

/// Bi-H-invariant length, evaluated per double coset of one store.
class LengthFunction {
 public:
  using Rule = std::function<std::optional<double>(DoubleCosetId)>;

  LengthFunction(LengthKind kind, std::string note, Rule rule)
      : kind_(kind), note_(std::move(note)), rule_(std::move(rule)) {}

  LengthKind kind() const { return kind_; }
  const std::string& note() const { return note_; }

  std::optional<double> try_at(DoubleCosetId d) const { return rule_(d); }
  /// Throws LengthUndefinedOnSupport.
  double at(DoubleCosetId d) const;

 private:
  LengthKind kind_;
  std::string note_;
  Rule rule_;
};

/// Class-level word length for the generating set H S H: the least n with
/// d inside (H S^)^n H. Defined on classes within the enumerated radius.
LengthFunction word_length(const CosetStore& store);

/// ln L(d). Refuses pairs that are not relatively unimodular unless
/// use_LR is set, in which case ln(L(d) R(d)) is used.
LengthFunction characteristic_length(const CosetStore& store, bool use_LR = false, std::size_t max_orbit = 100'000);

/// 0 on HeH, 1 elsewhere.
LengthFunction indicator_length(const CosetStore& store);

/// Table-backed length; classes absent from the table are undefined.
LengthFunction custom_length(std::string note, std::vector<std::pair<DoubleCosetId, double>> table);

/// Length on group elements, used for the averaging construction.
using ElementLength = std::function<double(const GroupElement&)>;

/// Word length on G itself (Cayley graph BFS over S u S^-1), for finite-H
/// pairs. Lengths are cached for every element up to `radius`.
class CayleyWordLength {
 public:
  CayleyWordLength(const HeckePair& pair, std::uint32_t radius);
  /// Throws DomainError for elements beyond the radius.
  double operator()(const GroupElement& g) const;
  const std::vector<GroupElement>& ball() const { return ball_; }

 private:
  std::vector<GroupElement> ball_;
  std::unordered_map<std::string, std::uint32_t> depth_;
};

struct AveragedLength {
  std::vector<GroupElement> H;
  ElementLength l;
  /// l1(g) = sum over h in H of l(h g h^-1).
  double l1(const GroupElement& g) const;
  /// l'(g) = min over h in H of l1(h g).
  double l_prime(const GroupElement& g) const;
  /// l1(g) <= |H| l(g) + 2 sum_h l(h).
  bool bound_holds(const GroupElement& g) const;
};

/// Throws InfiniteH when H is not finite.
AveragedLength averaged_length(const HeckePair& pair, ElementLength l);

/// l' as a length on the classes of the store.
LengthFunction averaged_class_length(const CosetStore& store, const AveragedLength& avg);

struct PseudometricReport {
  std::size_t triples = 0;
  std::size_t symmetry_failures = 0;
  std::size_t triangle_failures = 0;
  std::size_t invariance_failures = 0;
  bool ok() const { return symmetry_failures + triangle_failures + invariance_failures == 0; }
};

/// d_l(x, y) = l(x^-1 y) on random triples drawn from `sample`, with left
/// translates by `translators`. Elements whose lengths are undefined are
/// skipped. Comparisons are exact for integer-valued lengths.
PseudometricReport pseudometric_checks(const CosetStore& store, const LengthFunction& l,
                                       const std::vector<GroupElement>& sample,
                                       const std::vector<GroupElement>& translators, std::size_t triples,
                                       std::uint64_t seed);

struct DominanceFit {
  double c1 = 0;
  double c0 = 0;
  bool holds = false;
  std::size_t classes = 0;
};

/// Fits l2 <= c1 l1 + c0 over `classes`: c1 is the largest ratio l2/l1 where
/// l1 > 0, c0 the offset still needed; then verifies every class.
DominanceFit dominance_fit(const LengthFunction& l1, const LengthFunction& l2, const std::vector<DoubleCosetId>& classes);

/// Empirical properness of l on a word-length ball: the minimum of l over each
/// word-length shell. A proper l has only finitely many classes below any
/// bound, so its shell minima must eventually leave every bound; minima that
/// stall suggest (but do not prove) that l is not proper.
struct PropernessProfile {
  std::vector<double> shell_min;  // index r = word length; NaN for empty shells
  bool growing = false;           // shell minima nondecreasing and last > first nonzero shell
  std::string note = "empirical";
};

PropernessProfile properness_profile(const CosetStore& store, const LengthFunction& l, std::uint32_t r_max);

}  // namespace hecke
