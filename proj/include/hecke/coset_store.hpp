#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "hecke/hecke_pair.hpp"

namespace hecke {

struct CosetId {
  std::uint32_t value = 0;
  friend auto operator<=>(const CosetId&, const CosetId&) = default;
};

struct DoubleCosetId {
  std::uint32_t value = 0;
  friend auto operator<=>(const DoubleCosetId&, const DoubleCosetId&) = default;
};

struct Caps {
  std::size_t max_cosets = 2'000'000;
  std::size_t max_orbit = 100'000;
};

/// Hash-bucketed set of cosets of H (right cosets Hx or left cosets xH).
/// Buckets come from the instance fingerprint; equality is always decided by
/// H-membership.
class CosetIndex {
 public:
  enum class Side { Right, Left };

  CosetIndex(const GroupInstance& group, Side side) : group_(&group), side_(side) {}

  struct Probe {
    std::string key;
    std::optional<std::uint32_t> id;
  };

  Probe probe(const GroupElement& g) const;
  std::uint32_t insert(GroupElement rep, std::string key);
  /// probe + insert when absent; returns (id, inserted).
  std::pair<std::uint32_t, bool> intern(const GroupElement& g);

  std::size_t size() const { return reps_.size(); }
  const GroupElement& rep(std::uint32_t id) const { return reps_[id]; }
  const std::vector<GroupElement>& reps() const { return reps_; }

 private:
  bool same_coset(const GroupElement& g, const GroupElement& rep) const;

  const GroupInstance* group_;
  Side side_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> buckets_;
  std::vector<GroupElement> reps_;
};

struct CosetRecord {
  std::optional<std::uint32_t> depth;  // Schreier BFS depth; empty outside the enumerated ball
  std::optional<DoubleCosetId> dc;
};

struct DoubleCosetRecord {
  GroupElement rep;
  std::vector<CosetId> members;         // the R right cosets; members[0] holds rep
  std::vector<GroupElement> left_reps;  // one representative per left coset (L of them)
  std::uint64_t R = 0;
  std::uint64_t L = 0;
  Rational delta;                       // L / R
  std::optional<DoubleCosetId> inverse;
  std::optional<std::uint32_t> word_length;  // class-level word length when within the radius
};

/// Interned right cosets of H, the Schreier ball around He and its partition
/// into double cosets.
///
/// Ids are dense and never reused. Sealing fixes the ball; afterwards whole
/// double cosets may still be appended (products and inverses that leave the
/// ball), each orbit committed atomically so a cap hit leaves the store
/// unchanged.
class CosetStore {
 public:
  CosetStore(std::shared_ptr<const HeckePair> pair, Caps caps);

  const HeckePair& pair() const { return *pair_; }
  std::shared_ptr<const HeckePair> pair_ptr() const { return pair_; }
  const Caps& caps() const { return caps_; }
  void set_caps(Caps caps) { caps_ = caps; }

  bool sealed() const { return sealed_; }
  void seal() { sealed_ = true; }
  /// Radius r for which every coset of Schreier depth <= r and every double
  /// coset of word length <= r is present. Empty for pointwise stores.
  std::optional<std::uint32_t> radius_complete() const { return radius_; }

  CosetId intern_right_coset(const GroupElement& g);
  std::optional<CosetId> find(const GroupElement& g) const;

  DoubleCosetId right_H_orbit(CosetId c);
  DoubleCosetId class_of(const GroupElement& g);
  std::optional<DoubleCosetId> find_class(const GroupElement& g) const;
  DoubleCosetId invert_double_coset(DoubleCosetId d);

  static constexpr DoubleCosetId identity_class() { return DoubleCosetId{0}; }
  static constexpr CosetId base_coset() { return CosetId{0}; }

  std::size_t coset_count() const { return records_.size(); }
  std::size_t class_count() const { return classes_.size(); }
  const CosetRecord& coset(CosetId c) const { return records_.at(c.value); }
  const GroupElement& rep(CosetId c) const { return index_.rep(c.value); }
  const DoubleCosetRecord& double_coset(DoubleCosetId d) const { return classes_.at(d.value); }

  /// Generators labelling the Schreier edges (S u S^-1 without e).
  const std::vector<GroupElement>& edge_generators() const { return edge_generators_; }
  /// Neighbor ids per edge generator; empty for cosets on the boundary.
  const std::vector<CosetId>& neighbors(CosetId c) const;

  /// Cosets with depth <= r, in id order.
  std::vector<CosetId> schreier_ball(std::uint32_t r) const;
  /// Classes with word length <= r, in id order.
  std::vector<DoubleCosetId> class_ball(std::uint32_t r) const;

  nlohmann::json snapshot() const;

 private:
  friend CosetStore enumerate_ball(std::shared_ptr<const HeckePair>, std::uint32_t, Caps);

  CosetId insert_coset(GroupElement rep, std::string key, std::optional<std::uint32_t> depth);
  void check_coset_cap(std::size_t extra) const;
  DoubleCosetId build_class(const GroupElement& seed, std::optional<CosetId> seed_id);

  std::shared_ptr<const HeckePair> pair_;
  Caps caps_;
  bool sealed_ = false;
  std::optional<std::uint32_t> radius_;
  CosetIndex index_;
  std::vector<CosetRecord> records_;
  std::vector<DoubleCosetRecord> classes_;
  std::vector<GroupElement> edge_generators_;
  std::vector<std::vector<CosetId>> adjacency_;
};

/// Restores the store caps on scope exit.
class ScopedCaps {
 public:
  ScopedCaps(CosetStore& store, Caps caps) : store_(store), saved_(store.caps()) { store.set_caps(caps); }
  ~ScopedCaps() { store_.set_caps(saved_); }
  ScopedCaps(const ScopedCaps&) = delete;
  ScopedCaps& operator=(const ScopedCaps&) = delete;

 private:
  CosetStore& store_;
  Caps saved_;
};

/// BFS of H\G from He over S u S^-1 to depth r_max, partition into double
/// cosets (class-level BFS to word length r_max), L, R, delta and inverses.
/// Returns a sealed store.
CosetStore enumerate_ball(std::shared_ptr<const HeckePair> pair, std::uint32_t r_max, Caps caps);

/// Store holding only HeH, for pointwise queries on pairs without a finite
/// generating set.
CosetStore pointwise_store(std::shared_ptr<const HeckePair> pair, Caps caps);

/// Representatives of the right cosets in HgH (orbit of Hg under right H).
std::vector<GroupElement> right_orbit(const HeckePair& pair, const GroupElement& g, std::size_t max_orbit);
/// Representatives of the left cosets in HgH (orbit of gH under left H).
std::vector<GroupElement> left_orbit(const HeckePair& pair, const GroupElement& g, std::size_t max_orbit);

std::uint64_t left_L_count(const HeckePair& pair, const GroupElement& g, std::size_t max_orbit);
std::uint64_t right_R_count(const HeckePair& pair, const GroupElement& g, std::size_t max_orbit);
Rational relative_modular(const HeckePair& pair, const GroupElement& g, std::size_t max_orbit);

struct UnimodularityReport {
  bool verdict = true;
  /// False when the pair has no finite generating set and every probe gave
  /// delta = 1: then "true" only means no witness was found.
  bool decisive = true;
  std::vector<std::pair<GroupElement, Rational>> values;     // every tested element
  std::vector<std::pair<GroupElement, Rational>> witnesses;  // those with delta != 1
};

UnimodularityReport unimodularity_check(const HeckePair& pair, std::size_t max_orbit);

struct HeckeReport {
  enum class Verdict { Hecke, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  std::uint32_t depth = 0;
  std::size_t classes = 0;
  std::uint64_t max_L = 0;
  std::uint64_t max_R = 0;
  std::string reason;
};

HeckeReport verify_hecke(std::shared_ptr<const HeckePair> pair, std::uint32_t depth, Caps caps);

}  // namespace hecke

template <>
struct std::hash<hecke::CosetId> {
  std::size_t operator()(const hecke::CosetId& c) const noexcept { return std::hash<std::uint32_t>{}(c.value); }
};

template <>
struct std::hash<hecke::DoubleCosetId> {
  std::size_t operator()(const hecke::DoubleCosetId& d) const noexcept {
    return std::hash<std::uint32_t>{}(d.value);
  }
};
