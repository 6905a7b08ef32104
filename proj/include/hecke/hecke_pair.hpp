#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hecke/group_element.hpp"

namespace hecke {

/// One concrete group G together with its distinguished subgroup H.
/// Implementations decide H-membership exactly and may provide an exact
/// invariant of the right coset Hx used to bucket coset lookups.
class GroupInstance {
 public:
  virtual ~GroupInstance() = default;

  virtual GroupKind kind() const = 0;
  virtual GroupElement identity() const = 0;
  virtual bool in_subgroup(const GroupElement& g) const = 0;

  /// Throws DomainError when g is a well-formed element of the ambient kind
  /// but lies outside this instance (wrong ring, wrong degree, ...).
  virtual void validate(const GroupElement& g) const = 0;

  /// String constant on Hx. An empty string means "no fingerprint".
  virtual std::string right_coset_key(const GroupElement& g) const { (void)g; return {}; }

  /// Elements of H when H is finite, empty otherwise.
  virtual std::vector<GroupElement> finite_subgroup() const { return {}; }

  /// Short description of the instance for reports.
  virtual std::string describe() const = 0;
};

/// Normal subgroup K of G inside H that the instance quotients out, with the
/// canonicalization it applies to representatives.
struct ReductionKernel {
  std::string description;
  std::function<GroupElement(const GroupElement&)> canonicalize;
};

struct HeckePair {
  std::string label;
  std::shared_ptr<const GroupInstance> group;
  std::vector<GroupElement> g_generators;  // S
  std::vector<GroupElement> h_generators;
  bool finitely_generated = true;
  // For pairs without a finite generating set: elements whose relative
  // modular values are probed instead of generators.
  std::vector<GroupElement> probes;
  std::optional<ReductionKernel> reduction_kernel;
  std::string generator_note;

  GroupKind kind() const { return group->kind(); }
  GroupElement identity() const { return group->identity(); }

  /// S u S^-1 without the identity, duplicates removed, in a fixed order.
  std::vector<GroupElement> symmetric_generators() const;
  /// h_generators and their inverses, duplicates and identity removed.
  std::vector<GroupElement> symmetric_h_generators() const;
};

bool in_H(const HeckePair& pair, const GroupElement& g);

/// Parses an element and checks it against the instance (ring, degree, ...).
GroupElement parse_element(const HeckePair& pair, std::string_view text);

/// Catalog labels: "sl2z1p:p", "psl2z1p:p", "bc", "bcp:p", "z:d", "dinf",
/// "s3-h12", "s4-h12", "s4-h12-34". Throws DomainError on unknown labels.
HeckePair make_pair(std::string_view label);

/// Labels of every built-in pair, with the default prime/dimension choices.
std::vector<std::string> catalog_labels();

/// Finite permutation pair from explicit generators (custom pairs).
HeckePair make_permutation_pair(std::string label, std::vector<GroupElement> g_generators,
                                std::vector<GroupElement> h_generators);

}  // namespace hecke
