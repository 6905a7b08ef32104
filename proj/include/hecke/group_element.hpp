#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hecke/rational.hpp"

namespace hecke {

// The group law is determined by the kind; the payload only stores data.
enum class GroupKind {
  SpecialLinear,            // SL2 over Q (Matrix2Q)
  ProjectiveSpecialLinear,  // PSL2 over Q, sign-canonical Matrix2Q
  Affine,                   // [[1,b],[0,a]], a > 0 (AffineQ)
  Permutation,              // Perm
  Lattice,                  // Z^d under addition (ZVec)
  Dihedral,                 // D_inf as (translation n, reflection bit e) (ZVec of size 2)
};

std::string_view kind_name(GroupKind kind);

struct Matrix2Q {
  Rational a, b, c, d;
  friend bool operator==(const Matrix2Q&, const Matrix2Q&) = default;
};

// [[1, b], [0, a]]
struct AffineQ {
  Rational b, a;
  friend bool operator==(const AffineQ&, const AffineQ&) = default;
};

struct Perm {
  std::vector<std::uint16_t> images;
  friend bool operator==(const Perm&, const Perm&) = default;
};

struct ZVec {
  std::vector<std::int64_t> coords;
  friend bool operator==(const ZVec&, const ZVec&) = default;
};

class GroupElement {
 public:
  using Payload = std::variant<Matrix2Q, AffineQ, Perm, ZVec>;

  // Validating factories; throw DomainError when an invariant fails.
  static GroupElement matrix(Rational a, Rational b, Rational c, Rational d, bool projective);
  static GroupElement affine(Rational b, Rational a);
  static GroupElement perm(std::vector<std::uint16_t> images);
  static GroupElement lattice(std::vector<std::int64_t> coords);
  static GroupElement dihedral(std::int64_t translation, int reflection);

  GroupKind kind() const noexcept { return kind_; }
  const Payload& payload() const noexcept { return payload_; }

  const Matrix2Q& as_matrix() const { return std::get<Matrix2Q>(payload_); }
  const AffineQ& as_affine() const { return std::get<AffineQ>(payload_); }
  const Perm& as_perm() const { return std::get<Perm>(payload_); }
  const ZVec& as_zvec() const { return std::get<ZVec>(payload_); }

  friend bool operator==(const GroupElement& x, const GroupElement& y) {
    return x.kind_ == y.kind_ && x.payload_ == y.payload_;
  }

 private:
  GroupElement(GroupKind kind, Payload payload) : kind_(kind), payload_(std::move(payload)) {}
  friend GroupElement mul(const GroupElement&, const GroupElement&);
  friend GroupElement inv(const GroupElement&);
  friend GroupElement identity_like(const GroupElement&);

  GroupKind kind_;
  Payload payload_;
};

GroupElement mul(const GroupElement& x, const GroupElement& y);
GroupElement inv(const GroupElement& x);
/// Identity of the same kind and shape (matrix size, permutation degree, dimension).
GroupElement identity_like(const GroupElement& x);
bool eq(const GroupElement& x, const GroupElement& y);

/// Sign rule for PSL2 representatives: first nonzero of (a, b, c, d) positive.
Matrix2Q sign_canonical(Matrix2Q m);

/// Total order on same-kind elements (payload lexicographic). Used to pick
/// canonical members of finite sets.
bool payload_less(const GroupElement& x, const GroupElement& y);

/// Text grammar: "mat a b c d" | "aff b a" | "perm i0 .. ik" | "zvec n1 .. nd".
/// `kind` selects the law the payload is read under. Throws ParseError or
/// DomainError.
GroupElement parse_element(GroupKind kind, std::string_view text);
std::string render_element(const GroupElement& g);

}  // namespace hecke
