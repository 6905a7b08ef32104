#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "hecke/coset_store.hpp"
#include "hecke/length.hpp"

namespace hecke {

/// Finitely supported function on G//H with rational coefficients.
class HeckeElement {
 public:
  explicit HeckeElement(const CosetStore& store) : store_(&store) {}

  const CosetStore& store() const { return *store_; }
  const std::map<DoubleCosetId, Rational>& coeffs() const { return coeffs_; }

  Rational coeff(DoubleCosetId d) const;
  /// Sets the coefficient, erasing it when zero.
  void set(DoubleCosetId d, const Rational& c);
  void add(DoubleCosetId d, const Rational& c);
  bool is_zero() const { return coeffs_.empty(); }
  std::vector<DoubleCosetId> support() const;

  HeckeElement& operator+=(const HeckeElement& other);
  HeckeElement& operator*=(const Rational& c);
  friend HeckeElement operator+(HeckeElement a, const HeckeElement& b) { return a += b; }
  friend HeckeElement operator*(HeckeElement a, const Rational& c) { return a *= c; }
  friend bool operator==(const HeckeElement& a, const HeckeElement& b) {
    return a.store_ == b.store_ && a.coeffs_ == b.coeffs_;
  }

 private:
  const CosetStore* store_;
  std::map<DoubleCosetId, Rational> coeffs_;
};

struct NormReport {
  Rational l1;       // sum |c_d| R(d)
  Rational l2_sq;    // sum c_d^2 R(d)
  double l1_value = 0;
  double l2_value = 0;
  std::optional<double> s;
  std::optional<double> weighted;  // (sum c_d^2 (1 + l(d))^(2s) R(d))^(1/2)
};

/// Structure constants of one basis product: T_{d1} * T_{d2} = sum_k n_k T_{d_k}.
using BasisProduct = std::vector<std::pair<DoubleCosetId, std::uint64_t>>;

/// Convolution algebra over one store. Products may intern new double cosets
/// (whole orbits, within the store caps); basis products are cached.
class HeckeAlgebra {
 public:
  explicit HeckeAlgebra(CosetStore& store) : store_(&store) {}

  CosetStore& store() { return *store_; }
  const CosetStore& store() const { return *store_; }

  HeckeElement zero() const { return HeckeElement(*store_); }
  HeckeElement basis(DoubleCosetId d) const;
  HeckeElement identity() const { return basis(CosetStore::identity_class()); }

  const BasisProduct& basis_product(DoubleCosetId d1, DoubleCosetId d2);
  HeckeElement convolve(const HeckeElement& f, const HeckeElement& g);
  /// c'_{inv d} = Delta(d) c_d.
  HeckeElement involution(const HeckeElement& f);
  bool is_self_adjoint(const HeckeElement& f);

  /// (f * g)(HeH) without forming the product.
  Rational value_at_identity(const HeckeElement& f, const HeckeElement& g);

  /// a_n = (f^{*2n})(HeH). Throws NotSelfAdjoint.
  Rational convolution_power_moment(const HeckeElement& f, std::uint32_t n);

  struct Moments {
    std::vector<Rational> a;  // a[0] = a_1
    bool complete = true;
    std::string warning;
  };
  /// a_1 .. a_N; stops early (complete = false) when a cap is hit.
  Moments moments(const HeckeElement& f, std::uint32_t N);

  /// Basis products with R(d1) R(d2) up to this many coset lookups are formed
  /// coset by coset and checked constant on every class; larger ones are
  /// evaluated at class representatives and checked on a fixed sample.
  void set_verification_budget(std::size_t lookups) { verify_budget_ = lookups; }

 private:
  void check_store(const HeckeElement& f) const;

  CosetStore* store_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, BasisProduct> cache_;
  std::size_t verify_budget_ = 200'000;
};

NormReport norms(const HeckeElement& f, const LengthFunction* l = nullptr, std::optional<double> s = std::nullopt);

/// Lines "dc=<id> coeff=<rational>" in id order.
std::string to_text(const HeckeElement& f);
HeckeElement element_from_text(const CosetStore& store, std::string_view text);
nlohmann::json to_json(const HeckeElement& f);
HeckeElement element_from_json(const CosetStore& store, const nlohmann::json& j);

/// CSV "d1,d2,d,coeff" for every pair of the given classes.
std::string structure_constants_csv(HeckeAlgebra& algebra, const std::vector<DoubleCosetId>& classes);

/// Exhaustive evaluation for a finite permutation group, by group-algebra
/// convolution of double-coset indicators averaged over H.
struct FiniteOracle {
  std::vector<Perm> elements;                 // G, sorted
  std::vector<std::vector<std::uint32_t>> classes;  // element indices per double coset; classes[0] = H
  std::vector<std::uint64_t> L, R;
  std::vector<Rational> delta;
  std::vector<std::uint32_t> class_of;        // per element index
  /// structure[a][b][c] = coefficient of T_c in T_a * T_b.
  std::vector<std::vector<std::vector<std::uint64_t>>> structure;
};

/// G generated by `g_generators`; H given as an explicit subset of G.
/// Throws SubsetNotSubgroup, DomainError when |G| > 10^4.
FiniteOracle finite_group_oracle(const std::vector<Perm>& g_generators, const std::vector<Perm>& h_subset);

}  // namespace hecke
