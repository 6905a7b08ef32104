#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hecke/growth.hpp"
#include "hecke/hecke_algebra.hpp"
#include "hecke/length.hpp"

namespace hecke {

/// P_R lambda(f) P_R on the right cosets of B_R = {Hx : l_word(x) <= R}, as a
/// sparse column-major matrix: A[x][y] = f(x y^-1).
struct TruncatedOperator {
  std::uint32_t radius = 0;
  std::vector<CosetId> cosets;  // basis, in store id order; cosets[0] = He
  struct Column {
    std::vector<std::uint32_t> rows;
    std::vector<Rational> exact;
    std::vector<double> values;
  };
  std::vector<Column> columns;

  std::size_t dimension() const { return cosets.size(); }
  std::size_t nonzeros() const;
  /// Exact equality with the transpose.
  bool is_symmetric() const;
};

/// Throws BallIncomplete when the store radius is below R or f is not
/// supported in the enumerated classes. Exact entries are kept only when
/// keep_exact is set.
TruncatedOperator operator_matrix(const HeckeElement& f, std::uint32_t R, bool keep_exact = true);

struct NormEstimate {
  double value = 0;  // ||A v|| / ||v|| at the final iterate: a lower bound for ||A||
  std::uint32_t iterations = 0;
  bool converged = false;
  std::string warning;
  std::vector<double> vector;  // final iterate, unit length, in the operator basis
};

struct PowerIterationOptions {
  double tol = 1e-8;  // relative change of the Rayleigh quotient of A^T A
  std::uint32_t max_iterations = 5000;
};

/// Largest singular value by power iteration on A^T A, from delta_He + uniform
/// or from `start` (a vector on a smaller ball, padded with zeros).
NormEstimate truncated_norm(const TruncatedOperator& op, const PowerIterationOptions& opt = {},
                            const std::vector<double>* start = nullptr);

/// <A^{2n} delta_He, delta_He> in exact arithmetic.
Rational matrix_moment(const TruncatedOperator& op, std::uint32_t n);

struct SpectralBound {
  std::vector<Rational> moments;  // a_1 .. a_k
  std::vector<double> rho;        // a_n^(1/2n)
  bool complete = true;
  std::string warning;
};

/// Throws NotSelfAdjoint. Stops early (complete = false) on a cap hit.
SpectralBound spectral_lower_bound(HeckeAlgebra& algebra, const HeckeElement& f, std::uint32_t N);

/// Largest word length over the support of f; throws LengthUndefinedOnSupport.
std::uint32_t support_radius(const HeckeElement& f);

// ---------------------------------------------------------------------------
// RD profiles

struct FamilySpec {
  bool shells = true;
  bool balls = true;
  std::uint32_t random_count = 2;  // seeded nonnegative functions per radius
  bool signed_sanity = false;      // seeded signed functions (sanity family only)
  std::uint64_t seed = 1;
};

struct RdThresholds {
  std::uint32_t padding = 1;           // operator radius = r + padding (capped by the store radius)
  std::uint32_t moment_order = 4;      // N for rho_N on self-adjoint test functions
  std::size_t moment_budget = 5'000;  // extra cosets moments may intern, per profile
  double max_poly_slope = 2.5;         // log ratio vs log(1+r)
  std::vector<double> s_grid = {0, 0.25, 0.5, 0.75, 1, 1.25, 1.5, 1.75, 2, 2.25, 2.5, 2.75, 3};
  double stability_tol = 0.05;  // relative growth of the running max of c(r) allowed on the tail
  double tail_fraction = 0.5;
  PowerIterationOptions power;
};

struct RdRecord {
  std::uint32_t r = 0;
  std::string family;  // "shell", "ball", "random-k", "signed-k"
  bool nonnegative = true;
  double l2 = 0;
  double truncated = 0;
  std::optional<double> rho;  // rho_N when f is self-adjoint and the moments fit
  double norm = 0;            // N(f) = max(truncated, rho)
  double ratio = 0;           // N(f) / ||f||_2
  std::vector<double> weighted;  // ||f||_{s,l} for every s in the grid
  std::string warning;
};

struct RdBest {
  std::uint32_t r = 0;
  double best_ratio = 0;
  std::string witness;
};

struct WeightedFit {
  bool stable = false;
  double s_hat = 0;
  double c_hat = 0;
  std::vector<double> c_by_s;  // sup over tested f of N(f) / ||f||_{s,l}, per grid point
};

struct RdProfile {
  enum class Verdict { ObstructedNonunimodular, PolynomialCompatible, SuperpolynomialRatio, Inconclusive };
  std::string pair;
  std::uint32_t r_max = 0;
  FamilySpec families;
  RdThresholds thresholds;
  bool unimodular = true;
  std::vector<std::pair<std::string, std::string>> unimodularity_witnesses;  // (element, delta)
  std::vector<RdRecord> records;
  std::vector<RdBest> best;
  LinearFit poly_fit;  // log best_ratio vs log(1 + r)
  LinearFit exp_fit;   // log best_ratio vs r
  std::optional<WeightedFit> weighted;
  Verdict verdict = Verdict::Inconclusive;
  bool partial = false;
  std::vector<std::string> warnings;
};

std::string_view verdict_name(RdProfile::Verdict v);

/// Store must be enumerated to r_max + padding. Non-unimodular pairs are
/// reported as obstructed without evaluating any operator.
RdProfile rd_profile(HeckeAlgebra& algebra, const LengthFunction& l, std::uint32_t r_max, const FamilySpec& families,
                     const RdThresholds& thresholds);

/// Default profile radius per pair: 20 for Z, 8 for Z^2, 10 for the
/// dihedral pair, 4 for the tree pairs, 3 otherwise.
std::uint32_t default_profile_radius(const HeckePair& pair);

/// Smallest s on the grid whose c(r) = max_f N(f) / ||f||_{s,l} has no upward
/// trend on the tail. Throws NoStableFit.
WeightedFit rd_weighted_fit(const RdProfile& profile);

// ---------------------------------------------------------------------------
// Kesten diagnostic

struct KestenOptions {
  std::uint32_t N = 20;
  std::uint32_t padding = 2;  // truncated norm on B_{R} with R = padding + support radius
  double threshold = 0.95;    // heuristic: index below it points away from amenability
  std::size_t moment_budget = 50'000;  // extra cosets the moments may intern
  PowerIterationOptions power;
};

struct KestenReport {
  std::string f_description;
  std::vector<Rational> moments;
  std::vector<double> rho;
  double l1 = 0;
  double truncated = 0;
  std::uint32_t operator_radius = 0;
  double index = 0;  // max(rho_N, truncated) / ||f||_1
  bool unimodular = true;
  bool moments_complete = true;
  double threshold = 0.95;
  std::vector<std::string> warnings;
};

/// (f + f*)/2 for f the normalized indicator of the classes of word length <= 1.
HeckeElement kesten_default_element(HeckeAlgebra& algebra);

KestenReport kesten_diagnostic(HeckeAlgebra& algebra, const HeckeElement& f, const KestenOptions& opt);

// ---------------------------------------------------------------------------
// Estimator coherence

struct CoherenceReport {
  std::vector<std::string> checks;    // one line per check performed
  std::vector<std::string> failures;  // subset that failed
  bool ok() const { return failures.empty(); }
};

/// Projection monotonicity, rho monotonicity, moment/matrix exactness at
/// padding R >= 2n * support radius, rho_n <= truncated norm there, the l1
/// bound for relatively unimodular pairs and exact symmetry of self-adjoint
/// operators, for one self-adjoint f on the radii given.
CoherenceReport check_estimator_coherence(HeckeAlgebra& algebra, const HeckeElement& f,
                                          const std::vector<std::uint32_t>& radii, std::uint32_t N,
                                          const PowerIterationOptions& power = {});

// ---------------------------------------------------------------------------

nlohmann::json to_json(const RdProfile& p);
std::string to_csv(const RdProfile& p);
nlohmann::json to_json(const KestenReport& k);
std::string to_csv(const KestenReport& k);

/// Worker count for parallel sections: HECKE_THREADS if set, else the
/// hardware concurrency, at least 1.
unsigned worker_count();

/// Fixed 12-significant-digit rendering used by every artifact.
std::string format_double(double v);

}  // namespace hecke
