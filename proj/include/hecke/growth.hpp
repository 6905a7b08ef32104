#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hecke/coset_store.hpp"
#include "hecke/length.hpp"

namespace hecke {

struct GrowthSeries {
  std::vector<std::uint32_t> radii;  // 0..r_max
  std::vector<std::uint64_t> ball;   // G_l(r): right cosets Hx with l(x) <= r
  std::vector<std::uint64_t> shell;  // right cosets with r <= l(x) < r + 1
  bool complete = true;              // false when l is not the word length of an enumerated ball
};

/// Throws BallIncomplete when l is the word length and r_max exceeds the
/// enumerated radius.
GrowthSeries growth_series(const CosetStore& store, const LengthFunction& l, std::uint32_t r_max);

/// Cosets per Schreier depth, cumulative: entry r counts cosets of depth <= r.
std::vector<std::uint64_t> depth_histogram(const CosetStore& store, std::uint32_t r_max);

struct GrowthThresholds {
  double delta = 0.2;          // exponential when tail ball ratios exceed 1 + delta
  double tail_fraction = 0.5;  // fraction of the radii forming the tail
  double min_r2 = 0.98;        // log-log fit quality for a polynomial verdict
};

struct GrowthVerdict {
  enum class Kind { Polynomial, Exponential, Inconclusive };
  Kind kind = Kind::Inconclusive;
  double alpha_hat = 0;  // slope of ln G against ln r on the tail
  double alpha_r2 = 0;
  double beta_hat = 0;   // slope of ln G against r on the tail
  double beta_r2 = 0;
  double min_ball_ratio = 0;   // min over the tail of G(r+1)/G(r)
  double min_shell_ratio = 0;  // min over the tail of C(r+1)/C(r)
  std::uint32_t tail_start = 0;
  std::string note;
};

std::string_view verdict_name(GrowthVerdict::Kind kind);

GrowthVerdict classify_growth(const GrowthSeries& series, const GrowthThresholds& t = {});

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
};

/// Ordinary least squares of y on x; r2 = 1 for a perfect or degenerate fit.
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hecke
