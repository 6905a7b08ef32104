#include "hecke/growth.hpp"

#include <algorithm>
#include <cmath>

#include "hecke/error.hpp"

namespace hecke {

GrowthSeries growth_series(const CosetStore& store, const LengthFunction& l, std::uint32_t r_max) {
  GrowthSeries g;
  if (l.kind() == LengthKind::WordSchreier) {
    if (!store.radius_complete() || *store.radius_complete() < r_max)
      throw BallIncomplete("growth to radius " + std::to_string(r_max) + " needs a ball of that radius");
  } else {
    // Other lengths are only evaluated on the classes present in the store.
    g.complete = false;
  }
  g.shell.assign(r_max + 1, 0);
  for (std::uint32_t i = 0; i < store.class_count(); ++i) {
    const DoubleCosetId d{i};
    const auto v = l.try_at(d);
    if (!v || *v >= r_max + 1.0) continue;
    g.shell[static_cast<std::size_t>(std::floor(*v))] += store.double_coset(d).R;
  }
  std::uint64_t total = 0;
  for (std::uint32_t r = 0; r <= r_max; ++r) {
    g.radii.push_back(r);
    total += g.shell[r];
    g.ball.push_back(total);
  }
  return g;
}

std::vector<std::uint64_t> depth_histogram(const CosetStore& store, std::uint32_t r_max) {
  std::vector<std::uint64_t> out(r_max + 1, 0);
  for (std::uint32_t i = 0; i < store.coset_count(); ++i) {
    const auto& depth = store.coset(CosetId{i}).depth;
    if (depth && *depth <= r_max) ++out[*depth];
  }
  for (std::size_t r = 1; r < out.size(); ++r) out[r] += out[r - 1];
  return out;
}

std::string_view verdict_name(GrowthVerdict::Kind kind) {
  switch (kind) {
    case GrowthVerdict::Kind::Polynomial: return "Polynomial";
    case GrowthVerdict::Kind::Exponential: return "Exponential";
    case GrowthVerdict::Kind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit fit;
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) {
    fit.r2 = 1;
    if (!y.empty()) fit.intercept = y.front();
    return fit;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  fit.slope = sxx > 0 ? sxy / sxx : 0;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (sxx > 0 && syy > 0) ? (sxy * sxy) / (sxx * syy) : 1;
  return fit;
}

GrowthVerdict classify_growth(const GrowthSeries& s, const GrowthThresholds& t) {
  GrowthVerdict v;
  v.note = "empirical";
  const auto r_max = s.radii.empty() ? 0u : s.radii.back();
  if (r_max < 3) {
    v.note += "; too few radii";
    return v;
  }
  const auto tail_len = std::max<std::uint32_t>(2, static_cast<std::uint32_t>(std::floor(t.tail_fraction * r_max)));
  v.tail_start = std::max<std::uint32_t>(1, r_max - tail_len);

  std::vector<double> lr, r, lg;
  for (auto k = v.tail_start; k <= r_max; ++k) {
    lr.push_back(std::log(static_cast<double>(k)));
    r.push_back(k);
    lg.push_back(std::log(static_cast<double>(s.ball[k])));
  }
  const auto poly = least_squares(lr, lg);
  const auto expo = least_squares(r, lg);
  v.alpha_hat = poly.slope;
  v.alpha_r2 = poly.r2;
  v.beta_hat = expo.slope;
  v.beta_r2 = expo.r2;

  v.min_ball_ratio = INFINITY;
  v.min_shell_ratio = INFINITY;
  for (auto k = v.tail_start; k < r_max; ++k) {
    v.min_ball_ratio = std::min(v.min_ball_ratio, static_cast<double>(s.ball[k + 1]) / static_cast<double>(s.ball[k]));
    if (s.shell[k] > 0)
      v.min_shell_ratio =
          std::min(v.min_shell_ratio, static_cast<double>(s.shell[k + 1]) / static_cast<double>(s.shell[k]));
  }
  if (!std::isfinite(v.min_shell_ratio)) v.min_shell_ratio = 0;

  if (v.min_ball_ratio > 1 + t.delta) {
    v.kind = GrowthVerdict::Kind::Exponential;
    return v;
  }
  // ln G(r) / r must not increase along the tail.
  bool decreasing = true;
  for (std::size_t i = 1; i < lg.size(); ++i)
    if (lg[i] / r[i] > lg[i - 1] / r[i - 1] + 1e-12) decreasing = false;
  if (poly.r2 >= t.min_r2 && decreasing) {
    v.kind = GrowthVerdict::Kind::Polynomial;
    return v;
  }
  v.note += "; neither test passed";
  return v;
}

}  // namespace hecke
