#include "hecke/length.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <random>

#include "hecke/error.hpp"

namespace hecke {

std::string_view length_kind_name(LengthKind kind) {
  switch (kind) {
    case LengthKind::WordSchreier: return "word";
    case LengthKind::Characteristic: return "characteristic";
    case LengthKind::Indicator: return "indicator";
    case LengthKind::AveragedFiniteH: return "averaged";
    case LengthKind::Custom: return "custom";
  }
  return "?";
}

double LengthFunction::at(DoubleCosetId d) const {
  auto v = rule_(d);
  if (!v)
    throw LengthUndefinedOnSupport(std::string(length_kind_name(kind_)) + " length undefined on double coset " +
                                   std::to_string(d.value));
  return *v;
}

LengthFunction word_length(const CosetStore& store) {
  if (!store.radius_complete()) throw BallIncomplete("word length needs an enumerated ball");
  const auto* s = &store;
  return LengthFunction(LengthKind::WordSchreier,
                        "class-level word length for H S H, radius " + std::to_string(*store.radius_complete()),
                        [s](DoubleCosetId d) -> std::optional<double> {
                          if (d.value >= s->class_count()) return std::nullopt;
                          const auto& wl = s->double_coset(d).word_length;
                          if (!wl) return std::nullopt;
                          return static_cast<double>(*wl);
                        });
}

LengthFunction characteristic_length(const CosetStore& store, bool use_LR, std::size_t max_orbit) {
  if (!use_LR) {
    const auto report = unimodularity_check(store.pair(), max_orbit);
    if (!report.verdict)
      throw NotRelativelyUnimodular("characteristic length needs a relatively unimodular pair; '" +
                                    store.pair().label + "' is not");
  }
  const auto* s = &store;
  return LengthFunction(LengthKind::Characteristic, use_LR ? "ln(L R)" : "ln L",
                        [s, use_LR](DoubleCosetId d) -> std::optional<double> {
                          if (d.value >= s->class_count()) return std::nullopt;
                          const auto& rec = s->double_coset(d);
                          const double v = static_cast<double>(use_LR ? rec.L * rec.R : rec.L);
                          return std::log(v);
                        });
}

LengthFunction indicator_length(const CosetStore& store) {
  const auto* s = &store;
  return LengthFunction(LengthKind::Indicator, "0 on H, 1 elsewhere", [s](DoubleCosetId d) -> std::optional<double> {
    if (d.value >= s->class_count()) return std::nullopt;
    return d == CosetStore::identity_class() ? 0.0 : 1.0;
  });
}

LengthFunction custom_length(std::string note, std::vector<std::pair<DoubleCosetId, double>> table) {
  std::map<DoubleCosetId, double> values(table.begin(), table.end());
  return LengthFunction(LengthKind::Custom, std::move(note),
                        [values = std::move(values)](DoubleCosetId d) -> std::optional<double> {
                          auto it = values.find(d);
                          if (it == values.end()) return std::nullopt;
                          return it->second;
                        });
}

CayleyWordLength::CayleyWordLength(const HeckePair& pair, std::uint32_t radius) {
  const auto gens = pair.symmetric_generators();
  ball_.push_back(pair.identity());
  depth_.emplace(render_element(pair.identity()), 0);
  std::size_t begin = 0;
  for (std::uint32_t r = 1; r <= radius; ++r) {
    const auto end = ball_.size();
    for (auto i = begin; i < end; ++i) {
      for (const auto& s : gens) {
        auto y = mul(ball_[i], s);
        if (depth_.emplace(render_element(y), r).second) ball_.push_back(std::move(y));
      }
    }
    begin = end;
  }
}

double CayleyWordLength::operator()(const GroupElement& g) const {
  auto it = depth_.find(render_element(g));
  if (it == depth_.end()) throw DomainError("element " + render_element(g) + " outside the Cayley ball");
  return it->second;
}

double AveragedLength::l1(const GroupElement& g) const {
  double sum = 0;
  for (const auto& h : H) sum += l(mul(mul(h, g), inv(h)));
  return sum;
}

double AveragedLength::l_prime(const GroupElement& g) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& h : H) best = std::min(best, l1(mul(h, g)));
  return best;
}

bool AveragedLength::bound_holds(const GroupElement& g) const {
  double on_h = 0;
  for (const auto& h : H) on_h += l(h);
  return l1(g) <= static_cast<double>(H.size()) * l(g) + 2 * on_h;
}

AveragedLength averaged_length(const HeckePair& pair, ElementLength l) {
  auto H = pair.group->finite_subgroup();
  if (H.empty()) throw InfiniteH("pair '" + pair.label + "' has an infinite subgroup H");
  return AveragedLength{std::move(H), std::move(l)};
}

LengthFunction averaged_class_length(const CosetStore& store, const AveragedLength& avg) {
  const auto* s = &store;
  return LengthFunction(LengthKind::AveragedFiniteH, "l'(g) = min_h sum_h' l(h' h g h'^-1)",
                        [s, avg](DoubleCosetId d) -> std::optional<double> {
                          if (d.value >= s->class_count()) return std::nullopt;
                          try {
                            return avg.l_prime(s->double_coset(d).rep);
                          } catch (const DomainError&) {
                            return std::nullopt;
                          }
                        });
}

PseudometricReport pseudometric_checks(const CosetStore& store, const LengthFunction& l,
                                       const std::vector<GroupElement>& sample,
                                       const std::vector<GroupElement>& translators, std::size_t triples,
                                       std::uint64_t seed) {
  PseudometricReport report;
  if (sample.empty()) return report;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_t(0, translators.empty() ? 0 : translators.size() - 1);
  auto dist = [&](const GroupElement& x, const GroupElement& y) -> std::optional<double> {
    auto d = store.find_class(mul(inv(x), y));
    if (!d) return std::nullopt;
    return l.try_at(*d);
  };
  // Integer-valued lengths are compared exactly; others with a rounding slack.
  constexpr double slack = 1e-12;
  for (std::size_t i = 0; i < triples; ++i) {
    const auto& x = sample[pick(rng)];
    const auto& y = sample[pick(rng)];
    const auto& z = sample[pick(rng)];
    const auto xy = dist(x, y), yx = dist(y, x), yz = dist(y, z), xz = dist(x, z);
    if (!xy || !yx || !yz || !xz) continue;
    ++report.triples;
    if (std::abs(*xy - *yx) > slack) ++report.symmetry_failures;
    if (*xz > *xy + *yz + slack) ++report.triangle_failures;
    if (!translators.empty()) {
      const auto& g = translators[pick_t(rng)];
      const auto moved = dist(mul(g, x), mul(g, y));
      if (!moved || std::abs(*moved - *xy) > slack) ++report.invariance_failures;
    }
  }
  return report;
}

DominanceFit dominance_fit(const LengthFunction& l1, const LengthFunction& l2, const std::vector<DoubleCosetId>& classes) {
  DominanceFit fit;
  std::vector<std::pair<double, double>> points;
  for (auto d : classes) {
    auto a = l1.try_at(d);
    auto b = l2.try_at(d);
    if (a && b) points.emplace_back(*a, *b);
  }
  fit.classes = points.size();
  // Minimax: least slope covering every point with l1 > 0, then the offset
  // needed on the kernel of l1.
  for (const auto& [a, b] : points)
    if (a > 0) fit.c1 = std::max(fit.c1, b / a);
  for (const auto& [a, b] : points) fit.c0 = std::max(fit.c0, b - fit.c1 * a);
  fit.holds = std::all_of(points.begin(), points.end(),
                          [&](const auto& p) { return p.second <= fit.c1 * p.first + fit.c0 + 1e-12; });
  return fit;
}

PropernessProfile properness_profile(const CosetStore& store, const LengthFunction& l, std::uint32_t r_max) {
  PropernessProfile p;
  p.shell_min.assign(r_max + 1, std::numeric_limits<double>::quiet_NaN());
  for (auto d : store.class_ball(r_max)) {
    const auto r = *store.double_coset(d).word_length;
    const auto v = l.try_at(d);
    if (!v) continue;
    if (std::isnan(p.shell_min[r]) || *v < p.shell_min[r]) p.shell_min[r] = *v;
  }
  std::vector<double> seen;
  for (std::uint32_t r = 1; r <= r_max; ++r)
    if (!std::isnan(p.shell_min[r])) seen.push_back(p.shell_min[r]);
  p.growing = seen.size() >= 2 && std::is_sorted(seen.begin(), seen.end()) && seen.back() > seen.front();
  return p;
}

}  // namespace hecke
