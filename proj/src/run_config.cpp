#include "hecke/run_config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>

#include "hecke/error.hpp"

namespace hecke {

namespace {

// Malformed value; converted to ParseError with the right offset by the callers.
struct BadValue : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_integer(std::string_view key, std::string_view v) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw BadValue(std::string(key) + ": expected a nonnegative integer, got '" + std::string(v) + "'");
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  const std::string s(v);
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(out))
    throw BadValue(std::string(key) + ": expected a number, got '" + s + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw BadValue(std::string(key) + ": expected true/false, got '" + std::string(v) + "'");
}

std::size_t positive(std::string_view key, std::size_t v) {
  if (v == 0) throw BadValue(std::string(key) + " must be positive");
  return v;
}

struct Setting {
  std::string description;
  std::function<void(RunConfig&, std::string_view key, std::string_view value)> apply;
  std::function<std::string(const RunConfig&)> show;
};

const std::map<std::string, Setting, std::less<>>& settings() {
  using C = RunConfig;
  using V = std::string_view;
  static const std::map<std::string, Setting, std::less<>> table = {
      {"pair", {"catalog label", [](C& c, V, V v) { c.pair = std::string(v); }, [](const C& c) { return c.pair; }}},
      {"rmax",
       {"radius (per-command default when unset)",
        [](C& c, V k, V v) { c.r_max = parse_integer<std::uint32_t>(k, v); },
        [](const C& c) { return c.r_max ? std::to_string(*c.r_max) : std::string("default"); }}},
      {"seed",
       {"seed for randomized families", [](C& c, V k, V v) { c.seed = parse_integer<std::uint64_t>(k, v); },
        [](const C& c) { return std::to_string(c.seed); }}},
      {"max_cosets",
       {"coset cap", [](C& c, V k, V v) { c.caps.max_cosets = positive(k, parse_integer<std::size_t>(k, v)); },
        [](const C& c) { return std::to_string(c.caps.max_cosets); }}},
      {"max_orbit",
       {"orbit cap", [](C& c, V k, V v) { c.caps.max_orbit = positive(k, parse_integer<std::size_t>(k, v)); },
        [](const C& c) { return std::to_string(c.caps.max_orbit); }}},
      {"out", {"output directory", [](C& c, V, V v) { c.out = std::string(v); }, [](const C& c) { return c.out; }}},
      {"format",
       {"json or csv",
        [](C& c, V k, V v) {
          if (v != "json" && v != "csv") throw BadValue(std::string(k) + ": expected json or csv");
          c.format = std::string(v);
        },
        [](const C& c) { return c.format; }}},
      {"growth.delta",
       {"exponential when tail ball ratios exceed 1 + delta",
        [](C& c, V k, V v) { c.growth.delta = parse_real(k, v); },
        [](const C& c) { return format_double(c.growth.delta); }}},
      {"growth.tail_fraction",
       {"fraction of radii forming the tail", [](C& c, V k, V v) { c.growth.tail_fraction = parse_real(k, v); },
        [](const C& c) { return format_double(c.growth.tail_fraction); }}},
      {"growth.min_r2",
       {"log-log fit quality for a polynomial verdict", [](C& c, V k, V v) { c.growth.min_r2 = parse_real(k, v); },
        [](const C& c) { return format_double(c.growth.min_r2); }}},
      {"rd.padding",
       {"operator radius minus support radius",
        [](C& c, V k, V v) { c.rd.padding = parse_integer<std::uint32_t>(k, v); },
        [](const C& c) { return std::to_string(c.rd.padding); }}},
      {"rd.moment_order",
       {"N for rho_N (0 disables)", [](C& c, V k, V v) { c.rd.moment_order = parse_integer<std::uint32_t>(k, v); },
        [](const C& c) { return std::to_string(c.rd.moment_order); }}},
      {"rd.moment_budget",
       {"extra cosets moments may intern", [](C& c, V k, V v) { c.rd.moment_budget = parse_integer<std::size_t>(k, v); },
        [](const C& c) { return std::to_string(c.rd.moment_budget); }}},
      {"rd.max_poly_slope",
       {"largest log-log slope called polynomial",
        [](C& c, V k, V v) { c.rd.max_poly_slope = parse_real(k, v); },
        [](const C& c) { return format_double(c.rd.max_poly_slope); }}},
      {"rd.stability_tol",
       {"allowed relative growth of the weighted constant over the tail",
        [](C& c, V k, V v) { c.rd.stability_tol = parse_real(k, v); },
        [](const C& c) { return format_double(c.rd.stability_tol); }}},
      {"rd.tail_fraction",
       {"fraction of radii forming the stability window",
        [](C& c, V k, V v) { c.rd.tail_fraction = parse_real(k, v); },
        [](const C& c) { return format_double(c.rd.tail_fraction); }}},
      {"rd.s_max",
       {"largest weight exponent tried (grid step rd.s_step from 0)",
        [](C& c, V k, V v) {
          const double step = c.rd.s_grid.size() > 1 ? c.rd.s_grid[1] - c.rd.s_grid[0] : 0.25;
          const double s_max = parse_real(k, v);
          c.rd.s_grid.clear();
          for (int i = 0; i * step <= s_max + 1e-12; ++i) c.rd.s_grid.push_back(i * step);
        },
        [](const C& c) { return format_double(c.rd.s_grid.empty() ? 0 : c.rd.s_grid.back()); }}},
      {"rd.s_step",
       {"weight exponent grid step",
        [](C& c, V k, V v) {
          const double step = parse_real(k, v);
          if (step <= 0) throw BadValue(std::string(k) + " must be positive");
          const double s_max = c.rd.s_grid.empty() ? 3.0 : c.rd.s_grid.back();
          c.rd.s_grid.clear();
          for (int i = 0; i * step <= s_max + 1e-12; ++i) c.rd.s_grid.push_back(i * step);
        },
        [](const C& c) { return format_double(c.rd.s_grid.size() > 1 ? c.rd.s_grid[1] - c.rd.s_grid[0] : 0); }}},
      {"rd.power_tol",
       {"power iteration relative tolerance", [](C& c, V k, V v) { c.rd.power.tol = parse_real(k, v); },
        [](const C& c) { return format_double(c.rd.power.tol); }}},
      {"rd.power_max_iterations",
       {"power iteration cap",
        [](C& c, V k, V v) { c.rd.power.max_iterations = parse_integer<std::uint32_t>(k, v); },
        [](const C& c) { return std::to_string(c.rd.power.max_iterations); }}},
      {"rd.shells",
       {"shell indicator family", [](C& c, V k, V v) { c.families.shells = parse_bool(k, v); },
        [](const C& c) { return std::string(c.families.shells ? "true" : "false"); }}},
      {"rd.balls",
       {"ball indicator family", [](C& c, V k, V v) { c.families.balls = parse_bool(k, v); },
        [](const C& c) { return std::string(c.families.balls ? "true" : "false"); }}},
      {"rd.random_count",
       {"seeded nonnegative functions per radius",
        [](C& c, V k, V v) { c.families.random_count = parse_integer<std::uint32_t>(k, v); },
        [](const C& c) { return std::to_string(c.families.random_count); }}},
      {"rd.signed",
       {"add the signed sanity family", [](C& c, V k, V v) { c.families.signed_sanity = parse_bool(k, v); },
        [](const C& c) { return std::string(c.families.signed_sanity ? "true" : "false"); }}},
      {"kesten.N",
       {"moment order", [](C& c, V k, V v) { c.kesten.N = positive(k, parse_integer<std::uint32_t>(k, v)); },
        [](const C& c) { return std::to_string(c.kesten.N); }}},
      {"kesten.padding",
       {"operator radius minus support radius",
        [](C& c, V k, V v) { c.kesten.padding = parse_integer<std::uint32_t>(k, v); },
        [](const C& c) { return std::to_string(c.kesten.padding); }}},
      {"kesten.threshold",
       {"index reported as amenable-looking above this (heuristic)",
        [](C& c, V k, V v) { c.kesten.threshold = parse_real(k, v); },
        [](const C& c) { return format_double(c.kesten.threshold); }}},
      {"kesten.moment_budget",
       {"extra cosets the moments may intern",
        [](C& c, V k, V v) { c.kesten.moment_budget = parse_integer<std::size_t>(k, v); },
        [](const C& c) { return std::to_string(c.kesten.moment_budget); }}},
      {"custom.label",
       {"label of the custom permutation pair", [](C& c, V, V v) { c.custom_label = std::string(v); },
        [](const C& c) { return c.custom_label; }}},
      {"custom.g",
       {"one G generator per line, e.g. 'perm 1 0 2'", [](C& c, V, V v) { c.custom_g.emplace_back(v); },
        [](const C& c) { return std::to_string(c.custom_g.size()) + " generators"; }}},
      {"custom.h",
       {"one H generator per line", [](C& c, V, V v) { c.custom_h.emplace_back(v); },
        [](const C& c) { return std::to_string(c.custom_h.size()) + " generators"; }}},
  };
  return table;
}

}  // namespace

namespace {

void apply_raw(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto& table = settings();
  auto it = table.find(key);
  if (it == table.end()) throw BadValue("unknown setting '" + std::string(key) + "'");
  it->second.apply(cfg, key, trim(value));
  cfg.families.seed = cfg.seed;
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  try {
    apply_raw(cfg, key, value);
  } catch (const BadValue& e) {
    throw ParseError(e.what(), 0);
  }
}

void apply_config_text(RunConfig& cfg, std::string_view text) {
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!trim(line).empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError("expected key=value", pos);
      try {
        apply_raw(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
      } catch (const BadValue& e) {
        throw ParseError(e.what(), pos);
      }
    }
    pos = end + 1;
  }
}

std::shared_ptr<const HeckePair> resolve_pair(const RunConfig& cfg) {
  if (cfg.custom_g.empty()) {
    if (!cfg.custom_h.empty()) throw DomainError("custom.h given without custom.g");
    return std::make_shared<const HeckePair>(make_pair(cfg.pair));
  }
  std::vector<GroupElement> g, h;
  for (const auto& s : cfg.custom_g) g.push_back(parse_element(GroupKind::Permutation, s));
  for (const auto& s : cfg.custom_h) h.push_back(parse_element(GroupKind::Permutation, s));
  return std::make_shared<const HeckePair>(make_permutation_pair(cfg.custom_label, std::move(g), std::move(h)));
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  // The output directory is left out so artifacts do not depend on where they are written.
  for (const auto& [key, s] : settings())
    if (key != "out") j[key] = s.show(cfg);
  j["custom.g"] = cfg.custom_g;
  j["custom.h"] = cfg.custom_h;
  return j;
}

std::string config_schema() {
  const RunConfig defaults;
  std::string out;
  for (const auto& [key, s] : settings()) out += key + " = " + s.show(defaults) + "  # " + s.description + "\n";
  return out;
}

}  // namespace hecke
