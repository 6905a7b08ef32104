#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hecke/coset_store.hpp"
#include "hecke/growth.hpp"
#include "hecke/rd_analyzer.hpp"

namespace hecke {

/// Everything a CLI run depends on. Defaults are the documented ones; every
/// field is echoed into the artifacts.
struct RunConfig {
  std::string pair = "z:1";
  std::optional<std::uint32_t> r_max;  // per-command default when unset
  std::uint64_t seed = 1;
  Caps caps;
  std::string out;     // output directory; stdout when empty
  std::string format;  // "json" or "csv"; per-command default when empty

  GrowthThresholds growth;
  RdThresholds rd;
  FamilySpec families;
  KestenOptions kesten;

  // Custom permutation pair ("custom.g" / "custom.h" lines, one element each).
  std::string custom_label = "custom";
  std::vector<std::string> custom_g;
  std::vector<std::string> custom_h;
};

/// Applies one key=value assignment. Throws ParseError on an unknown key or a
/// malformed value.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Line-oriented key=value text; '#' starts a comment, blank lines skipped.
/// ParseError offsets are byte offsets into the text.
void apply_config_text(RunConfig& cfg, std::string_view text);

/// Resolves the pair: custom permutation generators when present, the
/// catalog label otherwise.
std::shared_ptr<const HeckePair> resolve_pair(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);

/// Schema lines "key default description" for every recognized setting.
std::string config_schema();

}  // namespace hecke
