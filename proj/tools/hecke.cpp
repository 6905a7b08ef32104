#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hecke/error.hpp"
#include "hecke/growth.hpp"
#include "hecke/length.hpp"
#include "hecke/rd_analyzer.hpp"
#include "hecke/run_config.hpp"
#include "hecke/verification.hpp"

#ifndef HECKE_GOLDEN_DIR
#define HECKE_GOLDEN_DIR "tests/golden"
#endif

using namespace hecke;

namespace {

enum Exit { kOk = 0, kInvariant = 1, kUsage = 2, kPartial = 3 };

// Exit codes of verify-rd by verdict.
constexpr int kRdObstructed = 10;
constexpr int kRdSuperpolynomial = 11;

struct Context {
  RunConfig cfg;
  std::shared_ptr<const HeckePair> pair;
  std::string golden_dir = HECKE_GOLDEN_DIR;
  bool all_pairs = false;
};

std::string format_of(const RunConfig& cfg, const char* fallback) { return cfg.format.empty() ? fallback : cfg.format; }

void emit(const RunConfig& cfg, const std::string& name, const std::string& ext, const std::string& body) {
  if (cfg.out.empty()) {
    std::cout << body;
    return;
  }
  std::filesystem::create_directories(cfg.out);
  std::ofstream(std::filesystem::path(cfg.out) / (name + "." + ext), std::ios::binary) << body;
}

void emit_json(const RunConfig& cfg, const std::string& name, nlohmann::json j) {
  emit(cfg, name, "json", j.dump(2) + "\n");
}

// Every artifact carries the pair, seed and full configuration.
nlohmann::json header(const Context& ctx, std::uint32_t r_max) {
  return {{"pair", ctx.pair->label},
          {"generators", ctx.pair->generator_note},
          {"seed", ctx.cfg.seed},
          {"rmax", r_max},
          {"config", to_json(ctx.cfg)}};
}

std::string csv_header(const Context& ctx, std::uint32_t r_max) {
  return "# pair=" + ctx.pair->label + " seed=" + std::to_string(ctx.cfg.seed) + " rmax=" + std::to_string(r_max) + "\n";
}

std::uint32_t rmax_or(const Context& ctx, std::uint32_t fallback) { return ctx.cfg.r_max.value_or(fallback); }

CosetStore ball_or_pointwise(const Context& ctx, std::uint32_t r) {
  if (!ctx.pair->finitely_generated) return pointwise_store(ctx.pair, ctx.cfg.caps);
  return enumerate_ball(ctx.pair, r, ctx.cfg.caps);
}

int cmd_enumerate(const Context& ctx) {
  const auto r = rmax_or(ctx, 3);
  auto store = enumerate_ball(ctx.pair, r, ctx.cfg.caps);
  if (format_of(ctx.cfg, "json") == "csv") {
    std::string out = csv_header(ctx, r) + "id,rep,wl,dc\n";
    for (std::uint32_t i = 0; i < store.coset_count(); ++i) {
      const auto& rec = store.coset(CosetId{i});
      const auto& wl = rec.dc ? store.double_coset(*rec.dc).word_length : std::nullopt;
      out += std::to_string(i) + "," + render_element(store.rep(CosetId{i})) + "," + (wl ? std::to_string(*wl) : "") +
             "," + (rec.dc ? std::to_string(rec.dc->value) : "") + "\n";
    }
    emit(ctx.cfg, "enumerate", "csv", out);
  } else {
    auto j = header(ctx, r);
    j["store"] = store.snapshot();
    emit_json(ctx.cfg, "enumerate", j);
  }
  return kOk;
}

int cmd_ltable(const Context& ctx) {
  const auto r = rmax_or(ctx, 3);
  auto store = enumerate_ball(ctx.pair, r, ctx.cfg.caps);
  const bool unimodular = unimodularity_check(*ctx.pair, ctx.cfg.caps.max_orbit).verdict;
  const auto lw = word_length(store);
  const auto lc = characteristic_length(store, !unimodular, ctx.cfg.caps.max_orbit);
  const std::string char_note = unimodular ? "ln L" : "ln(L R)";
  const auto classes = store.class_ball(r);
  if (format_of(ctx.cfg, "csv") == "csv") {
    std::string out = csv_header(ctx, r) + "# l_char=" + char_note + "\ndc_id,rep,L,R,delta,l_word,l_char\n";
    for (auto d : classes) {
      const auto& rec = store.double_coset(d);
      out += std::to_string(d.value) + "," + render_element(rec.rep) + "," + std::to_string(rec.L) + "," +
             std::to_string(rec.R) + "," + to_string(rec.delta) + "," + format_double(lw.at(d)) + "," +
             format_double(lc.at(d)) + "\n";
    }
    emit(ctx.cfg, "ltable", "csv", out);
  } else {
    auto j = header(ctx, r);
    j["l_char"] = char_note;
    nlohmann::json rows = nlohmann::json::array();
    for (auto d : classes) {
      const auto& rec = store.double_coset(d);
      rows.push_back({{"dc_id", d.value},
                      {"rep", render_element(rec.rep)},
                      {"L", rec.L},
                      {"R", rec.R},
                      {"delta", to_string(rec.delta)},
                      {"l_word", format_double(lw.at(d))},
                      {"l_char", format_double(lc.at(d))}});
    }
    j["rows"] = rows;
    const auto proper = properness_profile(store, lc, r);
    nlohmann::json minima = nlohmann::json::array();
    for (double v : proper.shell_min) minima.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(format_double(v)));
    j["l_char_properness"] = {{"shell_min", minima}, {"growing", proper.growing}, {"note", proper.note}};
    emit_json(ctx.cfg, "ltable", j);
  }
  return kOk;
}

int cmd_growth(const Context& ctx) {
  const auto r = rmax_or(ctx, 6);
  auto store = enumerate_ball(ctx.pair, r, ctx.cfg.caps);
  const auto series = growth_series(store, word_length(store), r);
  const auto v = classify_growth(series, ctx.cfg.growth);
  if (format_of(ctx.cfg, "csv") == "csv") {
    std::string out = csv_header(ctx, r) + "# verdict=" + std::string(verdict_name(v.kind)) + "\nr,ball,shell\n";
    for (std::size_t i = 0; i < series.radii.size(); ++i)
      out += std::to_string(series.radii[i]) + "," + std::to_string(series.ball[i]) + "," +
             std::to_string(series.shell[i]) + "\n";
    emit(ctx.cfg, "growth", "csv", out);
  } else {
    auto j = header(ctx, r);
    j["ball"] = series.ball;
    j["shell"] = series.shell;
    j["verdict"] = {{"kind", verdict_name(v.kind)},
                    {"alpha_hat", format_double(v.alpha_hat)},
                    {"alpha_r2", format_double(v.alpha_r2)},
                    {"beta_hat", format_double(v.beta_hat)},
                    {"beta_r2", format_double(v.beta_r2)},
                    {"min_ball_ratio", format_double(v.min_ball_ratio)},
                    {"min_shell_ratio", format_double(v.min_shell_ratio)},
                    {"tail_start", v.tail_start},
                    {"note", v.note}};
    emit_json(ctx.cfg, "growth", j);
  }
  return v.kind == GrowthVerdict::Kind::Inconclusive ? kPartial : kOk;
}

RdProfile run_profile(const Context& ctx) {
  const auto r = rmax_or(ctx, default_profile_radius(*ctx.pair));
  auto store = ball_or_pointwise(ctx, r + ctx.cfg.rd.padding);
  HeckeAlgebra alg(store);
  if (!ctx.pair->finitely_generated) {
    // Only the unimodularity gate can be evaluated without a ball.
    const auto l = custom_length("none", {{CosetStore::identity_class(), 0.0}});
    return rd_profile(alg, l, r, ctx.cfg.families, ctx.cfg.rd);
  }
  return rd_profile(alg, word_length(store), r, ctx.cfg.families, ctx.cfg.rd);
}

void emit_profile(const Context& ctx, const RdProfile& p) {
  if (format_of(ctx.cfg, "json") == "csv") {
    emit(ctx.cfg, "rd_profile", "csv",
         csv_header(ctx, p.r_max) + "# verdict=" + std::string(verdict_name(p.verdict)) + "\n" + to_csv(p));
  } else {
    auto j = header(ctx, p.r_max);
    j["profile"] = to_json(p);
    emit_json(ctx.cfg, "rd_profile", j);
  }
}

int cmd_rd_profile(const Context& ctx) {
  const auto p = run_profile(ctx);
  emit_profile(ctx, p);
  return p.verdict == RdProfile::Verdict::Inconclusive ? kPartial : kOk;
}

int cmd_verify_rd(const Context& ctx) {
  const auto p = run_profile(ctx);
  emit_profile(ctx, p);
  switch (p.verdict) {
    case RdProfile::Verdict::PolynomialCompatible: return kOk;
    case RdProfile::Verdict::ObstructedNonunimodular: return kRdObstructed;
    case RdProfile::Verdict::SuperpolynomialRatio: return kRdSuperpolynomial;
    case RdProfile::Verdict::Inconclusive: return kPartial;
  }
  return kPartial;
}

int cmd_kesten(const Context& ctx) {
  const auto r = rmax_or(ctx, 1 + ctx.cfg.kesten.padding);
  auto store = enumerate_ball(ctx.pair, r, ctx.cfg.caps);
  HeckeAlgebra alg(store);
  const auto f = kesten_default_element(alg);
  const auto k = kesten_diagnostic(alg, f, ctx.cfg.kesten);
  if (format_of(ctx.cfg, "json") == "csv") {
    emit(ctx.cfg, "kesten", "csv",
         csv_header(ctx, r) + "# amenability_index=" + format_double(k.index) + "\n" + to_csv(k));
  } else {
    auto j = header(ctx, r);
    j["kesten"] = to_json(k);
    emit_json(ctx.cfg, "kesten", j);
  }
  return k.moments_complete ? kOk : kPartial;
}

int cmd_hecke_check(const Context& ctx) {
  const auto r = rmax_or(ctx, 3);
  const auto rep = verify_hecke(ctx.pair, r, ctx.cfg.caps);
  auto j = header(ctx, r);
  j["verdict"] = rep.verdict == HeckeReport::Verdict::Hecke ? "Hecke" : "Inconclusive";
  j["depth"] = rep.depth;
  j["classes"] = rep.classes;
  j["max_L"] = rep.max_L;
  j["max_R"] = rep.max_R;
  j["reason"] = rep.reason;
  emit_json(ctx.cfg, "hecke_check", j);
  return rep.verdict == HeckeReport::Verdict::Hecke ? kOk : kPartial;
}

int cmd_structure(const Context& ctx) {
  const auto r = rmax_or(ctx, 1);
  auto store = enumerate_ball(ctx.pair, r, ctx.cfg.caps);
  HeckeAlgebra alg(store);
  const auto csv = structure_constants_csv(alg, store.class_ball(r));
  if (format_of(ctx.cfg, "csv") == "csv") {
    emit(ctx.cfg, "structure", "csv", csv_header(ctx, r) + csv);
  } else {
    auto j = header(ctx, r);
    j["structure_csv"] = csv;
    emit_json(ctx.cfg, "structure", j);
  }
  return kOk;
}

int cmd_snapshot(const Context& ctx) {
  if (!ctx.all_pairs) {
    emit_json(ctx.cfg, golden_file_name(ctx.pair->label).substr(0, golden_file_name(ctx.pair->label).size() - 5),
              golden_document(ctx.pair->label));
    return kOk;
  }
  if (ctx.cfg.out.empty()) throw DomainError("snapshot --all needs --out");
  for (const auto& label : catalog_labels()) {
    const auto name = golden_file_name(label);
    emit_json(ctx.cfg, name.substr(0, name.size() - 5), golden_document(label));
  }
  return kOk;
}

int cmd_verify(const Context& ctx) {
  std::vector<SuiteReport> suites;
  suites.push_back(finite_oracle_suite());
  suites.push_back(algebra_law_suite(20, ctx.cfg.seed));
  suites.push_back(length_axiom_suite());
  suites.push_back(golden_suite(ctx.golden_dir));
  bool ok = true;
  nlohmann::json j = {{"seed", ctx.cfg.seed}, {"golden_dir", ctx.golden_dir}};
  std::string text;
  for (const auto& s : suites) {
    ok = ok && s.ok();
    j["suites"].push_back({{"name", s.name}, {"checks", s.checks}, {"failures", s.failures}});
    text += (s.ok() ? "ok   " : "FAIL ") + s.name + " (" + std::to_string(s.checks) + " checks)\n";
    for (const auto& f : s.failures) text += "     " + f + "\n";
  }
  if (ctx.cfg.format == "json")
    emit_json(ctx.cfg, "verify", j);
  else
    emit(ctx.cfg, "verify", "txt", text);
  return ok ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hecke pair explorer: cosets, Hecke algebras, growth and operator-norm diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx;
  std::string pair, config_file, out;
  std::optional<std::uint32_t> rmax;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_cosets, max_orbit;
  std::vector<std::string> sets;
  bool json = false, csv = false;
  app.add_option("--pair", pair, "catalog label (sl2z1p:p, psl2z1p:p, bc, bcp:p, z:d, dinf, s3-h12, s4-h12, s4-h12-34)");
  app.add_option("--rmax", rmax, "radius");
  app.add_option("--seed", seed, "seed for randomized families");
  app.add_option("--max-cosets", max_cosets, "coset cap");
  app.add_option("--max-orbit", max_orbit, "orbit cap");
  app.add_option("--out", out, "output directory (stdout when omitted)");
  app.add_option("--config", config_file, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", sets, "extra key=value setting, repeatable");
  auto* json_flag = app.add_flag("--json", json, "JSON output");
  app.add_flag("--csv", csv, "CSV output")->excludes(json_flag);

  std::map<std::string, std::function<int(const Context&)>> commands = {
      {"enumerate", cmd_enumerate}, {"ltable", cmd_ltable},         {"growth", cmd_growth},
      {"rd-profile", cmd_rd_profile}, {"verify-rd", cmd_verify_rd}, {"kesten", cmd_kesten},
      {"verify", cmd_verify},       {"snapshot", cmd_snapshot},     {"hecke-check", cmd_hecke_check},
      {"structure", cmd_structure},
  };
  const std::map<std::string, std::string> help = {
      {"enumerate", "enumerate the Schreier ball and its double cosets"},
      {"ltable", "per-class L, R, delta and lengths"},
      {"growth", "growth series and verdict"},
      {"rd-profile", "operator-norm ratios for test functions"},
      {"verify-rd", "rd-profile with the verdict as exit code (0, 10 obstructed, 11 superpolynomial, 3)"},
      {"kesten", "moments and amenability index of the default element"},
      {"verify", "oracle, law, length and golden-snapshot suites"},
      {"snapshot", "write the regression snapshot of a pair"},
      {"hecke-check", "bounded check that every class has finitely many cosets"},
      {"structure", "structure constants among classes of the ball"},
  };
  std::string chosen;
  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->callback([&chosen, name = name] { chosen = name; });
    if (name == "verify") sub->add_option("--golden", ctx.golden_dir, "directory of golden snapshots");
    if (name == "snapshot") sub->add_flag("--all", ctx.all_pairs, "every catalog pair (needs --out)");
  }
  app.add_subcommand("schema", "print the configuration keys and defaults")->callback([&chosen] { chosen = "schema"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      std::stringstream text;
      text << in.rdbuf();
      apply_config_text(ctx.cfg, text.str());
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError("--set expects key=value", 0);
      apply_setting(ctx.cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!pair.empty()) ctx.cfg.pair = pair;
    if (rmax) ctx.cfg.r_max = rmax;
    if (seed) apply_setting(ctx.cfg, "seed", std::to_string(*seed));
    if (max_cosets) apply_setting(ctx.cfg, "max_cosets", std::to_string(*max_cosets));
    if (max_orbit) apply_setting(ctx.cfg, "max_orbit", std::to_string(*max_orbit));
    if (!out.empty()) ctx.cfg.out = out;
    if (json) ctx.cfg.format = "json";
    if (csv) ctx.cfg.format = "csv";
    if (chosen == "schema") {
      std::cout << config_schema();
      return kOk;
    }
    ctx.pair = resolve_pair(ctx.cfg);
    return commands.at(chosen)(ctx);
  } catch (const ParseError& e) {
    std::cerr << "hecke: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "hecke: " << e.what() << "\n";
    return kUsage;
  } catch (const CapExceeded& e) {
    std::cerr << "hecke: " << e.what() << "\n";
    return kPartial;
  } catch (const BallIncomplete& e) {
    std::cerr << "hecke: " << e.what() << "\n";
    return kPartial;
  } catch (const NotFinitelyGenerated& e) {
    std::cerr << "hecke: " << e.what() << "\n";
    return kPartial;
  } catch (const Error& e) {
    std::cerr << "hecke: " << e.what() << "\n";
    return kInvariant;
  }
}
