#include <gtest/gtest.h>

#include "hecke/error.hpp"
#include "hecke/run_config.hpp"

using namespace hecke;

TEST(RunConfig, Defaults) {
  RunConfig cfg;
  const auto j = to_json(cfg);
  for (const char* key : {"growth.delta", "rd.padding", "rd.max_poly_slope", "rd.s_max", "kesten.N", "seed"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["rd.max_poly_slope"], "2.5");
  EXPECT_EQ(j["kesten.N"], "20");
  EXPECT_FALSE(j.contains("out"));
}

TEST(RunConfig, ParsesText) {
  RunConfig cfg;
  apply_config_text(cfg,
                    "# comment\n"
                    "pair = z:2\n"
                    "rmax=7\n"
                    "seed = 42   # trailing\n"
                    "\n"
                    "rd.s_step = 0.5\n"
                    "rd.s_max = 2\n"
                    "rd.signed = true\n"
                    "kesten.N = 8\n"
                    "growth.min_r2 = 0.9\n");
  EXPECT_EQ(cfg.pair, "z:2");
  EXPECT_EQ(cfg.r_max, 7u);
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.families.seed, 42u);
  EXPECT_EQ(cfg.rd.s_grid, (std::vector<double>{0, 0.5, 1, 1.5, 2}));
  EXPECT_TRUE(cfg.families.signed_sanity);
  EXPECT_EQ(cfg.kesten.N, 8u);
  EXPECT_DOUBLE_EQ(cfg.growth.min_r2, 0.9);
}

TEST(RunConfig, Errors) {
  RunConfig cfg;
  EXPECT_THROW(apply_config_text(cfg, "nonsense = 1\n"), ParseError);
  EXPECT_THROW(apply_config_text(cfg, "rmax\n"), ParseError);
  EXPECT_THROW(apply_setting(cfg, "rmax", "-3"), ParseError);
  EXPECT_THROW(apply_setting(cfg, "max_cosets", "0"), ParseError);
  EXPECT_THROW(apply_setting(cfg, "format", "xml"), ParseError);
  try {
    apply_config_text(cfg, "pair = z:1\nbogus = 2\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 11u);
  }
}

TEST(RunConfig, CustomPair) {
  RunConfig cfg;
  apply_config_text(cfg,
                    "custom.label = s3-custom\n"
                    "custom.g = perm 1 0 2\n"
                    "custom.g = perm 0 2 1\n"
                    "custom.h = perm 1 0 2\n");
  const auto pair = resolve_pair(cfg);
  EXPECT_EQ(pair->label, "s3-custom");
  auto store = enumerate_ball(pair, 3, Caps{});
  EXPECT_EQ(store.coset_count(), 3u);
  EXPECT_EQ(store.class_count(), 2u);

  RunConfig bad;
  apply_setting(bad, "custom.h", "perm 1 0 2");
  EXPECT_THROW(resolve_pair(bad), DomainError);
}
