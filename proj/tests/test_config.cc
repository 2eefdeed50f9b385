// tests/test_config.cc

// Copyright 2026  ctclab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "base/error.h"
#include "config/run-config.h"

using namespace ctclab;
using namespace ctclab::config;

TEST_CASE("config round-trips parse -> serialize -> parse") {
  RunConfig cfg = DefaultRunConfig();
  cfg.train.epochs = 17;
  cfg.encoder.norm_kind = nn::NormKind::Batch();
  cfg.lm.smoothing = lm::Smoothing::AddK(0.25);
  cfg.beam.lm_weight = 0.5;

  std::string text = SerializeRunConfig(cfg);
  RunConfig back = ParseRunConfig(text, "test");
  CHECK(SerializeRunConfig(back) == text);
  CHECK(back.train.epochs == 17);
  CHECK(back.encoder.norm_kind == nn::NormKind::Batch());
  CHECK(back.lm.smoothing.kind == lm::Smoothing::kAddK);
  CHECK(back.lm.smoothing.k == 0.25);
  CHECK(back.beam.lm_weight == 0.5);
}

TEST_CASE("partial configs keep defaults for unset keys") {
  RunConfig cfg = ParseRunConfig(R"({"train": {"epochs": 3}})", "test");
  CHECK(cfg.train.epochs == 3);
  CHECK(cfg.train.batch_size == DefaultRunConfig().train.batch_size);
  CHECK(cfg.encoder.d_model == DefaultRunConfig().encoder.d_model);
}

TEST_CASE("set overrides") {
  RunConfig cfg = DefaultRunConfig();
  cfg = ApplyOverride(cfg, "train.epochs=9");
  CHECK(cfg.train.epochs == 9);
  cfg = ApplyOverride(cfg, "encoder.norm_kind=instance");
  CHECK(cfg.encoder.norm_kind == nn::NormKind::Instance());
  cfg = ApplyOverride(cfg, "beam.lm_weight=0.25");
  CHECK(cfg.beam.lm_weight == 0.25);
  cfg = ApplyOverride(cfg, "paths.workdir=elsewhere");
  CHECK(cfg.paths.workdir == "elsewhere");

  CHECK_THROWS_AS(ApplyOverride(cfg, "nonsense"), ConfigError);
  CHECK_THROWS_AS(ApplyOverride(cfg, "nosection.key=1"), ConfigError);
  CHECK_THROWS_AS(ApplyOverride(cfg, "train.nokey=1"), ConfigError);
}

TEST_CASE("validation rejects inconsistent sections") {
  RunConfig cfg = DefaultRunConfig();
  cfg.encoder.feature_dim = cfg.datagen.feature_dim + 1;
  CHECK_THROWS_AS(cfg.Validate(), ConfigError);

  cfg = DefaultRunConfig();
  cfg.encoder.vocab_size_with_blank = 5;
  CHECK_THROWS_AS(cfg.Validate(), ConfigError);

  cfg = DefaultRunConfig();
  cfg.train.w = 0.0;
  CHECK_THROWS_AS(cfg.Validate(), ConfigError);

  CHECK_THROWS_AS(ParseRunConfig("{not json", "test"), ConfigError);
  CHECK_THROWS_AS(ParseRunConfig(R"({"mystery": {}})", "test"), ConfigError);
}

TEST_CASE("config file io") {
  auto dir = std::filesystem::temp_directory_path() / "ctclab_cfg";
  std::filesystem::create_directories(dir);
  auto path = (dir / "cfg.json").string();
  RunConfig cfg = DefaultRunConfig();
  cfg.train.seed = 777;
  WriteRunConfigFile(path, cfg);
  RunConfig back = LoadRunConfigFile(path);
  CHECK(back.train.seed == 777);
  CHECK_THROWS_AS(LoadRunConfigFile((dir / "absent.json").string()), IoError);
  std::filesystem::remove_all(dir);
}
