// tests/test_pipeline.cc

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

// End-to-end exercises of the ctclab binary: the full pipeline on a tiny
// config, idempotent reruns, and the error surface for missing inputs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ctc/posteriors.h"

using namespace std::string_literals;

namespace {

namespace fs = std::filesystem;

const char* kTinyConfig = R"({
  "datagen": { "labeled_size": 10, "unlabeled_small": 16, "dev_size": 6,
               "test_size": 6, "lm_text_sentences": 40, "base_seed": 3 },
  "encoder": { "num_blocks": 1, "d_model": 16, "num_heads": 2, "d_ff": 32,
               "conv_kernel": 3, "num_groups": 4 },
  "train": { "epochs": 3, "batch_size": 4, "lr": 0.002, "seed": 12,
             "ipl_iters": 1, "ipl_epochs_per_iter": 2, "mpl_epochs": 2 },
  "beam": { "beam_size": 4, "nbest": 1 },
  "lm": { "order": 2 }
})";

struct PipelineDir {
  fs::path root;
  fs::path config;

  PipelineDir() {
    root = fs::temp_directory_path() / "ctclab_pipeline_test";
    fs::remove_all(root);
    fs::create_directories(root);
    config = root / "cfg.json";
    std::ofstream os(config);
    os << kTinyConfig;
  }
  ~PipelineDir() { fs::remove_all(root); }
};

int Run(const std::string& args) {
  std::string cmd = CTCLAB_TOOL_PATH + " "s + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::string ReadBytes(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("full pipeline runs end to end and reruns are bit-identical") {
  PipelineDir dirs;
  std::string base = "--config " + dirs.config.string() + " --workdir " +
                     (dirs.root / "work").string();

  REQUIRE(Run("gen-data " + base + " --setting in_domain_small") == 0);
  REQUIRE(Run("lm-train " + base + " --data data-in_domain_small --out lm.txt") == 0);
  REQUIRE(Run("train-seed " + base +
              " --data data-in_domain_small --out seed.ckpt --log seed.tsv") == 0);
  REQUIRE(Run("ipl " + base +
              " --data data-in_domain_small --init seed.ckpt --lm lm.txt "
              "--out ipl.ckpt") == 0);
  REQUIRE(Run("mpl " + base +
              " --data data-in_domain_small --init ipl.ckpt --out mpl.ckpt "
              "--offline-out mpl_offline.ckpt --log mpl.tsv") == 0);
  REQUIRE(Run("decode " + base +
              " --data data-in_domain_small --ckpt mpl.ckpt --split dev "
              "--mode beam --lm lm.txt --out hyp_dev.txt") == 0);
  REQUIRE(Run("decode " + base +
              " --data data-in_domain_small --ckpt mpl.ckpt --split test "
              "--mode greedy --out hyp_test.txt") == 0);
  REQUIRE(Run("eval " + base +
              " --hyp hyp_dev.txt --ref data-in_domain_small/dev.trn.txt "
              "--test-hyp hyp_test.txt --test-ref "
              "data-in_domain_small/test.trn.txt --seed-wer 50 "
              "--topline-wer 5 --method mpl --init ipl --out report.txt") == 0);

  fs::path work = dirs.root / "work";
  CHECK(fs::exists(work / "report.txt"));
  CHECK(fs::exists(work / "mpl.tsv"));
  CHECK(fs::exists(work / "mpl_offline.ckpt"));

  SUBCASE("evaluating a reference against itself reports zero WER") {
    REQUIRE(Run("eval " + base +
                " --hyp data-in_domain_small/dev.trn.txt "
                "--ref data-in_domain_small/dev.trn.txt --method self "
                "--out zero.txt") == 0);
    std::string report = ReadBytes(work / "zero.txt");
    CHECK(report.find("  0.0") != std::string::npos);
  }

  SUBCASE("rerunning seed training reproduces the checkpoint bit-exactly") {
    std::string first = ReadBytes(work / "seed.ckpt");
    REQUIRE(Run("train-seed " + base +
                " --data data-in_domain_small --out seed2.ckpt") == 0);
    CHECK(first == ReadBytes(work / "seed2.ckpt"));
  }

  SUBCASE("regenerating from the manifest is bit-identical") {
    REQUIRE(Run("gen-data " + base +
                " --from-manifest data-in_domain_small/manifest.txt "
                "--out data-regen") == 0);
    CHECK(ReadBytes(work / "data-in_domain_small" / "labeled" / "0000.feat") ==
          ReadBytes(work / "data-regen" / "labeled" / "0000.feat"));
    CHECK(ReadBytes(work / "data-in_domain_small" / "manifest.txt") ==
          ReadBytes(work / "data-regen" / "manifest.txt"));
  }

  SUBCASE("decoding pre-computed posterior containers") {
    fs::create_directories(work / "posts");
    // Two valid posterior files: frame argmaxes spell out token 0 and 1.
    for (int f = 0; f < 2; ++f) {
      ctclab::Matrix logp =
          ctclab::Matrix::Constant(3, 13, std::log(0.02));
      for (int t = 0; t < 3; ++t) logp(t, f) = std::log(1.0 - 12 * 0.02);
      ctclab::WritePosteriorsFile(
          (work / "posts" / ("u" + std::to_string(f) + ".post")).string(),
          ctclab::FramePosteriors{logp});
    }
    REQUIRE(Run("decode " + base +
                " --data data-in_domain_small --split dev --mode greedy "
                "--posteriors-dir posts --out hyp_post.txt") == 0);
    std::ifstream hyp(work / "hyp_post.txt");
    std::string l1, l2;
    REQUIRE(std::getline(hyp, l1));
    REQUIRE(std::getline(hyp, l2));
    CHECK(l1 == "ba");
    CHECK(l2 == "da");

    // A width mismatch against the vocabulary must fail loudly.
    fs::copy_file(work / "data-in_domain_small" / "dev" / "0000.feat",
                  work / "posts" / "zz.post");
    CHECK(Run("decode " + base +
              " --data data-in_domain_small --split dev --mode greedy "
              "--posteriors-dir posts --out hyp_post2.txt") != 0);
  }
}

TEST_CASE("missing inputs fail with a nonzero exit") {
  PipelineDir dirs;
  std::string base = "--config " + dirs.config.string() + " --workdir " +
                     (dirs.root / "work2").string();
  CHECK(Run("train-seed " + base + " --data nowhere --out s.ckpt") != 0);
  CHECK(Run("decode " + base +
            " --data nowhere --ckpt missing.ckpt --split dev --out h.txt") !=
        0);
  CHECK(Run("eval " + base + " --hyp missing.txt --ref missing.txt") != 0);
  // Bad config values are config errors.
  CHECK(Run("gen-data " + base +
            " --setting in_domain_small --set train.w=0") != 0);
}
