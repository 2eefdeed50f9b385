// tests/test_nn.cc

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

#include <cmath>
#include <filesystem>

#include "base/error.h"
#include "base/rng.h"
#include "nn/checkpoint.h"
#include "nn/ema.h"
#include "nn/encoder.h"
#include "nn/norm.h"
#include "nn/parameter-set.h"
#include "tests/oracles.h"

using namespace ctclab;
using namespace ctclab::nn;

namespace {

Matrix RandomMatrix(int rows, int cols, Rng& rng, double stddev = 1.0) {
  std::normal_distribution<double> normal(0.0, stddev);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

FeatureSequence RandomFeatures(int frames, int dim, Rng& rng) {
  return FeatureSequence{RandomMatrix(frames, dim, rng)};
}

EncoderConfig TinyConfig(NormKind norm) {
  EncoderConfig cfg;
  cfg.num_blocks = 1;
  cfg.d_model = 8;
  cfg.num_heads = 2;
  cfg.d_ff = 8;
  cfg.conv_kernel = 3;
  cfg.norm_kind = norm;
  cfg.subsample_factor = 2;
  cfg.feature_dim = 3;
  cfg.vocab_size_with_blank = 4;
  return cfg;
}

double RelErr(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Scalar probe loss: sum of a fixed random weighting of the posteriors.
double ProbeLoss(const ParameterSet& params, const EncoderConfig& cfg,
                 const FeatureSequence& feats, Mode mode,
                 const Matrix& probe) {
  auto fwd = EncoderForward(params, cfg, feats, mode);
  return fwd.posteriors().log_probs.cwiseProduct(probe).sum();
}

}  // namespace

TEST_CASE("group norm standalone behaviour") {
  Rng rng = MakeRng(42);
  const int channels = 8, time = 6;
  Vector gain = Vector::Ones(channels);
  Vector bias = Vector::Zero(channels);

  SUBCASE("constant input maps to ~zero") {
    Matrix x = Matrix::Constant(channels, time, 3.25);
    Matrix y = GroupNorm(x, 4, gain, bias, 1e-5);
    CHECK(y.cwiseAbs().maxCoeff() < 1e-3);
  }
  SUBCASE("one group per channel equals the instance-norm reference") {
    for (int i = 0; i < 30; ++i) {
      Matrix x = RandomMatrix(channels, time, rng);
      Vector g = RandomMatrix(channels, 1, rng).col(0);
      Vector b = RandomMatrix(channels, 1, rng).col(0);
      Matrix ours = GroupNorm(x, channels, g, b, 1e-5);
      Matrix ref = testing::InstanceNormReference(x, g, b, 1e-5);
      CHECK((ours - ref).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("a single group equals the layer-norm-over-all reference") {
    for (int i = 0; i < 30; ++i) {
      Matrix x = RandomMatrix(channels, time, rng);
      Vector g = RandomMatrix(channels, 1, rng).col(0);
      Vector b = RandomMatrix(channels, 1, rng).col(0);
      Matrix ours = GroupNorm(x, 1, g, b, 1e-5);
      Matrix ref = testing::LayerNormOverAllReference(x, g, b, 1e-5);
      CHECK((ours - ref).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("bad group counts are rejected") {
    Matrix x = Matrix::Zero(channels, time);
    CHECK_THROWS_AS(GroupNorm(x, 3, gain, bias, 1e-5), ConfigError);
    CHECK_THROWS_AS(GroupNorm(x, 0, gain, bias, 1e-5), ConfigError);
  }
}

TEST_CASE("encoder forward contracts") {
  Rng rng = MakeRng(7);
  EncoderConfig cfg = TinyConfig(NormKind::Group(2));
  ParameterSet params = InitEncoderParameters(cfg, 123);

  SUBCASE("zero-length input yields zero-length posteriors") {
    FeatureSequence empty{Matrix::Zero(0, cfg.feature_dim)};
    auto fwd = EncoderForward(params, cfg, empty, Mode::kTrain);
    CHECK(fwd.posteriors().length() == 0);
    CHECK(fwd.posteriors().num_labels() == cfg.vocab_size_with_blank);
  }
  SUBCASE("output length is ceil(T / subsample)") {
    for (int frames : {1, 2, 3, 4, 5, 8, 9}) {
      FeatureSequence f = RandomFeatures(frames, cfg.feature_dim, rng);
      auto fwd = EncoderForward(params, cfg, f, Mode::kEval);
      CHECK(fwd.posteriors().length() == (frames + 1) / 2);
    }
  }
  SUBCASE("eval mode is bit-deterministic") {
    FeatureSequence f = RandomFeatures(9, cfg.feature_dim, rng);
    auto a = EncoderForward(params, cfg, f, Mode::kEval);
    auto b = EncoderForward(params, cfg, f, Mode::kEval);
    CHECK(a.posteriors().log_probs == b.posteriors().log_probs);
  }
  SUBCASE("posterior rows log-sum-exp to zero") {
    for (int i = 0; i < 100; ++i) {
      FeatureSequence f = RandomFeatures(1 + i % 10, cfg.feature_dim, rng);
      auto fwd = EncoderForward(params, cfg, f, Mode::kTrain);
      fwd.posteriors().Validate();  // checks lse==0 within 1e-6 and <= 0
    }
  }
  SUBCASE("wrong feature width is a config error") {
    FeatureSequence bad{Matrix::Zero(4, cfg.feature_dim + 1)};
    CHECK_THROWS_AS(EncoderForward(params, cfg, bad, Mode::kEval),
                    ConfigError);
  }
  SUBCASE("rejects invalid configs") {
    EncoderConfig bad = cfg;
    bad.num_heads = 3;  // does not divide d_model=8
    CHECK_THROWS_AS(bad.Validate(), ConfigError);
    bad = cfg;
    bad.conv_kernel = 4;
    CHECK_THROWS_AS(bad.Validate(), ConfigError);
    bad = cfg;
    bad.norm_kind = NormKind::Group(3);
    CHECK_THROWS_AS(bad.Validate(), ConfigError);
  }
}

TEST_CASE("encoder backward matches central finite differences") {
  Rng rng = MakeRng(99);
  const double h = 1e-5;
  const std::vector<NormKind> kinds = {NormKind::Group(2), NormKind::Batch(),
                                       NormKind::Instance(), NormKind::Layer()};
  int config_count = 0;
  for (int rep = 0; rep < 5; ++rep) {
    for (const NormKind& kind : kinds) {
      EncoderConfig cfg = TinyConfig(kind);
      uint64_t seed = 1000 + 17 * config_count;
      ParameterSet params = InitEncoderParameters(cfg, seed);
      FeatureSequence feats = RandomFeatures(5 + rep, cfg.feature_dim, rng);
      Mode mode = (config_count % 2 == 0) ? Mode::kTrain : Mode::kEval;

      auto fwd = EncoderForward(params, cfg, feats, mode);
      Matrix probe = RandomMatrix(fwd.posteriors().length(),
                                  cfg.vocab_size_with_blank, rng);
      ParameterSet grad = EncoderBackward(fwd, probe);

      double max_err = 0.0;
      for (int e = 0; e < params.size(); ++e) {
        if (!params.entry(e).trainable) continue;
        const Matrix& v = params.value(e);
        for (Eigen::Index r = 0; r < v.rows(); ++r) {
          for (Eigen::Index c = 0; c < v.cols(); ++c) {
            ParameterSet up = params, down = params;
            up.mutable_value(e)(r, c) += h;
            down.mutable_value(e)(r, c) -= h;
            double fd = (ProbeLoss(up, cfg, feats, mode, probe) -
                         ProbeLoss(down, cfg, feats, mode, probe)) /
                        (2 * h);
            max_err = std::max(max_err, RelErr(fd, grad.value(e)(r, c)));
          }
        }
      }
      CAPTURE(kind.Name());
      CHECK(max_err < 1e-5);
      ++config_count;
    }
  }
  CHECK(config_count == 20);
}

TEST_CASE("backward edge contracts") {
  EncoderConfig cfg = TinyConfig(NormKind::Group(4));
  ParameterSet params = InitEncoderParameters(cfg, 5);
  Rng rng = MakeRng(55);
  FeatureSequence feats = RandomFeatures(6, cfg.feature_dim, rng);

  SUBCASE("zero upstream gradient gives zero parameter gradient") {
    auto fwd = EncoderForward(params, cfg, feats, Mode::kTrain);
    Matrix zero = Matrix::Zero(fwd.posteriors().length(),
                               cfg.vocab_size_with_blank);
    ParameterSet grad = EncoderBackward(fwd, zero);
    for (int e = 0; e < grad.size(); ++e) {
      CHECK(grad.value(e).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("gradient is linear in the upstream gradient") {
    Matrix probe =
        RandomMatrix(3, cfg.vocab_size_with_blank, rng);  // T'=3 for T=6
    auto fwd1 = EncoderForward(params, cfg, feats, Mode::kTrain);
    ParameterSet g1 = EncoderBackward(fwd1, probe);
    auto fwd2 = EncoderForward(params, cfg, feats, Mode::kTrain);
    ParameterSet g2 = EncoderBackward(fwd2, 3.0 * probe);
    for (int e = 0; e < g1.size(); ++e) {
      CHECK((3.0 * g1.value(e) - g2.value(e)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("stale tape raises after parameter mutation") {
    auto fwd = EncoderForward(params, cfg, feats, Mode::kTrain);
    params.mutable_value(0)(0, 0) += 0.5;
    Matrix probe = Matrix::Zero(3, cfg.vocab_size_with_blank);
    CHECK_THROWS_AS(EncoderBackward(fwd, probe), InternalError);
  }
}

TEST_CASE("batch norm uses batch stats in train and running stats in eval") {
  EncoderConfig cfg = TinyConfig(NormKind::Batch());
  ParameterSet params = InitEncoderParameters(cfg, 21);
  Rng rng = MakeRng(22);
  FeatureSequence feats = RandomFeatures(8, cfg.feature_dim, rng);

  int rm = params.Find("block0.conv.innorm.running_mean");
  int rv = params.Find("block0.conv.innorm.running_var");
  REQUIRE(rm >= 0);
  REQUIRE(rv >= 0);
  CHECK_FALSE(params.entry(rm).trainable);

  // Train-mode output must not depend on the running statistics.
  auto base = EncoderForward(params, cfg, feats, Mode::kTrain);
  ParameterSet tweaked = params;
  tweaked.mutable_value(rm).array() += 3.0;
  tweaked.mutable_value(rv).array() += 5.0;
  auto tweaked_fwd = EncoderForward(tweaked, cfg, feats, Mode::kTrain);
  CHECK(base.posteriors().log_probs == tweaked_fwd.posteriors().log_probs);

  // Eval-mode output must.
  auto eval_base = EncoderForward(params, cfg, feats, Mode::kEval);
  auto eval_tweaked = EncoderForward(tweaked, cfg, feats, Mode::kEval);
  CHECK(eval_base.posteriors().log_probs !=
        eval_tweaked.posteriors().log_probs);

  // Stat updates blend with momentum 0.9 and land via ApplyStatUpdates.
  REQUIRE(base.stat_updates().size() == 2);
  ParameterSet updated = params;
  ApplyStatUpdates(base, &updated);
  for (const auto& u : base.stat_updates()) {
    CHECK(updated.value(u.entry_index) == u.new_value);
  }
  // A second identical train pass drifts the stats again.
  auto second = EncoderForward(updated, cfg, feats, Mode::kTrain);
  CHECK(second.stat_updates()[0].new_value != base.stat_updates()[0].new_value);
}

TEST_CASE("ema update") {
  EncoderConfig cfg = TinyConfig(NormKind::Group(2));
  ParameterSet offline = InitEncoderParameters(cfg, 1);
  ParameterSet online = InitEncoderParameters(cfg, 2);

  SUBCASE("alpha=1 keeps offline bit-identical") {
    ParameterSet out = EmaUpdate(offline, online, 1.0);
    for (int e = 0; e < out.size(); ++e) {
      CHECK(out.value(e) == offline.value(e));
    }
  }
  SUBCASE("alpha=0 copies online") {
    ParameterSet out = EmaUpdate(offline, online, 0.0);
    for (int e = 0; e < out.size(); ++e) {
      CHECK(out.value(e) == online.value(e));
    }
  }
  SUBCASE("alpha=0.5 averages") {
    ParameterSet a;
    a.Add("x", Matrix::Constant(1, 1, 1.0));
    ParameterSet b;
    b.Add("x", Matrix::Constant(1, 1, 0.0));
    CHECK(EmaUpdate(a, b, 0.5).value(0)(0, 0) == 0.5);
  }
  SUBCASE("incompatible sets are rejected") {
    ParameterSet a;
    a.Add("x", Matrix::Zero(1, 2));
    ParameterSet b;
    b.Add("y", Matrix::Zero(1, 2));
    CHECK_THROWS_AS(EmaUpdate(a, b, 0.5), InputDomainError);
  }
  SUBCASE("closed form after K updates with frozen online") {
    const int steps = 100;
    const double w = 0.5;
    double alpha = MomentumFromWeight(w, steps);
    ParameterSet phi = offline;
    for (int k = 0; k < steps; ++k) EmaUpdateInPlace(phi, online, alpha);
    // phi_K = alpha^K phi_0 + (1 - alpha^K) xi, with alpha^K = w.
    for (int e = 0; e < phi.size(); ++e) {
      Matrix expect = w * offline.value(e) + (1.0 - w) * online.value(e);
      CHECK((phi.value(e) - expect).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("momentum from weight") {
  CHECK(MomentumFromWeight(0.5, 1) == 0.5);
  CHECK(MomentumFromWeight(1.0, 17) == 1.0);
  double alpha = MomentumFromWeight(0.5, 100);
  CHECK(std::abs(std::pow(alpha, 100) - 0.5) < 1e-12);
  CHECK(alpha == doctest::Approx(0.99309249).epsilon(1e-8));
  CHECK_THROWS_AS(MomentumFromWeight(0.5, 0), InputDomainError);
  CHECK_THROWS_AS(MomentumFromWeight(0.0, 3), InputDomainError);
  CHECK_THROWS_AS(MomentumFromWeight(1.5, 3), InputDomainError);
}

TEST_CASE("checkpoint averaging") {
  EncoderConfig cfg = TinyConfig(NormKind::Group(2));
  ParameterSet a = InitEncoderParameters(cfg, 10);

  SUBCASE("single checkpoint is identity") {
    std::vector<ParameterSet> one = {a};
    ParameterSet avg = AverageCheckpoints(one);
    for (int e = 0; e < a.size(); ++e) CHECK(avg.value(e) == a.value(e));
  }
  SUBCASE("x and -x cancel") {
    ParameterSet neg = a;
    neg.Scale(-1.0);
    std::vector<ParameterSet> two = {a, neg};
    ParameterSet avg = AverageCheckpoints(two);
    for (int e = 0; e < a.size(); ++e) {
      CHECK(avg.value(e).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("mean of identical checkpoints is bit-exact for power-of-two k") {
    std::vector<ParameterSet> four = {a, a, a, a};
    ParameterSet avg = AverageCheckpoints(four);
    for (int e = 0; e < a.size(); ++e) CHECK(avg.value(e) == a.value(e));
    std::vector<ParameterSet> eight(8, a);
    avg = AverageCheckpoints(eight);
    for (int e = 0; e < a.size(); ++e) CHECK(avg.value(e) == a.value(e));
  }
  SUBCASE("empty list is an error") {
    std::vector<ParameterSet> none;
    CHECK_THROWS_AS(AverageCheckpoints(none), InputDomainError);
  }
}

TEST_CASE("checkpoint file round-trips bit-exactly") {
  EncoderConfig cfg = TinyConfig(NormKind::Batch());
  ParameterSet params = InitEncoderParameters(cfg, 77);
  auto dir = std::filesystem::temp_directory_path() / "ctclab_ckpt_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "m.ckpt").string();
  WriteCheckpoint(path, {cfg, params});
  Checkpoint back = ReadCheckpoint(path);
  CHECK(back.config == cfg);
  REQUIRE(back.params.size() == params.size());
  for (int e = 0; e < params.size(); ++e) {
    CHECK(back.params.entry(e).name == params.entry(e).name);
    CHECK(back.params.entry(e).trainable == params.entry(e).trainable);
    CHECK(back.params.value(e) == params.value(e));
  }
  auto bad = (dir / "bad.ckpt").string();
  {
    std::ofstream os(bad, std::ios::binary);
    os << "junk";
  }
  CHECK_THROWS_AS(ReadCheckpoint(bad), IoError);
  std::filesystem::remove_all(dir);
}
