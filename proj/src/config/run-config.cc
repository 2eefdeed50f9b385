// config/run-config.cc

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

#include "config/run-config.h"

#include <fstream>

#include <json.hpp>

#include "base/error.h"

namespace ctclab::config {

namespace {

using nlohmann::json;

json ToJson(const RunConfig& c) {
  json j;
  const auto& d = c.datagen;
  j["datagen"] = {{"num_tokens", d.num_tokens},
                  {"feature_dim", d.feature_dim},
                  {"duration_min", d.duration_min},
                  {"duration_max", d.duration_max},
                  {"sentence_min", d.sentence_min},
                  {"sentence_max", d.sentence_max},
                  {"base_noise_std", d.base_noise_std},
                  {"out_noise_std", d.out_noise_std},
                  {"out_rotation_deg", d.out_rotation_deg},
                  {"grammar_branching", d.grammar_branching},
                  {"end_prob", d.end_prob},
                  {"labeled_size", d.labeled_size},
                  {"unlabeled_small", d.unlabeled_small},
                  {"unlabeled_large", d.unlabeled_large},
                  {"dev_size", d.dev_size},
                  {"test_size", d.test_size},
                  {"lm_text_sentences", d.lm_text_sentences},
                  {"base_seed", d.base_seed}};
  const auto& e = c.encoder;
  j["encoder"] = {{"num_blocks", e.num_blocks},
                  {"d_model", e.d_model},
                  {"num_heads", e.num_heads},
                  {"d_ff", e.d_ff},
                  {"conv_kernel", e.conv_kernel},
                  {"norm_kind", e.norm_kind.Name()},
                  {"num_groups", e.norm_kind.num_groups},
                  {"subsample_factor", e.subsample_factor},
                  {"feature_dim", e.feature_dim},
                  {"vocab_size_with_blank", e.vocab_size_with_blank}};
  const auto& a = c.augment;
  j["augment"] = {{"num_time_masks", a.num_time_masks},
                  {"max_time_mask_width", a.max_time_mask_width},
                  {"num_freq_masks", a.num_freq_masks},
                  {"max_freq_mask_width", a.max_freq_mask_width},
                  {"mask_value", a.mask_value},
                  {"enabled", a.enabled}};
  const auto& t = c.train;
  j["train"] = {
      {"epochs", t.epochs},
      {"batch_size", t.batch_size},
      {"optimizer",
       t.optimizer.kind == ssl::OptimizerConfig::kAdam ? "adam" : "sgd"},
      {"lr", t.optimizer.lr},
      {"momentum", t.optimizer.momentum},
      {"beta1", t.optimizer.beta1},
      {"beta2", t.optimizer.beta2},
      {"eps", t.optimizer.eps},
      {"lr_schedule",
       t.lr_schedule == ssl::LrSchedule::kWarmup ? "warmup" : "constant"},
      {"warmup_steps", t.warmup_steps},
      {"grad_clip_norm", t.grad_clip_norm},
      {"seed", t.seed},
      {"w", t.w},
      {"ipl_iters", t.ipl_iters},
      {"ipl_epochs_per_iter", t.ipl_epochs_per_iter},
      {"mpl_epochs", t.mpl_epochs},
      {"checkpoint_avg_n", t.checkpoint_avg_n},
      {"sup_ratio_override", t.sup_ratio_override}};
  const auto& b = c.beam;
  j["beam"] = {{"beam_size", b.beam_size},
               {"prune_threshold", b.prune_threshold},
               {"lm_weight", b.lm_weight},
               {"insertion_bonus", b.insertion_bonus},
               {"nbest", b.nbest}};
  j["lm"] = {{"order", c.lm.order},
             {"smoothing", c.lm.smoothing.kind == lm::Smoothing::kAddK
                               ? "add_k"
                               : "witten_bell"},
             {"add_k", c.lm.smoothing.k},
             {"corpus", c.lm.corpus}};
  j["paths"] = {{"workdir", c.paths.workdir}};
  return j;
}

template <typename T>
void Fetch(const json& section, const char* key, T* out,
           const std::string& where) {
  auto it = section.find(key);
  if (it == section.end()) return;  // keep the default
  try {
    *out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

RunConfig FromJson(const json& j, const std::string& name) {
  RunConfig c = DefaultRunConfig();
  for (const auto& [section, value] : j.items()) {
    if (section != "datagen" && section != "encoder" &&
        section != "augment" && section != "train" && section != "beam" &&
        section != "lm" && section != "paths") {
      throw ConfigError(name + ": unknown config section '" + section + "'");
    }
    if (!value.is_object()) {
      throw ConfigError(name + ": section '" + section +
                        "' must be an object");
    }
  }
  if (j.contains("datagen")) {
    const json& d = j["datagen"];
    auto& g = c.datagen;
    Fetch(d, "num_tokens", &g.num_tokens, "datagen");
    Fetch(d, "feature_dim", &g.feature_dim, "datagen");
    Fetch(d, "duration_min", &g.duration_min, "datagen");
    Fetch(d, "duration_max", &g.duration_max, "datagen");
    Fetch(d, "sentence_min", &g.sentence_min, "datagen");
    Fetch(d, "sentence_max", &g.sentence_max, "datagen");
    Fetch(d, "base_noise_std", &g.base_noise_std, "datagen");
    Fetch(d, "out_noise_std", &g.out_noise_std, "datagen");
    Fetch(d, "out_rotation_deg", &g.out_rotation_deg, "datagen");
    Fetch(d, "grammar_branching", &g.grammar_branching, "datagen");
    Fetch(d, "end_prob", &g.end_prob, "datagen");
    Fetch(d, "labeled_size", &g.labeled_size, "datagen");
    Fetch(d, "unlabeled_small", &g.unlabeled_small, "datagen");
    Fetch(d, "unlabeled_large", &g.unlabeled_large, "datagen");
    Fetch(d, "dev_size", &g.dev_size, "datagen");
    Fetch(d, "test_size", &g.test_size, "datagen");
    Fetch(d, "lm_text_sentences", &g.lm_text_sentences, "datagen");
    Fetch(d, "base_seed", &g.base_seed, "datagen");
  }
  if (j.contains("encoder")) {
    const json& d = j["encoder"];
    auto& e = c.encoder;
    Fetch(d, "num_blocks", &e.num_blocks, "encoder");
    Fetch(d, "d_model", &e.d_model, "encoder");
    Fetch(d, "num_heads", &e.num_heads, "encoder");
    Fetch(d, "d_ff", &e.d_ff, "encoder");
    Fetch(d, "conv_kernel", &e.conv_kernel, "encoder");
    std::string kind = e.norm_kind.Name();
    int groups = e.norm_kind.num_groups;
    Fetch(d, "norm_kind", &kind, "encoder");
    Fetch(d, "num_groups", &groups, "encoder");
    e.norm_kind = nn::NormKind::FromName(kind, groups);
    Fetch(d, "subsample_factor", &e.subsample_factor, "encoder");
    Fetch(d, "feature_dim", &e.feature_dim, "encoder");
    Fetch(d, "vocab_size_with_blank", &e.vocab_size_with_blank, "encoder");
  }
  if (j.contains("augment")) {
    const json& d = j["augment"];
    auto& a = c.augment;
    Fetch(d, "num_time_masks", &a.num_time_masks, "augment");
    Fetch(d, "max_time_mask_width", &a.max_time_mask_width, "augment");
    Fetch(d, "num_freq_masks", &a.num_freq_masks, "augment");
    Fetch(d, "max_freq_mask_width", &a.max_freq_mask_width, "augment");
    Fetch(d, "mask_value", &a.mask_value, "augment");
    Fetch(d, "enabled", &a.enabled, "augment");
  }
  if (j.contains("train")) {
    const json& d = j["train"];
    auto& t = c.train;
    Fetch(d, "epochs", &t.epochs, "train");
    Fetch(d, "batch_size", &t.batch_size, "train");
    std::string opt =
        t.optimizer.kind == ssl::OptimizerConfig::kAdam ? "adam" : "sgd";
    Fetch(d, "optimizer", &opt, "train");
    if (opt == "adam") {
      t.optimizer.kind = ssl::OptimizerConfig::kAdam;
    } else if (opt == "sgd") {
      t.optimizer.kind = ssl::OptimizerConfig::kSgd;
    } else {
      throw ConfigError("train.optimizer must be adam or sgd");
    }
    Fetch(d, "lr", &t.optimizer.lr, "train");
    Fetch(d, "momentum", &t.optimizer.momentum, "train");
    Fetch(d, "beta1", &t.optimizer.beta1, "train");
    Fetch(d, "beta2", &t.optimizer.beta2, "train");
    Fetch(d, "eps", &t.optimizer.eps, "train");
    std::string sched =
        t.lr_schedule == ssl::LrSchedule::kWarmup ? "warmup" : "constant";
    Fetch(d, "lr_schedule", &sched, "train");
    if (sched == "warmup") {
      t.lr_schedule = ssl::LrSchedule::kWarmup;
    } else if (sched == "constant") {
      t.lr_schedule = ssl::LrSchedule::kConstant;
    } else {
      throw ConfigError("train.lr_schedule must be constant or warmup");
    }
    Fetch(d, "warmup_steps", &t.warmup_steps, "train");
    Fetch(d, "grad_clip_norm", &t.grad_clip_norm, "train");
    Fetch(d, "seed", &t.seed, "train");
    Fetch(d, "w", &t.w, "train");
    Fetch(d, "ipl_iters", &t.ipl_iters, "train");
    Fetch(d, "ipl_epochs_per_iter", &t.ipl_epochs_per_iter, "train");
    Fetch(d, "mpl_epochs", &t.mpl_epochs, "train");
    Fetch(d, "checkpoint_avg_n", &t.checkpoint_avg_n, "train");
    Fetch(d, "sup_ratio_override", &t.sup_ratio_override, "train");
  }
  if (j.contains("beam")) {
    const json& d = j["beam"];
    auto& b = c.beam;
    Fetch(d, "beam_size", &b.beam_size, "beam");
    Fetch(d, "prune_threshold", &b.prune_threshold, "beam");
    Fetch(d, "lm_weight", &b.lm_weight, "beam");
    Fetch(d, "insertion_bonus", &b.insertion_bonus, "beam");
    Fetch(d, "nbest", &b.nbest, "beam");
  }
  if (j.contains("lm")) {
    const json& d = j["lm"];
    Fetch(d, "order", &c.lm.order, "lm");
    std::string sm = c.lm.smoothing.kind == lm::Smoothing::kAddK
                         ? "add_k"
                         : "witten_bell";
    Fetch(d, "smoothing", &sm, "lm");
    double k = c.lm.smoothing.k;
    Fetch(d, "add_k", &k, "lm");
    if (sm == "add_k") {
      c.lm.smoothing = lm::Smoothing::AddK(k);
    } else if (sm == "witten_bell") {
      c.lm.smoothing = lm::Smoothing::WittenBell();
      c.lm.smoothing.k = k;
    } else {
      throw ConfigError("lm.smoothing must be add_k or witten_bell");
    }
    Fetch(d, "corpus", &c.lm.corpus, "lm");
  }
  if (j.contains("paths")) {
    Fetch(j["paths"], "workdir", &c.paths.workdir, "paths");
  }
  return c;
}

}  // namespace

void RunConfig::Validate() const {
  datagen.Validate();
  encoder.Validate();
  augment.Validate();
  train.Validate();
  beam.Validate();
  if (lm.order < 1) throw ConfigError("lm.order must be >= 1");
  if (paths.workdir.empty()) throw ConfigError("paths.workdir must be set");
  if (encoder.feature_dim != datagen.feature_dim) {
    throw ConfigError("encoder.feature_dim must match datagen.feature_dim");
  }
  if (encoder.vocab_size_with_blank != datagen.num_tokens + 1) {
    throw ConfigError(
        "encoder.vocab_size_with_blank must be datagen.num_tokens + 1");
  }
}

RunConfig DefaultRunConfig() { return RunConfig{}; }

std::string SerializeRunConfig(const RunConfig& cfg) {
  return ToJson(cfg).dump(2) + "\n";
}

RunConfig ParseRunConfig(const std::string& text, const std::string& name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(name + ": " + e.what());
  }
  return FromJson(j, name);
}

RunConfig LoadRunConfigFile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("missing input: " + path);
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  return ParseRunConfig(text, path);
}

void WriteRunConfigFile(const std::string& path, const RunConfig& cfg) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << SerializeRunConfig(cfg);
  if (!os) throw IoError("write failed: " + path);
}

RunConfig ApplyOverride(const RunConfig& cfg, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("--set expects section.key=value, got: " + assignment);
  }
  std::string path = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);
  auto dot = path.find('.');
  if (dot == std::string::npos) {
    throw ConfigError("--set key must be section.key, got: " + path);
  }
  std::string section = path.substr(0, dot);
  std::string key = path.substr(dot + 1);

  json j = ToJson(cfg);
  if (!j.contains(section)) {
    throw ConfigError("--set: unknown section '" + section + "'");
  }
  if (!j[section].contains(key)) {
    throw ConfigError("--set: unknown key '" + key + "' in section '" +
                      section + "'");
  }
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;  // plain string
  }
  j[section][key] = parsed;
  return FromJson(j, "--set " + assignment);
}

}  // namespace ctclab::config
