// tools/ctclab.cc

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

// Command-line front door for the semi-supervised CTC lab: dataset
// generation, LM training, seed/IPL/MPL training, decoding, and WER/WRR
// evaluation, all driven by one JSON run-config plus --set overrides.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "base/error.h"
#include "base/lock-file.h"
#include "base/log.h"
#include "config/run-config.h"
#include "ctc/ctc-loss.h"
#include "data/dataset-io.h"
#include "data/eval-access.h"
#include "data/generator.h"
#include "data/manifest.h"
#include "lm/ngram-lm.h"
#include "metrics/wer.h"
#include "nn/checkpoint.h"
#include "ssl/trainer.h"

namespace {

using namespace ctclab;
namespace fs = std::filesystem;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<uint64_t> seed;
  std::string workdir;
};

void AddCommonOptions(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path, "run-config JSON file")
      ->required();
  cmd->add_option("--set", args->overrides,
                  "override section.key=value (repeatable)");
  cmd->add_option("--seed", args->seed, "override train.seed");
  cmd->add_option("--workdir", args->workdir,
                  "override paths.workdir (artifact root)");
}

config::RunConfig ResolveConfig(const CommonArgs& args) {
  config::RunConfig cfg = config::LoadRunConfigFile(args.config_path);
  for (const std::string& assignment : args.overrides) {
    cfg = config::ApplyOverride(cfg, assignment);
  }
  if (args.seed.has_value()) cfg.train.seed = *args.seed;
  if (!args.workdir.empty()) cfg.paths.workdir = args.workdir;
  cfg.Validate();
  return cfg;
}

std::string Resolve(const config::RunConfig& cfg, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(cfg.paths.workdir) / path).string();
}

// Token-string WER without a vocabulary: hypothesis/reference files may
// be compared standalone.
std::vector<std::vector<std::string>> ReadTokenLines(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("missing input: " + path);
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> toks;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    lines.push_back(std::move(toks));
  }
  return lines;
}

double FileWer(const std::string& hyp_path, const std::string& ref_path) {
  auto hyp = ReadTokenLines(hyp_path);
  auto ref = ReadTokenLines(ref_path);
  if (hyp.size() != ref.size()) {
    throw InputDomainError("hypothesis/reference line counts differ (" +
                           std::to_string(hyp.size()) + " vs " +
                           std::to_string(ref.size()) + ")");
  }
  std::map<std::string, int> dict;
  auto to_ids = [&dict](const std::vector<std::string>& toks) {
    LabelSequence ids;
    for (const auto& t : toks) {
      ids.push_back(dict.emplace(t, static_cast<int>(dict.size()))
                        .first->second);
    }
    return ids;
  };
  std::vector<LabelSequence> refs, hyps;
  for (size_t i = 0; i < ref.size(); ++i) {
    refs.push_back(to_ids(ref[i]));
    hyps.push_back(to_ids(hyp[i]));
  }
  return metrics::CorpusBreakdown(refs, hyps).WerPercent();
}

lm::NgramModel LoadLm(const std::string& path, const Vocabulary& vocab) {
  return lm::ReadNgramFile(path, vocab);
}

int RunGenData(const CommonArgs& common, const std::string& setting,
               const std::string& out, const std::string& from_manifest) {
  config::RunConfig cfg = ResolveConfig(common);
  WorkdirLock lock(cfg.paths.workdir);
  data::SplitDataset ds =
      from_manifest.empty()
          ? data::MakeSetting(cfg.datagen, setting)
          : data::GenerateFromManifest(
                data::ReadManifestFile(Resolve(cfg, from_manifest)));
  std::string dir = Resolve(cfg, out.empty() ? "data-" + ds.manifest.setting
                                             : out);
  data::WriteDatasetDir(ds, dir);
  std::cout << "wrote dataset '" << ds.manifest.setting << "' to " << dir
            << " (labeled " << ds.labeled.size() << ", unlabeled "
            << ds.unlabeled.size() << ", dev " << ds.dev.size() << ", test "
            << ds.test.size() << ")\n";
  return 0;
}

int RunLmTrain(const CommonArgs& common, const std::string& data_dir,
               const std::string& out) {
  config::RunConfig cfg = ResolveConfig(common);
  WorkdirLock lock(cfg.paths.workdir);
  data::SplitDataset ds = data::LoadDatasetDir(Resolve(cfg, data_dir));
  Vocabulary vocab = ds.vocab();
  std::vector<LabelSequence> corpus;
  if (!cfg.lm.corpus.empty()) {
    corpus = data::ReadTranscripts(Resolve(cfg, cfg.lm.corpus), vocab);
  } else {
    // Labeled transcriptions combined with the dataset's text corpus.
    for (const auto& ex : ds.labeled) corpus.push_back(ex.transcript);
    corpus.insert(corpus.end(), ds.lm_text.begin(), ds.lm_text.end());
  }
  lm::NgramModel model =
      lm::TrainNgram(corpus, vocab, cfg.lm.order, cfg.lm.smoothing);
  std::string path = Resolve(cfg, out);
  lm::WriteNgramFile(path, model, vocab);
  std::cout << "trained order-" << cfg.lm.order << " LM on "
            << corpus.size() << " sentences -> " << path
            << " (train perplexity "
            << lm::Perplexity(model, corpus) << ")\n";
  return 0;
}

int RunTrainSeed(const CommonArgs& common, const std::string& data_dir,
                 const std::string& out, const std::string& log_path,
                 bool include_unlabeled_truth) {
  config::RunConfig cfg = ResolveConfig(common);
  WorkdirLock lock(cfg.paths.workdir);
  data::SplitDataset ds = data::LoadDatasetDir(Resolve(cfg, data_dir));
  if (include_unlabeled_truth) {
    // Topline: fully supervised training over the whole pool, via the
    // evaluation capability.
    auto truth = data::LoadUnlabeledTruth(
        Resolve(cfg, data_dir), ds.vocab(),
        data::EvalAccess::GrantForEvaluation());
    for (size_t i = 0; i < ds.unlabeled.size(); ++i) {
      ds.labeled.push_back({ds.unlabeled[i], truth[i]});
    }
    ds.unlabeled.clear();
  }
  ssl::TrainResult res = ssl::TrainSeed(ds, cfg.encoder, cfg.augment,
                                        cfg.train);
  nn::WriteCheckpoint(Resolve(cfg, out), {cfg.encoder, res.params});
  if (!log_path.empty()) res.log.WriteTsv(Resolve(cfg, log_path));
  std::cout << "seed training done: dev WER "
            << res.log.records.back().val_wer << "% at epoch "
            << res.log.records.back().epoch << ", checkpoint -> "
            << Resolve(cfg, out) << "\n";
  return 0;
}

int RunIplCmd(const CommonArgs& common, const std::string& data_dir,
              const std::string& init, const std::string& lm_path,
              const std::string& out, const std::string& log_path) {
  config::RunConfig cfg = ResolveConfig(common);
  WorkdirLock lock(cfg.paths.workdir);
  data::SplitDataset ds = data::LoadDatasetDir(Resolve(cfg, data_dir));
  nn::Checkpoint ckpt = nn::ReadCheckpoint(Resolve(cfg, init));
  std::unique_ptr<lm::NgramScorer> scorer;
  lm::NgramModel model;
  if (!lm_path.empty()) {
    model = LoadLm(Resolve(cfg, lm_path), ds.vocab());
    scorer = std::make_unique<lm::NgramScorer>(model);
  }
  ssl::TrainResult res =
      ssl::RunIpl(ckpt.params, ds, ckpt.config, cfg.augment, cfg.train,
                  cfg.beam, scorer.get());
  nn::WriteCheckpoint(Resolve(cfg, out), {ckpt.config, res.params});
  if (!log_path.empty()) res.log.WriteTsv(Resolve(cfg, log_path));
  std::cout << "ipl done (" << cfg.train.ipl_iters << " iterations x "
            << cfg.train.ipl_epochs_per_iter << " epochs): dev WER "
            << res.log.records.back().val_wer << "% -> "
            << Resolve(cfg, out) << "\n";
  return 0;
}

int RunMplCmd(const CommonArgs& common, const std::string& data_dir,
              const std::string& init, const std::string& out,
              const std::string& offline_out, const std::string& log_path) {
  config::RunConfig cfg = ResolveConfig(common);
  WorkdirLock lock(cfg.paths.workdir);
  data::SplitDataset ds = data::LoadDatasetDir(Resolve(cfg, data_dir));
  nn::Checkpoint ckpt = nn::ReadCheckpoint(Resolve(cfg, init));
  ssl::MplResult res =
      ssl::RunMpl(ckpt.params, ds, ckpt.config, cfg.augment, cfg.train);
  nn::WriteCheckpoint(Resolve(cfg, out), {ckpt.config, res.online});
  if (!offline_out.empty()) {
    nn::WriteCheckpoint(Resolve(cfg, offline_out),
                        {ckpt.config, res.offline});
  }
  if (!log_path.empty()) res.log.WriteTsv(Resolve(cfg, log_path));
  std::cout << "mpl done (" << cfg.train.mpl_epochs << " epochs, w="
            << cfg.train.w << "): dev WER "
            << res.log.records.back().val_wer << "% -> "
            << Resolve(cfg, out) << "\n";
  return 0;
}

int RunDecode(const CommonArgs& common, const std::string& data_dir,
              const std::string& ckpt_path, const std::string& split,
              const std::string& mode, const std::string& lm_path,
              const std::string& out, const std::string& posteriors_dir) {
  config::RunConfig cfg = ResolveConfig(common);
  WorkdirLock lock(cfg.paths.workdir);
  data::SplitDataset ds = data::LoadDatasetDir(Resolve(cfg, data_dir));
  Vocabulary vocab = ds.vocab();

  std::vector<FramePosteriors> posteriors;
  if (!posteriors_dir.empty()) {
    // Pre-computed posterior containers, sorted by filename.
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(Resolve(cfg, posteriors_dir))) {
      if (e.path().extension() == ".post") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw IoError("no .post files under " + Resolve(cfg, posteriors_dir));
    }
    for (const auto& f : files) {
      posteriors.push_back(ReadPosteriorsFile(f.string()));
    }
  } else {
    if (ckpt_path.empty()) {
      throw ConfigError("decode needs --ckpt (or --posteriors-dir)");
    }
    nn::Checkpoint ckpt = nn::ReadCheckpoint(Resolve(cfg, ckpt_path));
    std::vector<const FeatureSequence*> inputs;
    if (split == "dev") {
      for (const auto& ex : ds.dev) inputs.push_back(&ex.features);
    } else if (split == "test") {
      for (const auto& ex : ds.test) inputs.push_back(&ex.features);
    } else if (split == "unlabeled") {
      for (const auto& f : ds.unlabeled) inputs.push_back(&f);
    } else {
      throw ConfigError("decode --split must be dev, test, or unlabeled");
    }
    for (const FeatureSequence* f : inputs) {
      auto fwd = nn::EncoderForward(ckpt.params, ckpt.config, *f,
                                    nn::Mode::kEval);
      posteriors.push_back(fwd.posteriors());
    }
  }

  std::unique_ptr<lm::NgramScorer> scorer;
  lm::NgramModel model;
  if (!lm_path.empty()) {
    model = LoadLm(Resolve(cfg, lm_path), vocab);
    scorer = std::make_unique<lm::NgramScorer>(model);
  }

  std::vector<LabelSequence> hyps;
  for (const FramePosteriors& post : posteriors) {
    if (mode == "greedy") {
      hyps.push_back(BestPathDecode(post, vocab));
    } else if (mode == "beam") {
      auto ranked = PrefixBeamSearch(post, vocab, cfg.beam, scorer.get());
      hyps.push_back(ranked.at(0).labels);
    } else {
      throw ConfigError("decode --mode must be greedy or beam");
    }
  }
  data::WriteTranscripts(Resolve(cfg, out), hyps, vocab);
  std::cout << "decoded " << hyps.size() << " utterances (" << mode
            << (scorer ? ", with LM" : "") << ") -> " << Resolve(cfg, out)
            << "\n";
  return 0;
}

int RunEval(const CommonArgs& common, const std::string& hyp,
            const std::string& ref, const std::string& hyp_lm,
            const std::string& test_hyp, const std::string& test_ref,
            const std::string& test_hyp_lm, double seed_wer,
            double topline_wer, const std::string& method,
            const std::string& init, const std::string& out) {
  config::RunConfig cfg = ResolveConfig(common);
  metrics::ReportRow row;
  row.method = method;
  row.init = init;
  row.dev_wer = FileWer(Resolve(cfg, hyp), Resolve(cfg, ref));
  if (!hyp_lm.empty()) {
    row.dev_wer_lm = FileWer(Resolve(cfg, hyp_lm), Resolve(cfg, ref));
  }
  if (!test_hyp.empty()) {
    row.test_wer = FileWer(Resolve(cfg, test_hyp), Resolve(cfg, test_ref));
    if (!test_hyp_lm.empty()) {
      row.test_wer_lm =
          FileWer(Resolve(cfg, test_hyp_lm), Resolve(cfg, test_ref));
    }
  }
  if (seed_wer >= 0.0 && topline_wer >= 0.0) {
    double anchor = row.test_wer >= 0.0 ? row.test_wer : row.dev_wer;
    row.wrr = metrics::Wrr(anchor, seed_wer, topline_wer);
  }
  std::string table = metrics::FormatReportTable({&row, 1});
  if (!out.empty()) {
    std::ofstream os(Resolve(cfg, out));
    if (!os) throw IoError("cannot open for writing: " + Resolve(cfg, out));
    os << table;
  }
  std::cout << table;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctclab: a desk-scale semi-supervised CTC laboratory"};
  app.require_subcommand(1);

  CommonArgs common;

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset");
  AddCommonOptions(gen, &common);
  std::string setting = "in_domain_small";
  std::string gen_out, from_manifest;
  gen->add_option("--setting", setting,
                  "in_domain_small | in_domain_large | out_domain");
  gen->add_option("--out", gen_out, "output directory (default data-<setting>)");
  gen->add_option("--from-manifest", from_manifest,
                  "regenerate byte-identically from a manifest file");

  // lm-train
  auto* lmt = app.add_subcommand("lm-train", "train the n-gram LM");
  AddCommonOptions(lmt, &common);
  std::string lmt_data, lmt_out = "lm.txt";
  lmt->add_option("--data", lmt_data, "dataset directory")->required();
  lmt->add_option("--out", lmt_out, "LM output file");

  // train-seed
  auto* seed = app.add_subcommand("train-seed", "supervised seed training");
  AddCommonOptions(seed, &common);
  std::string seed_data, seed_out = "seed.ckpt", seed_log;
  bool topline = false;
  seed->add_option("--data", seed_data, "dataset directory")->required();
  seed->add_option("--out", seed_out, "checkpoint output");
  seed->add_option("--log", seed_log, "run-log TSV output");
  seed->add_flag("--include-unlabeled-truth", topline,
                 "train the fully supervised topline (evaluation-side)");

  // ipl
  auto* ipl = app.add_subcommand("ipl", "iterative pseudo-labeling");
  AddCommonOptions(ipl, &common);
  std::string ipl_data, ipl_init, ipl_lm, ipl_out = "ipl.ckpt", ipl_log;
  ipl->add_option("--data", ipl_data, "dataset directory")->required();
  ipl->add_option("--init", ipl_init, "initial checkpoint")->required();
  ipl->add_option("--lm", ipl_lm, "LM file for fused labeling");
  ipl->add_option("--out", ipl_out, "checkpoint output");
  ipl->add_option("--log", ipl_log, "run-log TSV output");

  // mpl
  auto* mpl = app.add_subcommand("mpl", "momentum pseudo-labeling");
  AddCommonOptions(mpl, &common);
  std::string mpl_data, mpl_init, mpl_out = "mpl.ckpt", mpl_offline, mpl_log;
  mpl->add_option("--data", mpl_data, "dataset directory")->required();
  mpl->add_option("--init", mpl_init, "initial checkpoint")->required();
  mpl->add_option("--out", mpl_out, "online checkpoint output");
  mpl->add_option("--offline-out", mpl_offline, "offline checkpoint output");
  mpl->add_option("--log", mpl_log, "run-log TSV output");

  // decode
  auto* dec = app.add_subcommand("decode", "decode a split to a hypothesis file");
  AddCommonOptions(dec, &common);
  std::string dec_data, dec_ckpt, dec_split = "dev", dec_mode = "greedy";
  std::string dec_lm, dec_out = "hyp.trn.txt", dec_post;
  dec->add_option("--data", dec_data, "dataset directory")->required();
  dec->add_option("--ckpt", dec_ckpt, "checkpoint to decode with");
  dec->add_option("--split", dec_split, "dev | test | unlabeled");
  dec->add_option("--mode", dec_mode, "greedy | beam");
  dec->add_option("--lm", dec_lm, "LM file for shallow fusion (beam only)");
  dec->add_option("--out", dec_out, "hypothesis output file");
  dec->add_option("--posteriors-dir", dec_post,
                  "decode pre-computed .post containers instead");

  // eval
  auto* ev = app.add_subcommand("eval", "WER/WRR report from hypothesis files");
  AddCommonOptions(ev, &common);
  std::string ev_hyp, ev_ref, ev_hyp_lm, ev_thyp, ev_tref, ev_thyp_lm;
  std::string ev_method = "model", ev_init = "-", ev_out;
  double ev_seed_wer = -1.0, ev_topline_wer = -1.0;
  ev->add_option("--hyp", ev_hyp, "dev hypothesis file")->required();
  ev->add_option("--ref", ev_ref, "dev reference file")->required();
  ev->add_option("--hyp-lm", ev_hyp_lm, "dev hypothesis decoded with LM");
  ev->add_option("--test-hyp", ev_thyp, "test hypothesis file");
  ev->add_option("--test-ref", ev_tref, "test reference file");
  ev->add_option("--test-hyp-lm", ev_thyp_lm, "test hypothesis with LM");
  ev->add_option("--seed-wer", ev_seed_wer, "seed WER anchor for WRR");
  ev->add_option("--topline-wer", ev_topline_wer, "topline WER anchor for WRR");
  ev->add_option("--method", ev_method, "method label for the report row");
  ev->add_option("--init", ev_init, "init label for the report row");
  ev->add_option("--out", ev_out, "also write the report to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return RunGenData(common, setting, gen_out, from_manifest);
    }
    if (lmt->parsed()) return RunLmTrain(common, lmt_data, lmt_out);
    if (seed->parsed()) {
      return RunTrainSeed(common, seed_data, seed_out, seed_log, topline);
    }
    if (ipl->parsed()) {
      return RunIplCmd(common, ipl_data, ipl_init, ipl_lm, ipl_out, ipl_log);
    }
    if (mpl->parsed()) {
      return RunMplCmd(common, mpl_data, mpl_init, mpl_out, mpl_offline,
                       mpl_log);
    }
    if (dec->parsed()) {
      return RunDecode(common, dec_data, dec_ckpt, dec_split, dec_mode,
                       dec_lm, dec_out, dec_post);
    }
    if (ev->parsed()) {
      if (!ev_thyp.empty() && ev_tref.empty()) {
        throw ConfigError("--test-hyp needs --test-ref");
      }
      return RunEval(common, ev_hyp, ev_ref, ev_hyp_lm, ev_thyp, ev_tref,
                     ev_thyp_lm, ev_seed_wer, ev_topline_wer, ev_method,
                     ev_init, ev_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const InputDomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
