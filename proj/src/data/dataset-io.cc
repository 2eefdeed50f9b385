// data/dataset-io.cc

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

#include "data/dataset-io.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "base/binary-io.h"
#include "base/error.h"
#include "data/manifest.h"

namespace ctclab::data {

namespace {

namespace fs = std::filesystem;

std::string SamplePath(const std::string& dir, const std::string& split,
                       int index) {
  char name[32];
  std::snprintf(name, sizeof name, "%04d.feat", index);
  return dir + "/" + split + "/" + name;
}

void WriteFeatures(const std::string& dir, const std::string& split,
                   const std::vector<FeatureSequence>& features) {
  fs::create_directories(dir + "/" + split);
  for (size_t i = 0; i < features.size(); ++i) {
    WriteMatrixFile(SamplePath(dir, split, static_cast<int>(i)),
                    features[i].frames);
  }
}

std::vector<FeatureSequence> ReadFeatures(const std::string& dir,
                                          const std::string& split,
                                          int count) {
  std::vector<FeatureSequence> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(FeatureSequence{ReadMatrixFile(SamplePath(dir, split, i))});
  }
  return out;
}

}  // namespace

void WriteTranscripts(const std::string& path,
                      const std::vector<LabelSequence>& sentences,
                      const Vocabulary& vocab) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  for (const LabelSequence& s : sentences) {
    for (size_t i = 0; i < s.size(); ++i) {
      os << (i ? " " : "") << vocab.token(s[i]);
    }
    os << "\n";
  }
  if (!os) throw IoError("write failed: " + path);
}

std::vector<LabelSequence> ReadTranscripts(const std::string& path,
                                           const Vocabulary& vocab) {
  std::ifstream is(path);
  if (!is) throw IoError("missing input: " + path);
  std::vector<LabelSequence> out;
  std::string line;
  while (std::getline(is, line)) {
    LabelSequence s;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      auto id = vocab.id(tok);
      if (!id.has_value()) {
        throw IoError(path + " holds a token outside the vocabulary: " + tok);
      }
      s.push_back(*id);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void WriteDatasetDir(const SplitDataset& ds, const std::string& dir) {
  fs::create_directories(dir);
  WriteManifestFile(dir + "/manifest.txt", ds.manifest);
  Vocabulary vocab = ds.vocab();

  std::vector<FeatureSequence> labeled_feats;
  std::vector<LabelSequence> labeled_refs;
  for (const auto& ex : ds.labeled) {
    labeled_feats.push_back(ex.features);
    labeled_refs.push_back(ex.transcript);
  }
  WriteFeatures(dir, "labeled", labeled_feats);
  WriteTranscripts(dir + "/labeled.trn.txt", labeled_refs, vocab);

  WriteFeatures(dir, "unlabeled", ds.unlabeled);
  WriteTranscripts(dir + "/unlabeled.ref.trn.txt", ds.unlabeled_truth_,
                   vocab);

  for (const char* split : {"dev", "test"}) {
    const auto& examples = split == std::string("dev") ? ds.dev : ds.test;
    std::vector<FeatureSequence> feats;
    std::vector<LabelSequence> refs;
    for (const auto& ex : examples) {
      feats.push_back(ex.features);
      refs.push_back(ex.transcript);
    }
    WriteFeatures(dir, split, feats);
    WriteTranscripts(dir + "/" + split + ".trn.txt", refs, vocab);
  }

  WriteTranscripts(dir + "/lm_corpus.trn.txt", ds.lm_text, vocab);
}

SplitDataset LoadDatasetDir(const std::string& dir) {
  SplitDataset ds;
  ds.manifest = ReadManifestFile(dir + "/manifest.txt");
  Vocabulary vocab = ds.vocab();

  auto labeled_refs = ReadTranscripts(dir + "/labeled.trn.txt", vocab);
  auto labeled_feats =
      ReadFeatures(dir, "labeled", static_cast<int>(labeled_refs.size()));
  for (size_t i = 0; i < labeled_refs.size(); ++i) {
    ds.labeled.push_back(
        {std::move(labeled_feats[i]), std::move(labeled_refs[i])});
  }

  ds.unlabeled = ReadFeatures(dir, "unlabeled", ds.manifest.unlabeled_size);

  for (const char* split : {"dev", "test"}) {
    auto refs =
        ReadTranscripts(dir + "/" + split + ".trn.txt", vocab);
    auto feats = ReadFeatures(dir, split, static_cast<int>(refs.size()));
    auto& target = split == std::string("dev") ? ds.dev : ds.test;
    for (size_t i = 0; i < refs.size(); ++i) {
      target.push_back({std::move(feats[i]), std::move(refs[i])});
    }
  }

  ds.lm_text = ReadTranscripts(dir + "/lm_corpus.trn.txt", vocab);
  return ds;
}

}  // namespace ctclab::data
