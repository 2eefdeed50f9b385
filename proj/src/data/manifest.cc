// data/manifest.cc

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

#include "data/manifest.h"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "base/error.h"

namespace ctclab::data {

namespace {

std::string Fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void WriteDomain(std::ostream& os, const std::string& name,
                 const DomainSpec& spec) {
  os << "[domain " << name << "]\n";
  os << "seed = " << spec.seed << "\n";
  os << "tokens =";
  for (const auto& t : spec.tokens) os << " " << t;
  os << "\n";
  os << "noise_std = " << Fmt(spec.noise_std) << "\n";
  os << "sentence_len = " << spec.min_sentence_len << " "
     << spec.max_sentence_len << "\n";
  os << "durations =";
  for (const auto& [lo, hi] : spec.durations) os << " " << lo << ":" << hi;
  os << "\n";
  os << "rotation_angles =";
  for (double a : spec.rotation_angles) os << " " << Fmt(a);
  os << "\n";
  os << "prototypes = " << spec.prototypes.rows() << " x "
     << spec.prototypes.cols() << "\n";
  for (Eigen::Index r = 0; r < spec.prototypes.rows(); ++r) {
    os << "  ";
    for (Eigen::Index c = 0; c < spec.prototypes.cols(); ++c) {
      os << (c ? " " : "") << Fmt(spec.prototypes(r, c));
    }
    os << "\n";
  }
  os << "grammar = " << spec.grammar.rows() << " x " << spec.grammar.cols()
     << "\n";
  for (Eigen::Index r = 0; r < spec.grammar.rows(); ++r) {
    os << "  ";
    for (Eigen::Index c = 0; c < spec.grammar.cols(); ++c) {
      os << (c ? " " : "") << Fmt(spec.grammar(r, c));
    }
    os << "\n";
  }
}

class LineReader {
 public:
  LineReader(std::istream& is, std::string name)
      : is_(is), name_(std::move(name)) {}

  bool Next(std::string* line) {
    while (std::getline(is_, *line)) {
      if (!line->empty()) return true;
    }
    return false;
  }

  std::string Expect(const std::string& key) {
    std::string line;
    if (!Next(&line)) {
      throw IoError(name_ + ": manifest truncated, expected " + key);
    }
    auto eq = line.find(" = ");
    if (eq == std::string::npos || line.substr(0, eq) != key) {
      throw IoError(name_ + ": expected '" + key + "', got '" + line + "'");
    }
    return line.substr(eq + 3);
  }

  // For "key =" possibly with empty value.
  std::string ExpectPrefix(const std::string& key) {
    std::string line;
    if (!Next(&line)) {
      throw IoError(name_ + ": manifest truncated, expected " + key);
    }
    std::string prefix = key + " =";
    if (line.rfind(prefix, 0) != 0) {
      throw IoError(name_ + ": expected '" + key + "', got '" + line + "'");
    }
    std::string rest = line.substr(prefix.size());
    if (!rest.empty() && rest[0] == ' ') rest = rest.substr(1);
    return rest;
  }

  std::string RawLine() {
    std::string line;
    if (!Next(&line)) throw IoError(name_ + ": manifest truncated");
    return line;
  }

 private:
  std::istream& is_;
  std::string name_;
};

Matrix ReadMatrixBlock(LineReader& reader, const std::string& header,
                       const std::string& name) {
  std::string dims = reader.Expect(header);
  std::istringstream ds(dims);
  int rows = 0, cols = 0;
  char x = 0;
  ds >> rows >> x >> cols;
  if (x != 'x' || rows < 0 || cols < 0) {
    throw IoError(name + ": bad matrix dims for " + header);
  }
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    std::istringstream row(reader.RawLine());
    for (int c = 0; c < cols; ++c) {
      if (!(row >> m(r, c))) {
        throw IoError(name + ": short matrix row in " + header);
      }
    }
  }
  return m;
}

DomainSpec ReadDomain(LineReader& reader, const std::string& name) {
  DomainSpec spec;
  spec.seed = std::stoull(reader.Expect("seed"));
  {
    std::istringstream ts(reader.ExpectPrefix("tokens"));
    std::string tok;
    while (ts >> tok) spec.tokens.push_back(tok);
  }
  spec.noise_std = std::strtod(reader.Expect("noise_std").c_str(), nullptr);
  {
    std::istringstream ls(reader.Expect("sentence_len"));
    ls >> spec.min_sentence_len >> spec.max_sentence_len;
  }
  {
    std::istringstream ds(reader.ExpectPrefix("durations"));
    std::string pair;
    while (ds >> pair) {
      auto colon = pair.find(':');
      if (colon == std::string::npos) {
        throw IoError(name + ": bad duration pair " + pair);
      }
      spec.durations.push_back({std::stoi(pair.substr(0, colon)),
                                std::stoi(pair.substr(colon + 1))});
    }
  }
  {
    std::istringstream as(reader.ExpectPrefix("rotation_angles"));
    double a;
    while (as >> a) spec.rotation_angles.push_back(a);
  }
  spec.prototypes = ReadMatrixBlock(reader, "prototypes", name);
  spec.grammar = ReadMatrixBlock(reader, "grammar", name);
  spec.Validate();
  return spec;
}

}  // namespace

void WriteManifest(std::ostream& os, const DatasetManifest& m) {
  os << "ctclab-manifest v1\n";
  os << "setting = " << m.setting << "\n";
  os << "base_seed = " << m.base_seed << "\n";
  os << "labeled_seed = " << m.labeled_seed << "\n";
  os << "unlabeled_seed = " << m.unlabeled_seed << "\n";
  os << "dev_seed = " << m.dev_seed << "\n";
  os << "test_seed = " << m.test_seed << "\n";
  os << "lmtext_seed = " << m.lmtext_seed << "\n";
  os << "sizes = " << m.labeled_size << " " << m.unlabeled_size << " "
     << m.dev_size << " " << m.test_size << "\n";
  os << "lm_text_sentences = " << m.lm_text_sentences << "\n";
  WriteDomain(os, "base", m.base);
  WriteDomain(os, "target", m.target);
}

DatasetManifest ReadManifest(std::istream& is, const std::string& name) {
  LineReader reader(is, name);
  if (reader.RawLine() != "ctclab-manifest v1") {
    throw IoError(name + ": not a ctclab manifest");
  }
  DatasetManifest m;
  m.setting = reader.Expect("setting");
  m.base_seed = std::stoull(reader.Expect("base_seed"));
  m.labeled_seed = std::stoull(reader.Expect("labeled_seed"));
  m.unlabeled_seed = std::stoull(reader.Expect("unlabeled_seed"));
  m.dev_seed = std::stoull(reader.Expect("dev_seed"));
  m.test_seed = std::stoull(reader.Expect("test_seed"));
  m.lmtext_seed = std::stoull(reader.Expect("lmtext_seed"));
  {
    std::istringstream ss(reader.Expect("sizes"));
    ss >> m.labeled_size >> m.unlabeled_size >> m.dev_size >> m.test_size;
  }
  m.lm_text_sentences = std::stoi(reader.Expect("lm_text_sentences"));
  if (reader.RawLine() != "[domain base]") {
    throw IoError(name + ": expected [domain base]");
  }
  m.base = ReadDomain(reader, name);
  if (reader.RawLine() != "[domain target]") {
    throw IoError(name + ": expected [domain target]");
  }
  m.target = ReadDomain(reader, name);
  return m;
}

void WriteManifestFile(const std::string& path, const DatasetManifest& m) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  WriteManifest(os, m);
  if (!os) throw IoError("write failed: " + path);
}

DatasetManifest ReadManifestFile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("missing input: " + path);
  return ReadManifest(is, path);
}

}  // namespace ctclab::data
