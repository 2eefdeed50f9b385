// ssl/run-log.cc

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

#include "ssl/run-log.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "base/error.h"

namespace ctclab::ssl {

void RunLog::Append(EpochRecord record) {
  int expected = records.empty() ? 1 : records.back().epoch + 1;
  if (record.epoch != expected) {
    throw InternalError("run log epochs must be consecutive from 1");
  }
  records.push_back(std::move(record));
}

void RunLog::WriteTsv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "# epoch\tsup_loss\tunsup_loss\tval_ter\tval_wer\tpl_churn\t"
     << "skipped\n";
  for (const EpochRecord& r : records) {
    char line[256];
    std::snprintf(line, sizeof line,
                  "%d\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%d\n", r.epoch,
                  r.sup_loss, r.unsup_loss, r.val_ter, r.val_wer, r.pl_churn,
                  r.skipped);
    os << line;
  }
  if (!os) throw IoError("write failed: " + path);
}

RunLog RunLog::ReadTsv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("missing input: " + path);
  RunLog log;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    EpochRecord r;
    if (!(ls >> r.epoch >> r.sup_loss >> r.unsup_loss >> r.val_ter >>
          r.val_wer >> r.pl_churn >> r.skipped)) {
      throw IoError("malformed run-log line in " + path);
    }
    log.Append(r);
  }
  return log;
}

}  // namespace ctclab::ssl
