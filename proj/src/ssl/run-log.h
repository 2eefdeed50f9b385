// ssl/run-log.h

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

#ifndef CTCLAB_SSL_RUN_LOG_H_
#define CTCLAB_SSL_RUN_LOG_H_

#include <string>
#include <vector>

namespace ctclab::ssl {

struct EpochRecord {
  int epoch = 0;             // 1-based, monotone
  double sup_loss = 0.0;     // mean supervised CTC loss
  double unsup_loss = 0.0;   // mean pseudo-label CTC loss
  double val_ter = 0.0;      // greedy dev token error rate [%]
  double val_wer = 0.0;      // equal to val_ter on this task
  double pl_churn = 0.0;     // fraction of pseudo-labels changed
  int skipped = 0;           // unreachable-target samples dropped
};

// Line-delimited per-epoch records.  Field order (tab-separated):
//   epoch sup_loss unsup_loss val_ter val_wer pl_churn skipped
struct RunLog {
  std::vector<EpochRecord> records;

  void Append(EpochRecord record);  // enforces the monotone epoch index
  void WriteTsv(const std::string& path) const;
  static RunLog ReadTsv(const std::string& path);
};

}  // namespace ctclab::ssl

#endif  // CTCLAB_SSL_RUN_LOG_H_
