// metrics/wer.h

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

#ifndef CTCLAB_METRICS_WER_H_
#define CTCLAB_METRICS_WER_H_

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "base/sequence.h"

namespace ctclab::metrics {

struct ErrorBreakdown {
  int64_t substitutions = 0;
  int64_t insertions = 0;
  int64_t deletions = 0;
  int64_t reference_length = 0;

  int64_t TotalErrors() const {
    return substitutions + insertions + deletions;
  }
  // (S + I + D) / reference_length, as a percentage; may exceed 100.
  double WerPercent() const;

  ErrorBreakdown& operator+=(const ErrorBreakdown& o);
};

// Minimal-cost alignment with unit costs; on cost ties the backtrace
// prefers a substitution over an insert+delete pair.
ErrorBreakdown EditDistanceBreakdown(const LabelSequence& reference,
                                     const LabelSequence& hypothesis);

// Corpus-level breakdown: per-utterance breakdowns summed.
ErrorBreakdown CorpusBreakdown(std::span<const LabelSequence> references,
                               std::span<const LabelSequence> hypotheses);

// The synthetic task has no sub-token level, so the token error rate is
// the same edit-distance machinery (and the same number as WER).
double TokenErrorRatePercent(const LabelSequence& reference,
                             const LabelSequence& hypothesis);

// WER recovery rate: 100 * (wer_seed - wer_model) / (wer_seed - wer_topline).
// Seed maps to 0, topline to 100; negative when the model underperforms
// the seed (reported as-is).
double Wrr(double wer_model, double wer_seed, double wer_topline);

// One row of the evaluation table.
struct ReportRow {
  std::string method;
  std::string init;
  double dev_wer = -1.0;      // decoding without LM
  double test_wer = -1.0;
  double wrr = std::numeric_limits<double>::quiet_NaN();
  double dev_wer_lm = -1.0;   // decoding with LM (negative = absent)
  double test_wer_lm = -1.0;
  double wrr_lm = std::numeric_limits<double>::quiet_NaN();
};

// Fixed-width text table shaped like the evaluation summaries: method,
// init, dev/test WER with and without LM, WRR.
std::string FormatReportTable(std::span<const ReportRow> rows);

}  // namespace ctclab::metrics

#endif  // CTCLAB_METRICS_WER_H_
