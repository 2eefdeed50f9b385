// metrics/wer.cc

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

#include "metrics/wer.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "base/error.h"

namespace ctclab::metrics {

double ErrorBreakdown::WerPercent() const {
  if (reference_length == 0) {
    throw InputDomainError("WER undefined for an empty reference");
  }
  return 100.0 * static_cast<double>(TotalErrors()) /
         static_cast<double>(reference_length);
}

ErrorBreakdown& ErrorBreakdown::operator+=(const ErrorBreakdown& o) {
  substitutions += o.substitutions;
  insertions += o.insertions;
  deletions += o.deletions;
  reference_length += o.reference_length;
  return *this;
}

ErrorBreakdown EditDistanceBreakdown(const LabelSequence& reference,
                                     const LabelSequence& hypothesis) {
  const int n = static_cast<int>(reference.size());
  const int m = static_cast<int>(hypothesis.size());
  // cost(i, j): edit distance between reference[:i] and hypothesis[:j].
  Matrix cost(n + 1, m + 1);
  for (int i = 0; i <= n; ++i) cost(i, 0) = i;
  for (int j = 0; j <= m; ++j) cost(0, j) = j;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      double sub = cost(i - 1, j - 1) +
                   (reference[i - 1] == hypothesis[j - 1] ? 0.0 : 1.0);
      double del = cost(i - 1, j) + 1.0;
      double ins = cost(i, j - 1) + 1.0;
      cost(i, j) = std::min({sub, del, ins});
    }
  }
  // Backtrace, diagonal first so ties resolve to substitutions.
  ErrorBreakdown b;
  b.reference_length = n;
  int i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      double sub = cost(i - 1, j - 1) +
                   (reference[i - 1] == hypothesis[j - 1] ? 0.0 : 1.0);
      if (sub == cost(i, j)) {
        if (reference[i - 1] != hypothesis[j - 1]) ++b.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && cost(i - 1, j) + 1.0 == cost(i, j)) {
      ++b.deletions;
      --i;
      continue;
    }
    ++b.insertions;
    --j;
  }
  return b;
}

ErrorBreakdown CorpusBreakdown(std::span<const LabelSequence> references,
                               std::span<const LabelSequence> hypotheses) {
  if (references.size() != hypotheses.size()) {
    throw InputDomainError("reference/hypothesis counts differ");
  }
  ErrorBreakdown total;
  for (size_t i = 0; i < references.size(); ++i) {
    total += EditDistanceBreakdown(references[i], hypotheses[i]);
  }
  return total;
}

double TokenErrorRatePercent(const LabelSequence& reference,
                             const LabelSequence& hypothesis) {
  return EditDistanceBreakdown(reference, hypothesis).WerPercent();
}

double Wrr(double wer_model, double wer_seed, double wer_topline) {
  if (wer_seed == wer_topline) {
    throw InputDomainError("WRR undefined when seed and topline WER match");
  }
  return 100.0 * (wer_seed - wer_model) / (wer_seed - wer_topline);
}

namespace {

std::string Cell(double v) {
  if (v < 0.0) return "   --";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%5.1f", v);
  return buf;
}

std::string WrrCell(double v) {
  if (std::isnan(v)) return "    --";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%6.1f", v);
  return buf;
}

}  // namespace

std::string FormatReportTable(std::span<const ReportRow> rows) {
  std::ostringstream os;
  os << "method           init         | dev    test    wrr    "
     << "| dev+lm test+lm wrr+lm\n";
  os << "---------------------------------------------------------------"
     << "--------\n";
  for (const ReportRow& r : rows) {
    char head[64];
    std::snprintf(head, sizeof head, "%-16s %-12s", r.method.c_str(),
                  r.init.c_str());
    os << head << " | " << Cell(r.dev_wer) << "  " << Cell(r.test_wer) << "  "
       << WrrCell(r.wrr) << " | " << Cell(r.dev_wer_lm) << "  "
       << Cell(r.test_wer_lm) << "  " << WrrCell(r.wrr_lm) << "\n";
  }
  return os.str();
}

}  // namespace ctclab::metrics
