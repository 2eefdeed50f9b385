// base/log.cc

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

#include "base/log.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace ctclab {

LogLevel LogThreshold() {
  static LogLevel threshold = [] {
    const char* env = std::getenv("CTCLAB_LOG_LEVEL");
    if (env == nullptr) return LogLevel::kInfo;
    if (std::strcmp(env, "error") == 0) return LogLevel::kError;
    if (std::strcmp(env, "warn") == 0) return LogLevel::kWarning;
    if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
    return LogLevel::kInfo;
  }();
  return threshold;
}

void LogLine(LogLevel level, const std::string& message) {
  if (static_cast<int>(level) > static_cast<int>(LogThreshold())) return;
  static const char* kNames[] = {"ERROR", "WARNING", "INFO", "DEBUG"};
  std::fprintf(stderr, "[ctclab %s] %s\n", kNames[static_cast<int>(level)],
               message.c_str());
}

}  // namespace ctclab
