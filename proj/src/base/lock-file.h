// base/lock-file.h

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

#ifndef CTCLAB_BASE_LOCK_FILE_H_
#define CTCLAB_BASE_LOCK_FILE_H_

#include <string>

namespace ctclab {

// Advisory exclusive lock on <workdir>/.ctclab.lock, released on
// destruction (and by the kernel if the process dies).  Guards against
// two commands writing the same workdir.
class WorkdirLock {
 public:
  explicit WorkdirLock(const std::string& workdir);
  ~WorkdirLock();

  WorkdirLock(const WorkdirLock&) = delete;
  WorkdirLock& operator=(const WorkdirLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace ctclab

#endif  // CTCLAB_BASE_LOCK_FILE_H_
