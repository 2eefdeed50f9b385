// data/manifest.h

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

#ifndef CTCLAB_DATA_MANIFEST_H_
#define CTCLAB_DATA_MANIFEST_H_

#include <iosfwd>
#include <string>

#include "data/dataset.h"

namespace ctclab::data {

// Human-readable `key = value` text with one [domain ...] section per
// DomainSpec; floats printed with %.17g so a parsed manifest regenerates
// the dataset byte-for-byte.
void WriteManifest(std::ostream& os, const DatasetManifest& manifest);
DatasetManifest ReadManifest(std::istream& is,
                             const std::string& name_for_errors);

void WriteManifestFile(const std::string& path,
                       const DatasetManifest& manifest);
DatasetManifest ReadManifestFile(const std::string& path);

}  // namespace ctclab::data

#endif  // CTCLAB_DATA_MANIFEST_H_
