// include/sas/alignment_io.h

// Copyright 2026  SAS toolkit authors

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

#ifndef SAS_ALIGNMENT_IO_H_
#define SAS_ALIGNMENT_IO_H_

#include <string>

#include "sas/common.h"

namespace sas {

// Attention alignment dump for offline inspection: magic "SASALGN1", a
// JSON header {"frames", "regions", "truncated"}, then the T x n_regions
// attention grid as float32.
void write_alignment(const std::string& path, const Mat& alignments,
                     bool truncated);
Mat read_alignment(const std::string& path, bool* truncated = nullptr);

}  // namespace sas

#endif  // SAS_ALIGNMENT_IO_H_
