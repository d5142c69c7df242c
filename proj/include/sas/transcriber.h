// include/sas/transcriber.h

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

#ifndef SAS_TRANSCRIBER_H_
#define SAS_TRANSCRIBER_H_

#include <functional>
#include <string>
#include <vector>

#include "sas/common.h"
#include "sas/signature_bank.h"

namespace sas {

// Any callable mapping a T x n_mels log-mel matrix to tokens.
using TranscribeFn = std::function<std::vector<std::string>(const Mat&)>;

// Deterministic template transcriber: cuts the spectrogram into consecutive
// frames_per_token windows (a trailing partial window is dropped) and maps
// each window to the nearest token signature by Euclidean distance, breaking
// ties toward the lowest token index. A window strictly closer to the
// silence signature than to every token terminates the transcript.
std::vector<std::string> template_transcribe(const Mat& mel,
                                             const TokenSignatureBank& bank);

TranscribeFn make_template_transcriber(TokenSignatureBank bank);

}  // namespace sas

#endif  // SAS_TRANSCRIBER_H_
