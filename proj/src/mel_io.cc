// src/mel_io.cc

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

#include "sas/mel_io.h"

#include <fstream>

#include "sas/io_binary.h"

namespace sas {

void write_mel(const std::string& path, const MelSpectrogram& mel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write("SASMEL1", 7);
  write_u32(out, static_cast<std::uint32_t>(mel.frames.rows()));
  write_u32(out, static_cast<std::uint32_t>(mel.frames.cols()));
  write_mat_f32(out, mel.frames);
  if (!out) throw IoError("short write to " + path);
}

MelSpectrogram read_mel(const std::string& path, const AudioConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  expect_magic(in, "SASMEL1", path);
  std::uint32_t t = read_u32(in, path + ": frame count");
  std::uint32_t n_mels = read_u32(in, path + ": mel count");
  require_format(n_mels == static_cast<std::uint32_t>(config.n_mels),
                 path + ": mel channel count does not match config");
  MelSpectrogram mel;
  mel.hop_length = config.hop_length;
  mel.sample_rate = config.sample_rate;
  mel.frames = read_mat_f32(in, static_cast<int>(t), static_cast<int>(n_mels),
                            path + ": frames");
  expect_eof(in, path);
  require_format(all_finite(mel.frames), path + ": non-finite mel value");
  return mel;
}

}  // namespace sas
