// src/wav_io.cc

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

#include "sas/wav_io.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sas/io_binary.h"

namespace sas {

void write_wav(const std::string& path, const Waveform& wave) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const std::uint32_t n = static_cast<std::uint32_t>(wave.samples.size());
  const std::uint32_t data_bytes = n * 2;
  const std::uint32_t sr = static_cast<std::uint32_t>(wave.sample_rate);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, sr);
  write_u32(out, sr * 2);  // byte rate
  write_u16(out, 2);       // block align
  write_u16(out, 16);      // bits per sample
  out.write("data", 4);
  write_u32(out, data_bytes);
  for (double s : wave.samples) {
    double clipped = std::clamp(s, -1.0, 1.0);
    auto v = static_cast<std::int16_t>(std::lround(clipped * 32767.0));
    write_u16(out, static_cast<std::uint16_t>(v));
  }
  if (!out) throw IoError("short write to " + path);
}

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  expect_magic(in, "RIFF", path);
  read_u32(in, "riff size");
  expect_magic(in, "WAVE", path);

  Waveform wave;
  bool have_fmt = false;
  while (true) {
    char tag[4];
    in.read(tag, 4);
    if (in.gcount() == 0 && in.eof()) break;
    if (in.gcount() != 4) throw FormatError(path + ": truncated chunk tag");
    std::uint32_t size = read_u32(in, "chunk size");
    std::string id(tag, 4);
    if (id == "fmt ") {
      require_format(size >= 16, path + ": fmt chunk too small");
      std::uint16_t format = read_u16(in, "audio format");
      std::uint16_t channels = read_u16(in, "channel count");
      std::uint32_t sr = read_u32(in, "sample rate");
      read_u32(in, "byte rate");
      read_u16(in, "block align");
      std::uint16_t bits = read_u16(in, "bits per sample");
      require_format(format == 1, path + ": only PCM wav supported");
      require_format(channels == 1, path + ": only mono wav supported");
      require_format(bits == 16, path + ": only 16-bit wav supported");
      wave.sample_rate = static_cast<int>(sr);
      in.ignore(size - 16);
      have_fmt = true;
    } else if (id == "data") {
      require_format(have_fmt, path + ": data chunk before fmt");
      require_format(size % 2 == 0, path + ": odd data chunk size");
      const std::uint32_t n = size / 2;
      wave.samples.resize(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        auto v = static_cast<std::int16_t>(read_u16(in, "sample"));
        wave.samples[i] = static_cast<double>(v) / 32767.0;
      }
    } else {
      in.ignore(size + (size % 2));  // chunks are word-aligned
    }
    if (!in && !in.eof()) throw FormatError(path + ": truncated chunk");
  }
  require_format(have_fmt, path + ": missing fmt chunk");
  return wave;
}

}  // namespace sas
