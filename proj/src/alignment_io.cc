// src/alignment_io.cc

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

#include "sas/alignment_io.h"

#include <fstream>

#include "json.hpp"
#include "sas/io_binary.h"

namespace sas {

namespace {
constexpr char kMagic[] = "SASALGN1";
constexpr std::uint32_t kMaxHeader = 1 << 16;
}  // namespace

void write_alignment(const std::string& path, const Mat& alignments,
                     bool truncated) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw IoError("alignment: cannot open " + path);
  out.write(kMagic, 8);
  nlohmann::ordered_json j;
  j["frames"] = alignments.rows();
  j["regions"] = alignments.cols();
  j["truncated"] = truncated;
  const std::string header = j.dump();
  write_u32(out, static_cast<std::uint32_t>(header.size()));
  write_bytes(out, header.data(), header.size());
  write_mat_f32(out, alignments);
  if (!out.good()) throw IoError("alignment: write failed for " + path);
}

Mat read_alignment(const std::string& path, bool* truncated) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw IoError("alignment: cannot open " + path);
  expect_magic(in, kMagic, path);
  const std::uint32_t len = read_u32(in, path + " header length");
  require_format(len > 0 && len <= kMaxHeader,
                 "alignment: implausible header size in " + path);
  std::string header(len, '\0');
  read_bytes(in, header.data(), len, path + " header");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header);
  } catch (const nlohmann::json::parse_error&) {
    throw FormatError("alignment: bad JSON header in " + path);
  }
  require_format(j.contains("frames") && j.contains("regions") &&
                     j.contains("truncated"),
                 "alignment: incomplete header in " + path);
  const int rows = j["frames"].get<int>();
  const int cols = j["regions"].get<int>();
  require_format(rows >= 0 && cols >= 0 && rows <= (1 << 24) &&
                     cols <= (1 << 20),
                 "alignment: implausible grid shape in " + path);
  if (truncated != nullptr) *truncated = j["truncated"].get<bool>();
  Mat m = read_mat_f32(in, rows, cols, path);
  expect_eof(in, path);
  return m;
}

}  // namespace sas
