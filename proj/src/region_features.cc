// src/region_features.cc

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

#include "sas/region_features.h"

#include <filesystem>
#include <fstream>

#include "sas/io_binary.h"

namespace sas {

namespace {
const char kMagic[] = "SASRF1";
}  // namespace

void RegionFeatureSet::validate(const std::string& where) const {
  const int l = n_regions();
  require_format(l == kNumRegions,
                 where + ": expected " + std::to_string(kNumRegions) +
                     " regions, got " + std::to_string(l));
  require_format(p.rows() == l && p.cols() == 5,
                 where + ": field p must be " + std::to_string(l) + " x 5");
  require_format(static_cast<int>(c.size()) == l,
                 where + ": field c must have one class id per region");
  require_format(s.size() == l,
                 where + ": field s must have one confidence per region");
  require_format(all_finite(f), where + ": field f has non-finite entries");
  require_format(all_finite(p), where + ": field p has non-finite entries");
  for (int i = 0; i < l; ++i) {
    const double x1 = p(i, 0), y1 = p(i, 1), x2 = p(i, 2), y2 = p(i, 3);
    const double area = p(i, 4);
    require_format(x1 >= 0.0 && x2 <= 1.0 && y1 >= 0.0 && y2 <= 1.0,
                   where + ": field p row " + std::to_string(i) +
                       " has coordinates outside [0, 1]");
    require_format(x1 <= x2 && y1 <= y2,
                   where + ": field p row " + std::to_string(i) +
                       " has inverted box corners");
    require_format(area > 0.0 && area <= 1.0,
                   where + ": field p row " + std::to_string(i) +
                       " has area ratio outside (0, 1]");
    require_format(c[i] >= 0 && c[i] < kNumClasses,
                   where + ": field c row " + std::to_string(i) +
                       " outside [0, " + std::to_string(kNumClasses) + ")");
    const double conf = s(i);
    require_format(std::isfinite(conf) && conf >= 0.0 && conf <= 1.0,
                   where + ": field s row " + std::to_string(i) +
                       " outside [0, 1]");
  }
}

void write_region_features(const std::string& path,
                           const RegionFeatureSet& rfs) {
  const int l = rfs.n_regions();
  const int d = static_cast<int>(rfs.f.cols());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_bytes(out, kMagic, sizeof(kMagic) - 1);
  write_u32(out, static_cast<std::uint32_t>(l));
  write_u32(out, static_cast<std::uint32_t>(d));
  write_mat_f32(out, rfs.f);
  write_mat_f32(out, rfs.p);
  for (int i = 0; i < l; ++i)
    write_u16(out, static_cast<std::uint16_t>(rfs.c[i]));
  for (int i = 0; i < l; ++i) write_f32(out, static_cast<float>(rfs.s(i)));
  if (!out) throw IoError("write failed: " + path);
}

RegionFeatureSet load_region_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open region feature file: " + path);
  expect_magic(in, kMagic, path);
  const int l = static_cast<int>(read_u32(in, path + ": region count"));
  const int d = static_cast<int>(read_u32(in, path + ": feature dim"));
  require_format(l > 0 && l <= 4096, path + ": implausible region count");
  require_format(d > 0 && d <= 65536, path + ": implausible feature dim");
  RegionFeatureSet rfs;
  rfs.image_id = std::filesystem::path(path).stem().string();
  rfs.f = read_mat_f32(in, l, d, path + ": field f");
  rfs.p = read_mat_f32(in, l, 5, path + ": field p");
  rfs.c.resize(l);
  for (int i = 0; i < l; ++i)
    rfs.c[i] = static_cast<int>(read_u16(in, path + ": field c"));
  rfs.s.resize(l);
  for (int i = 0; i < l; ++i)
    rfs.s(i) = static_cast<double>(read_f32(in, path + ": field s"));
  expect_eof(in, path);
  rfs.validate(path);
  return rfs;
}

}  // namespace sas
