// src/io_binary.cc

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

#include "sas/io_binary.h"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

namespace sas {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

void write_bytes(std::ostream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!out) throw IoError("write failed");
}
void write_u32(std::ostream& out, std::uint32_t v) { write_bytes(out, &v, 4); }
void write_u16(std::ostream& out, std::uint16_t v) { write_bytes(out, &v, 2); }
void write_u64(std::ostream& out, std::uint64_t v) { write_bytes(out, &v, 8); }
void write_f32(std::ostream& out, float v) { write_bytes(out, &v, 4); }
void write_f32_array(std::ostream& out, const float* data, std::size_t n) {
  write_bytes(out, data, n * sizeof(float));
}

void read_bytes(std::istream& in, void* data, std::size_t n,
                const std::string& what) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n)
    throw FormatError("truncated while reading " + what);
}
std::uint32_t read_u32(std::istream& in, const std::string& what) {
  std::uint32_t v;
  read_bytes(in, &v, 4, what);
  return v;
}
std::uint16_t read_u16(std::istream& in, const std::string& what) {
  std::uint16_t v;
  read_bytes(in, &v, 2, what);
  return v;
}
std::uint64_t read_u64(std::istream& in, const std::string& what) {
  std::uint64_t v;
  read_bytes(in, &v, 8, what);
  return v;
}
float read_f32(std::istream& in, const std::string& what) {
  float v;
  read_bytes(in, &v, 4, what);
  return v;
}
void read_f32_array(std::istream& in, float* data, std::size_t n,
                    const std::string& what) {
  read_bytes(in, data, n * sizeof(float), what);
}

void expect_magic(std::istream& in, const std::string& magic,
                  const std::string& path) {
  std::string got(magic.size(), '\0');
  in.read(got.data(), static_cast<std::streamsize>(magic.size()));
  if (static_cast<std::size_t>(in.gcount()) != magic.size() || got != magic)
    throw FormatError(path + ": bad magic, expected \"" + magic + "\"");
}

void expect_eof(std::istream& in, const std::string& path) {
  char c;
  in.read(&c, 1);
  if (!in.eof()) throw FormatError(path + ": trailing bytes after payload");
}

void write_mat_f32(std::ostream& out, const Mat& m) {
  std::vector<float> row(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row[static_cast<std::size_t>(j)] = static_cast<float>(m(i, j));
    write_f32_array(out, row.data(), row.size());
  }
}

Mat read_mat_f32(std::istream& in, int rows, int cols,
                 const std::string& what) {
  Mat m(rows, cols);
  std::vector<float> row(static_cast<std::size_t>(cols));
  for (int i = 0; i < rows; ++i) {
    read_f32_array(in, row.data(), row.size(), what);
    for (int j = 0; j < cols; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  return m;
}

}  // namespace sas
