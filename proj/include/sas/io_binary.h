// include/sas/io_binary.h

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

#ifndef SAS_IO_BINARY_H_
#define SAS_IO_BINARY_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sas/common.h"

namespace sas {

// Little-endian primitives for the toolkit's binary file formats. The host is
// assumed little-endian (checked once at startup of each reader/writer).

void write_u32(std::ostream& out, std::uint32_t v);
void write_u16(std::ostream& out, std::uint16_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f32(std::ostream& out, float v);
void write_f32_array(std::ostream& out, const float* data, std::size_t n);
void write_bytes(std::ostream& out, const void* data, std::size_t n);

std::uint32_t read_u32(std::istream& in, const std::string& what);
std::uint16_t read_u16(std::istream& in, const std::string& what);
std::uint64_t read_u64(std::istream& in, const std::string& what);
float read_f32(std::istream& in, const std::string& what);
void read_f32_array(std::istream& in, float* data, std::size_t n,
                    const std::string& what);
void read_bytes(std::istream& in, void* data, std::size_t n,
                const std::string& what);
void expect_magic(std::istream& in, const std::string& magic,
                  const std::string& path);
void expect_eof(std::istream& in, const std::string& path);

// Row-major float32 serialization of a double matrix and back.
void write_mat_f32(std::ostream& out, const Mat& m);
Mat read_mat_f32(std::istream& in, int rows, int cols, const std::string& what);

}  // namespace sas

#endif  // SAS_IO_BINARY_H_
