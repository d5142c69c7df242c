// include/sas/common.h

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

#ifndef SAS_COMMON_H_
#define SAS_COMMON_H_

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace sas {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Error hierarchy; the CLI maps ConfigError to exit 2, the rest to exit 1.
class SasError : public std::runtime_error {
 public:
  explicit SasError(const std::string& msg) : std::runtime_error(msg) {}
};
class ConfigError : public SasError {
 public:
  explicit ConfigError(const std::string& msg) : SasError(msg) {}
};
class InputError : public SasError {
 public:
  explicit InputError(const std::string& msg) : SasError(msg) {}
};
class FormatError : public SasError {
 public:
  explicit FormatError(const std::string& msg) : SasError(msg) {}
};
class IoError : public SasError {
 public:
  explicit IoError(const std::string& msg) : SasError(msg) {}
};
class NumericalError : public SasError {
 public:
  explicit NumericalError(const std::string& msg) : SasError(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}
inline void require_config(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}
inline void require_format(bool cond, const std::string& msg) {
  if (!cond) throw FormatError(msg);
}

bool all_finite(const Mat& m);

// Runs fn(i) for i in [0, n). With workers <= 1 this is a plain loop; with
// more workers, items are statically partitioned (worker w takes i = w,
// w + workers, ...) so any per-item outputs can be reduced in index order,
// keeping results independent of scheduling.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

// Worker count from SAS_NUM_WORKERS, clamped to [1, 64]; defaults to 1.
int env_num_workers();

// FNV-1a over a byte buffer; used by tests and determinism checks.
std::uint64_t fnv1a(const void* data, std::size_t len);
std::uint64_t fnv1a_file(const std::string& path);

}  // namespace sas

#endif  // SAS_COMMON_H_
