/*
 * Copyright 2026 The featrank Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FEATRANK_ERRORS_HPP_
#define FEATRANK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace featrank {

// Numeric values double as CLI exit codes.
enum class ErrorKind : int { kConfig = 1, kData = 2, kCompute = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

// Invalid parameters, hyperparameters, flags or spec files.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::kConfig, what) {}
};

// Malformed or unsuitable input data.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::kData, what) {}
};

// Failures while fitting or evaluating.
class ComputeError : public Error {
 public:
  explicit ComputeError(const std::string& what)
      : Error(ErrorKind::kCompute, what) {}
};

}  // namespace featrank

#endif  // FEATRANK_ERRORS_HPP_
