// Copyright 2026 The dpqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPQC_ERROR_H_
#define DPQC_ERROR_H_

#include <stdexcept>
#include <string>

namespace dpqc {

// Base class for all dpqc errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument, configuration value or input file content.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& msg) : Error(msg) {}
};

// A mechanism was invoked with fewer samples than its contract requires.
class InsufficientSamplesError : public Error {
 public:
  explicit InsufficientSamplesError(const std::string& msg) : Error(msg) {}
};

// An operation was asked to run in a dimension it does not support.
class DimensionError : public ParameterError {
 public:
  explicit DimensionError(const std::string& msg) : ParameterError(msg) {}
};

// A geometric input violates a general-position requirement.
class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(const std::string& msg) : Error(msg) {}
};

// File system or parse failure.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace dpqc

#endif  // DPQC_ERROR_H_
