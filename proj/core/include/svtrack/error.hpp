// Copyright 2026 The svtrack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace svtrack {

/// Base class for recoverable failures surfaced to the command line.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration / script files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File-system and TIFF failures.
class IoError : public Error {
 public:
  using Error::Error;
};

/// An algorithm could not produce a result (e.g. no detectable nuclei).
class AlgorithmError : public Error {
 public:
  using Error::Error;
};

}  // namespace svtrack
