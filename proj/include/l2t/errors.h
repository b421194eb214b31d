// Copyright 2026 The L2T Harness Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef L2T_ERRORS_H_
#define L2T_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace l2t {

// Root of every error the harness raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSetting : public Error {
 public:
  using Error::Error;
};

class InvalidItem : public Error {
 public:
  using Error::Error;
};

class InvalidTrace : public Error {
 public:
  using Error::Error;
};

class MissingTemplate : public Error {
 public:
  using Error::Error;
};

// Retriable: connection failures, timeouts, 429 and 5xx replies.
class TransportError : public Error {
 public:
  using Error::Error;
};

// Non-retriable: authentication failures, malformed requests.
class ProviderRejection : public Error {
 public:
  using Error::Error;
};

class CapabilityUnsupported : public Error {
 public:
  using Error::Error;
};

class TranslationMiss : public Error {
 public:
  using Error::Error;
};

// A provider could not produce a usable trace for one prompt (for example
// the context was truncated). Callers may drop the item and continue.
class TraceUnavailable : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  SchemaError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class LanguageMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyRun : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyWindow : public Error {
 public:
  using Error::Error;
};

class MissingExperiment : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace l2t

#endif  // L2T_ERRORS_H_
