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

#ifndef L2T_HASHING_H_
#define L2T_HASHING_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace l2t {

// Lowercase hex SHA-256 digest.
std::string Sha256Hex(std::string_view data);

// Accumulates typed fields into an unambiguous byte string (each field is
// tagged and length-prefixed) and hashes it. Two builders that saw different
// field sequences never produce the same input bytes.
class FieldHasher {
 public:
  FieldHasher& Add(std::string_view field);
  FieldHasher& Add(std::int64_t value);
  FieldHasher& Add(std::optional<double> value);
  FieldHasher& Add(std::optional<std::int64_t> value);

  std::string HexDigest() const { return Sha256Hex(buffer_); }

 private:
  std::string buffer_;
};

}  // namespace l2t

#endif  // L2T_HASHING_H_
