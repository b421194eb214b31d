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

#include "l2t/hashing.h"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace l2t {

std::string Sha256Hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

FieldHasher& FieldHasher::Add(std::string_view field) {
  buffer_ += 's';
  buffer_ += std::to_string(field.size());
  buffer_ += ':';
  buffer_.append(field);
  return *this;
}

FieldHasher& FieldHasher::Add(std::int64_t value) {
  buffer_ += 'i';
  buffer_ += std::to_string(value);
  buffer_ += ';';
  return *this;
}

FieldHasher& FieldHasher::Add(std::optional<double> value) {
  if (!value) {
    buffer_ += 'n';
    return *this;
  }
  // Bit pattern, so 0.7 and 0.70000000000000007 stay distinct.
  std::uint64_t bits = 0;
  std::memcpy(&bits, &*value, sizeof(bits));
  buffer_ += 'd';
  buffer_ += std::to_string(bits);
  buffer_ += ';';
  return *this;
}

FieldHasher& FieldHasher::Add(std::optional<std::int64_t> value) {
  if (!value) {
    buffer_ += 'n';
    return *this;
  }
  return Add(*value);
}

}  // namespace l2t
