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

// JSON encoding of the core types. Decoding validates: malformed values raise
// the same errors the constructors would.

#ifndef L2T_TYPES_JSON_H_
#define L2T_TYPES_JSON_H_

#include <json.hpp>

#include "l2t/types.h"

namespace l2t {

using Json = nlohmann::ordered_json;

void to_json(Json& j, Language lang);
void from_json(const Json& j, Language& lang);

void to_json(Json& j, Letter letter);
void from_json(const Json& j, Letter& letter);

void to_json(Json& j, SettingKind kind);
void from_json(const Json& j, SettingKind& kind);

void to_json(Json& j, const L2TSetting& s);
void from_json(const Json& j, L2TSetting& s);

void to_json(Json& j, const MCQItem& item);
void from_json(const Json& j, MCQItem& item);

void to_json(Json& j, const RequestParams& p);
void from_json(const Json& j, RequestParams& p);

void to_json(Json& j, const ExtractionResult& r);
void from_json(const Json& j, ExtractionResult& r);

void to_json(Json& j, const EvalTranscript& t);
void from_json(const Json& j, EvalTranscript& t);

void to_json(Json& j, const TokenLogProbTrace& t);
void from_json(const Json& j, TokenLogProbTrace& t);

}  // namespace l2t

#endif  // L2T_TYPES_JSON_H_
