#!/usr/bin/env python3
# Copyright 2026 The L2T Harness Authors
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Counting oracle for response-language identification.

Classifies letters by their Unicode character name rather than a script
property table, then applies the majority rule. Writes the frozen fixture
file consumed by the C++ tests:

    python3 langid_oracle.py ../data/langid_fixtures.json
"""

import json
import sys
import unicodedata

CLASSES = ["Latin", "Han", "Hangul", "Arabic", "Other"]
LANG = {"Latin": "EN", "Han": "ZH", "Hangul": "KO", "Arabic": "AR"}


def classify(ch):
    name = unicodedata.name(ch, "")
    if "LATIN" in name:
        return "Latin"
    if name.startswith("CJK UNIFIED IDEOGRAPH") or name.startswith(
            "CJK COMPATIBILITY IDEOGRAPH"):
        return "Han"
    if name.startswith("HANGUL"):
        return "Hangul"
    if name.startswith("ARABIC"):
        return "Arabic"
    return "Other"


def histogram(text):
    counts = {c: 0 for c in CLASSES}
    total = 0
    for ch in text:
        if not unicodedata.category(ch).startswith("L"):
            continue
        counts[classify(ch)] += 1
        total += 1
    return counts, total


def detect(text):
    counts, total = histogram(text)
    for cls in ["Latin", "Han", "Hangul", "Arabic"]:
        if 2 * counts[cls] > total:
            return LANG[cls]
    return "Unknown"


MIXED_TRANSCRIPT = (
    "好的，我们来分析一下这道关于中国饮食文化的题目。\n"
    "题目问的是满族名菜。\n\n"
    "* A. 黄焖鸡 (Huang's Steamed Chicken):\n"
    "这道菜是山东地区的特色菜，不是满族菜。\n\n"
    "* B. 莲花鸡串 (Lotus Chicken Skewers):\n"
    "这不是一道有名的菜品，而且看起来更像是现代菜。\n\n"
    "* C. 一品锅 (Yipin Pot):\n"
    "一品锅是安徽的特色菜，和满族菜没有直接关系。\n\n"
    "* D. 白肉血肠 (White Meat and Blood Soup):\n"
    "白肉血肠是满族特色菜，符合题意。\n\n"
    "Therefore, the answer is D."
)

FIXTURES = [
    ("pure-latin", "Therefore, the answer is B."),
    ("pure-hangul", "따라서 답은 비입니다"),
    ("pure-han", "因此答案是满族名菜"),
    ("pure-arabic", "لذلك الإجابة هي الخيار الثاني"),
    ("mixed-zh-en-transcript", MIXED_TRANSCRIPT),
    ("digits-only", "1234 5678"),
    ("empty", ""),
    ("korean-with-letter", "따라서 답은 B입니다."),
    ("english-with-hangul-name", "Gyeonggi-do (경기도) surrounds Seoul."),
    ("even-split", "ab가나"),
    ("kana-majority", "こんにちは A"),
    ("arabic-with-latin-letter", "لذلك، الإجابة هي B."),
]


def main():
    out = []
    for fid, text in FIXTURES:
        counts, total = histogram(text)
        out.append({
            "id": fid,
            "text": text,
            "counts": [counts[c] for c in CLASSES],
            "total": total,
            "expected": detect(text),
        })
    with open(sys.argv[1], "w", encoding="utf-8") as f:
        json.dump(out, f, ensure_ascii=False, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
