// Copyright 2026 The VQA Robustness Harness Authors.
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

#ifndef VQAEVAL_COMMON_TEXT_H_
#define VQAEVAL_COMMON_TEXT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vqaeval {

std::string Trim(std::string_view text);
// Trim plus collapse every run of ASCII whitespace to a single space.
std::string CollapseWhitespace(std::string_view text);
std::vector<std::string> Split(std::string_view text, std::string_view sep);
std::vector<std::string> SplitWhitespace(std::string_view text);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);
std::string ToLowerAscii(std::string_view text);
bool EqualsIgnoreCaseAscii(std::string_view a, std::string_view b);
bool EndsWith(std::string_view text, std::string_view suffix);

// Strict base-10 parse of the whole string (after trimming).
std::optional<long long> ParseInteger(std::string_view text);
std::optional<double> ParseDouble(std::string_view text);

// Fixed-point formatting with a given number of decimals ("%.*f").
std::string FormatFixed(double value, int decimals);
// Shortest round-trip representation, for machine-readable CSV columns.
std::string FormatShortest(double value);

std::string CsvEscape(std::string_view field);
// RFC 4180 single-line record parse (quoted fields may contain commas and
// doubled quotes, but not newlines).
std::vector<std::string> ParseCsvLine(std::string_view line);

}  // namespace vqaeval

#endif  // VQAEVAL_COMMON_TEXT_H_
