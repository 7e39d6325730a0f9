// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace szz {

bool is_hex_lower(std::string_view s);
bool is_full_id(std::string_view s);  // ^[0-9a-f]{40}$

std::string to_lower(std::string s);
std::string_view trim(std::string_view s);

// Splits on '\n'; a trailing newline does not produce an empty last element.
std::vector<std::string> split_lines(std::string_view text);

std::vector<std::string> split(std::string_view s, char sep);

// Removes every whitespace character. Used for cosmetic-change detection and
// similarity scoring, where indentation and spacing churn must not count.
std::string collapse_whitespace(std::string_view s);

// Levenshtein distance, iterative two-row DP.
std::size_t edit_distance(std::string_view a, std::string_view b);

// FNV-1a over a byte sequence, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

void log_warn(const std::string& message);

}  // namespace szz
