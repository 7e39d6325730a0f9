// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace szz {

// RFC 4180 quoting: fields containing comma, quote, CR or LF are wrapped in
// double quotes with embedded quotes doubled.
std::string csv_quote(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);

// Parses a whole CSV document. Lines starting with '#' outside of a quoted
// field are treated as comments (used for the config-hash file headers).
std::vector<std::vector<std::string>> csv_parse(std::string_view text);

}  // namespace szz
