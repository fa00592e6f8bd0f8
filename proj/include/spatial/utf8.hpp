#pragma once

#include <string>
#include <string_view>

namespace spatial::utf8 {

// Decodes UTF-8 into scalar values. Invalid sequences decode to U+FFFD, one
// replacement per offending byte, so the result is always well-formed.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

// Number of scalar values in a UTF-8 string (same rules as decode).
std::size_t length(std::string_view bytes);

}  // namespace spatial::utf8
