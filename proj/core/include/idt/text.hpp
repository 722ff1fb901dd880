#pragma once

#include <string>
#include <string_view>

namespace idt::text {

// ASCII-only case folding; bytes >= 0x80 (UTF-8 continuation and lead
// bytes) pass through untouched.
std::string to_lower(std::string_view s);

bool is_space(char c);
bool is_punct(char c);
// Letters, digits, and any non-ASCII byte.
bool is_word_byte(char c);

// Position of the first case-insensitive occurrence of needle, or npos.
std::size_t find_case_insensitive(std::string_view haystack, std::string_view needle);

}  // namespace idt::text
