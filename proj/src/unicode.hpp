#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace lvke::unicode {

// Decodes one code point starting at text[pos] and advances pos. Malformed
// sequences yield U+FFFD and consume a single byte.
char32_t decode(std::string_view text, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

bool is_digit(char32_t cp);

// Letters, digits and combining marks. Everything outside ASCII that is not a
// known punctuation, symbol, space or control block is treated as a letter.
bool is_alnum(char32_t cp);

bool is_space(char32_t cp);

char32_t to_lower(char32_t cp);

std::size_t length(std::string_view text);

}  // namespace lvke::unicode
