#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cocomment::utf8 {

bool is_valid(std::string_view text);

// Decodes to code points; invalid sequences become U+FFFD.
std::vector<char32_t> decode(std::string_view text);
std::string encode(const std::vector<char32_t>& code_points);
void append(std::string& out, char32_t cp);

std::size_t length(std::string_view text);

// Unicode classification backed by ICU.
bool is_emoji(char32_t cp);
bool is_letter(char32_t cp);
bool is_word_char(char32_t cp);   // letters, digits, combining marks
bool is_uppercase(char32_t cp);
char32_t to_lower(char32_t cp);

std::string to_lower(std::string_view text);

}  // namespace cocomment::utf8
