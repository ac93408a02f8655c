#ifndef DDPARSE_TEXT_H_
#define DDPARSE_TEXT_H_

// Small UTF-8 helpers. Only what the tokenizer and statistics need; no
// normalization or case folding beyond ASCII.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ddparse::text {

// Decodes UTF-8 into code points. Invalid bytes decode as U+FFFD.
std::vector<char32_t> Decode(std::string_view s);
std::string Encode(char32_t cp);

bool IsSpace(char32_t cp);
bool IsPunct(char32_t cp);

// Strips leading/trailing Unicode whitespace.
std::string Trim(std::string_view s);

// Number of code points after trimming.
std::size_t CharCount(std::string_view s);

std::string AsciiLower(std::string_view s);

// Whitespace split; trailing punctuation of each chunk becomes separate
// one-character tokens ("works." -> "works", ".").
std::vector<std::string> Tokenize(std::string_view s);

bool StartsWith(std::string_view s, std::string_view prefix);

}  // namespace ddparse::text

#endif  // DDPARSE_TEXT_H_
