#include "ddparse/text.h"

namespace ddparse::text {

std::vector<char32_t> Decode(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= s.size();
    for (int j = 1; ok && j < len; ++j) {
      const auto b = static_cast<unsigned char>(s[i + j]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string Encode(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return out;
}

bool IsSpace(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool IsPunct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0x2018: case 0x2019: case 0x201C: case 0x201D: case 0x2026:
    case 0x2013: case 0x2014:
    case 0x3001: case 0x3002: case 0x300A: case 0x300B: case 0x300C:
    case 0x300D: case 0x3010: case 0x3011:
    case 0xFF01: case 0xFF08: case 0xFF09: case 0xFF0C: case 0xFF1A:
    case 0xFF1B: case 0xFF1F:
      return true;
    default:
      return false;
  }
}

std::string Trim(std::string_view s) {
  const auto cps = Decode(s);
  std::size_t begin = 0;
  std::size_t end = cps.size();
  while (begin < end && IsSpace(cps[begin])) ++begin;
  while (end > begin && IsSpace(cps[end - 1])) --end;
  std::string out;
  for (std::size_t i = begin; i < end; ++i) out += Encode(cps[i]);
  return out;
}

std::size_t CharCount(std::string_view s) { return Decode(Trim(s)).size(); }

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string> Tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  const auto cps = Decode(s);
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && IsSpace(cps[i])) ++i;
    std::size_t j = i;
    while (j < cps.size() && !IsSpace(cps[j])) ++j;
    if (j == i) break;
    std::size_t word_end = j;
    while (word_end > i + 1 && IsPunct(cps[word_end - 1])) --word_end;
    // A chunk made only of punctuation splits into single characters too.
    if (word_end == i + 1 && IsPunct(cps[i]) && j > i + 1) word_end = i;
    if (word_end > i) {
      std::string word;
      for (std::size_t p = i; p < word_end; ++p) word += Encode(cps[p]);
      tokens.push_back(std::move(word));
    }
    for (std::size_t p = word_end; p < j; ++p) tokens.push_back(Encode(cps[p]));
    i = j;
  }
  return tokens;
}

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace ddparse::text
