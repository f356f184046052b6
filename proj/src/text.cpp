#include "choreo/text.hpp"

#include <cctype>
#include <cstdint>

namespace choreo::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}'; }

}  // namespace

std::string normalize_whitespace(std::string_view input) {
  std::string out;
  out.reserve(input.size());
  bool pending_space = false;
  for (char c : input) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::size_t char_count(std::string_view utf8) {
  std::size_t n = 0;
  for (char c : utf8) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::vector<SentenceSpan> split_sentences(std::string_view normalized, std::string_view terminators) {
  std::vector<SentenceSpan> out;
  std::size_t begin = 0;
  std::size_t i = 0;
  const std::size_t n = normalized.size();
  while (i < n) {
    if (terminators.find(normalized[i]) == std::string_view::npos) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && terminators.find(normalized[j]) != std::string_view::npos) ++j;
    while (j < n && is_closer(normalized[j])) ++j;
    if (j < n && normalized[j] == ' ') {
      out.push_back({begin, j});
      begin = j + 1;
      i = begin;
    } else {
      i = j;
    }
  }
  if (begin < n) out.push_back({begin, n});
  return out;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (char c : data) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace choreo::text
