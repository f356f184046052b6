#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace choreo::text {

inline constexpr std::string_view kDefaultTerminators = ".!?";

// Collapses every whitespace run to one space and trims both ends.
std::string normalize_whitespace(std::string_view input);

// Number of UTF-8 code points.
std::size_t char_count(std::string_view utf8);

// Byte range [begin, end) of one sentence inside a normalized string.
struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Splits normalized text at sentence boundaries. A boundary is a run of
// terminator characters, optionally followed by closing quotes or
// brackets, followed by a space. "3.5 mm" is therefore not split. The
// spaces between sentences belong to no span, so joining the sentences
// with single spaces reproduces the input exactly.
std::vector<SentenceSpan> split_sentences(std::string_view normalized,
                                          std::string_view terminators = kDefaultTerminators);

std::string to_lower_ascii(std::string_view s);

// 64-bit FNV-1a; stable across platforms, used for stub audio refs.
std::uint64_t fnv1a(std::string_view data);

}  // namespace choreo::text
