#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arcscale {

/// Returns the byte offset of the first invalid UTF-8 sequence, or nullopt
/// when the whole buffer is well formed (overlongs and surrogates rejected).
std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) noexcept;

/// Number of code points in a valid UTF-8 string.
std::size_t count_code_points(std::string_view utf8) noexcept;

/// Simple (one-to-one) case folding for Latin, Greek and Cyrillic letters;
/// other code points pass through unchanged.
std::string fold_case(std::string_view utf8);

/// Splits text into lowercased word tokens. A token is a maximal run of
/// letters; an apostrophe (U+0027 or U+2019, emitted as U+0027) is kept only
/// when it sits between two letters. Everything else separates tokens.
std::vector<std::string> tokenize(std::string_view utf8);

}  // namespace arcscale
