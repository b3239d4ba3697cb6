#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>

namespace arcscale {

inline constexpr double kNeutralValence = 0.5;

/// Word -> valence map in the NRC-VAD layout. Immutable after load, so a
/// single instance may be shared across threads.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(double neutral_value);

  /// Stored valence for `token`, or the neutral value for anything absent.
  /// `token` must already be case-folded.
  [[nodiscard]] double valence(std::string_view token) const noexcept;

  [[nodiscard]] bool contains(std::string_view token) const noexcept;
  [[nodiscard]] std::size_t entry_count() const noexcept { return entries_.size(); }
  [[nodiscard]] double neutral_value() const noexcept { return neutral_; }
  /// Number of words that appeared more than once in the source file.
  [[nodiscard]] std::size_t duplicate_count() const noexcept { return duplicates_; }

  [[nodiscard]] const std::unordered_map<std::string, double>& entries() const noexcept {
    return entries_;
  }

  /// Inserts or replaces an entry. Keys are case-folded; values outside
  /// [0,1] throw ParameterError.
  void insert(std::string_view word, double valence);

 private:
  friend Lexicon parse_lexicon(std::istream& in, double neutral);

  std::unordered_map<std::string, double> entries_;
  double neutral_ = kNeutralValence;
  std::size_t duplicates_ = 0;
};

/// Parses tab-separated `word<TAB>valence[<TAB>arousal<TAB>dominance]` rows.
/// A first line whose second field is not a decimal is treated as a header.
/// Malformed rows and out-of-range valences raise InputError naming the
/// line number.
Lexicon parse_lexicon(std::istream& in, double neutral = kNeutralValence);

Lexicon load_lexicon(const std::filesystem::path& path, double neutral = kNeutralValence);

/// Writes entries sorted by word, one `word<TAB>valence` row each, with
/// 17 significant digits so that parse_lexicon reproduces them exactly.
void write_lexicon(std::ostream& out, const Lexicon& lexicon);

}  // namespace arcscale
