#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arcscale/afa.hpp"
#include "arcscale/lexicon.hpp"

namespace arcscale {

struct Story {
  std::string id;     // file stem
  std::string title;
  std::string text;
  std::size_t n_chars = 0;  // code points
};

struct RatingRecord {
  std::string id;
  std::string title;
  double avg_rating = 0.0;
  long long n_ratings = 0;
};

enum class StoryStatus { kOk, kTooShort, kDegenerate };

const char* status_name(StoryStatus status) noexcept;
std::optional<StoryStatus> parse_status(std::string_view name) noexcept;

inline constexpr double kSweetSpotLow = 0.55;
inline constexpr double kSweetSpotHigh = 0.65;

[[nodiscard]] constexpr bool in_sweet_spot(double h) noexcept {
  return h >= kSweetSpotLow && h <= kSweetSpotHigh;
}

struct StoryRecord {
  std::string id;
  std::string title;
  std::size_t n_tokens = 0;
  double coverage = 0.0;
  std::optional<double> hurst;
  std::optional<double> r_squared;
  std::optional<double> avg_rating;
  std::optional<long long> n_ratings;
  bool sweet_spot = false;
  StoryStatus status = StoryStatus::kOk;
};

struct CorpusLoad {
  std::vector<Story> stories;
  std::vector<std::string> warnings;  // one per skipped file
};

/// Every regular `*.txt` file in `dir`, sorted by id. Files that are not
/// valid UTF-8 are skipped with a warning.
CorpusLoad load_corpus(const std::filesystem::path& dir);

/// Title from the first non-blank line, falling back to the id.
std::string story_title(std::string_view text, std::string_view fallback);

struct RatingsLoad {
  std::vector<RatingRecord> records;
  std::vector<std::string> rejected;  // "line N: reason"
};

/// Ratings CSV with header `id,title,avg_rating,n_ratings`. Rows that violate
/// a range or uniqueness rule are rejected and reported; a bad header or an
/// unparsable number raises InputError.
RatingsLoad parse_ratings(std::istream& in);
RatingsLoad load_ratings(const std::filesystem::path& path);

/// Optional `file_id,ratings_id` mapping used when file stems differ from
/// rating ids.
std::map<std::string, std::string> load_mapping(const std::filesystem::path& path);

struct AnalysisOptions {
  AfaConfig afa;
  bool use_smoothed = false;
  double smoothing_fraction = 0.05;
  std::size_t jobs = 1;
  std::map<std::string, std::string> id_mapping;
};

/// Full pipeline for one story, with the rating join applied when
/// `rating` is non-null. Never throws for short or degenerate text.
StoryRecord analyze_story(const Story& story, const Lexicon& lexicon,
                          const AnalysisOptions& options, const RatingRecord* rating);

/// One record per story in corpus order. Throws InputError when no story
/// yields a Hurst exponent.
std::vector<StoryRecord> analyze_corpus(std::span<const Story> corpus, const Lexicon& lexicon,
                                        std::span<const RatingRecord> ratings,
                                        const AnalysisOptions& options = {});

struct CorrelationReport {
  std::size_t n = 0;
  long long min_ratings = 0;
  double pearson_r = 0.0;
  double pearson_p = 1.0;
  double spearman_rho = 0.0;
  double spearman_p = 1.0;
  double kendall_tau = 0.0;
  double kendall_p = 1.0;
  double distance_corr = 0.0;
  std::optional<double> distance_corr_p;
  std::size_t n_sweet_spot = 0;
  std::optional<double> mean_rating_sweet_spot;
  std::optional<double> mean_rating_outside;
};

struct CorrelateOptions {
  bool distance_pvalue = false;
  std::size_t permutations = 9999;
  std::uint64_t seed = 1;
};

/// Records with a Hurst value, a joined rating, and n_ratings strictly
/// greater than `min_ratings`.
std::vector<const StoryRecord*> filter_records(std::span<const StoryRecord> records,
                                               long long min_ratings);

CorrelationReport correlate(std::span<const StoryRecord> records, long long min_ratings,
                            const CorrelateOptions& options = {});

void write_results_csv(std::ostream& out, std::span<const StoryRecord> records);
std::vector<StoryRecord> read_results_csv(std::istream& in);
void write_scatter_csv(std::ostream& out, std::span<const StoryRecord> records);
void write_ratings_plot_csv(std::ostream& out, std::span<const StoryRecord> records);

}  // namespace arcscale
