#include "arcscale/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <atomic>
#include <exception>
#include <fstream>
#include <istream>
#include <iterator>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <fmt/format.h>

#include "arcscale/arc.hpp"
#include "arcscale/csv.hpp"
#include "arcscale/error.hpp"
#include "arcscale/stats.hpp"
#include "arcscale/text.hpp"

namespace arcscale {
namespace {

constexpr std::string_view kRatingsHeader = "id,title,avg_rating,n_ratings";
constexpr std::string_view kResultsHeader =
    "id,title,n_tokens,coverage,hurst,r_squared,avg_rating,n_ratings,sweet_spot,status";

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_bom(std::string_view s) {
  if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
  return s;
}

std::string optional_double(const std::optional<double>& v) {
  return v ? csv::format_double(*v) : std::string();
}

}  // namespace

const char* status_name(StoryStatus status) noexcept {
  switch (status) {
    case StoryStatus::kOk:
      return "ok";
    case StoryStatus::kTooShort:
      return "too_short";
    case StoryStatus::kDegenerate:
      return "degenerate";
  }
  return "unknown";
}

std::optional<StoryStatus> parse_status(std::string_view name) noexcept {
  for (const auto s : {StoryStatus::kOk, StoryStatus::kTooShort, StoryStatus::kDegenerate}) {
    if (name == status_name(s)) return s;
  }
  return std::nullopt;
}

std::string story_title(std::string_view text, std::string_view fallback) {
  text = strip_bom(text);
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    const auto line = trim(text.substr(0, eol));
    if (!line.empty()) return std::string(line);
    if (eol == std::string_view::npos) break;
    text.remove_prefix(eol + 1);
  }
  return std::string(fallback);
}

CorpusLoad load_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw InputError(fmt::format("corpus directory '{}' does not exist", dir.string()));
  }
  std::vector<std::filesystem::path> files;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) throw InputError(fmt::format("cannot read corpus directory '{}'", dir.string()));
  for (const auto& entry : it) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.stem().string() < b.stem().string(); });

  CorpusLoad load;
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      load.warnings.push_back(fmt::format("{}: cannot open, skipped", file.string()));
      continue;
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (const auto bad = find_invalid_utf8(bytes)) {
      load.warnings.push_back(
          fmt::format("{}: invalid UTF-8 at byte {}, skipped", file.string(), *bad));
      continue;
    }
    Story story;
    story.id = file.stem().string();
    story.text = std::string(strip_bom(bytes));
    story.title = story_title(story.text, story.id);
    story.n_chars = count_code_points(story.text);
    load.stories.push_back(std::move(story));
  }
  return load;
}

RatingsLoad parse_ratings(std::istream& in) {
  std::string line;
  if (!csv::read_line(in, line) || trim(strip_bom(line)) != kRatingsHeader) {
    throw InputError(fmt::format("ratings: expected header '{}'", kRatingsHeader));
  }
  RatingsLoad load;
  std::set<std::string> seen;
  std::size_t line_no = 1;
  while (csv::read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = csv::split_record(line);
    if (fields.size() != 4) {
      throw InputError(
          fmt::format("ratings line {}: expected 4 fields, got {}", line_no, fields.size()));
    }
    const auto avg = csv::parse_double(fields[2]);
    const auto count = csv::parse_integer(fields[3]);
    if (!avg || !count) {
      throw InputError(fmt::format("ratings line {}: unparsable number", line_no));
    }
    RatingRecord record{std::string(trim(fields[0])), std::string(trim(fields[1])), *avg,
                        *count};
    if (record.id.empty()) {
      load.rejected.push_back(fmt::format("line {}: empty id", line_no));
    } else if (!(record.avg_rating >= 1.0 && record.avg_rating <= 5.0)) {
      load.rejected.push_back(
          fmt::format("line {}: avg_rating {} outside [1,5]", line_no, fields[2]));
    } else if (record.n_ratings < 0) {
      load.rejected.push_back(fmt::format("line {}: negative n_ratings", line_no));
    } else if (!seen.insert(record.id).second) {
      load.rejected.push_back(fmt::format("line {}: duplicate id '{}'", line_no, record.id));
    } else {
      load.records.push_back(std::move(record));
    }
  }
  return load;
}

RatingsLoad load_ratings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open ratings '{}'", path.string()));
  try {
    return parse_ratings(in);
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::map<std::string, std::string> load_mapping(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open mapping '{}'", path.string()));
  std::string line;
  if (!csv::read_line(in, line) || trim(strip_bom(line)) != "file_id,ratings_id") {
    throw InputError(fmt::format("{}: expected header 'file_id,ratings_id'", path.string()));
  }
  std::map<std::string, std::string> mapping;
  std::size_t line_no = 1;
  while (csv::read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = csv::split_record(line);
    if (fields.size() != 2) {
      throw InputError(fmt::format("{} line {}: expected 2 fields", path.string(), line_no));
    }
    mapping[std::string(trim(fields[0]))] = std::string(trim(fields[1]));
  }
  return mapping;
}

StoryRecord analyze_story(const Story& story, const Lexicon& lexicon,
                          const AnalysisOptions& options, const RatingRecord* rating) {
  StoryRecord record;
  record.id = story.id;
  record.title = story.title;

  const auto tokens = tokenize(story.text);
  auto arc = sentiment_series(tokens, lexicon, story.id);
  record.n_tokens = arc.n_tokens();
  record.coverage = arc.coverage;
  if (options.use_smoothed && !arc.raw.empty()) {
    arc = smooth(std::move(arc), options.smoothing_fraction);
  }
  const auto& series = options.use_smoothed ? arc.smooth : arc.raw;

  try {
    const auto afa = estimate_hurst(series, options.afa);
    record.hurst = afa.hurst;
    record.r_squared = afa.r_squared;
    record.sweet_spot = in_sweet_spot(afa.hurst);
    record.status = StoryStatus::kOk;
  } catch (const SeriesTooShortError&) {
    record.status = StoryStatus::kTooShort;
  } catch (const DegenerateSeriesError&) {
    record.status = StoryStatus::kDegenerate;
  }

  if (rating != nullptr) {
    record.avg_rating = rating->avg_rating;
    record.n_ratings = rating->n_ratings;
  }
  return record;
}

std::vector<StoryRecord> analyze_corpus(std::span<const Story> corpus, const Lexicon& lexicon,
                                        std::span<const RatingRecord> ratings,
                                        const AnalysisOptions& options) {
  std::unordered_map<std::string, const RatingRecord*> by_id;
  for (const auto& r : ratings) by_id.emplace(r.id, &r);
  const auto rating_for = [&](const std::string& story_id) -> const RatingRecord* {
    const auto mapped = options.id_mapping.find(story_id);
    const auto& key = mapped == options.id_mapping.end() ? story_id : mapped->second;
    const auto it = by_id.find(key);
    return it == by_id.end() ? nullptr : it->second;
  };

  std::vector<StoryRecord> records(corpus.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < corpus.size(); i = next++) {
      try {
        records[i] = analyze_story(corpus[i], lexicon, options, rating_for(corpus[i].id));
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(1, corpus.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const bool any_ok = std::any_of(records.begin(), records.end(),
                                  [](const StoryRecord& r) { return r.hurst.has_value(); });
  if (!any_ok) {
    throw InputError(fmt::format("none of the {} stories produced a Hurst exponent",
                                 corpus.size()));
  }
  return records;
}

std::vector<const StoryRecord*> filter_records(std::span<const StoryRecord> records,
                                               long long min_ratings) {
  std::vector<const StoryRecord*> kept;
  for (const auto& r : records) {
    if (r.hurst && r.avg_rating && r.n_ratings && *r.n_ratings > min_ratings) {
      kept.push_back(&r);
    }
  }
  return kept;
}

CorrelationReport correlate(std::span<const StoryRecord> records, long long min_ratings,
                            const CorrelateOptions& options) {
  const auto kept = filter_records(records, min_ratings);
  if (kept.size() < 3) {
    throw InputError(fmt::format(
        "only {} records have a Hurst value and more than {} ratings; need at least 3",
        kept.size(), min_ratings));
  }
  std::vector<double> h;
  std::vector<double> rating;
  for (const auto* r : kept) {
    h.push_back(*r->hurst);
    rating.push_back(*r->avg_rating);
  }

  CorrelationReport report;
  report.n = kept.size();
  report.min_ratings = min_ratings;
  const auto p = pearson(h, rating);
  const auto s = spearman(h, rating);
  const auto k = kendall_tau(h, rating);
  report.pearson_r = p.value;
  report.pearson_p = p.p_value;
  report.spearman_rho = s.value;
  report.spearman_p = s.p_value;
  report.kendall_tau = k.value;
  report.kendall_p = k.p_value;
  report.distance_corr = distance_correlation(h, rating);
  if (options.distance_pvalue) {
    report.distance_corr_p =
        distance_correlation_pvalue(h, rating, options.permutations, options.seed);
  }

  double inside = 0.0;
  double outside = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (in_sweet_spot(h[i])) {
      ++report.n_sweet_spot;
      inside += rating[i];
    } else {
      outside += rating[i];
    }
  }
  if (report.n_sweet_spot > 0) {
    report.mean_rating_sweet_spot = inside / static_cast<double>(report.n_sweet_spot);
  }
  if (report.n_sweet_spot < report.n) {
    report.mean_rating_outside = outside / static_cast<double>(report.n - report.n_sweet_spot);
  }
  return report;
}

void write_results_csv(std::ostream& out, std::span<const StoryRecord> records) {
  out << kResultsHeader << '\n';
  for (const auto& r : records) {
    csv::write_record(out, {r.id, r.title, std::to_string(r.n_tokens),
                            csv::format_double(r.coverage), optional_double(r.hurst),
                            optional_double(r.r_squared), optional_double(r.avg_rating),
                            r.n_ratings ? std::to_string(*r.n_ratings) : std::string(),
                            r.sweet_spot ? "true" : "false", status_name(r.status)});
  }
}

std::vector<StoryRecord> read_results_csv(std::istream& in) {
  std::string line;
  if (!csv::read_line(in, line) || trim(strip_bom(line)) != kResultsHeader) {
    throw InputError(fmt::format("results: expected header '{}'", kResultsHeader));
  }
  std::vector<StoryRecord> records;
  std::size_t line_no = 1;
  const auto number = [&](const std::string& field) -> std::optional<double> {
    if (trim(field).empty()) return std::nullopt;
    const auto v = csv::parse_double(field);
    if (!v) throw InputError(fmt::format("results line {}: bad number '{}'", line_no, field));
    return v;
  };
  while (csv::read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = csv::split_record(line);
    if (f.size() != 10) {
      throw InputError(fmt::format("results line {}: expected 10 fields", line_no));
    }
    StoryRecord r;
    r.id = f[0];
    r.title = f[1];
    const auto tokens = csv::parse_integer(f[2]);
    const auto status = parse_status(trim(f[9]));
    if (!tokens || *tokens < 0 || !status) {
      throw InputError(fmt::format("results line {}: bad n_tokens or status", line_no));
    }
    r.n_tokens = static_cast<std::size_t>(*tokens);
    r.coverage = number(f[3]).value_or(0.0);
    r.hurst = number(f[4]);
    r.r_squared = number(f[5]);
    r.avg_rating = number(f[6]);
    if (!trim(f[7]).empty()) {
      r.n_ratings = csv::parse_integer(f[7]);
      if (!r.n_ratings) throw InputError(fmt::format("results line {}: bad n_ratings", line_no));
    }
    r.sweet_spot = trim(f[8]) == "true";
    r.status = *status;
    records.push_back(std::move(r));
  }
  return records;
}

void write_scatter_csv(std::ostream& out, std::span<const StoryRecord> records) {
  out << "hurst,avg_rating,n_ratings,title\n";
  for (const auto& r : records) {
    if (!r.hurst || !r.avg_rating || !r.n_ratings) continue;
    csv::write_record(out, {csv::format_double(*r.hurst), csv::format_double(*r.avg_rating),
                            std::to_string(*r.n_ratings), r.title});
  }
}

void write_ratings_plot_csv(std::ostream& out, std::span<const StoryRecord> records) {
  out << "id,n_ratings,avg_rating\n";
  for (const auto& r : records) {
    if (!r.avg_rating || !r.n_ratings) continue;
    csv::write_record(out, {r.id, std::to_string(*r.n_ratings), csv::format_double(*r.avg_rating)});
  }
}

}  // namespace arcscale
