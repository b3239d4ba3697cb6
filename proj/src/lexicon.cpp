#include "arcscale/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include <fmt/format.h>

#include "arcscale/csv.hpp"
#include "arcscale/error.hpp"
#include "arcscale/text.hpp"

namespace arcscale {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool valid_valence(double v) noexcept { return v >= 0.0 && v <= 1.0; }

}  // namespace

Lexicon::Lexicon(double neutral_value) : neutral_(neutral_value) {
  if (!valid_valence(neutral_value)) {
    throw ParameterError(fmt::format("neutral valence {} is outside [0,1]", neutral_value));
  }
}

double Lexicon::valence(std::string_view token) const noexcept {
  const auto it = entries_.find(std::string(token));
  return it == entries_.end() ? neutral_ : it->second;
}

bool Lexicon::contains(std::string_view token) const noexcept {
  return entries_.find(std::string(token)) != entries_.end();
}

void Lexicon::insert(std::string_view word, double valence) {
  if (!valid_valence(valence)) {
    throw ParameterError(fmt::format("valence {} for '{}' is outside [0,1]", valence, word));
  }
  auto [it, inserted] = entries_.insert_or_assign(fold_case(word), valence);
  if (!inserted) ++duplicates_;
}

Lexicon parse_lexicon(std::istream& in, double neutral) {
  Lexicon lexicon(neutral);
  std::string line;
  std::size_t line_no = 0;
  while (csv::read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    const auto value = fields.size() >= 2 ? csv::parse_double(fields[1]) : std::nullopt;
    if (line_no == 1 && !value) continue;  // header
    if (fields.size() < 2 || fields[0].empty()) {
      throw InputError(fmt::format("lexicon line {}: expected word<TAB>valence", line_no));
    }
    if (!value) {
      throw InputError(
          fmt::format("lexicon line {}: valence '{}' is not a decimal", line_no, fields[1]));
    }
    if (!valid_valence(*value)) {
      throw InputError(
          fmt::format("lexicon line {}: valence {} is outside [0,1]", line_no, fields[1]));
    }
    lexicon.insert(fields[0], *value);
  }
  if (in.bad()) throw InputError("lexicon: read error");
  return lexicon;
}

Lexicon load_lexicon(const std::filesystem::path& path, double neutral) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open lexicon '{}'", path.string()));
  try {
    return parse_lexicon(in, neutral);
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_lexicon(std::ostream& out, const Lexicon& lexicon) {
  std::vector<std::pair<std::string, double>> rows(lexicon.entries().begin(),
                                                   lexicon.entries().end());
  std::sort(rows.begin(), rows.end());
  out << "word\tvalence\n";
  for (const auto& [word, value] : rows) out << word << '\t' << csv::format_double(value) << '\n';
}

}  // namespace arcscale
