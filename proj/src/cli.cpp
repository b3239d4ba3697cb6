#include "arcscale/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "arcscale/afa.hpp"
#include "arcscale/arc.hpp"
#include "arcscale/corpus.hpp"
#include "arcscale/csv.hpp"
#include "arcscale/error.hpp"
#include "arcscale/lexicon.hpp"
#include "arcscale/synth.hpp"
#include "arcscale/text.hpp"

namespace arcscale::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

std::string read_text(const std::string& path, std::istream& in) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError(fmt::format("cannot open '{}'", path));
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

// Calls `body` with the requested output stream ("-" is standard output).
void with_output(const std::string& path, std::ostream& out,
                 const std::function<void(std::ostream&)>& body) {
  if (path == "-") {
    body(out);
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError(fmt::format("cannot write '{}'", path));
  body(file);
  if (!file) throw InputError(fmt::format("error writing '{}'", path));
}

std::vector<double> parse_series(const std::string& text, const std::string& source) {
  std::vector<double> series;
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  while (csv::read_line(lines, line)) {
    ++line_no;
    const auto first = csv::split_record(line).front();
    if (first.find_first_not_of(" \t") == std::string::npos) continue;
    const auto value = csv::parse_double(first);
    if (!value) {
      if (line_no == 1) continue;  // header
      throw InputError(fmt::format("{} line {}: '{}' is not a number", source, line_no, first));
    }
    series.push_back(*value);
  }
  return series;
}

// Like ordered_json::dump, but floating-point values use 17 significant
// digits so every number in the output carries the same precision as the CSVs.
void write_json(std::ostream& o, const ordered_json& j, int indent = -1, int depth = 0) {
  const bool pretty = indent >= 0;
  const auto newline = [&](int level) {
    if (pretty) o << '\n' << std::string(static_cast<std::size_t>(indent * level), ' ');
  };
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v)) {
      o << csv::format_double(v);
    } else {
      o << "null";
    }
  } else if (j.is_object() && !j.empty()) {
    o << '{';
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) o << ',';
      first = false;
      newline(depth + 1);
      o << ordered_json(key).dump() << (pretty ? ": " : ":");
      write_json(o, value, indent, depth + 1);
    }
    newline(depth);
    o << '}';
  } else if (j.is_array() && !j.empty()) {
    o << '[';
    bool first = true;
    for (const auto& value : j) {
      if (!first) o << ',';
      first = false;
      newline(depth + 1);
      write_json(o, value, indent, depth + 1);
    }
    newline(depth);
    o << ']';
  } else {
    o << j.dump();
  }
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json report_json(const CorrelationReport& r) {
  ordered_json j;
  j["min_ratings"] = r.min_ratings;
  j["n"] = r.n;
  j["pearson_r"] = r.pearson_r;
  j["pearson_p"] = r.pearson_p;
  j["spearman_rho"] = r.spearman_rho;
  j["spearman_p"] = r.spearman_p;
  j["kendall_tau"] = r.kendall_tau;
  j["kendall_p"] = r.kendall_p;
  j["distance_corr"] = r.distance_corr;
  j["distance_corr_p"] = optional_json(r.distance_corr_p);
  j["n_sweet_spot"] = r.n_sweet_spot;
  j["mean_rating_sweet_spot"] = optional_json(r.mean_rating_sweet_spot);
  j["mean_rating_outside"] = optional_json(r.mean_rating_outside);
  return j;
}

ordered_json reports_json(std::span<const StoryRecord> records,
                          const std::vector<long long>& thresholds,
                          const CorrelateOptions& options, std::ostream& err) {
  ordered_json reports = ordered_json::array();
  for (const long long t : thresholds) {
    try {
      reports.push_back(report_json(correlate(records, t, options)));
    } catch (const Error& e) {
      err << "warning: min_ratings " << t << ": " << e.what() << '\n';
      reports.push_back({{"min_ratings", t}, {"error", e.what()}});
    }
  }
  return {{"reports", reports}};
}

struct AfaFlags {
  unsigned order = 1;
  bool adaptive = false;
  std::vector<std::size_t> windows;
  std::size_t min_windows = 5;
  bool smoothed = false;
  double fraction = kDefaultSmoothingFraction;

  void add_to(CLI::App& app) {
    app.add_option("--order", order, "Polynomial order M of each segment fit")
        ->capture_default_str();
    app.add_flag("--adaptive-order", adaptive,
                 "Experimental: choose order 1..3 per segment by adjusted R^2");
    app.add_option("--windows", windows,
                   "Comma-separated odd window sizes (default: ~15 log-spaced in [5, N/4])")
        ->delimiter(',');
    app.add_option("--min-windows", min_windows, "Minimum usable window sizes for the fit")
        ->capture_default_str();
    app.add_flag("--smoothed", smoothed, "Run AFA on the smoothed arc instead of the raw one");
    app.add_option("--fraction", fraction, "Smoothing window as a fraction of arc length")
        ->capture_default_str();
  }

  [[nodiscard]] AfaConfig config() const {
    AfaConfig c;
    c.poly_order = order;
    c.order_selection = adaptive ? OrderSelection::kAdaptive : OrderSelection::kFixed;
    c.window_sizes = windows;
    c.min_windows_for_fit = min_windows;
    return c;
  }
};

struct CorrelateFlags {
  bool dcor_pvalue = false;
  std::size_t permutations = 9999;
  std::uint64_t seed = 1;

  void add_to(CLI::App& app) {
    app.add_flag("--dcor-pvalue", dcor_pvalue, "Add a permutation p-value for distance correlation");
    app.add_option("--permutations", permutations, "Permutations for --dcor-pvalue")
        ->capture_default_str();
    app.add_option("--seed", seed, "Seed for the permutation generator")->capture_default_str();
  }

  [[nodiscard]] CorrelateOptions options() const { return {dcor_pvalue, permutations, seed}; }
};

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  Streams io{in, out, err};
  CLI::App app{"Sentiment arcs, adaptive fractal analysis and rating correlations", "arcscale"};
  app.require_subcommand(1);
  std::function<void()> action;

  // arc
  auto* arc_cmd = app.add_subcommand(
      "arc", "Per-word valence arc of one story.\nOutput columns: index,raw,smooth. "
             "--summary-out columns: window,mean,std (population std).");
  std::string arc_story;
  std::string arc_lexicon;
  std::string arc_out = "-";
  std::string arc_summary;
  std::size_t arc_window = kDefaultSummaryWindow;
  double arc_fraction = kDefaultSmoothingFraction;
  double arc_neutral = kNeutralValence;
  arc_cmd->add_option("story", arc_story, "Story text file, or - for standard input")->required();
  arc_cmd->add_option("--lexicon", arc_lexicon, "Lexicon TSV (word<TAB>valence...)")->required();
  arc_cmd->add_option("--out", arc_out, "Arc CSV destination")->capture_default_str();
  arc_cmd->add_option("--summary-out", arc_summary, "Window summary CSV destination");
  arc_cmd->add_option("--window", arc_window, "Tokens per summary window")->capture_default_str();
  arc_cmd->add_option("--fraction", arc_fraction, "Smoothing window as a fraction of arc length")
      ->capture_default_str();
  arc_cmd->add_option("--neutral", arc_neutral, "Valence for out-of-lexicon tokens")
      ->capture_default_str();
  arc_cmd->callback([&] {
    action = [&] {
      const auto lexicon = load_lexicon(arc_lexicon, arc_neutral);
      const auto text = read_text(arc_story, io.in);
      if (find_invalid_utf8(text)) throw InputError(fmt::format("'{}' is not valid UTF-8", arc_story));
      auto arc = sentiment_series(tokenize(text), lexicon, fs::path(arc_story).stem().string());
      if (!arc.raw.empty()) arc = smooth(std::move(arc), arc_fraction);
      const auto summary = window_summary(arc, arc_window);
      with_output(arc_out, io.out, [&](std::ostream& o) {
        o << "index,raw,smooth\n";
        for (std::size_t i = 0; i < arc.raw.size(); ++i) {
          o << i << ',' << csv::format_double(arc.raw[i]) << ','
            << csv::format_double(arc.smooth[i]) << '\n';
        }
      });
      if (!arc_summary.empty()) {
        with_output(arc_summary, io.out, [&](std::ostream& o) {
          o << "window,mean,std\n";
          for (std::size_t i = 0; i < summary.means.size(); ++i) {
            o << i << ',' << csv::format_double(summary.means[i]) << ','
              << csv::format_double(summary.stds[i]) << '\n';
          }
        });
      }
      io.err << fmt::format("{} tokens, lexicon coverage {:.4f}\n", arc.n_tokens(), arc.coverage);
    };
  });

  // hurst
  auto* hurst_cmd = app.add_subcommand(
      "hurst", "Hurst exponent by adaptive fractal analysis.\nPrints JSON "
               "{hurst, intercept, r_squared, n_points}. --points columns: log2_w,log2_F.");
  std::string hurst_input;
  bool hurst_series = false;
  std::string hurst_lexicon;
  std::string hurst_points;
  double hurst_neutral = kNeutralValence;
  AfaFlags hurst_afa;
  hurst_cmd->add_option("input", hurst_input, "Story file or numeric series (- for stdin)")
      ->required();
  hurst_cmd->add_flag("--series", hurst_series,
                      "Input is a one-column numeric CSV (optional header) rather than text");
  hurst_cmd->add_option("--lexicon", hurst_lexicon, "Lexicon TSV, required for story input");
  hurst_cmd->add_option("--neutral", hurst_neutral, "Valence for out-of-lexicon tokens")
      ->capture_default_str();
  hurst_cmd->add_option("--points", hurst_points, "Write the scaling points CSV here");
  hurst_afa.add_to(*hurst_cmd);
  hurst_cmd->callback([&] {
    action = [&] {
      std::vector<double> series;
      const auto text = read_text(hurst_input, io.in);
      if (hurst_series) {
        series = parse_series(text, hurst_input);
      } else {
        if (hurst_lexicon.empty()) {
          throw InputError("--lexicon is required unless --series is given");
        }
        if (find_invalid_utf8(text)) {
          throw InputError(fmt::format("'{}' is not valid UTF-8", hurst_input));
        }
        const auto lexicon = load_lexicon(hurst_lexicon, hurst_neutral);
        series = sentiment_series(tokenize(text), lexicon).raw;
      }
      if (hurst_afa.smoothed && !series.empty()) {
        SentimentArc arc;
        arc.raw = series;
        arc.smooth = series;
        series = smooth(std::move(arc), hurst_afa.fraction).smooth;
      }
      const auto result = estimate_hurst(series, hurst_afa.config());
      ordered_json j;
      j["hurst"] = result.hurst;
      j["intercept"] = result.intercept;
      j["r_squared"] = result.r_squared;
      j["n_points"] = result.n_points();
      write_json(io.out, j);
      io.out << '\n';
      if (!hurst_points.empty()) {
        with_output(hurst_points, io.out, [&](std::ostream& o) {
          o << "log2_w,log2_F\n";
          for (const auto& p : result.points) {
            o << csv::format_double(p.log2_w) << ',' << csv::format_double(p.log2_f) << '\n';
          }
        });
      }
    };
  });

  // analyze
  auto* analyze_cmd = app.add_subcommand(
      "analyze",
      "Full corpus pipeline. Writes to --out:\n"
      "  results.csv       id,title,n_tokens,coverage,hurst,r_squared,avg_rating,n_ratings,"
      "sweet_spot,status\n"
      "  report.json       correlation report per --min-ratings threshold\n"
      "  scatter.csv       hurst,avg_rating,n_ratings,title\n"
      "  ratings_plot.csv  id,n_ratings,avg_rating");
  std::string an_corpus;
  std::string an_lexicon;
  std::string an_ratings;
  std::string an_out;
  std::string an_mapping;
  std::vector<long long> an_thresholds{0, 30};
  std::size_t an_jobs = std::max(1u, std::thread::hardware_concurrency());
  double an_neutral = kNeutralValence;
  AfaFlags an_afa;
  CorrelateFlags an_corr;
  analyze_cmd->add_option("--corpus", an_corpus, "Directory of *.txt stories")->required();
  analyze_cmd->add_option("--lexicon", an_lexicon, "Lexicon TSV")->required();
  analyze_cmd->add_option("--ratings", an_ratings, "Ratings CSV id,title,avg_rating,n_ratings")
      ->required();
  analyze_cmd->add_option("--out", an_out, "Output directory")->required();
  analyze_cmd->add_option("--mapping", an_mapping, "CSV file_id,ratings_id for mismatched ids");
  analyze_cmd->add_option("--min-ratings", an_thresholds,
                          "Keep stories with strictly more ratings than this (repeatable)")
      ->capture_default_str();
  analyze_cmd->add_option("--jobs", an_jobs, "Parallel story workers")->capture_default_str();
  analyze_cmd->add_option("--neutral", an_neutral, "Valence for out-of-lexicon tokens")
      ->capture_default_str();
  an_afa.add_to(*analyze_cmd);
  an_corr.add_to(*analyze_cmd);
  analyze_cmd->callback([&] {
    action = [&] {
      const auto lexicon = load_lexicon(an_lexicon, an_neutral);
      const auto corpus = load_corpus(an_corpus);
      for (const auto& w : corpus.warnings) io.err << "warning: " << w << '\n';
      const auto ratings = load_ratings(an_ratings);
      for (const auto& r : ratings.rejected) io.err << "warning: ratings " << r << '\n';

      AnalysisOptions options;
      options.afa = an_afa.config();
      options.use_smoothed = an_afa.smoothed;
      options.smoothing_fraction = an_afa.fraction;
      options.jobs = an_jobs;
      if (!an_mapping.empty()) options.id_mapping = load_mapping(an_mapping);

      const auto records = analyze_corpus(corpus.stories, lexicon, ratings.records, options);
      std::error_code ec;
      fs::create_directories(an_out, ec);
      if (ec) throw InputError(fmt::format("cannot create '{}'", an_out));
      const fs::path dir(an_out);
      with_output((dir / "results.csv").string(), io.out,
                  [&](std::ostream& o) { write_results_csv(o, records); });
      with_output((dir / "scatter.csv").string(), io.out,
                  [&](std::ostream& o) { write_scatter_csv(o, records); });
      with_output((dir / "ratings_plot.csv").string(), io.out,
                  [&](std::ostream& o) { write_ratings_plot_csv(o, records); });
      const auto report = reports_json(records, an_thresholds, an_corr.options(), io.err);
      with_output((dir / "report.json").string(), io.out,
                  [&](std::ostream& o) {
                    write_json(o, report, 2);
                    o << '\n';
                  });

      std::size_t ok = 0;
      for (const auto& r : records) ok += r.hurst ? 1 : 0;
      io.err << fmt::format("{} stories, {} with a Hurst exponent\n", records.size(), ok);
    };
  });

  // correlate
  auto* corr_cmd = app.add_subcommand(
      "correlate", "Correlation report from an existing results.csv.\nPrints JSON "
                   "{reports: [{min_ratings, n, pearson_r, pearson_p, spearman_rho, spearman_p, "
                   "kendall_tau, kendall_p, distance_corr, distance_corr_p, n_sweet_spot, "
                   "mean_rating_sweet_spot, mean_rating_outside}]}.");
  std::string corr_results;
  std::string corr_out = "-";
  std::vector<long long> corr_thresholds{0, 30};
  CorrelateFlags corr_flags;
  corr_cmd->add_option("results", corr_results, "results.csv written by analyze")->required();
  corr_cmd->add_option("--min-ratings", corr_thresholds,
                       "Keep stories with strictly more ratings than this (repeatable)")
      ->capture_default_str();
  corr_cmd->add_option("--out", corr_out, "JSON destination")->capture_default_str();
  corr_flags.add_to(*corr_cmd);
  corr_cmd->callback([&] {
    action = [&] {
      std::istringstream text(read_text(corr_results, io.in));
      const auto records = read_results_csv(text);
      const auto report = reports_json(records, corr_thresholds, corr_flags.options(), io.err);
      with_output(corr_out, io.out, [&](std::ostream& o) {
        write_json(o, report, 2);
        o << '\n';
      });
    };
  });

  // cluster
  auto* cluster_cmd = app.add_subcommand(
      "cluster", "Ward clustering of smoothed arcs.\nOutput columns: id,cluster. "
                 "--tree columns: step,left,right,height,size (leaves are 0..n-1 in id order).");
  std::string cl_corpus;
  std::string cl_lexicon;
  std::size_t cl_k = 2;
  std::vector<std::string> cl_ids;
  std::string cl_out = "-";
  std::string cl_tree;
  double cl_fraction = kDefaultSmoothingFraction;
  double cl_neutral = kNeutralValence;
  cluster_cmd->add_option("--corpus", cl_corpus, "Directory of *.txt stories")->required();
  cluster_cmd->add_option("--lexicon", cl_lexicon, "Lexicon TSV")->required();
  cluster_cmd->add_option("--k", cl_k, "Number of clusters")->capture_default_str();
  cluster_cmd->add_option("--ids", cl_ids, "Restrict to these story ids")->delimiter(',');
  cluster_cmd->add_option("--out", cl_out, "Labels CSV destination")->capture_default_str();
  cluster_cmd->add_option("--tree", cl_tree, "Merge tree CSV destination");
  cluster_cmd->add_option("--fraction", cl_fraction, "Smoothing window as a fraction of arc length")
      ->capture_default_str();
  cluster_cmd->add_option("--neutral", cl_neutral, "Valence for out-of-lexicon tokens")
      ->capture_default_str();
  cluster_cmd->callback([&] {
    action = [&] {
      const auto lexicon = load_lexicon(cl_lexicon, cl_neutral);
      const auto corpus = load_corpus(cl_corpus);
      for (const auto& w : corpus.warnings) io.err << "warning: " << w << '\n';
      std::vector<SentimentArc> arcs;
      for (const auto& story : corpus.stories) {
        if (!cl_ids.empty() && std::find(cl_ids.begin(), cl_ids.end(), story.id) == cl_ids.end()) {
          continue;
        }
        auto arc = sentiment_series(tokenize(story.text), lexicon, story.id);
        if (arc.n_tokens() < 2) {
          throw InputError(fmt::format("story '{}' has fewer than 2 tokens", story.id));
        }
        arcs.push_back(smooth(std::move(arc), cl_fraction));
      }
      const auto result = cluster_arcs(arcs, cl_k);
      with_output(cl_out, io.out, [&](std::ostream& o) {
        o << "id,cluster\n";
        for (const auto& id : result.leaf_ids) {
          csv::write_record(o, {id, std::to_string(result.labels.at(id))});
        }
      });
      if (!cl_tree.empty()) {
        with_output(cl_tree, io.out, [&](std::ostream& o) {
          o << "step,left,right,height,size\n";
          for (std::size_t i = 0; i < result.merges.size(); ++i) {
            const auto& m = result.merges[i];
            o << i << ',' << m.left << ',' << m.right << ',' << csv::format_double(m.height)
              << ',' << m.size << '\n';
          }
        });
      }
    };
  });

  // synth
  auto* synth_cmd = app.add_subcommand(
      "synth", "Synthetic series with known Hurst exponent.\nOutput: one-column CSV with "
               "header 'value'.");
  synth_cmd->set_help_flag("--help", "Print this help message and exit");  // -h is taken by --h
  double sy_h = 0.5;
  std::size_t sy_n = 4096;
  std::uint64_t sy_seed = 1;
  bool sy_white = false;
  std::string sy_out = "-";
  synth_cmd->add_option("--h,-H", sy_h, "Target Hurst exponent in (0,1)")->capture_default_str();
  synth_cmd->add_option("--n", sy_n, "Length (power of two, >= 64, for fGn)")
      ->capture_default_str();
  synth_cmd->add_option("--seed", sy_seed, "Generator seed")->capture_default_str();
  synth_cmd->add_flag("--white", sy_white, "Emit white noise instead of fGn (ignores --h)");
  synth_cmd->add_option("--out", sy_out, "CSV destination")->capture_default_str();
  synth_cmd->callback([&] {
    action = [&] {
      const auto series = sy_white ? white_noise(sy_n, sy_seed) : fgn({sy_h, sy_n, sy_seed});
      with_output(sy_out, io.out, [&](std::ostream& o) {
        o << "value\n";
        for (const double v : series) o << csv::format_double(v) << '\n';
      });
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? kExitOk : kExitUserError;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitUserError;
  } catch (const std::exception& e) {
    io.err << "internal error: " << e.what() << '\n';
    return kExitInternalError;
  }
}

}  // namespace arcscale::cli
