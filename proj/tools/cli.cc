// Copyright 2026 The Outbreak Wiki Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "outbreak/corpus.h"
#include "outbreak/crf.h"
#include "outbreak/error.h"
#include "outbreak/ingest.h"
#include "outbreak/nereval.h"
#include "outbreak/report.h"
#include "outbreak/synth.h"
#include "outbreak/timeseries.h"
#include "outbreak/wikitext.h"

namespace outbreak::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Raised for flag combinations CLI11 cannot check on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path &path, std::string_view data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << data;
  if (!out.flush()) throw Error("failed writing " + path.string());
}

template <typename Fn>
void write_stream(const fs::path &path, Fn &&fn) {
  std::ostringstream buf;
  fn(buf);
  write_file(path, buf.str());
}

std::optional<Timestamp> parse_bound(const std::string &text, bool end_of_day) {
  if (text.empty()) return std::nullopt;
  try {
    Timestamp ts = parse_timestamp(text);
    // A bare end date includes that whole day.
    if (end_of_day && text.size() == 10) ts += std::chrono::seconds{86399};
    return ts;
  } catch (const ParseError &e) {
    throw UsageError(e.what());
  }
}

std::optional<Date> parse_day(const std::string &text) {
  if (text.empty()) return std::nullopt;
  try {
    return parse_iso_date(text);
  } catch (const ParseError &e) {
    throw UsageError(e.what());
  }
}

struct Globals {
  std::string log_level = "warn";
  unsigned jobs = 1;
};

struct CacheArgs {
  std::string cache;
  std::string title;
  std::string start;
  std::string end;

  void add_to(CLI::App *cmd, bool title_required = true) {
    cmd->add_option("--cache", cache, "Revision cache directory (OUTBREAK_CACHE_DIR wins)");
    auto *t = cmd->add_option("--title", title, "Article title");
    if (title_required) t->required();
    cmd->add_option("--start", start, "Window start, ISO date or timestamp");
    cmd->add_option("--end", end, "Window end, ISO date (whole day) or timestamp");
  }

  fs::path cache_dir() const {
    const char *env = std::getenv("OUTBREAK_CACHE_DIR");
    if (env && *env) return env;
    if (cache.empty()) throw UsageError("--cache is required (or set OUTBREAK_CACHE_DIR)");
    return cache;
  }

  std::vector<ingest::ArticleRevision> load() const {
    auto dir = cache_dir();
    auto from = parse_bound(start, false);
    auto to = parse_bound(end, true);
    ingest::RevisionCache cache_store(dir, ingest::RevisionCache::Mode::kReadOnly);
    auto revisions = cache_store.load(title, from, to);
    if (revisions.empty()) {
      throw NotFoundError("no cached revisions of '" + title + "' in " + dir.string());
    }
    spdlog::info("loaded {} cached revisions of '{}'", revisions.size(), title);
    return revisions;
  }
};

struct FeatureArgs {
  int max_ngram = 6;
  int window = 2;
  double l2 = 1.0;
  bool no_pos = false;
  bool no_shape = false;
  int max_iter = 200;

  void add_to(CLI::App *cmd, bool with_ngram = true) {
    if (with_ngram) {
      cmd->add_option("--max-ngram", max_ngram, "Character n-gram cap (1-12)")
          ->check(CLI::Range(1, 12));
    }
    cmd->add_option("--window", window, "Token context window")->check(CLI::NonNegativeNumber);
    cmd->add_option("--l2", l2, "L2 regularization strength")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--no-pos", no_pos, "Drop POS features");
    cmd->add_flag("--no-shape", no_shape, "Drop word-shape features");
    cmd->add_option("--max-iter", max_iter, "L-BFGS iteration cap")->check(CLI::PositiveNumber);
  }

  crf::FeatureConfig config() const {
    crf::FeatureConfig c;
    c.max_ngram_len = max_ngram;
    c.window = window;
    c.l2_lambda = l2;
    c.use_pos = !no_pos;
    c.use_shape = !no_shape;
    return c;
  }

  crf::TrainOptions options() const {
    crf::TrainOptions o;
    o.max_iterations = max_iter;
    return o;
  }
};

timeseries::ColumnMapping load_mapping(const std::string &path) {
  if (path.empty()) return timeseries::ColumnMapping::ebola_defaults();
  return timeseries::ColumnMapping::from_json(read_file(path));
}

json tables_json(const std::vector<wikitext::RawTable> &tables) {
  json out = json::array();
  for (const auto &t : tables) {
    out.push_back({{"begin", t.begin}, {"end", t.end}, {"header", t.header}, {"rows", t.rows}});
  }
  return out;
}

std::string join_tokens(std::span<const std::string> tokens, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i <= to && i < tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

class Runner {
 public:
  Runner(std::ostream &out, std::ostream &err) : out_(out), err_(err) {}

  int run(std::span<const std::string> args);

 private:
  void build(CLI::App &app);

  std::ostream &out_;
  std::ostream &err_;
  Globals globals_;
  std::function<void()> action_;
};

void Runner::build(CLI::App &app) {
  app.require_subcommand(1);
  app.add_option("--log-level", globals_.log_level, "trace|debug|info|warn|error|off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
  app.add_option("--jobs", globals_.jobs, "Upper bound on parallel workers")
      ->check(CLI::PositiveNumber);

  // fetch ------------------------------------------------------------------
  {
    auto *cmd = app.add_subcommand("fetch", "Download an article's revision history into the cache");
    auto args = std::make_shared<CacheArgs>();
    auto endpoint = std::make_shared<std::string>(ingest::kDefaultEndpoint);
    auto interval = std::make_shared<int>(200);
    auto retries = std::make_shared<int>(3);
    auto page_size = std::make_shared<int>(50);
    args->add_to(cmd);
    cmd->add_option("--endpoint", *endpoint, "API endpoint, or file://DIR to replay pages");
    cmd->add_option("--min-interval", *interval, "Minimum milliseconds between requests")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--retries", *retries, "Retries per request")->check(CLI::NonNegativeNumber);
    cmd->add_option("--page-size", *page_size, "Revisions per request")->check(CLI::Range(1, 500));
    cmd->callback([=, this] {
      action_ = [=, this] {
        ingest::RevisionQuery query;
        query.article_title = args->title;
        query.start = parse_bound(args->start, false);
        query.end = parse_bound(args->end, true);
        query.api_endpoint = *endpoint;
        query.min_request_interval = std::chrono::milliseconds(*interval);
        query.max_retries = *retries;
        query.page_size = *page_size;
        try {
          query.validate();
        } catch (const DomainError &e) {
          throw UsageError(e.what());
        }
        auto dir = args->cache_dir();
        auto transport = ingest::make_transport(query.api_endpoint);
        ingest::RevisionCache cache(dir, ingest::RevisionCache::Mode::kReadWrite);
        ingest::FetchReport report;
        auto revisions = ingest::fetch_revisions(query, cache, *transport, &report);
        out_ << "revisions " << revisions.size() << "\nrequests " << report.requests
             << "\nsuppressed " << report.suppressed << "\nfrom_cache "
             << (report.served_from_cache ? "yes" : "no") << "\n";
      };
    });
  }

  // clean ------------------------------------------------------------------
  {
    auto *cmd = app.add_subcommand("clean", "Strip wikitext markup to plain text");
    auto in = std::make_shared<std::string>();
    auto outp = std::make_shared<std::string>();
    auto keep_tables = std::make_shared<bool>(false);
    cmd->add_option("--in", *in, "Wikitext file")->required();
    cmd->add_option("--out", *outp, "Output file (default: stdout)");
    cmd->add_flag("--keep-tables", *keep_tables, "Render table rows instead of removing them");
    cmd->callback([=, this] {
      action_ = [=, this] {
        std::string text = wikitext::strip_markup(read_file(*in), !*keep_tables);
        if (outp->empty()) {
          out_ << text;
        } else {
          write_file(*outp, text);
        }
      };
    });
  }

  // tables -----------------------------------------------------------------
  {
    auto *tables = app.add_subcommand("tables", "Table parsing and time-series extraction");
    tables->require_subcommand(0, 1);

    auto parse_action = [this](const std::string &in, const std::string &outp) {
      std::vector<wikitext::TableWarning> warnings;
      auto parsed = wikitext::parse_tables(read_file(in), &warnings);
      for (const auto &w : warnings) spdlog::warn("offset {}: {}", w.offset, w.message);
      std::string text = tables_json(parsed).dump(2) + "\n";
      if (outp.empty()) {
        out_ << text;
      } else {
        write_file(outp, text);
      }
    };

    // `tables --in FILE` is shorthand for `tables parse --in FILE`.
    auto direct_in = std::make_shared<std::string>();
    auto direct_out = std::make_shared<std::string>();
    tables->add_option("--in", *direct_in, "Wikitext file (same as `tables parse`)");
    tables->add_option("--out", *direct_out, "JSON output (default: stdout)");
    tables->callback([=, this] {
      if (!tables->get_subcommands().empty()) return;
      if (direct_in->empty()) throw UsageError("tables: give --in FILE or a subcommand");
      action_ = [=] { parse_action(*direct_in, *direct_out); };
    });

    auto *parse = tables->add_subcommand("parse", "Parse the tables of one wikitext file");
    auto in = std::make_shared<std::string>();
    auto outp = std::make_shared<std::string>();
    parse->add_option("--in", *in, "Wikitext file")->required();
    parse->add_option("--out", *outp, "JSON output (default: stdout)");
    parse->callback([=, this] {
      action_ = [=] { parse_action(*in, *outp); };
    });

    auto *extract = tables->add_subcommand("extract", "Extract per-revision series from the cache");
    auto ex_args = std::make_shared<CacheArgs>();
    auto ex_mapping = std::make_shared<std::string>();
    auto ex_out = std::make_shared<std::string>();
    ex_args->add_to(extract);
    extract->add_option("--mapping", *ex_mapping, "Column mapping JSON (default: Ebola headers)");
    extract->add_option("--out", *ex_out, "Series JSON output")->required();
    extract->callback([=, this] {
      action_ = [=, this] {
        auto mapping = load_mapping(*ex_mapping);
        auto revisions = ex_args->load();
        timeseries::ExtractionSummary summary;
        auto sets = timeseries::extract_revision_series(revisions, mapping, &summary);
        write_file(*ex_out, timeseries::revision_series_json(sets));
        out_ << "revisions " << summary.revisions << "\nmatched " << summary.matched
             << "\nwarnings " << summary.warnings << "\n";
      };
    });

    auto *interp = tables->add_subcommand("interpolate",
                                          "Interpolate series to daily values and drop repeats");
    auto ip_in = std::make_shared<std::string>();
    auto ip_out = std::make_shared<std::string>();
    auto no_dedup = std::make_shared<bool>(false);
    interp->add_option("--in", *ip_in, "Series JSON from `tables extract`")->required();
    interp->add_option("--out", *ip_out, "Series JSON output")->required();
    interp->add_flag("--no-dedup", *no_dedup, "Keep consecutive identical sets");
    interp->callback([=, this] {
      action_ = [=, this] {
        auto sets = timeseries::revision_series_from_json(read_file(*ip_in));
        for (auto &set : sets) {
          for (auto &s : set.series) s = timeseries::interpolate_daily(s);
        }
        const std::size_t parsed = sets.size();
        if (!*no_dedup) sets = timeseries::dedup_series(sets);
        write_file(*ip_out, timeseries::revision_series_json(sets));
        out_ << "parsed " << parsed << "\nunique " << sets.size() << "\n";
      };
    });

    auto *rmse = tables->add_subcommand("rmse", "Score series sets against ground truth");
    auto rm_series = std::make_shared<std::string>();
    auto rm_truth = std::make_shared<std::string>();
    auto rm_from = std::make_shared<std::string>();
    auto rm_out = std::make_shared<std::string>();
    auto rm_summary = std::make_shared<std::string>();
    auto rm_json = std::make_shared<std::string>();
    auto rm_plot = std::make_shared<std::string>();
    rmse->add_option("--series", *rm_series, "Series JSON")->required();
    rmse->add_option("--truth", *rm_truth, "Ground-truth CSV")->required();
    rmse->add_option("--from", *rm_from, "Ignore dates before this day");
    rmse->add_option("--out", *rm_out, "Per-revision RMSE CSV")->required();
    rmse->add_option("--summary", *rm_summary, "Mean RMSE CSV");
    rmse->add_option("--json", *rm_json, "Full report JSON");
    rmse->add_option("--plot", *rm_plot, "Long-format plot CSV");
    rmse->callback([=, this] {
      action_ = [=, this] {
        auto from = parse_day(*rm_from);
        auto sets = timeseries::revision_series_from_json(read_file(*rm_series));
        auto truth = timeseries::load_ground_truth(fs::path(*rm_truth));
        auto report = timeseries::rmse_report(sets, truth, from);
        write_stream(*rm_out, [&](std::ostream &o) { timeseries::write_rmse_csv(o, report); });
        if (!rm_summary->empty()) {
          write_stream(*rm_summary,
                       [&](std::ostream &o) { timeseries::write_summary_csv(o, report); });
        }
        if (!rm_json->empty()) write_file(*rm_json, timeseries::rmse_report_json(report));
        if (!rm_plot->empty()) report::emit_plot_data(*rm_plot, report::plot_rows(report));
        timeseries::write_summary_csv(out_, report);
      };
    });

    auto *import = tables->add_subcommand("import-truth",
                                          "Convert a Rivers country_timeseries.csv to truth CSV");
    auto im_in = std::make_shared<std::string>();
    auto im_out = std::make_shared<std::string>();
    import->add_option("--rivers", *im_in, "Rivers repository CSV")->required();
    import->add_option("--out", *im_out, "Canonical truth CSV")->required();
    import->callback([=, this] {
      action_ = [=, this] {
        std::ifstream in(*im_in, std::ios::binary);
        if (!in) throw Error("cannot open " + *im_in);
        write_file(*im_out, timeseries::import_rivers_csv(in));
      };
    });
  }

  // rmse (whole tabular pipeline) -----------------------------------------
  {
    auto *cmd = app.add_subcommand("rmse", "Cache -> tables -> series -> RMSE reports");
    auto args = std::make_shared<CacheArgs>();
    auto mapping = std::make_shared<std::string>();
    auto truth = std::make_shared<std::string>();
    auto from = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    args->add_to(cmd);
    cmd->add_option("--mapping", *mapping, "Column mapping JSON");
    cmd->add_option("--truth", *truth, "Ground-truth CSV")->required();
    cmd->add_option("--from", *from, "Ignore dates before this day");
    cmd->add_option("--out-dir", *out_dir, "Directory for report files")->required();
    cmd->callback([=, this] {
      action_ = [=, this] {
        auto from_day = parse_day(*from);
        auto column_mapping = load_mapping(*mapping);
        auto revisions = args->load();
        auto ground = timeseries::load_ground_truth(fs::path(*truth));
        auto sets = timeseries::extract_revision_series(revisions, column_mapping);
        for (auto &set : sets) {
          for (auto &s : set.series) s = timeseries::interpolate_daily(s);
        }
        auto unique = timeseries::dedup_series(sets);
        auto report = timeseries::rmse_report(unique, ground, from_day);
        fs::path dir(*out_dir);
        fs::create_directories(dir);
        write_file(dir / "series.json", timeseries::revision_series_json(unique));
        write_stream(dir / "per_revision.csv",
                     [&](std::ostream &o) { timeseries::write_rmse_csv(o, report); });
        write_stream(dir / "summary.csv",
                     [&](std::ostream &o) { timeseries::write_summary_csv(o, report); });
        write_file(dir / "report.json", timeseries::rmse_report_json(report));
        report::emit_plot_data(dir / "plot.csv", report::plot_rows(report));
        out_ << "parsed " << sets.size() << "\nunique " << unique.size() << "\n";
        timeseries::write_summary_csv(out_, report);
      };
    });
  }

  // corpus -----------------------------------------------------------------
  {
    auto *corpus_cmd = app.add_subcommand("corpus", "NER corpus construction and agreement");
    corpus_cmd->require_subcommand(1);

    auto *build = corpus_cmd->add_subcommand("build", "Build an unlabeled IOB corpus from the cache");
    auto args = std::make_shared<CacheArgs>();
    auto threshold = std::make_shared<double>(0.75);
    auto outp = std::make_shared<std::string>();
    args->add_to(build);
    build->add_option("--threshold", *threshold, "Trigram Jaccard dedup threshold")
        ->check(CLI::Range(0.0, 1.0));
    build->add_option("--out", *outp, "IOB TSV output")->required();
    build->callback([=, this] {
      action_ = [=, this] {
        auto revisions = args->load();
        auto built = corpus::build_corpus(revisions, *threshold);
        auto unlabeled = corpus::to_unlabeled(built);
        corpus::write_iob_tsv(fs::path(*outp), unlabeled);
        out_ << "sentences " << built.size() << "\n";
      };
    });

    auto *kappa = corpus_cmd->add_subcommand("kappa", "Cohen's kappa of two annotations");
    auto a = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    auto lenient = std::make_shared<bool>(false);
    kappa->add_option("--a", *a, "First annotator's IOB TSV")->required();
    kappa->add_option("--b", *b, "Second annotator's IOB TSV")->required();
    kappa->add_flag("--lenient", *lenient, "Repair dangling I- labels instead of failing");
    kappa->callback([=, this] {
      action_ = [=, this] {
        auto mode = *lenient ? corpus::IobMode::kLenient : corpus::IobMode::kStrict;
        auto first = corpus::read_iob_tsv(fs::path(*a), mode);
        auto second = corpus::read_iob_tsv(fs::path(*b), mode);
        auto table = corpus::agreement_table(first, second);
        json j = {{"n", table.n},
                  {"categories", table.categories},
                  {"counts", table.counts},
                  {"kappa", corpus::cohen_kappa(table)}};
        out_ << j.dump(2) << "\n";
      };
    });

    auto *synth_cmd = corpus_cmd->add_subcommand("synth", "Generate a labeled synthetic corpus");
    auto count = std::make_shared<std::size_t>(500);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto synth_out = std::make_shared<std::string>();
    synth_cmd->add_option("--n", *count, "Number of sentences")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", *seed, "Generator seed");
    synth_cmd->add_option("--out", *synth_out, "IOB TSV output")->required();
    synth_cmd->callback([=, this] {
      action_ = [=, this] {
        corpus::write_iob_tsv(fs::path(*synth_out), synth::generate_ner_corpus(*count, *seed));
      };
    });
  }

  // ner --------------------------------------------------------------------
  {
    auto *ner = app.add_subcommand("ner", "CRF training, tagging and evaluation");
    ner->require_subcommand(1);

    auto *train = ner->add_subcommand("train", "Train a CRF on an IOB TSV corpus");
    auto tr_corpus = std::make_shared<std::string>();
    auto tr_out = std::make_shared<std::string>();
    auto tr_features = std::make_shared<FeatureArgs>();
    auto tr_lenient = std::make_shared<bool>(false);
    train->add_option("--corpus", *tr_corpus, "Labeled IOB TSV")->required();
    train->add_option("--out", *tr_out, "Model file")->required();
    train->add_flag("--lenient", *tr_lenient, "Repair dangling I- labels");
    tr_features->add_to(train);
    train->callback([=, this] {
      action_ = [=, this] {
        auto mode = *tr_lenient ? corpus::IobMode::kLenient : corpus::IobMode::kStrict;
        auto data = corpus::read_iob_tsv(fs::path(*tr_corpus), mode);
        crf::TrainReport report;
        auto model = crf::train(crf::to_sequences(data), tr_features->config(),
                                tr_features->options(), crf::ner_label_names(), &report);
        crf::save_model(fs::path(*tr_out), model);
        out_ << "sentences " << data.size() << "\nfeatures " << model.num_features()
             << "\niterations " << report.iterations << "\nconverged "
             << (report.converged ? "yes" : "no") << "\nobjective "
             << report::format_double(report.objective_history.back()) << "\n";
      };
    });

    auto *tag = ner->add_subcommand("tag", "Tag plain text with a trained model");
    auto tg_model = std::make_shared<std::string>();
    auto tg_in = std::make_shared<std::string>();
    auto tg_out = std::make_shared<std::string>();
    auto tg_free = std::make_shared<bool>(false);
    tag->add_option("--model", *tg_model, "Model file")->required();
    tag->add_option("--in", *tg_in, "Plain text file")->required();
    tag->add_option("--out", *tg_out, "JSON output (default: stdout)");
    tag->add_flag("--unconstrained", *tg_free, "Decode without IOB transition constraints");
    tag->callback([=, this] {
      action_ = [=, this] {
        auto model = crf::load_model(fs::path(*tg_model));
        json result = json::array();
        auto sentences = wikitext::split_sentences(read_file(*tg_in));
        for (std::size_t s = 0; s < sentences.size(); ++s) {
          const auto &tokens = sentences[s].tokens;
          if (tokens.empty()) continue;
          auto pos = corpus::pos_tag(tokens);
          auto tagged = crf::viterbi(model, tokens, pos, !*tg_free);
          json spans = json::array();
          for (const auto &span : tagged.spans) {
            spans.push_back({{"type", span.type},
                             {"start", span.start},
                             {"end", span.end},
                             {"text", join_tokens(tokens, span.start, span.end)}});
          }
          result.push_back({{"sentence", s},
                            {"text", sentences[s].text},
                            {"tokens", tokens},
                            {"labels", tagged.labels},
                            {"log_prob", tagged.score},
                            {"spans", std::move(spans)}});
        }
        std::string text = result.dump(2) + "\n";
        if (tg_out->empty()) {
          out_ << text;
        } else {
          write_file(*tg_out, text);
        }
      };
    });

    auto *eval = ner->add_subcommand("eval", "k-fold cross-validation");
    auto ev_corpus = std::make_shared<std::string>();
    auto ev_k = std::make_shared<std::size_t>(10);
    auto ev_seed = std::make_shared<std::uint64_t>(1);
    auto ev_out = std::make_shared<std::string>();
    auto ev_plot = std::make_shared<std::string>();
    auto ev_features = std::make_shared<FeatureArgs>();
    eval->add_option("--corpus", *ev_corpus, "Labeled IOB TSV")->required();
    eval->add_option("--k", *ev_k, "Number of folds")->check(CLI::Range(2, 1000));
    eval->add_option("--seed", *ev_seed, "Fold shuffle seed");
    eval->add_option("--out", *ev_out, "Metrics JSON (default: stdout)");
    eval->add_option("--plot", *ev_plot, "Long-format plot CSV");
    ev_features->add_to(eval);
    eval->callback([=, this] {
      action_ = [=, this] {
        auto data = corpus::read_iob_tsv(fs::path(*ev_corpus));
        nereval::CvOptions options;
        options.k = *ev_k;
        options.seed = *ev_seed;
        options.train = ev_features->options();
        options.jobs = globals_.jobs;
        auto report = nereval::cross_validate(data, ev_features->config(), options);
        std::string text = nereval::metrics_report_json(report);
        if (ev_out->empty()) {
          out_ << text;
        } else {
          write_file(*ev_out, text);
        }
        if (!ev_plot->empty()) report::emit_plot_data(*ev_plot, report::plot_rows(report));
      };
    });

    auto *sweep = ner->add_subcommand("sweep", "Cross-validate over a range of n-gram caps");
    auto sw_corpus = std::make_shared<std::string>();
    auto sw_from = std::make_shared<int>(1);
    auto sw_to = std::make_shared<int>(12);
    auto sw_k = std::make_shared<std::size_t>(10);
    auto sw_seed = std::make_shared<std::uint64_t>(1);
    auto sw_out = std::make_shared<std::string>();
    auto sw_json = std::make_shared<std::string>();
    auto sw_plot = std::make_shared<std::string>();
    auto sw_features = std::make_shared<FeatureArgs>();
    sweep->add_option("--corpus", *sw_corpus, "Labeled IOB TSV")->required();
    sweep->add_option("--from", *sw_from, "First n-gram cap")->check(CLI::Range(1, 12));
    sweep->add_option("--to", *sw_to, "Last n-gram cap")->check(CLI::Range(1, 12));
    sweep->add_option("--k", *sw_k, "Number of folds")->check(CLI::Range(2, 1000));
    sweep->add_option("--seed", *sw_seed, "Fold shuffle seed");
    sweep->add_option("--out", *sw_out, "Sweep CSV (default: stdout)");
    sweep->add_option("--json", *sw_json, "Sweep JSON with timings");
    sweep->add_option("--plot", *sw_plot, "Long-format plot CSV");
    sw_features->add_to(sweep, /*with_ngram=*/false);
    sweep->callback([=, this] {
      action_ = [=, this] {
        if (*sw_from > *sw_to) throw UsageError("--from must not exceed --to");
        auto data = corpus::read_iob_tsv(fs::path(*sw_corpus));
        nereval::CvOptions options;
        options.k = *sw_k;
        options.seed = *sw_seed;
        options.train = sw_features->options();
        options.jobs = globals_.jobs;
        auto rows = nereval::sweep_ngram(data, sw_features->config(), options, *sw_from, *sw_to);
        std::string csv = nereval::sweep_csv(rows);
        if (sw_out->empty()) {
          out_ << csv;
        } else {
          write_file(*sw_out, csv);
        }
        if (!sw_json->empty()) write_file(*sw_json, nereval::sweep_json(rows));
        if (!sw_plot->empty()) report::emit_plot_data(*sw_plot, report::plot_rows(rows));
      };
    });
  }

  // report -----------------------------------------------------------------
  {
    auto *rep = app.add_subcommand("report", "Plot data for figures");
    rep->require_subcommand(1);
    auto *activity = rep->add_subcommand("activity", "Revisions per day");
    auto args = std::make_shared<CacheArgs>();
    auto outp = std::make_shared<std::string>();
    args->add_to(activity);
    activity->add_option("--out", *outp, "Long-format plot CSV")->required();
    activity->callback([=, this] {
      action_ = [=, this] {
        auto revisions = args->load();
        report::emit_plot_data(*outp, report::plot_rows(ingest::revision_activity(revisions)));
      };
    });
  }
}

int Runner::run(std::span<const std::string> args) {
  CLI::App app("Epidemiological data from Wikipedia outbreak articles", "outbreak");
  build(app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out_, err_);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError &e) {
    err_ << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err_);
  auto logger = std::make_shared<spdlog::logger>("outbreak", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::from_str(globals_.log_level));
  auto previous = spdlog::default_logger();
  spdlog::set_default_logger(logger);
  struct Restore {
    std::shared_ptr<spdlog::logger> logger;
    ~Restore() { spdlog::set_default_logger(logger); }
  } restore{previous};

  try {
    if (action_) action_();
    return kExitOk;
  } catch (const UsageError &e) {
    err_ << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error &e) {
    err_ << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception &e) {
    err_ << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
}

}  // namespace

int run(std::span<const std::string> args, std::ostream &out, std::ostream &err) {
  Runner runner(out, err);
  return runner.run(args);
}

}  // namespace outbreak::cli
