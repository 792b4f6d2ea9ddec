// cricket-rules: command-line front end for the rule-mining pipeline.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cricket_rules/analysis.hpp"
#include "cricket_rules/server.hpp"

namespace cr = cricket_rules;

namespace {

constexpr const char* kExitCodes = R"(Exit codes:
   0  success
   1  unexpected failure
   2  invalid filter or arguments (InvalidFilter)
   3  FileUnreadable
   4  EmptyCorpus
   5  MalformedLexicon (also: lexicon lint found issues)
   6  UnknownPlayer
   7  EmptySelection
   8  AllZeroMatrix
   9  DegenerateMatrix
  10  RankZero
  11  AnchorUnobserved
  12  EmptySide
  13  LabelMismatch
  14  DegenerateConfiguration
  15  MalformedHeader)";

struct FilterFlags {
  std::string corpus;
  std::string lexicon = cr::default_lexicon_path();
  std::string roster;
  std::string player;
  std::string type = "bat";
  std::vector<std::string> opponents;
  std::string from;
  std::string to;
  std::vector<std::string> categories;
  std::size_t top_k = 3;

  void attach(CLI::App* cmd) {
    cmd->add_option("--corpus", corpus, "Corpus file (tab-separated records)")->required();
    cmd->add_option("--lexicon", lexicon, "Feature lexicon file")->capture_default_str();
    cmd->add_option("--roster", roster, "Bowler roster (player<TAB>fast|spin)");
    cmd->add_option("--player", player, "Player identifier")->required();
    cmd->add_option("--type", type, "bat | bowl")->check(CLI::IsMember({"bat", "bowl", "batting", "bowling"}));
    cmd->add_option("--opponents", opponents, "all | fast | spin | player names")->delimiter(',');
    cmd->add_option("--from", from, "First date (YYYY-MM-DD)");
    cmd->add_option("--to", to, "Last date (YYYY-MM-DD)");
    cmd->add_option("--categories", categories, "response,outcome,footwork,shot-area")->delimiter(',');
    cmd->add_option("--top-k", top_k, "Bowling features reported per rule")->check(CLI::PositiveNumber);
  }

  cr::AnalysisRequest request() const {
    cr::AnalysisRequest r;
    r.player = player;
    r.type = *cr::parse_analysis_type(type);
    if (!opponents.empty()) {
      r.opponents.clear();
      for (const auto& o : opponents) r.opponents += (r.opponents.empty() ? "" : ",") + o;
    }
    auto date = [](const std::string& s, const char* flag) -> std::optional<cr::Date> {
      if (s.empty()) return std::nullopt;
      auto d = cr::Date::parse(s);
      if (!d) throw cr::Error(cr::ErrorCode::InvalidFilter, std::string(flag) + " must be YYYY-MM-DD");
      return d;
    };
    r.from = date(from, "--from");
    r.to = date(to, "--to");
    if (!categories.empty()) {
      r.categories.clear();
      for (const auto& c : categories) {
        auto parsed = cr::parse_category(c);
        if (!parsed) throw cr::Error(cr::ErrorCode::InvalidFilter, "unknown category '" + c + "'");
        r.categories.push_back(*parsed);
      }
    }
    r.top_k = top_k;
    return r;
  }
};

struct Inputs {
  cr::Corpus corpus;
  cr::FeatureLexicon lexicon;
  cr::Roster roster;

  explicit Inputs(const FilterFlags& f)
      : corpus(cr::load_corpus(f.corpus).corpus),
        lexicon(cr::load_lexicon(f.lexicon)),
        roster(f.roster.empty() ? cr::Roster{} : cr::load_roster(f.roster)) {}

  cr::AnalysisContext context() const { return {corpus, lexicon, roster}; }
};

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cr::Error(cr::ErrorCode::FileUnreadable, "cannot write '" + path + "'");
  out << content;
}

int cmd_ingest(const std::string& input, const std::string& output, bool raw, const std::string& match_id,
               const std::string& date, int innings) {
  cr::LoadResult result;
  if (raw) {
    cr::RawImportDefaults defaults;
    defaults.match_id = match_id;
    defaults.innings = innings;
    if (!date.empty()) {
      defaults.date = cr::Date::parse(date);
      if (!defaults.date) throw cr::Error(cr::ErrorCode::InvalidFilter, "--date must be YYYY-MM-DD");
    }
    result = cr::import_raw_commentary_file(input, defaults);
  } else {
    result = cr::load_corpus(input);
  }
  cr::save_corpus(output, result.corpus);
  std::cout << result.report.accepted << " accepted, " << result.report.rejected.size() << " rejected\n";
  for (const auto& r : result.report.rejected) std::cout << "  line " << r.line << ": " << r.reason << '\n';
  return 0;
}

int cmd_lexicon_lint(const std::string& path) {
  auto issues = cr::lint_lexicon(cr::detail::read_lines(path));
  for (const auto& i : issues) std::cout << path << ':' << i.line << ": " << i.kind << ": " << i.message << '\n';
  if (issues.empty()) {
    auto lexicon = cr::load_lexicon(path);
    std::cout << path << ": ok (" << lexicon.entry_count() << " entries)\n";
    return 0;
  }
  std::cout << issues.size() << " issue(s)\n";
  return cr::exit_code(cr::ErrorCode::MalformedLexicon);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine strength and weakness rules for cricket players from ball-by-ball commentary"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate and store a corpus (structured or raw commentary)");
  std::string in_path, out_path, match_id = "unknown", raw_date;
  bool raw = false;
  int innings = 1;
  ingest->add_option("input", in_path, "Input file")->required();
  ingest->add_option("output", out_path, "Output corpus file")->required();
  ingest->add_flag("--raw", raw, "Input holds one commentary string per line");
  ingest->add_option("--match-id", match_id, "Match id for raw lines without one");
  ingest->add_option("--date", raw_date, "Date for raw lines without one (YYYY-MM-DD)");
  ingest->add_option("--innings", innings, "Innings for raw lines without one");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Mine rules for one filter and write the analysis JSON");
  FilterFlags analyze_flags;
  analyze_flags.attach(analyze);
  std::string analyze_out, svg_dir, cm_out, ca_out;
  analyze->add_option("--out", analyze_out, "Output JSON file (default stdout)");
  analyze->add_option("--svg", svg_dir, "Directory for one SVG biplot per category");
  analyze->add_option("--cm-out", cm_out, "Write the confrontation matrix as text");
  analyze->add_option("--ca-out", ca_out, "Write the full-precision CA dump");

  // validate
  auto* validate = app.add_subcommand("validate", "Date-based holdout validation of mined rules");
  FilterFlags validate_flags;
  validate_flags.attach(validate);
  std::string cutoff, validate_out, compare_rules, biplot_category = "response";
  std::size_t k = 3;
  validate->add_option("--cutoff", cutoff, "Test-set start date (default: latest date minus one year)");
  validate->add_option("--k", k, "Top-k pairs per rule for commonality")->check(CLI::PositiveNumber);
  validate->add_option("--biplot", biplot_category, "Biplot category compared by Procrustes");
  validate->add_option("--compare-rules", compare_rules, "Human-authored rule file (anchor<TAB>feature)");
  validate->add_option("--out", validate_out, "Output JSON file (default stdout)");

  // compare-rules
  auto* compare = app.add_subcommand("compare-rules", "Commonality of a human-authored rule file with mined rules");
  FilterFlags compare_flags;
  compare_flags.attach(compare);
  std::string rules_file;
  std::size_t compare_k = 3;
  compare->add_option("--rules", rules_file, "Rule file (anchor<TAB>bowling-feature)")->required();
  compare->add_option("--k", compare_k, "Top-k pairs per mined rule")->check(CLI::PositiveNumber);

  // serve
  auto* serve = app.add_subcommand("serve", "Read-only HTTP JSON API");
  std::string serve_corpus, serve_lexicon = cr::default_lexicon_path(), serve_roster, bind;
  serve->add_option("--corpus", serve_corpus, "Corpus file")->required();
  serve->add_option("--lexicon", serve_lexicon, "Feature lexicon file")->capture_default_str();
  serve->add_option("--roster", serve_roster, "Bowler roster");
  serve->add_option("--bind", bind, "host:port (default $CRICKET_RULES_BIND or 127.0.0.1:8080)");

  // lexicon lint
  auto* lexicon = app.add_subcommand("lexicon", "Lexicon utilities");
  lexicon->require_subcommand(1);
  auto* lint = lexicon->add_subcommand("lint", "Report unknown features, non-normalised and duplicate entries");
  std::string lint_path = cr::default_lexicon_path();
  lint->add_option("file", lint_path, "Lexicon file")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(in_path, out_path, raw, match_id, raw_date, innings);

    if (*analyze) {
      Inputs inputs(analyze_flags);
      auto ctx = inputs.context();
      auto request = analyze_flags.request();
      auto filter = request.to_filter(inputs.corpus);
      auto analysis = cr::run_analysis(ctx, filter, request.categories);
      write_output(analyze_out, cr::dump_json(cr::analysis_json(analysis, ctx, request.top_k)));
      if (!cm_out.empty()) write_output(cm_out, cr::cm_to_string(analysis.cm));
      if (!ca_out.empty()) write_output(ca_out, cr::ca_to_string(analysis.ca));
      if (!svg_dir.empty()) {
        std::filesystem::create_directories(svg_dir);
        for (const auto& b : analysis.biplots) {
          auto title = filter.player + " (" + std::string(cr::name(filter.type)) + "): " +
                       std::string(cr::name(b.category));
          write_output(svg_dir + "/" + std::string(cr::name(b.category)) + ".svg",
                       cr::render_biplot_svg(b, title));
        }
      }
      return 0;
    }

    if (*validate) {
      Inputs inputs(validate_flags);
      cr::ValidationRequest request;
      request.analysis = validate_flags.request();
      request.k = k;
      if (!cutoff.empty()) {
        request.cutoff = cr::Date::parse(cutoff);
        if (!request.cutoff) throw cr::Error(cr::ErrorCode::InvalidFilter, "--cutoff must be YYYY-MM-DD");
      }
      auto category = cr::parse_category(biplot_category);
      if (!category) throw cr::Error(cr::ErrorCode::InvalidFilter, "unknown biplot category '" + biplot_category + "'");
      request.biplot_category = *category;
      if (!compare_rules.empty()) request.reference = cr::load_rule_pairs(compare_rules);
      write_output(validate_out, cr::validation_response(inputs.context(), request));
      return 0;
    }

    if (*compare) {
      Inputs inputs(compare_flags);
      auto ctx = inputs.context();
      auto request = compare_flags.request();
      auto analysis = cr::run_analysis(ctx, request.to_filter(inputs.corpus), request.categories);
      auto reference = cr::load_rule_pairs(rules_file);
      cr::Json out = {{"filter", cr::to_json(analysis.filter)},
                      {"k", compare_k},
                      {"pairs", reference.size()},
                      {"commonality_pct",
                       cr::json_number(cr::reference_commonality(analysis, reference, compare_k))}};
      std::cout << cr::dump_json(out);
      return 0;
    }

    if (*serve) {
      cr::Corpus corpus = cr::load_corpus(serve_corpus).corpus;
      cr::FeatureLexicon lex = cr::load_lexicon(serve_lexicon);
      cr::Roster roster = serve_roster.empty() ? cr::Roster{} : cr::load_roster(serve_roster);
      auto [host, port] = cr::resolve_bind_address(bind);
      cr::AnalysisServer server({corpus, lex, roster});
      int bound = server.bind(host, port);
      if (bound < 0) {
        std::cerr << "cannot bind " << host << ':' << port << '\n';
        return 1;
      }
      std::cerr << "serving " << corpus.size() << " records on http://" << host << ':' << bound << '\n';
      return server.listen() ? 0 : 1;
    }

    if (*lint) return cmd_lexicon_lint(lint_path);
  } catch (const cr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cr::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
