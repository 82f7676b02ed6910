#pragma once

// Command-line front end. Kept in a header so the test suite can drive it
// in-process with captured streams.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lexchoice/lexchoice.hpp"

#ifndef LEXCHOICE_FIXTURES_DIR
#define LEXCHOICE_FIXTURES_DIR "fixtures"
#endif

namespace lexchoice::cli {

namespace fs = std::filesystem;

enum Status : int {
  ok = 0,
  violation = 1,
  io_or_parse = 2,
  analysis_failed = 3,
  no_activation = 4,
};

class IoError : public Error {
 public:
  using Error::Error;
};

inline fs::path fixtures_dir() {
  if (const char* env = std::getenv("LEXCHOICE_FIXTURES"); env && *env) return env;
  return LEXCHOICE_FIXTURES_DIR;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Prefix positioned errors with the file they came from.
template <class F>
auto with_file(const fs::path& path, F&& f) {
  try {
    return f(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.pos(), path.string() + ": " + e.message());
  }
}

struct RunConfig {
  std::string ontology;
  std::vector<std::string> lexicon_specs;  // tag=path
  std::string weights;
  std::string format = "text";
  bool strict = false;
  bool emit_ir = false;
};

// Ontology, lexicons and weights as named by a RunConfig.
class Workspace {
 public:
  explicit Workspace(const RunConfig& cfg) : cfg_(cfg) {
    ontology_ = with_file(cfg.ontology.empty() ? fixtures_dir() / "core.ont" : fs::path(cfg.ontology),
                          [](const std::string& t) { return load_ontology(t); });
    if (!cfg.weights.empty())
      weights_ = with_file(cfg.weights, [](const std::string& t) { return parse_weights(t); });
    if (cfg.strict) weights_.strict_match = true;
    for (const auto& spec : cfg.lexicon_specs) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
        throw ParseError({}, "--lexicon expects <tag>=<path>, got '" + spec + "'");
      const std::string tag = spec.substr(0, eq);
      if (paths_.count(tag)) throw ParseError({}, "lexicon '" + tag + "' given twice");
      paths_[tag] = spec.substr(eq + 1);
    }
  }

  const Ontology& ontology() const { return ontology_; }
  const Weights& weights() const { return weights_; }

  // Lexicon for a language tag; falls back to <fixtures>/<tag>.lex.
  const Lexicon& lexicon(const std::string& tag) {
    if (auto it = loaded_.find(tag); it != loaded_.end()) return it->second;
    fs::path path = fixtures_dir() / (tag + ".lex");
    if (auto it = paths_.find(tag); it != paths_.end()) path = it->second;
    else if (!paths_.empty() && !fs::exists(path))
      throw IoError("no lexicon for language '" + tag + "'");
    Lexicon lx = with_file(path, [&](const std::string& t) { return load_lexicon(t, ontology_); });
    return loaded_.emplace(tag, std::move(lx)).first->second;
  }

 private:
  RunConfig cfg_;
  Ontology ontology_;
  Weights weights_;
  std::map<std::string, std::string> paths_;
  std::map<std::string, Lexicon> loaded_;
};

inline IR load_ir(const fs::path& path, const Ontology& ontology) {
  IR ir = with_file(path, [](const std::string& t) { return parse_ir(t); });
  Report r = validate_ir(ir, ontology);
  if (!r.ok()) throw ValidationError(std::move(r));
  return ir;
}

// `?a = x` / `?a=x` / `a=x` into a binding.
inline std::pair<std::string, Bound> parse_binding(const std::string& text) {
  const auto eq = text.find('=');
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string{};
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
  };
  if (eq == std::string::npos) throw ParseError({}, "binding needs '=': '" + text + "'");
  std::string var = trim(text.substr(0, eq));
  std::string val = trim(text.substr(eq + 1));
  if (!var.empty() && var.front() == '?') var.erase(0, 1);
  if (var.empty() || val.empty()) throw ParseError({}, "malformed binding '" + text + "'");
  bool literal = false;
  if (val.size() >= 2 && val.front() == '[' && val.back() == ']') {
    val = trim(val.substr(1, val.size() - 2));
    literal = true;
  }
  return {var, Bound{val, literal}};
}

// Analysis request stanza:
//   lemma = provide
//   cluster = en:provide-c        (optional)
//   situation = ex1.ir            (relative to the stanza file)
//   bind ?a = accion-international
struct RequestFile {
  std::string lemma;
  std::optional<std::string> cluster;
  fs::path situation;
  Bindings bindings;
};

inline RequestFile parse_request(std::string_view text, const fs::path& base) {
  RequestFile r;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string key;
    if (!(words >> key)) continue;
    std::string rest;
    std::getline(words, rest);
    const SourcePos pos{line_no, 1};
    if (key == "bind") {
      try {
        auto [var, b] = parse_binding(rest);
        if (!r.bindings.emplace(var, b).second)
          throw ParseError(pos, "variable ?" + var + " bound twice");
      } catch (const ParseError& e) {
        throw ParseError(pos, e.message());
      }
      continue;
    }
    const auto eq = rest.find('=');
    if (eq == std::string::npos) throw ParseError(pos, "expected '" + key + " = value'");
    auto value = rest.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t\r") + 1);
    if (value.empty()) throw ParseError(pos, "empty value for '" + key + "'");
    if (key == "lemma") {
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
        value = value.substr(1, value.size() - 2);
      r.lemma = value;
    } else if (key == "cluster") {
      r.cluster = value;
    } else if (key == "situation") {
      r.situation = fs::path(value).is_absolute() ? fs::path(value) : base / value;
      if (!fs::exists(r.situation) && fs::exists(fixtures_dir() / value))
        r.situation = fixtures_dir() / value;
    } else {
      throw ParseError(pos, "unknown key '" + key + "'");
    }
  }
  if (r.lemma.empty()) throw ParseError({line_no, 1}, "request names no lemma");
  if (r.situation.empty()) throw ParseError({line_no, 1}, "request names no situation");
  return r;
}

inline AnalysisRequest load_request(const fs::path& path, const Ontology& ontology) {
  RequestFile rf = with_file(path, [&](const std::string& t) {
    return parse_request(t, path.parent_path());
  });
  IR ir = load_ir(rf.situation, ontology);
  return AnalysisRequest{rf.lemma, rf.cluster, rf.bindings, ir.situation};
}

// A request built from a lemma plus an IR's situation. Bindings the caller
// leaves out are filled in by matching the cluster core.
inline AnalysisRequest request_from_ir(const Lexicon& lexicon, const Ontology& ontology,
                                       const std::string& lemma,
                                       const std::optional<std::string>& cluster,
                                       const Bindings& given, const IR& ir) {
  const Sense sense = select_sense(lexicon, lemma, cluster);
  auto b = apply_core(ontology, *sense.cluster, ir.situation, given);
  if (!b)
    throw AnalysisError(AnalysisError::Kind::inapplicable,
                        "'" + lemma + "' (" + sense.cluster->id +
                            ") does not apply: its core matches nothing in the situation");
  return AnalysisRequest{lemma, sense.cluster->id, *b, ir.situation};
}

inline void print_ranking(std::ostream& out, const std::vector<ChoiceResult>& results) {
  for (const auto& r : results) {
    out << "cluster " << r.cluster_id << "\n";
    for (std::size_t i = 0; i < r.ranked.size(); ++i)
      out << "  " << (i + 1) << ". " << r.ranked[i].lemma << "  "
          << detail::fixed(r.ranked[i].score.total) << "\n";
  }
}

inline void print_explanations(std::ostream& out, const std::vector<ChoiceResult>& results) {
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i) out << "\n";
    out << explain(results[i]);
  }
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline int validate_files(const RunConfig& cfg, const std::vector<std::string>& files,
                          std::ostream& out, std::ostream& err) {
  int status = ok;
  auto worst = [&](int s) { status = std::max(status, s); };
  // The ontology is needed for lexicons and IRs; a .ont target replaces the default.
  std::optional<Ontology> ontology;
  std::string ontology_path = cfg.ontology;
  for (const auto& f : files)
    if (fs::path(f).extension() == ".ont") ontology_path = f;

  auto get_ontology = [&]() -> const Ontology* {
    if (!ontology) {
      try {
        const fs::path p = ontology_path.empty() ? fixtures_dir() / "core.ont" : fs::path(ontology_path);
        ontology = with_file(p, [](const std::string& t) { return load_ontology(t); });
      } catch (const ValidationError& e) {
        err << ontology_path << ": invalid ontology\n" << e.report();
        worst(violation);
        return nullptr;
      } catch (const Error& e) {
        err << e.what() << "\n";
        worst(io_or_parse);
        return nullptr;
      }
    }
    return &*ontology;
  };

  for (const auto& file : files) {
    const fs::path path(file);
    const auto ext = path.extension().string();
    try {
      Report report;
      if (ext == ".ont") {
        try {
          with_file(path, [](const std::string& t) { return load_ontology(t); });
        } catch (const ValidationError& e) {
          report = e.report();
        }
      } else if (ext == ".lex" || ext == ".ir") {
        const Ontology* o = get_ontology();
        if (!o) {
          err << file << ": skipped, no usable ontology\n";
          continue;
        }
        if (ext == ".lex") {
          Lexicon lx = with_file(path, [](const std::string& t) { return parse_lexicon(t); });
          report = validate_lexicon(lx, *o);
        } else {
          IR ir = with_file(path, [](const std::string& t) { return parse_ir(t); });
          report = validate_ir(ir, *o);
        }
      } else {
        err << file << ": unknown file type (expected .ont, .lex or .ir)\n";
        worst(io_or_parse);
        continue;
      }
      if (report.ok()) {
        out << file << ": ok\n";
        for (const auto& w : report.warnings) out << "  warning: " << w << "\n";
      } else {
        out << file << ": " << report.violations.size() << " violation(s)\n" << report;
        worst(violation);
      }
    } catch (const ParseError& e) {
      err << e.what() << "\n";
      worst(io_or_parse);
    } catch (const Error& e) {
      err << e.what() << "\n";
      worst(io_or_parse);
    }
  }
  return status;
}

/// Runs one command line. Returns the process exit status.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Near-synonym lexical choice over an interlingual representation", "lexchoice"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--ontology", cfg.ontology, "Ontology file (default: fixtures/core.ont)");
  app.add_option("--lexicon", cfg.lexicon_specs, "Lexicon as <tag>=<path>; repeatable");
  app.add_option("--weights", cfg.weights, "Weights file (key = value lines)");
  app.add_flag("--strict", cfg.strict, "Match nuance concepts only by pattern-subsumes-target");
  app.add_flag("--emit-ir", cfg.emit_ir, "Also print the intermediate IR (translate)");
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"text", "canonical-ir"}));

  std::vector<std::string> targets;
  auto* validate = app.add_subcommand("validate", "Load and validate .ont/.lex/.ir files");
  validate->add_option("files", targets, "Files to check")->required();

  std::string ir_path;
  auto* parse = app.add_subcommand("parse", "Parse an IR and print it canonically");
  parse->add_option("ir", ir_path, "IR file")->required();

  std::string request_path, lang = "en";
  auto* analyze_cmd = app.add_subcommand("analyze", "Run analysis for a request stanza");
  analyze_cmd->add_option("request", request_path, "Analysis request file")->required();
  analyze_cmd->add_option("--lang", lang, "Lexicon language");

  std::string context;
  auto* choose_cmd = app.add_subcommand("choose", "Rank near-synonyms for an IR");
  choose_cmd->add_option("ir", ir_path, "IR file")->required();
  choose_cmd->add_option("--lang", lang, "Target lexicon language");
  choose_cmd->add_option("--context", context, "Comma-separated context lemmas");

  auto* explain_cmd = app.add_subcommand("explain", "Rank and explain every candidate");
  explain_cmd->add_option("ir", ir_path, "IR file")->required();
  explain_cmd->add_option("--lang", lang, "Target lexicon language");
  explain_cmd->add_option("--context", context, "Comma-separated context lemmas");

  std::string lemma, from = "en", to = "fr", cluster;
  std::vector<std::string> binds;
  auto* translate = app.add_subcommand("translate", "Analyze a source word, then choose a target word");
  translate->add_option("lemma", lemma, "Source lemma (optional with --request)");
  translate->add_option("--from", from, "Source language");
  translate->add_option("--to", to, "Target language");
  auto* ir_opt = translate->add_option("--ir", ir_path, "Situation IR");
  auto* req_opt = translate->add_option("--request", request_path, "Analysis request file");
  translate->add_option("--cluster", cluster, "Source cluster id");
  translate->add_option("--bind", binds, "Core binding ?var=id; repeatable");
  translate->add_option("--context", context, "Comma-separated context lemmas");
  ir_opt->excludes(req_opt);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "lexchoice: " << e.what() << "\n";
    return io_or_parse;
  }

  try {
    if (validate->parsed()) return validate_files(cfg, targets, out, err);

    Workspace ws(cfg);
    if (parse->parsed()) {
      IR ir = with_file(ir_path, [](const std::string& t) { return parse_ir(t); });
      Report r = validate_ir(ir, ws.ontology());
      if (cfg.format == "text") {
        out << "situation roots: " << ir.situation.roots().size() << "\n"
            << "instances: " << index_ir(ir).size() << "\n"
            << "possibilities: " << ir.possibilities.size() << "\n"
            << "attitudes: " << ir.attitudes.size() << "\n"
            << "styles: " << ir.styles.size() << "\n";
      } else {
        out << serialize_ir(ir);
      }
      if (!r.ok()) {
        err << r;
        return violation;
      }
      return ok;
    }

    if (analyze_cmd->parsed()) {
      AnalysisRequest req = load_request(request_path, ws.ontology());
      IR ir = analyze(ws.lexicon(lang), ws.ontology(), req);
      if (cfg.format == "text") {
        out << "% analysis of '" << req.lemma << "'\n";
      }
      out << serialize_ir(ir);
      return ok;
    }

    if (choose_cmd->parsed() || explain_cmd->parsed()) {
      IR ir = load_ir(ir_path, ws.ontology());
      auto results = choose(ws.lexicon(lang), ws.ontology(), ir, split_list(context), ws.weights());
      if (choose_cmd->parsed()) print_ranking(out, results);
      else print_explanations(out, results);
      return ok;
    }

    if (translate->parsed()) {
      const Lexicon& source = ws.lexicon(from);
      AnalysisRequest req;
      if (!request_path.empty()) {
        req = load_request(request_path, ws.ontology());
        if (!lemma.empty() && lemma != req.lemma)
          throw ParseError({}, "lemma '" + lemma + "' conflicts with request lemma '" + req.lemma + "'");
      } else {
        if (ir_path.empty()) throw ParseError({}, "translate needs --ir or --request");
        if (lemma.empty()) throw ParseError({}, "translate needs a source lemma");
        Bindings given;
        for (const auto& b : binds) given.insert(parse_binding(b));
        IR situation = load_ir(ir_path, ws.ontology());
        std::optional<std::string> cl;
        if (!cluster.empty()) cl = cluster;
        req = request_from_ir(source, ws.ontology(), lemma, cl, given, situation);
      }
      IR ir = analyze(source, ws.ontology(), req);
      if (cfg.emit_ir) out << serialize_ir(ir) << "\n";
      auto results = choose(ws.lexicon(to), ws.ontology(), ir, split_list(context), ws.weights());
      print_ranking(out, results);
      out << "\n";
      print_explanations(out, results);
      return ok;
    }
  } catch (const ValidationError& e) {
    err << "lexchoice: " << e.what() << "\n" << e.report();
    return violation;
  } catch (const AnalysisError& e) {
    err << "lexchoice: " << e.what() << "\n";
    return analysis_failed;
  } catch (const NoActivation& e) {
    err << "lexchoice: " << e.what() << "\n";
    return no_activation;
  } catch (const Error& e) {
    err << "lexchoice: " << e.what() << "\n";
    return io_or_parse;
  }
  return ok;
}

}  // namespace lexchoice::cli
