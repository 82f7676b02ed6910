#pragma once

// Fixture access shared by the unit tests and the acceptance runner.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lexchoice/lexchoice.hpp"

#ifndef LEXCHOICE_FIXTURES_DIR
#define LEXCHOICE_FIXTURES_DIR "fixtures"
#endif

namespace lexchoice::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(LEXCHOICE_FIXTURES_DIR) / name;
}

inline std::string fixture_text(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const Ontology& core_ontology() {
  static const Ontology o = load_ontology(fixture_text("core.ont"));
  return o;
}

inline const Lexicon& fixture_lexicon(const std::string& lang) {
  static const Lexicon en = load_lexicon(fixture_text("en.lex"), core_ontology());
  static const Lexicon fr = load_lexicon(fixture_text("fr.lex"), core_ontology());
  if (lang == "en") return en;
  if (lang == "fr") return fr;
  throw std::runtime_error("no fixture lexicon " + lang);
}

inline IR fixture_ir(const std::string& name) { return parse_ir(fixture_text(name)); }

// Situation fixture used to exercise each fixture cluster kind.
inline std::string situation_for(const std::string& cluster_id) {
  if (cluster_id.ends_with("provide-c")) return "ex1.ir";
  if (cluster_id.ends_with("begin-c")) return "ex3.ir";
  if (cluster_id.ends_with("poor-c")) return "ex4.ir";
  throw std::runtime_error("no situation for " + cluster_id);
}

}  // namespace lexchoice::testing
