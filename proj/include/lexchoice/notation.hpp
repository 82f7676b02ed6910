#pragma once

#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lexchoice/graph.hpp"
#include "lexchoice/lexer.hpp"

// Bracket notation for concept instances and templates:
//
//   [provide1 instance-of MakingAvailable AGENT #1=[acme instance-of Org] ...]
//   [?e instance-of Beginning OBJECT ?x]
//
// Instances must carry an id; templates may carry a ?variable in that
// position instead. `#n=` defines a cross-reference label and `#n` uses it
// (instances only). A bracket holding a single word, like `[high]`, is an
// atomic literal.
namespace lexchoice::notation {

enum class Mode { instance, pattern };

inline constexpr int kMaxDepth = 200;

// Cross-reference labels seen while parsing instances.
struct Labels {
  std::map<std::string, std::string> ids;  // label -> instance id
  std::vector<std::pair<std::string, SourcePos>> uses;
};

class NodeParser {
 public:
  NodeParser(lex::Cursor& cursor, Mode mode, Labels* labels = nullptr)
      : c_(cursor), mode_(mode), labels_(labels) {}

  // A node at the cursor, optionally preceded by a label definition.
  Node node_or_def() {
    if (c_.at(lex::Tok::label_def)) return definition();
    return node();
  }

  Node node() {
    const SourcePos open = c_.peek().pos;
    c_.expect(lex::Tok::lbracket);
    if (++depth_ > kMaxDepth) throw ParseError(open, "nesting too deep");
    Node n;
    n.pos = open;
    if (mode_ == Mode::pattern) {
      if (c_.at(lex::Tok::variable)) n.var = c_.take().text;
      else if (!c_.at_word("instance-of"))
        c_.fail("templates cannot name instances; expected '?variable' or "
                "'instance-of', found " + c_.found());
    } else {
      if (c_.at_word("instance-of")) c_.fail("expected an instance id before 'instance-of'");
      n.id = c_.expect_name("instance id").text;
    }
    c_.expect_word("instance-of");
    const auto cname = c_.expect(lex::Tok::word, "concept name");
    if (!lex::looks_like_concept(cname.text))
      throw ParseError(cname.pos, "concept names must be capitalized, found '" +
                                        cname.text + "'");
    n.instance_of = cname.text;
    while (!c_.at(lex::Tok::rbracket)) {
      if (!c_.at(lex::Tok::word) || !lex::looks_like_relation(c_.peek().text))
        c_.fail("expected an uppercase relation name or ']', found " + c_.found());
      Slot slot{c_.take().text, {}};
      do {
        slot.fillers.push_back(value());
      } while (starts_value());
      n.slots.push_back(std::move(slot));
    }
    c_.take();
    --depth_;
    return n;
  }

  bool starts_value() const {
    switch (c_.peek().kind) {
      case lex::Tok::lbracket:
      case lex::Tok::label:
      case lex::Tok::label_def:
      case lex::Tok::variable:
      case lex::Tok::string:
        return true;
      case lex::Tok::word:
        return !lex::looks_like_relation(c_.peek().text);
      default:
        return false;
    }
  }

  Value value() {
    const auto& t = c_.peek();
    switch (t.kind) {
      case lex::Tok::lbracket: {
        const auto& inner = c_.peek_ahead(1);
        if ((inner.kind == lex::Tok::word || inner.kind == lex::Tok::string) &&
            inner.text != "instance-of" &&
            c_.peek_ahead(2).kind == lex::Tok::rbracket) {
          c_.take();
          std::string text = c_.take().text;
          c_.take();
          return Value::atom(std::move(text));
        }
        return Value::embed(node());
      }
      case lex::Tok::label_def:
        return Value::embed(definition());
      case lex::Tok::label: {
        if (mode_ == Mode::pattern || !labels_)
          c_.fail("references are not allowed here");
        labels_->uses.emplace_back(t.text, t.pos);
        return Value::ref(c_.take().text);
      }
      case lex::Tok::variable:
        if (mode_ != Mode::pattern) c_.fail("variables are only allowed in templates");
        return Value::var(c_.take().text);
      case lex::Tok::string:
        return Value::atom(c_.take().text);
      case lex::Tok::word:
        if (!lex::looks_like_relation(t.text)) return Value::atom(c_.take().text);
        [[fallthrough]];
      default:
        c_.fail("expected a value, found " + c_.found());
    }
  }

 private:
  Node definition() {
    if (mode_ == Mode::pattern || !labels_) c_.fail("references are not allowed here");
    const auto def = c_.take();
    if (!c_.at(lex::Tok::lbracket)) c_.fail("expected '[' after '#" + def.text + "='");
    Node n = node();
    if (!labels_->ids.emplace(def.text, n.id).second)
      throw ParseError(def.pos, "reference #" + def.text + " is defined more than once");
    return n;
  }

  lex::Cursor& c_;
  Mode mode_;
  Labels* labels_;
  int depth_ = 0;
};

// Rewrites label references (`#n`) into instance-id references.
inline void resolve_labels(Node& n, const Labels& labels) {
  for (auto& s : n.slots)
    for (auto& f : s.fillers) {
      if (f.kind() == Value::Kind::ref) f = Value::ref(labels.ids.at(f.text()));
      else if (f.is_node()) resolve_labels(f.node(), labels);
    }
}

inline void check_labels(const Labels& labels) {
  for (const auto& [label, pos] : labels.uses)
    if (!labels.ids.count(label))
      throw ParseError(pos, "dangling reference #" + label);
}

inline Template parse_template(lex::Cursor& c) {
  NodeParser p(c, Mode::pattern);
  return Template{p.node()};
}

inline Template parse_template(std::string_view text) {
  lex::Cursor c(lex::tokenize(text));
  auto t = parse_template(c);
  c.expect(lex::Tok::end);
  return t;
}

// ---------------------------------------------------------------------------
// Printing

struct PrintOptions {
  bool multiline = false;
  int indent = 0;
  const std::map<std::string, std::string, std::less<>>* labels = nullptr;  // id -> label
};

inline std::string format_id(const std::string& id) {
  return lex::is_bare_word(id) ? id : lex::quote(id);
}

inline std::string format_atom(const std::string& text) {
  return lex::is_bare_word(text) && !lex::looks_like_relation(text) ? text
                                                                   : lex::quote(text);
}

inline void print_node(std::ostream& os, const Node& n, const PrintOptions& opt);

inline void print_value(std::ostream& os, const Value& v, const PrintOptions& opt) {
  switch (v.kind()) {
    case Value::Kind::node: {
      if (opt.labels && !v.node().id.empty()) {
        if (auto it = opt.labels->find(v.node().id); it != opt.labels->end())
          os << '#' << it->second << '=';
      }
      print_node(os, v.node(), opt);
      return;
    }
    case Value::Kind::ref: {
      if (opt.labels)
        if (auto it = opt.labels->find(v.text()); it != opt.labels->end()) {
          os << '#' << it->second;
          return;
        }
      throw Error("cannot print reference to undefined instance '" + v.text() + "'");
    }
    case Value::Kind::atom:
      os << format_atom(v.text());
      return;
    case Value::Kind::var:
      os << '?' << v.text();
      return;
  }
}

inline void print_node(std::ostream& os, const Node& n, const PrintOptions& opt) {
  os << '[';
  if (!n.var.empty()) os << '?' << n.var << ' ';
  else if (!n.id.empty()) os << format_id(n.id) << ' ';
  os << "instance-of " << n.instance_of;
  PrintOptions inner = opt;
  inner.indent = opt.indent + 2;
  for (const auto& s : n.slots) {
    if (opt.multiline) os << '\n' << std::string(static_cast<std::size_t>(inner.indent), ' ');
    else os << ' ';
    os << s.relation;
    for (const auto& f : s.fillers) {
      os << ' ';
      print_value(os, f, inner);
    }
  }
  os << ']';
}

inline std::string to_text(const Node& n, PrintOptions opt = {}) {
  std::ostringstream os;
  print_node(os, n, opt);
  return os.str();
}

inline std::string to_text(const Template& t) { return to_text(t.root); }

}  // namespace lexchoice::notation
