// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include "properties.hpp"
#include "support.hpp"

using namespace lexchoice;
using lexchoice::testing::core_ontology;
using lexchoice::testing::fixture_ir;
using lexchoice::testing::fixture_lexicon;
using lexchoice::testing::fixture_text;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

Verdict ir_round_trip() {
  Verdict v;
  int n = 0;
  for (const char* name : {"ex1.ir", "ex2.ir", "ex3.ir", "ex4.ir"}) {
    const IR ir = fixture_ir(name);
    const std::string a = serialize_ir(ir), b = serialize_ir(ir);
    if (a != b) v.fail(std::string(name) + ": serializer output differs between runs");
    const IR again = parse_ir(a);
    if (!(again == ir)) v.fail(std::string(name) + ": reparse differs");
    if (serialize_ir(again) != a) v.fail(std::string(name) + ": second serialization differs");
    ++n;
  }
  if (v.ok) v.detail = std::to_string(n) + "/4 fixtures";
  return v;
}

Verdict self_round_trip() {
  Verdict v;
  const auto& o = core_ontology();
  int total = 0, first = 0;
  for (const char* lang : {"en", "fr"}) {
    const auto& lx = fixture_lexicon(lang);
    for (const auto& cl : lx.clusters()) {
      const IR sit = fixture_ir(lexchoice::testing::situation_for(cl.id));
      const auto b = apply_core(o, cl, sit.situation);
      for (const auto& e : cl.entries) {
        ++total;
        if (!b) {
          v.fail(cl.id + ": core does not apply to its situation");
          continue;
        }
        const IR ir = analyze(lx, o, {e.lemma, cl.id, *b, sit.situation});
        const auto results = choose(lx, o, ir);
        bool found = false;
        for (const auto& r : results)
          if (r.cluster_id == cl.id) {
            found = true;
            if (r.ranked.front().lemma == e.lemma) ++first;
            else v.fail(e.lemma + " ranked below " + r.ranked.front().lemma);
          }
        if (!found) v.fail(e.lemma + ": own cluster not activated");
      }
    }
  }
  v.detail = std::to_string(first) + "/" + std::to_string(total) + " entries ranked first";
  if (v.ok && total == 0) v.fail("no entries");
  return v;
}

Verdict reference_orderings() {
  Verdict v;
  const auto& o = core_ontology();
  const auto& fr = fixture_lexicon("fr");
  auto rank = [](const ChoiceResult& r, const std::string& lemma) {
    for (std::size_t i = 0; i < r.ranked.size(); ++i)
      if (r.ranked[i].lemma == lemma) return i;
    return r.ranked.size();
  };
  int held = 0;
  const auto r1 = choose(fr, o, fixture_ir("ex1.ir")).front();
  if (r1.ranked.front().lemma == "fournir") ++held;
  else v.fail("ex1: " + r1.ranked.front().lemma + " ranked first");
  const auto r3 = choose(fr, o, fixture_ir("ex3.ir")).front();
  if (rank(r3, "amorcer") < rank(r3, "commencer")) ++held;
  else v.fail("ex3: commencer above amorcer");
  const auto r4 = choose(fr, o, fixture_ir("ex4.ir")).front();
  if (rank(r4, "démuni") < rank(r4, "pauvre")) ++held;
  else v.fail("ex4: pauvre above démuni");
  if (v.ok) v.detail = std::to_string(held) + "/3 orderings";
  return v;
}

Verdict oracle_equivalence(int cases) {
  Verdict v;
  gen::Rng rng(20240601);
  int agreed = 0;
  for (int i = 0; i < cases; ++i) {
    const auto c = gen::random_choice_case(rng);
    if (auto f = props::choice_agrees(c)) v.fail("case " + std::to_string(i) + ": " + *f);
    else ++agreed;
  }
  if (v.ok) v.detail = std::to_string(agreed) + "/" + std::to_string(cases) + " instances";
  return v;
}

Verdict unification(int cases) {
  Verdict v;
  gen::Rng rng(314159);
  int agreed = 0, matched = 0;
  for (int i = 0; i < cases; ++i) {
    const auto c = gen::random_unify_case(rng);
    if (auto f = props::unify_agrees(c)) {
      v.fail("pair " + std::to_string(i) + ": " + *f);
      continue;
    }
    ++agreed;
    if (unify(c.ontology, c.pattern, *c.graph.find(c.target_id), c.graph, c.seed, UnifyOptions{c.either}))
      ++matched;
  }
  if (v.ok)
    v.detail = std::to_string(agreed) + "/" + std::to_string(cases) + " pairs (" +
               std::to_string(matched) + " unifiable)";
  return v;
}

Verdict properties(int per_property) {
  Verdict v;
  gen::Rng rng(2718);
  using Fn = props::Check (*)(gen::Rng&);
  const std::pair<const char*, Fn> checks[] = {{"matched-distinction monotonicity", props::monotone_on_match},
                                               {"unmatched-always monotonicity", props::monotone_on_unwanted},
                                               {"scale invariance", props::scale_invariant}};
  std::string summary;
  for (const auto& [name, fn] : checks) {
    int passed = 0, attempts = 0;
    while (passed < per_property && attempts < per_property * 50) {
      ++attempts;
      const auto r = fn(rng);
      if (r.outcome == props::Outcome::fail) {
        v.fail(std::string(name) + ": " + r.detail);
        break;
      }
      passed += r.outcome == props::Outcome::pass;
    }
    if (passed < per_property) v.fail(std::string(name) + ": only " + std::to_string(passed) + " cases generated");
    summary += (summary.empty() ? "" : ", ") + std::to_string(passed) + " " + name;
  }
  if (v.ok) v.detail = summary;
  return v;
}

Verdict fuzzing(int inputs) {
  Verdict v;
  gen::Rng rng(161803);
  const auto& o = core_ontology();
  std::vector<std::pair<std::string, props::Grammar>> seeds;
  for (const char* name : {"ex1.ir", "ex2.ir", "ex3.ir", "ex4.ir"})
    seeds.push_back({fixture_text(name), props::Grammar::ir});
  for (const char* name : {"en.lex", "fr.lex"}) seeds.push_back({fixture_text(name), props::Grammar::lexicon});
  int clean = 0, parsed = 0;
  double slowest = 0.0;
  for (int i = 0; i < inputs; ++i) {
    const auto& [text, g] = seeds[static_cast<std::size_t>(i) % seeds.size()];
    const std::string input = gen::mutate(rng, text);
    const auto t0 = std::chrono::steady_clock::now();
    const auto f = props::fuzz_one(input, g, o);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    slowest = std::max(slowest, ms);
    if (f) {
      v.fail("input " + std::to_string(i) + ": " + *f);
      continue;
    }
    ++clean;
    try {
      if (g == props::Grammar::ir) parse_ir(input);
      else parse_lexicon(input);
      ++parsed;
    } catch (const ParseError&) {
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", slowest);
  if (v.ok)
    v.detail = std::to_string(clean) + "/" + std::to_string(inputs) + " inputs handled (" +
               std::to_string(parsed) + " parsed), slowest " + buf + " ms";
  return v;
}

}  // namespace

int main() {
  struct Row {
    const char* name;
    Verdict (*run)();
  };
  const Row rows[] = {
      {"1 IR round trip", ir_round_trip},
      {"2 self round trip", self_round_trip},
      {"3 reference orderings", reference_orderings},
      {"4 oracle equivalence", [] { return oracle_equivalence(600); }},
      {"5 unification", [] { return unification(600); }},
      {"6 monotonicity and invariance", [] { return properties(250); }},
      {"7 parser robustness", [] { return fuzzing(10000); }},
  };
  int failures = 0;
  for (const auto& row : rows) {
    Verdict v;
    try {
      v = row.run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    std::cout << (v.ok ? "PASS" : "FAIL") << "  " << row.name << "  " << v.detail << std::endl;
    failures += !v.ok;
  }
  return failures == 0 ? 0 : 1;
}
