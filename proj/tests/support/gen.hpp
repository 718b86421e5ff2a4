#ifndef CFPLAN_TESTS_GEN_HPP
#define CFPLAN_TESTS_GEN_HPP

// Seeded generator of small counterfactual planning problems for the
// property suites: at most 4 features with at most 4 values each, at most 3
// decision and 3 causal rules, stratified by construction. Deterministic for
// a fixed seed across platforms (no std::uniform_int_distribution).

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cfplan/eval.hpp"
#include "cfplan/model.hpp"

namespace cfplan::testgen {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() { // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint32_t below(std::uint32_t n) { return (std::uint32_t)(next() % n); }
  bool chance(std::uint32_t percent) { return below(100) < percent; }

private:
  std::uint64_t state_;
};

struct Problem {
  Model model;
  State initial;
  std::string schema_text;
  std::string rules_text;
};

inline std::optional<Problem> generate(std::uint64_t seed) {
  Rng rng(seed);
  const char* cat_values[] = {"a", "b", "c", "d"};
  const char* num_thresholds[] = {"25.0", "50.0", "75.0"};

  const int nf = 1 + (int)rng.below(4);
  std::ostringstream schema;
  std::vector<bool> numeric(nf);
  std::vector<int> sizes(nf);
  for (int f = 0; f < nf; ++f) {
    schema << "feature f" << f;
    numeric[f] = rng.chance(30);
    if (numeric[f]) {
      schema << " numeric 0 100";
      sizes[f] = 0; // depends on thresholds used
    } else {
      sizes[f] = 2 + (int)rng.below(3);
      schema << " categorical {";
      for (int v = 0; v < sizes[f]; ++v) schema << (v ? ", '" : "'") << cat_values[v] << "'";
      schema << "}";
    }
    std::uint32_t mut = rng.below(10);
    if (mut == 0) schema << " immutable";
    else if (mut == 1) schema << " monotone";
    else if (mut == 2) schema << " causal_only";
    schema << "\n";
  }
  schema << "decision label undesired 'bad'\n";

  Schema sc;
  try {
    sc = parse_schema(schema.str());
  } catch (const schema_error&) {
    return std::nullopt;
  }

  auto literal_on = [&](std::ostringstream& out, int f, int& varno) {
    if (numeric[f]) {
      const char* t = num_thresholds[rng.below(3)];
      if (rng.chance(50)) {
        out << "f" << f << "(X,N" << ++varno << "), N" << varno << "=<" << t;
      } else {
        out << "f" << f << "(X,N" << ++varno << "), not(N" << varno << "=<" << t << ")";
      }
    } else {
      if (rng.chance(35)) out << "not ";
      out << "f" << f << "(X,'" << cat_values[rng.below((std::uint32_t)sizes[f])] << "')";
    }
  };

  std::ostringstream rules;
  const bool with_aux = rng.chance(30);
  if (with_aux) {
    rules << "ab1(X,'t') :- ";
    int varno = 0;
    int nlits = 1 + (int)rng.below(2);
    for (int l = 0; l < nlits; ++l) {
      if (l) rules << ", ";
      literal_on(rules, (int)rng.below((std::uint32_t)nf), varno);
    }
    rules << ".\n";
  }

  const int ndec = 1 + (int)rng.below(3);
  for (int r = 0; r < ndec; ++r) {
    rules << "label(X,'bad') :- ";
    int varno = 0;
    int nlits = 1 + (int)rng.below(3);
    for (int l = 0; l < nlits; ++l) {
      if (l) rules << ", ";
      literal_on(rules, (int)rng.below((std::uint32_t)nf), varno);
    }
    if (with_aux && rng.chance(50)) rules << ", not ab1(X,'t')";
    rules << ".\n";
  }

  const int ncau = (int)rng.below(4);
  for (int r = 0; r < ncau && nf > 1; ++r) {
    int head = (int)rng.below((std::uint32_t)nf);
    std::string head_value;
    if (numeric[head])
      head_value = std::to_string(10 + 20 * rng.below(5)); // 10..90
    else
      head_value = cat_values[rng.below((std::uint32_t)sizes[head])];
    rules << "f" << head << "(X,'" << head_value << "') :- ";
    int varno = 0;
    int nlits = 1 + (int)rng.below(2);
    bool first = true;
    for (int l = 0; l < nlits; ++l) {
      int body = (int)rng.below((std::uint32_t)nf);
      if (body == head) body = (body + 1) % nf;
      if (!first) rules << ", ";
      first = false;
      literal_on(rules, body, varno);
    }
    rules << ".\n";
  }

  Problem p;
  try {
    RuleSet rs = parse_program(rules.str(), sc);
    p.model = compile(std::move(sc), std::move(rs));
  } catch (const std::exception&) {
    return std::nullopt;
  }
  p.schema_text = schema.str();
  p.rules_text = rules.str();

  // Initial state: causally consistent and classified undesired.
  std::vector<State> candidates;
  enumerate_states(p.model.dom, [&](const State& s) {
    if (is_causally_consistent(p.model, s) && satisfies_decision(p.model, s))
      candidates.push_back(s);
    return true;
  });
  if (candidates.empty()) return std::nullopt;
  p.initial = candidates[rng.below((std::uint32_t)candidates.size())];
  return p;
}

/// The first `count` valid problems drawn from seeds base, base+1, ...
inline std::vector<Problem> corpus(std::uint64_t base_seed, std::size_t count,
                                   std::size_t max_attempts = 4000) {
  std::vector<Problem> out;
  for (std::uint64_t s = 0; s < max_attempts && out.size() < count; ++s) {
    auto p = generate(base_seed + s);
    if (p) out.push_back(std::move(*p));
  }
  return out;
}

} // namespace cfplan::testgen

#endif
