#ifndef CFPLAN_SCHEMA_HPP
#define CFPLAN_SCHEMA_HPP

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfplan/rational.hpp"

namespace cfplan {

class schema_error : public std::runtime_error {
public:
  explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

/// How a feature may be moved by interventions.
///   free       — direct and causal changes allowed
///   immutable  — never changes
///   monotone   — may only increase (declared value order / cell order)
///   causal_only — no direct action may target it; causal rules may set it
enum class Mutability { free_, immutable_, monotone_nondecreasing, causal_only };

inline std::string to_string(Mutability m) {
  switch (m) {
    case Mutability::free_: return "free";
    case Mutability::immutable_: return "immutable";
    case Mutability::monotone_nondecreasing: return "monotone";
    case Mutability::causal_only: return "causal_only";
  }
  return "?";
}

struct FeatureDecl {
  std::string name;
  bool numeric = false;
  std::vector<std::string> values; // categorical: declared value order
  Rational min, max;               // numeric bounds
  Mutability mutability = Mutability::free_;

  int value_index(const std::string& v) const {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] == v) return (int)i;
    return -1;
  }
};

struct Schema {
  std::vector<FeatureDecl> features;
  std::string decision_predicate;
  std::string undesired_value;

  int feature_index(const std::string& name) const {
    for (std::size_t i = 0; i < features.size(); ++i)
      if (features[i].name == name) return (int)i;
    return -1;
  }
  const FeatureDecl& feature(int idx) const { return features[(std::size_t)idx]; }
  std::size_t size() const { return features.size(); }
};

namespace detail {

// Splits a schema line into tokens; quoted tokens ('...') may hold spaces,
// commas and comparison characters. Braces and commas are punctuation.
inline std::vector<std::string> schema_tokens(const std::string& line, int lineno) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;
    if (std::isspace((unsigned char)c)) { ++i; continue; }
    if (c == '{' || c == '}' || c == ',') {
      out.emplace_back(1, c);
      ++i;
      continue;
    }
    if (c == '\'') {
      std::size_t end = line.find('\'', i + 1);
      if (end == std::string::npos)
        throw schema_error("line " + std::to_string(lineno) + ": unterminated quoted value");
      out.push_back(line.substr(i + 1, end - i - 1));
      i = end + 1;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace((unsigned char)line[j]) && line[j] != '{' &&
           line[j] != '}' && line[j] != ',' && line[j] != '#')
      ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<Mutability> mutability_flag(const std::string& tok) {
  if (tok == "immutable") return Mutability::immutable_;
  if (tok == "monotone") return Mutability::monotone_nondecreasing;
  if (tok == "causal_only") return Mutability::causal_only;
  return std::nullopt;
}

} // namespace detail

/// Parses the line-based schema format:
///   feature <name> categorical {v1, v2, ...} [immutable|monotone|causal_only]
///   feature <name> numeric <min> <max> [flags]
///   decision <predicate> undesired '<value>'
/// '#' starts a comment; blank lines are ignored.
inline Schema parse_schema(const std::string& text) {
  Schema schema;
  bool have_decision = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::schema_tokens(line, lineno);
    if (toks.empty()) continue;
    const std::string at = "line " + std::to_string(lineno) + ": ";
    if (toks[0] == "feature") {
      if (toks.size() < 3) throw schema_error(at + "malformed feature declaration");
      FeatureDecl f;
      f.name = toks[1];
      if (schema.feature_index(f.name) >= 0)
        throw schema_error(at + "duplicate feature '" + f.name + "'");
      std::size_t i = 3;
      if (toks[2] == "categorical") {
        if (i >= toks.size() || toks[i] != "{")
          throw schema_error(at + "expected '{' after 'categorical'");
        ++i;
        while (i < toks.size() && toks[i] != "}") {
          if (toks[i] == ",") { ++i; continue; }
          if (std::find(f.values.begin(), f.values.end(), toks[i]) != f.values.end())
            throw schema_error(at + "duplicate value '" + toks[i] + "' for feature '" + f.name + "'");
          f.values.push_back(toks[i]);
          ++i;
        }
        if (i >= toks.size()) throw schema_error(at + "missing '}'");
        ++i;
        if (f.values.empty())
          throw schema_error(at + "empty categorical domain for feature '" + f.name + "'");
      } else if (toks[2] == "numeric") {
        if (toks.size() < 5) throw schema_error(at + "numeric feature needs <min> <max>");
        f.numeric = true;
        f.min = Rational::parse(toks[3]);
        f.max = Rational::parse(toks[4]);
        if (!(f.min < f.max))
          throw schema_error(at + "feature '" + f.name + "': min must be < max");
        i = 5;
      } else {
        throw schema_error(at + "unknown feature kind '" + toks[2] + "'");
      }
      bool flagged = false;
      for (; i < toks.size(); ++i) {
        auto m = detail::mutability_flag(toks[i]);
        if (!m) throw schema_error(at + "unknown flag '" + toks[i] + "'");
        if (flagged)
          throw schema_error(at + "feature '" + f.name + "': mutability flags are mutually exclusive");
        f.mutability = *m;
        flagged = true;
      }
      schema.features.push_back(std::move(f));
    } else if (toks[0] == "decision") {
      if (toks.size() != 4 || toks[2] != "undesired")
        throw schema_error(at + "expected: decision <predicate> undesired '<value>'");
      if (have_decision) throw schema_error(at + "duplicate decision declaration");
      schema.decision_predicate = toks[1];
      schema.undesired_value = toks[3];
      have_decision = true;
    } else {
      throw schema_error(at + "unknown directive '" + toks[0] + "'");
    }
  }
  if (!have_decision) throw schema_error("schema declares no decision predicate");
  if (schema.features.empty()) throw schema_error("schema declares no features");
  if (schema.feature_index(schema.decision_predicate) >= 0)
    throw schema_error("decision predicate '" + schema.decision_predicate + "' clashes with a feature name");
  return schema;
}

/// Canonical rendering of a schema; parse_schema(print_schema(s)) reproduces s.
inline std::string print_schema(const Schema& schema) {
  std::ostringstream out;
  for (const auto& f : schema.features) {
    out << "feature " << f.name;
    if (f.numeric) {
      out << " numeric " << f.min.str() << " " << f.max.str();
    } else {
      out << " categorical {";
      for (std::size_t i = 0; i < f.values.size(); ++i)
        out << (i ? ", '" : "'") << f.values[i] << "'";
      out << "}";
    }
    if (f.mutability != Mutability::free_) out << " " << to_string(f.mutability);
    out << "\n";
  }
  out << "decision " << schema.decision_predicate << " undesired '" << schema.undesired_value
      << "'\n";
  return out.str();
}

} // namespace cfplan

#endif
