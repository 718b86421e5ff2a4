#ifndef CFPLAN_PATHDOC_HPP
#define CFPLAN_PATHDOC_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfplan/actions.hpp"
#include "cfplan/model.hpp"
#include "cfplan/planner.hpp"

namespace cfplan {

class pathdoc_error : public std::runtime_error {
public:
  explicit pathdoc_error(const std::string& what) : std::runtime_error(what) {}
};

/// FNV-1a fingerprint of the canonical schema + program text, so a path
/// document can be checked against the inputs it was produced from without
/// any in-process state.
inline std::string model_fingerprint(const Model& m) {
  std::string text = print_schema(m.schema) + print_program(m.program.ruleset);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

/// Self-describing result of one planning run.
struct PathDoc {
  std::string fingerprint;
  Record instance;
  CandidatePath path;
  std::int64_t time_ms = 0;
};

inline nlohmann::json to_json(const Model& m, const PathDoc& doc) {
  nlohmann::json j;
  j["format"] = "cfplan-path/1";
  j["fingerprint"] = doc.fingerprint;
  j["decision"] = {{"predicate", m.schema.decision_predicate},
                   {"undesired", m.schema.undesired_value}};
  nlohmann::json inst = nlohmann::json::object();
  for (std::size_t f = 0; f < m.schema.size(); ++f) {
    const auto& cv = doc.instance[f];
    inst[m.schema.features[f].name] = cv.numeric ? cv.num.str() : cv.sym;
  }
  j["instance"] = inst;

  nlohmann::json states = nlohmann::json::array();
  for (const auto& s : doc.path.states) {
    nlohmann::json st = nlohmann::json::array();
    for (std::size_t f = 0; f < s.v.size(); ++f)
      st.push_back({{"feature", m.schema.features[f].name},
                    {"value", s.v[f]},
                    {"display", render_value(m.schema, m.dom, (int)f, s.v[f])}});
    states.push_back(std::move(st));
  }
  j["states"] = std::move(states);

  nlohmann::json transitions = nlohmann::json::array();
  for (const auto& step : doc.path.transitions) {
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& a : step) {
      nlohmann::json aj;
      aj["kind"] = a.kind == Action::Kind::causal ? "causal" : "direct";
      if (a.kind == Action::Kind::causal) aj["rule"] = a.rule_index;
      nlohmann::json assigns = nlohmann::json::array();
      for (const auto& asg : a.assigns)
        assigns.push_back({{"feature", m.schema.features[(std::size_t)asg.feature].name},
                           {"value", asg.value}});
      aj["assigns"] = std::move(assigns);
      actions.push_back(std::move(aj));
    }
    transitions.push_back(std::move(actions));
  }
  j["transitions"] = std::move(transitions);
  j["time_ms"] = doc.time_ms;
  return j;
}

inline std::string serialize(const Model& m, const PathDoc& doc) {
  return to_json(m, doc).dump(2) + "\n";
}

/// Parses a path document and validates it against the model: fingerprint,
/// feature names, and value ranges must all line up.
inline PathDoc parse_pathdoc(const std::string& text, const Model& m) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw pathdoc_error(std::string("malformed path document: ") + e.what());
  }
  try {
    if (j.at("format") != "cfplan-path/1") throw pathdoc_error("unknown document format");
    PathDoc doc;
    doc.fingerprint = j.at("fingerprint");
    if (doc.fingerprint != model_fingerprint(m))
      throw pathdoc_error("fingerprint mismatch: document was produced from different inputs");
    doc.time_ms = j.value("time_ms", 0);

    doc.instance.resize(m.schema.size());
    for (std::size_t f = 0; f < m.schema.size(); ++f) {
      const FeatureDecl& fd = m.schema.features[f];
      std::string raw = j.at("instance").at(fd.name);
      ConcreteValue cv;
      if (fd.numeric) {
        cv.numeric = true;
        cv.num = Rational::parse(raw);
      } else {
        cv.sym = raw;
        if (fd.value_index(raw) < 0)
          throw pathdoc_error("instance value '" + raw + "' not declared for '" + fd.name + "'");
      }
      doc.instance[f] = std::move(cv);
    }

    for (const auto& st : j.at("states")) {
      State s;
      s.v.assign(m.schema.size(), 0);
      if (st.size() != m.schema.size()) throw pathdoc_error("state arity mismatch");
      for (const auto& entry : st) {
        int f = m.schema.feature_index(entry.at("feature"));
        if (f < 0) throw pathdoc_error("unknown feature in state");
        std::uint16_t v = entry.at("value");
        if (v >= m.dom.value_count(f)) throw pathdoc_error("state value out of range");
        s.v[(std::size_t)f] = v;
      }
      doc.path.states.push_back(std::move(s));
    }

    for (const auto& step : j.at("transitions")) {
      std::vector<Action> actions;
      for (const auto& aj : step) {
        Action a;
        a.kind = aj.at("kind") == "causal" ? Action::Kind::causal : Action::Kind::direct;
        if (a.kind == Action::Kind::causal) {
          a.rule_index = aj.at("rule");
          if (a.rule_index >= m.rules.size()) throw pathdoc_error("rule index out of range");
        }
        for (const auto& asg : aj.at("assigns")) {
          int f = m.schema.feature_index(asg.at("feature"));
          if (f < 0) throw pathdoc_error("unknown feature in action");
          std::uint16_t v = asg.at("value");
          if (v >= m.dom.value_count(f)) throw pathdoc_error("action value out of range");
          a.assigns.push_back({f, v});
        }
        actions.push_back(std::move(a));
      }
      doc.path.transitions.push_back(std::move(actions));
    }
    if (!doc.path.states.empty() && doc.path.transitions.size() + 1 != doc.path.states.size())
      throw pathdoc_error("transition count does not match state count");
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw pathdoc_error(std::string("malformed path document: ") + e.what());
  }
}

} // namespace cfplan

#endif
