#ifndef CFPLAN_REPORT_HPP
#define CFPLAN_REPORT_HPP

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "cfplan/actions.hpp"
#include "cfplan/model.hpp"
#include "cfplan/oracle.hpp"
#include "cfplan/planner.hpp"

namespace cfplan {

/// Per-feature, per-transition action kind shown in the path table.
enum class StepKind { none, direct, causal };

inline std::string to_string(StepKind k) {
  switch (k) {
    case StepKind::none: return "N/A";
    case StepKind::direct: return "Direct";
    case StepKind::causal: return "Causal";
  }
  return "?";
}

/// Replays one transition's action sequence and reports, per feature, the
/// kind of the action that last moved it (or none).
inline std::vector<StepKind> step_kinds(const Model& m, const State& from,
                                        const std::vector<Action>& actions) {
  std::vector<StepKind> kinds(m.schema.size(), StepKind::none);
  State cur = from;
  for (const auto& a : actions) {
    State next = action_result(cur, a);
    for (std::size_t f = 0; f < m.schema.size(); ++f)
      if (next.v[f] != cur.v[f])
        kinds[f] = a.kind == Action::Kind::causal ? StepKind::causal : StepKind::direct;
    cur = next;
  }
  return kinds;
}

/// Tabular rendering of a candidate path: one row per feature, columns
/// Initial | Action | (Intermediate | Action)* | Goal, plus the planning
/// time. Concrete instance values are shown until a feature first moves;
/// from then on its abstract value (interval or symbol) is shown.
inline std::string render_path_table(const Model& m, const Record& instance,
                                     const CandidatePath& path, std::int64_t time_ms) {
  const std::size_t nstates = path.states.size();
  std::vector<std::vector<std::string>> cols; // column-major
  std::vector<std::string> header;

  auto concrete_text = [&](std::size_t f) {
    return instance[f].numeric ? instance[f].num.str() : instance[f].sym;
  };

  header.push_back("Feature");
  {
    std::vector<std::string> c;
    for (std::size_t f = 0; f < m.schema.size(); ++f) c.push_back(m.schema.features[f].name);
    cols.push_back(std::move(c));
  }

  std::vector<bool> moved(m.schema.size(), false);
  std::vector<std::string> shown(m.schema.size());
  for (std::size_t f = 0; f < m.schema.size(); ++f) shown[f] = concrete_text(f);

  header.push_back("Initial State");
  cols.push_back(shown);

  for (std::size_t t = 0; t + 1 < nstates; ++t) {
    std::vector<StepKind> kinds = step_kinds(m, path.states[t], path.transitions[t]);
    std::vector<std::string> action_col, value_col;
    for (std::size_t f = 0; f < m.schema.size(); ++f) {
      action_col.push_back(to_string(kinds[f]));
      if (path.states[t + 1].v[f] != path.states[t].v[f]) moved[f] = true;
      if (moved[f])
        shown[f] = render_value(m.schema, m.dom, (int)f, path.states[t + 1].v[f]);
      value_col.push_back(shown[f]);
    }
    header.push_back("Action");
    cols.push_back(std::move(action_col));
    header.push_back(t + 2 == nstates ? "Goal State" : "Intermediate");
    cols.push_back(std::move(value_col));
  }
  if (nstates == 1) {
    header.push_back("Action");
    cols.push_back(std::vector<std::string>(m.schema.size(), "N/A"));
    header.push_back("Goal State");
    cols.push_back(shown);
  }

  std::vector<std::size_t> width(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& cell : cols[c]) width[c] = std::max(width[c], cell.size());
  }

  std::ostringstream out;
  auto rule_line = [&]() {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out << "+";
      out << std::string(width[c] + 2, '-');
    }
    out << "+\n";
  };
  auto row = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out << "| " << cells[c] << std::string(width[c] - cells[c].size() + 1, ' ');
    }
    out << "|\n";
  };
  rule_line();
  row(header);
  rule_line();
  for (std::size_t f = 0; f < m.schema.size(); ++f) {
    std::vector<std::string> cells;
    for (std::size_t c = 0; c < cols.size(); ++c) cells.push_back(cols[c][f]);
    row(cells);
  }
  rule_line();
  out << "planning time: " << time_ms << " ms\n";
  return out.str();
}

inline std::string render_verification(const oracle::VerificationReport& rep) {
  std::ostringstream out;
  for (const auto& c : rep.clauses) {
    out << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
    if (!c.pass) out << ": " << c.witness;
    out << "\n";
  }
  out << (rep.pass() ? "solution path verified" : "solution path REJECTED") << "\n";
  return out.str();
}

} // namespace cfplan

#endif
