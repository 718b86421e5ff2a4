#ifndef CFPLAN_ORACLE_HPP
#define CFPLAN_ORACLE_HPP

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cfplan/actions.hpp"
#include "cfplan/model.hpp"

// Brute-force reference implementations used to validate the evaluator and
// the planner. Everything here re-derives rule truth from scratch by naive
// recursion; nothing calls the evaluator (eval.hpp is deliberately not
// included).

namespace cfplan::oracle {

namespace detail {

inline bool derives(const Model& m, const State& s, int pred, int pred_value,
                    std::set<std::pair<int, int>>& active);

inline bool lit_truth(const Model& m, const State& s, const compiled::Lit& lit,
                      std::set<std::pair<int, int>>& active) {
  bool t;
  switch (lit.kind) {
    case AtomKind::feature_eq:
      t = s.v[(std::size_t)lit.feature] == lit.value;
      break;
    case AtomKind::feature_leq: {
      const Cell& c = m.dom.cell(lit.feature, s.v[(std::size_t)lit.feature]);
      t = c.hi <= lit.threshold;
      break;
    }
    case AtomKind::feature_gt: {
      const Cell& c = m.dom.cell(lit.feature, s.v[(std::size_t)lit.feature]);
      t = c.lo_closed ? c.lo > lit.threshold : c.lo >= lit.threshold;
      break;
    }
    case AtomKind::defined:
      t = derives(m, s, lit.pred, lit.pred_value, active);
      break;
    default:
      t = false;
  }
  return lit.negated ? !t : t;
}

// Top-down least-fixpoint unrolling: a goal already on the recursion stack
// contributes false.
inline bool derives(const Model& m, const State& s, int pred, int pred_value,
                    std::set<std::pair<int, int>>& active) {
  auto key = std::make_pair(pred, pred_value);
  if (active.count(key)) return false;
  active.insert(key);
  bool derived = false;
  for (const auto& r : m.rules) {
    if (r.pred != pred || r.pred_value != pred_value) continue;
    bool fires = true;
    for (const auto& lit : r.body)
      if (!lit_truth(m, s, lit, active)) { fires = false; break; }
    if (fires) { derived = true; break; }
  }
  active.erase(key);
  return derived;
}

inline bool rule_fires(const Model& m, const State& s, const compiled::CRule& r) {
  std::set<std::pair<int, int>> active;
  for (const auto& lit : r.body) {
    if (!lit_truth(m, s, lit, active)) return false;
  }
  return true;
}

} // namespace detail

inline bool consistent(const Model& m, const State& s) {
  for (std::size_t f = 0; f < m.schema.size(); ++f) {
    if (!m.governed[f]) continue;
    std::set<std::uint16_t> derived;
    for (const auto& r : m.rules)
      if (r.cls == RuleClass::causal && r.head_feature == (int)f && detail::rule_fires(m, s, r))
        derived.insert(r.head_abstract);
    if (derived.size() == 1) {
      if (s.v[f] != *derived.begin()) return false;
    } else if (derived.empty()) {
      if (m.head_values[f].count(s.v[f])) return false;
    } else {
      return false;
    }
  }
  return true;
}

inline bool undesired(const Model& m, const State& s) {
  for (const auto& r : m.rules) {
    if (r.cls != RuleClass::decision) continue;
    if (m.pred_values[(std::size_t)r.pred][(std::size_t)r.pred_value] !=
        m.schema.undesired_value)
      continue;
    if (detail::rule_fires(m, s, r)) return true;
  }
  return false;
}

inline bool in_goal_set(const Model& m, const State& s) {
  return consistent(m, s) && !undesired(m, s);
}

/// Exact goal set by full enumeration (Theorem-2 reference).
inline std::set<State> goal_set(const Model& m) {
  std::set<State> out;
  enumerate_states(m.dom, [&](const State& s) {
    if (in_goal_set(m, s)) out.insert(s);
    return true;
  });
  return out;
}

/// Every causally consistent state reachable from a(s) through causally
/// inconsistent intermediates, under any action ordering. This is the full
/// transition relation the planner's preference-ordered search explores a
/// subset of.
inline std::set<State> delta_set(const Model& m, const ActionSet& acts, const State& s,
                                 const Action& a) {
  std::set<State> result;
  if (!applicable(m, s, a)) return result;
  State first = action_result(s, a);
  if (consistent(m, first)) {
    result.insert(first);
    return result;
  }
  std::deque<State> frontier{first};
  std::unordered_set<State, StateHash> seen{first};
  while (!frontier.empty()) {
    State x = frontier.front();
    frontier.pop_front();
    for (std::size_t i = 0; i < acts.size(); ++i) {
      if (!applicable(m, x, acts[i])) continue;
      State y = action_result(x, acts[i]);
      if (y == x) continue;
      if (consistent(m, y)) {
        result.insert(y);
      } else if (!seen.count(y)) {
        seen.insert(y);
        frontier.push_back(y);
      }
    }
  }
  return result;
}

inline std::set<State> successors(const Model& m, const ActionSet& acts, const State& s) {
  std::set<State> out;
  for (std::size_t i = 0; i < acts.size(); ++i) {
    std::set<State> d = delta_set(m, acts, s, acts[i]);
    out.insert(d.begin(), d.end());
  }
  return out;
}

struct ShortestPath {
  std::size_t length = 0; // number of consistent states, initial included
  std::vector<State> states;
};

/// BFS over consistent states from the initial state into the goal set.
/// Returns nothing when unreachable.
inline std::optional<ShortestPath> shortest_path(const Model& m, const ActionSet& acts,
                                                 const State& initial) {
  if (in_goal_set(m, initial)) return ShortestPath{1, {initial}};
  std::unordered_map<State, State, StateHash> parent;
  std::unordered_set<State, StateHash> visited{initial};
  std::deque<State> frontier{initial};
  while (!frontier.empty()) {
    State s = frontier.front();
    frontier.pop_front();
    for (const State& t : successors(m, acts, s)) {
      if (visited.count(t)) continue;
      visited.insert(t);
      parent.emplace(t, s);
      if (in_goal_set(m, t)) {
        ShortestPath sp;
        State cur = t;
        sp.states.push_back(cur);
        while (cur != initial) {
          cur = parent.at(cur);
          sp.states.push_back(cur);
        }
        std::reverse(sp.states.begin(), sp.states.end());
        sp.length = sp.states.size();
        assert(visited.size() <= m.dom.state_count());
        return sp;
      }
      frontier.push_back(t);
    }
  }
  assert(visited.size() <= m.dom.state_count());
  return std::nullopt;
}

/// One clause of the solution-path definition, with a witness on failure.
struct ClauseCheck {
  std::string name;
  bool pass = false;
  std::string witness;
};

struct VerificationReport {
  std::vector<ClauseCheck> clauses;

  bool pass() const {
    for (const auto& c : clauses)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

inline std::string state_text(const Model& m, const State& s) {
  std::string out = "(";
  for (std::size_t f = 0; f < s.v.size(); ++f) {
    if (f) out += ", ";
    out += m.schema.features[f].name + "=" + render_value(m.schema, m.dom, (int)f, s.v[f]);
  }
  return out + ")";
}

} // namespace detail

/// Checks the five solution-path clauses literally: starts at the initial
/// state, ends in the goal set, every state consistent, no interior state in
/// the goal set, and consecutive states related by one action plus its
/// consistency closure.
inline VerificationReport verify_solution(const Model& m, const ActionSet& acts,
                                          const std::vector<State>& path, const State& initial) {
  VerificationReport rep;
  auto add = [&](const std::string& name, bool pass, const std::string& witness) {
    rep.clauses.push_back({name, pass, pass ? "" : witness});
  };

  if (path.empty()) {
    add("starts at initial state", false, "path is empty");
    add("ends in goal set", false, "path is empty");
    add("all states causally consistent", false, "path is empty");
    add("interior states outside goal set", false, "path is empty");
    add("consecutive states delta-related", false, "path is empty");
    return rep;
  }

  add("starts at initial state", path.front() == initial,
      "first state is " + detail::state_text(m, path.front()));

  add("ends in goal set", in_goal_set(m, path.back()),
      "last state " + detail::state_text(m, path.back()) + " is not a goal");

  {
    bool ok = true;
    std::string w;
    for (std::size_t j = 0; j < path.size(); ++j) {
      if (!consistent(m, path[j])) {
        ok = false;
        w = "state " + std::to_string(j) + " " + detail::state_text(m, path[j]) +
            " is causally inconsistent";
        break;
      }
    }
    add("all states causally consistent", ok, w);
  }

  {
    bool ok = true;
    std::string w;
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
      if (in_goal_set(m, path[j])) {
        ok = false;
        w = "interior state " + std::to_string(j) + " " + detail::state_text(m, path[j]) +
            " is already a goal";
        break;
      }
    }
    add("interior states outside goal set", ok, w);
  }

  {
    bool ok = true;
    std::string w;
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
      if (!successors(m, acts, path[j]).count(path[j + 1])) {
        ok = false;
        w = "no single action plus closure reaches state " + std::to_string(j + 1) +
            " from state " + std::to_string(j);
        break;
      }
    }
    add("consecutive states delta-related", ok, w);
  }
  return rep;
}

} // namespace cfplan::oracle

#endif
