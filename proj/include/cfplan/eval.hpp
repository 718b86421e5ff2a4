#ifndef CFPLAN_EVAL_HPP
#define CFPLAN_EVAL_HPP

#include <set>
#include <utility>
#include <vector>

#include "cfplan/model.hpp"

namespace cfplan {

/// Truth of every defined (predicate, value) pair on one state, computed
/// stratum by stratum.
struct DerivedEnv {
  std::vector<std::vector<char>> truth; // [pred][pred_value]

  bool holds(int pred, int value) const {
    return truth[(std::size_t)pred][(std::size_t)value] != 0;
  }
};

/// Ground truth of one literal on one state. Positive atoms hold iff the
/// state value passes the test (or the derived environment marks the defined
/// atom true); NAF literals are the complement.
inline bool eval_literal(const Model& m, const State& s, const compiled::Lit& lit,
                         const DerivedEnv& env) {
  bool truth;
  switch (lit.kind) {
    case AtomKind::feature_eq:
      truth = s.v[(std::size_t)lit.feature] == lit.value;
      break;
    case AtomKind::feature_leq: {
      const Cell& c = m.dom.cell(lit.feature, s.v[(std::size_t)lit.feature]);
      if (c.hi <= lit.threshold)
        truth = true;
      else if (c.lo_closed ? c.lo > lit.threshold : c.lo >= lit.threshold)
        truth = false;
      else
        throw undecidable_literal("cell of '" + m.schema.feature(lit.feature).name +
                                  "' straddles threshold " + lit.threshold.str());
      break;
    }
    case AtomKind::feature_gt: {
      const Cell& c = m.dom.cell(lit.feature, s.v[(std::size_t)lit.feature]);
      if (c.lo_closed ? c.lo > lit.threshold : c.lo >= lit.threshold)
        truth = true;
      else if (c.hi <= lit.threshold)
        truth = false;
      else
        throw undecidable_literal("cell of '" + m.schema.feature(lit.feature).name +
                                  "' straddles threshold " + lit.threshold.str());
      break;
    }
    case AtomKind::defined:
      truth = env.holds(lit.pred, lit.pred_value);
      break;
    default:
      truth = false;
  }
  return lit.negated ? !truth : truth;
}

/// Bottom-up per-stratum fixpoint: (pred, v) becomes true iff some rule with
/// head (pred, v) has every body literal true under the state and the strata
/// below. Deterministic and independent of rule order.
inline DerivedEnv derive_predicates(const Model& m, const State& s) {
  DerivedEnv env;
  env.truth.resize(m.pred_values.size());
  for (std::size_t p = 0; p < m.pred_values.size(); ++p)
    env.truth[p].assign(m.pred_values[p].size(), 0);
  for (int layer = 0; layer < m.strata_count; ++layer) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : m.rules) {
        if (r.stratum != layer) continue;
        if (env.holds(r.pred, r.pred_value)) continue;
        bool fires = true;
        for (const auto& lit : r.body)
          if (!eval_literal(m, s, lit, env)) { fires = false; break; }
        if (fires) {
          env.truth[(std::size_t)r.pred][(std::size_t)r.pred_value] = 1;
          changed = true;
        }
      }
    }
  }
  return env;
}

/// Decision-rule membership: true iff some decision rule for the configured
/// undesired value fires. Rules for other label values are ignored.
inline bool satisfies_decision(const Model& m, const State& s, const DerivedEnv& env) {
  (void)s;
  for (const auto& r : m.rules) {
    if (r.cls != RuleClass::decision) continue;
    if (m.pred_values[(std::size_t)r.pred][(std::size_t)r.pred_value] != m.schema.undesired_value)
      continue;
    if (env.holds(r.pred, r.pred_value)) return true;
  }
  return false;
}

inline bool satisfies_decision(const Model& m, const State& s) {
  return satisfies_decision(m, s, derive_predicates(m, s));
}

/// Derived head values for one governed feature.
inline std::set<std::uint16_t> derived_values(const Model& m, int feature, const DerivedEnv& env) {
  std::set<std::uint16_t> out;
  for (const auto& r : m.rules)
    if (r.cls == RuleClass::causal && r.head_feature == feature &&
        env.holds(r.pred, r.pred_value))
      out.insert(r.head_abstract);
  return out;
}

/// Completion reading of the causal rules: each governed feature must carry
/// exactly the uniquely derived value, or, when nothing is derived, a value
/// outside its rule heads. A conflicting definition (two derived values) is
/// inconsistency, not an error, so search can move away from it.
inline bool is_causally_consistent(const Model& m, const State& s, const DerivedEnv& env) {
  for (std::size_t f = 0; f < m.schema.size(); ++f) {
    if (!m.governed[f]) continue;
    std::set<std::uint16_t> d = derived_values(m, (int)f, env);
    if (d.size() == 1) {
      if (s.v[f] != *d.begin()) return false;
    } else if (d.empty()) {
      if (m.head_values[f].count(s.v[f])) return false;
    } else {
      return false;
    }
  }
  return true;
}

inline bool is_causally_consistent(const Model& m, const State& s) {
  return is_causally_consistent(m, s, derive_predicates(m, s));
}

/// Goal-set membership: causally consistent and not classified undesired.
inline bool is_counterfactual(const Model& m, const State& s) {
  DerivedEnv env = derive_predicates(m, s);
  return is_causally_consistent(m, s, env) && !satisfies_decision(m, s, env);
}

/// Every abstract state for which is_counterfactual holds, in enumeration
/// order.
inline std::pair<std::uint64_t, std::vector<State>> enumerate_counterfactuals(const Model& m) {
  std::vector<State> hits;
  enumerate_states(m.dom, [&](const State& s) {
    if (is_counterfactual(m, s)) hits.push_back(s);
    return true;
  });
  return {hits.size(), std::move(hits)};
}

} // namespace cfplan

#endif
