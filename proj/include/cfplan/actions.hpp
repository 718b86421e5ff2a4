#ifndef CFPLAN_ACTIONS_HPP
#define CFPLAN_ACTIONS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "cfplan/model.hpp"

namespace cfplan {

class mutability_error : public std::runtime_error {
public:
  explicit mutability_error(const std::string& what) : std::runtime_error(what) {}
};

/// One feature write an action performs.
struct Assignment {
  int feature;
  std::uint16_t value;

  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.feature == b.feature && a.value == b.value;
  }
};

/// An intervention. Direct actions rewrite a single feature; causal actions
/// realize one causal rule by assigning a canonical satisfying value to each
/// body feature and the rule's head value to the governed feature.
struct Action {
  enum class Kind { direct, causal };
  Kind kind = Kind::direct;
  std::vector<Assignment> assigns;   // head assignment last for causal actions
  std::size_t rule_index = 0;        // causal: index into Model::rules

  int target_feature() const { return assigns.back().feature; }
  std::uint16_t target_value() const { return assigns.back().value; }

  friend bool operator==(const Action& a, const Action& b) {
    return a.kind == b.kind && a.assigns == b.assigns && a.rule_index == b.rule_index;
  }
};

struct ActionSet {
  std::vector<Action> actions; // causal actions first, then direct

  std::size_t size() const { return actions.size(); }
  const Action& operator[](std::size_t i) const { return actions[i]; }
};

/// All interventions the model admits. Causal actions come first in causal
/// rule order; direct actions follow in schema feature order then declared
/// value/cell order. Identity effects are weeded out per state at selection
/// time, mutability of the concrete move at applicability time.
inline ActionSet generate_actions(const Model& m) {
  ActionSet out;
  for (std::size_t ri = 0; ri < m.rules.size(); ++ri) {
    const auto& r = m.rules[ri];
    if (r.cls != RuleClass::causal) continue;
    Action a;
    a.kind = Action::Kind::causal;
    a.rule_index = ri;
    bool feasible = true;
    // Canonical body assignment: per body feature, the first value (in
    // declared/cell order) satisfying every literal of this body on it.
    std::vector<int> body_features;
    for (const auto& lit : r.body) {
      if (lit.kind == AtomKind::defined) continue;
      bool seen = false;
      for (int f : body_features) seen = seen || f == lit.feature;
      if (!seen) body_features.push_back(lit.feature);
    }
    for (int f : body_features) {
      bool assigned = false;
      for (std::uint16_t v = 0; v < m.dom.value_count(f) && !assigned; ++v) {
        bool ok = true;
        for (const auto& lit : r.body) {
          if (lit.kind == AtomKind::defined || lit.feature != f) continue;
          bool truth;
          if (lit.kind == AtomKind::feature_eq) {
            truth = v == lit.value;
            if (lit.negated) truth = !truth;
          } else {
            const Cell& c = m.dom.cell(f, v);
            if (lit.kind == AtomKind::feature_leq)
              truth = c.hi <= lit.threshold;
            else
              truth = c.lo_closed ? c.lo > lit.threshold : c.lo >= lit.threshold;
          }
          if (!truth) { ok = false; break; }
        }
        if (ok) {
          a.assigns.push_back({f, v});
          assigned = true;
        }
      }
      if (!assigned) { feasible = false; break; } // unsatisfiable body
    }
    if (!feasible) continue;
    a.assigns.push_back({r.head_feature, r.head_abstract});
    out.actions.push_back(std::move(a));
  }
  for (std::size_t f = 0; f < m.schema.size(); ++f) {
    Mutability mut = m.schema.features[f].mutability;
    if (mut == Mutability::immutable_ || mut == Mutability::causal_only) continue;
    for (std::uint16_t v = 0; v < m.dom.value_count((int)f); ++v) {
      Action a;
      a.kind = Action::Kind::direct;
      a.assigns.push_back({(int)f, v});
      out.actions.push_back(std::move(a));
    }
  }
  return out;
}

/// The state the action would produce, ignoring mutability.
inline State action_result(const State& s, const Action& a) {
  State ns = s;
  for (const auto& asg : a.assigns) ns.v[(std::size_t)asg.feature] = asg.value;
  return ns;
}

/// Whether the action may legally run in this state: every feature it moves
/// must be movable (immutable features may not move at all, monotone features
/// only upward) and the action must change the state.
inline bool applicable(const Model& m, const State& s, const Action& a) {
  bool moved = false;
  for (const auto& asg : a.assigns) {
    std::uint16_t cur = s.v[(std::size_t)asg.feature];
    if (asg.value == cur) continue;
    const FeatureDecl& fd = m.schema.feature(asg.feature);
    if (fd.mutability == Mutability::immutable_) return false;
    if (fd.mutability == Mutability::monotone_nondecreasing && asg.value < cur) return false;
    moved = true;
  }
  return moved;
}

/// Applies the action. Throws mutability_error if the action is not
/// applicable in this state.
inline State apply_action(const Model& m, const State& s, const Action& a) {
  for (const auto& asg : a.assigns) {
    std::uint16_t cur = s.v[(std::size_t)asg.feature];
    if (asg.value == cur) continue;
    const FeatureDecl& fd = m.schema.feature(asg.feature);
    if (fd.mutability == Mutability::immutable_)
      throw mutability_error("action moves immutable feature '" + fd.name + "'");
    if (fd.mutability == Mutability::monotone_nondecreasing && asg.value < cur)
      throw mutability_error("action decreases monotone feature '" + fd.name + "'");
  }
  return action_result(s, a);
}

} // namespace cfplan

#endif
