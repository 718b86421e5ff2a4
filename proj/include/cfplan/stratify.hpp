#ifndef CFPLAN_STRATIFY_HPP
#define CFPLAN_STRATIFY_HPP

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfplan/rules.hpp"

namespace cfplan {

class stratification_error : public std::runtime_error {
public:
  explicit stratification_error(const std::string& what) : std::runtime_error(what) {}
};

/// A RuleSet together with a stratum assignment for every defined predicate.
/// Predicates a rule depends on through NAF sit in strictly lower strata.
struct StratifiedProgram {
  RuleSet ruleset;
  std::vector<std::vector<std::string>> strata; // ordered low to high
  std::map<std::string, int> stratum_of;

  int stratum(const std::string& pred) const {
    auto it = stratum_of.find(pred);
    return it == stratum_of.end() ? -1 : it->second;
  }
};

/// Builds the NAF dependency graph over defined predicates and layers it.
/// Feature tests in bodies read the state directly and induce no dependency;
/// only `defined` atoms (e.g. ab1) do. Throws stratification_error with the
/// offending cycle if some predicate depends on itself through NAF.
inline StratifiedProgram validate_stratification(RuleSet ruleset) {
  std::vector<std::string> preds;
  auto pred_id = [&](const std::string& name) {
    for (std::size_t i = 0; i < preds.size(); ++i)
      if (preds[i] == name) return (int)i;
    preds.push_back(name);
    return (int)preds.size() - 1;
  };
  for (const auto& r : ruleset.rules) pred_id(r.head_pred);

  const int n = (int)preds.size();
  std::vector<std::set<int>> dep(n), naf_dep(n);
  for (const auto& r : ruleset.rules) {
    int h = pred_id(r.head_pred);
    for (const auto& lit : r.body) {
      if (lit.kind != AtomKind::defined) continue;
      int b = pred_id(lit.subject);
      dep[(std::size_t)h].insert(b);
      if (lit.negated) naf_dep[(std::size_t)h].insert(b);
    }
  }

  // Tarjan SCC over the full dependency graph.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0, ncomp = 0;
  std::vector<std::vector<int>> comp_members;

  std::vector<std::pair<int, std::set<int>::const_iterator>> work;
  for (int s = 0; s < n; ++s) {
    if (index[(std::size_t)s] >= 0) continue;
    work.emplace_back(s, dep[(std::size_t)s].begin());
    index[(std::size_t)s] = low[(std::size_t)s] = next_index++;
    stack.push_back(s);
    on_stack[(std::size_t)s] = true;
    while (!work.empty()) {
      auto& [v, it] = work.back();
      if (it != dep[(std::size_t)v].end()) {
        int w = *it++;
        if (index[(std::size_t)w] < 0) {
          index[(std::size_t)w] = low[(std::size_t)w] = next_index++;
          stack.push_back(w);
          on_stack[(std::size_t)w] = true;
          work.emplace_back(w, dep[(std::size_t)w].begin());
        } else if (on_stack[(std::size_t)w]) {
          low[(std::size_t)v] = std::min(low[(std::size_t)v], index[(std::size_t)w]);
        }
      } else {
        if (low[(std::size_t)v] == index[(std::size_t)v]) {
          comp_members.emplace_back();
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[(std::size_t)w] = false;
            comp[(std::size_t)w] = ncomp;
            comp_members.back().push_back(w);
          } while (w != v);
          ++ncomp;
        }
        int done = v;
        work.pop_back();
        if (!work.empty())
          low[(std::size_t)work.back().first] =
              std::min(low[(std::size_t)work.back().first], low[(std::size_t)done]);
      }
    }
  }

  // A NAF edge inside one component is a cycle through negation.
  for (int v = 0; v < n; ++v) {
    for (int w : naf_dep[(std::size_t)v]) {
      if (comp[(std::size_t)v] == comp[(std::size_t)w]) {
        std::string cycle;
        for (int m : comp_members[(std::size_t)comp[(std::size_t)v]]) {
          if (!cycle.empty()) cycle += " -> ";
          cycle += preds[(std::size_t)m];
        }
        throw stratification_error("cyclic negation dependency through: " + cycle);
      }
    }
  }

  // Layer the condensation: NAF edges force a strictly higher stratum.
  std::vector<int> level(ncomp, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      int cv = comp[(std::size_t)v];
      for (int w : dep[(std::size_t)v]) {
        int cw = comp[(std::size_t)w];
        if (cv == cw) continue;
        int need = level[(std::size_t)cw] + (naf_dep[(std::size_t)v].count(w) ? 1 : 0);
        if (level[(std::size_t)cv] < need) {
          level[(std::size_t)cv] = need;
          changed = true;
        }
      }
    }
  }

  StratifiedProgram sp;
  sp.ruleset = std::move(ruleset);
  int max_level = 0;
  for (int c = 0; c < ncomp; ++c) max_level = std::max(max_level, level[(std::size_t)c]);
  sp.strata.assign((std::size_t)max_level + 1, {});
  for (int v = 0; v < n; ++v) {
    int l = level[(std::size_t)comp[(std::size_t)v]];
    sp.strata[(std::size_t)l].push_back(preds[(std::size_t)v]);
    sp.stratum_of[preds[(std::size_t)v]] = l;
  }
  for (auto& layer : sp.strata) std::sort(layer.begin(), layer.end());
  return sp;
}

} // namespace cfplan

#endif
