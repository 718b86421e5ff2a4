#ifndef CFPLAN_PLANNER_HPP
#define CFPLAN_PLANNER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cfplan/actions.hpp"
#include "cfplan/eval.hpp"
#include "cfplan/model.hpp"

namespace cfplan {

/// A counterfactual generation problem: immutable model + action set, the
/// (causally consistent) initial state, and search limits.
struct CFGProblem {
  const Model* model = nullptr;
  ActionSet actions;
  State initial;
  std::optional<std::size_t> max_path_len; // bound on consistent states in the trail
  std::uint64_t step_limit = 50'000'000;   // termination guard on selection events
};

/// One stop on the search trail: a state plus the actions already attempted
/// from it. The tried list survives backtracking pops, so re-entering an
/// entry resumes where it left off.
struct TrailEntry {
  State state;
  std::vector<std::size_t> tried; // indices into the problem's ActionSet
};

struct Trail {
  std::vector<TrailEntry> entries;

  bool contains(const State& s) const {
    for (const auto& e : entries)
      if (e.state == s) return true;
    return false;
  }
  bool empty() const { return entries.empty(); }
  TrailEntry pop() {
    TrailEntry e = std::move(entries.back());
    entries.pop_back();
    return e;
  }
};

enum class FailureReason { exhausted, length_cap, step_limit };

struct SearchStats {
  std::uint64_t selection_events = 0;
  std::size_t deepest_trail = 0;
  bool length_cap_bound = false; // a length-capped selection had live candidates
};

struct Failure {
  FailureReason reason = FailureReason::exhausted;
  std::string detail;
  SearchStats stats;
};

/// The consistent states the search traversed, with the action sequence that
/// bridged each consecutive pair (inconsistent intermediates removed).
struct CandidatePath {
  std::vector<State> states;
  std::vector<std::vector<Action>> transitions; // size = states.size() - 1
  SearchStats stats;
};

using SearchResult = std::variant<CandidatePath, Failure>;

inline bool succeeded(const SearchResult& r) { return std::holds_alternative<CandidatePath>(r); }

/// The search engine: one mutable trail plus the update / make_consistent /
/// intervene primitives find_path is assembled from. Exposed so the pieces
/// can be exercised in isolation; not shareable across threads mid-search.
struct Search {
  const Model& m;
  const ActionSet& acts;
  std::optional<std::size_t> max_len;
  std::uint64_t step_limit;
  Trail trail;
  SearchStats stats;
  bool hit_step_limit = false;

  Search(const CFGProblem& p) : m(*p.model), acts(p.actions), max_len(p.max_path_len),
                                step_limit(p.step_limit) {}

  std::size_t consistent_count() const {
    std::size_t n = 0;
    for (const auto& e : trail.entries)
      if (is_causally_consistent(m, e.state)) ++n;
    return n;
  }

  void note_depth() { stats.deepest_trail = std::max(stats.deepest_trail, trail.entries.size()); }

  // First untried action (causal before direct by construction of the
  // ActionSet) whose successor differs from the current state and revisits
  // nothing on the trail. `headroom` is how many consistent states a
  // successful extension would add.
  std::optional<std::size_t> select(const State& s, const std::vector<std::size_t>& tried,
                                    std::size_t headroom) {
    if (++stats.selection_events > step_limit) {
      hit_step_limit = true;
      return std::nullopt;
    }
    bool capped = max_len && consistent_count() + headroom > *max_len;
    for (std::size_t i = 0; i < acts.size(); ++i) {
      bool was_tried = false;
      for (std::size_t t : tried)
        if (t == i) { was_tried = true; break; }
      if (was_tried) continue;
      if (!applicable(m, s, acts[i])) continue;
      State ns = action_result(s, acts[i]);
      if (ns == s || trail.contains(ns)) continue;
      if (capped) {
        stats.length_cap_bound = true; // a candidate existed; the cap blocked it
        return std::nullopt;
      }
      return i;
    }
    return std::nullopt;
  }

  // Records the planned action and moves to its result: the old state keeps
  // its extended tried list on the trail, the new state starts fresh.
  std::pair<State, std::vector<std::size_t>> update(State s, std::vector<std::size_t> tried,
                                                    std::size_t a) {
    tried.push_back(a);
    State ns = apply_action(m, s, acts[a]);
    trail.entries.push_back({std::move(s), std::move(tried)});
    note_depth();
    return {std::move(ns), {}};
  }

  // Drives the current state to causal consistency, preferring causal
  // actions, falling back to direct ones, backtracking when neither applies.
  // Returns the consistent (state, tried) pair, or nothing on exhaustion.
  std::optional<std::pair<State, std::vector<std::size_t>>>
  make_consistent(State s, std::vector<std::size_t> tried) {
    while (!is_causally_consistent(m, s)) {
      auto pick = select(s, tried, 1);
      if (hit_step_limit) return std::nullopt;
      if (pick) {
        std::tie(s, tried) = update(std::move(s), std::move(tried), *pick);
      } else {
        if (trail.empty()) return std::nullopt;
        TrailEntry e = trail.pop();
        s = std::move(e.state);
        tried = std::move(e.tried);
      }
    }
    return std::make_pair(std::move(s), std::move(tried));
  }

  // One transition: pick an unexplored action from the current state (or
  // backtrack), then close over causal consistency and push the result.
  bool intervene() {
    if (trail.empty()) return false;
    TrailEntry cur = trail.pop();
    auto pick = select(cur.state, cur.tried, 2);
    if (hit_step_limit) return false;
    State s;
    std::vector<std::size_t> tried;
    if (pick) {
      std::tie(s, tried) = update(std::move(cur.state), std::move(cur.tried), *pick);
    } else {
      if (trail.empty()) return false;
      TrailEntry prev = trail.pop();
      s = std::move(prev.state);
      tried = std::move(prev.tried);
    }
    auto mc = make_consistent(std::move(s), std::move(tried));
    if (!mc) return false;
    trail.entries.push_back({std::move(mc->first), std::move(mc->second)});
    note_depth();
    return true;
  }
};

/// Removes causally inconsistent entries from a trail, keeping order, and
/// annotates each surviving transition with the actions that bridged it
/// (the last tried action of every trail entry in between).
inline CandidatePath drop_inconsistent(const Model& m, const ActionSet& acts, const Trail& trail) {
  CandidatePath path;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < trail.entries.size(); ++i)
    if (is_causally_consistent(m, trail.entries[i].state)) kept.push_back(i);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    path.states.push_back(trail.entries[kept[k]].state);
    if (k + 1 < kept.size()) {
      std::vector<Action> bridge;
      for (std::size_t i = kept[k]; i < kept[k + 1]; ++i)
        bridge.push_back(acts[trail.entries[i].tried.back()]);
      path.transitions.push_back(std::move(bridge));
    }
  }
  return path;
}

/// The search loop: intervene until the newest trail state is a
/// counterfactual, then drop inconsistent intermediates. Throws
/// std::invalid_argument if the initial state is not causally consistent.
inline SearchResult find_path(const CFGProblem& problem) {
  const Model& m = *problem.model;
  if (!is_causally_consistent(m, problem.initial))
    throw std::invalid_argument("initial state is causally inconsistent");

  Search search(problem);
  search.trail.entries.push_back({problem.initial, {}});
  search.note_depth();

  while (!is_counterfactual(m, search.trail.entries.back().state)) {
    if (!search.intervene()) {
      Failure f;
      f.stats = search.stats;
      if (search.hit_step_limit) {
        f.reason = FailureReason::step_limit;
        f.detail = "termination guard tripped after " +
                   std::to_string(search.stats.selection_events) + " selection events";
      } else if (search.stats.length_cap_bound) {
        f.reason = FailureReason::length_cap;
        f.detail = "no path within " + std::to_string(*problem.max_path_len) +
                   " consistent states";
      } else {
        f.reason = FailureReason::exhausted;
        f.detail = "search space exhausted";
      }
      return f;
    }
  }
  CandidatePath path = drop_inconsistent(m, problem.actions, search.trail);
  path.stats = search.stats;
  return path;
}

/// Iterative deepening on the consistent-state count: returns the first
/// success over bounds 1, 2, ... up to `cap` (or the problem's own bound).
inline SearchResult find_minimal_path(CFGProblem problem, std::size_t cap = 10) {
  if (problem.max_path_len) cap = *problem.max_path_len;
  SearchStats accumulated;
  for (std::size_t bound = 1; bound <= cap; ++bound) {
    problem.max_path_len = bound;
    SearchResult r = find_path(problem);
    if (auto* path = std::get_if<CandidatePath>(&r)) {
      path->stats.selection_events += accumulated.selection_events;
      path->stats.deepest_trail = std::max(path->stats.deepest_trail, accumulated.deepest_trail);
      return r;
    }
    const Failure& f = std::get<Failure>(r);
    accumulated.selection_events += f.stats.selection_events;
    accumulated.deepest_trail = std::max(accumulated.deepest_trail, f.stats.deepest_trail);
    if (f.reason == FailureReason::step_limit) return r;
    if (f.reason == FailureReason::exhausted && !f.stats.length_cap_bound && bound > 1) {
      // The cap never bit at this bound; raising it cannot help.
      Failure out = f;
      out.stats = accumulated;
      out.detail = "search space exhausted (no goal reachable)";
      return out;
    }
  }
  Failure f;
  f.reason = FailureReason::length_cap;
  f.stats = accumulated;
  f.detail = "no path within " + std::to_string(cap) + " consistent states";
  return f;
}

} // namespace cfplan

#endif
