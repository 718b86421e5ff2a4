#ifndef CFPLAN_DOMAIN_HPP
#define CFPLAN_DOMAIN_HPP

#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfplan/rational.hpp"
#include "cfplan/rules.hpp"
#include "cfplan/schema.hpp"

namespace cfplan {

class domain_error : public std::runtime_error {
public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

/// One cell of a partitioned numeric domain. Values covered:
/// lo_closed ? [lo, hi] : (lo, hi]. Upper bounds are always closed, matching
/// the `=<` comparison the rule language uses.
struct Cell {
  Rational lo, hi;
  bool lo_closed = false;

  bool contains(const Rational& v) const {
    if (v > hi) return false;
    return lo_closed ? v >= lo : v > lo;
  }
  friend bool operator==(const Cell& a, const Cell& b) {
    return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed;
  }
};

/// Finite abstraction of one feature: its categorical value count, or the
/// ordered cells its numeric range splits into at the program's thresholds.
struct FeatureCells {
  bool numeric = false;
  std::size_t count = 0;     // number of abstract values
  std::vector<Cell> cells;   // numeric only
};

struct AbstractDomain {
  std::vector<FeatureCells> features;

  std::size_t value_count(int f) const { return features[(std::size_t)f].count; }
  const Cell& cell(int f, std::uint16_t idx) const {
    return features[(std::size_t)f].cells[idx];
  }
  /// Total number of abstract states (product of per-feature counts).
  std::uint64_t state_count() const {
    std::uint64_t n = 1;
    for (const auto& fc : features) n *= fc.count;
    return n;
  }
};

/// A total assignment of abstract values, indexed by schema feature order.
/// Categorical features store the declared-value index, numeric ones the
/// cell index.
struct State {
  std::vector<std::uint16_t> v;

  friend bool operator==(const State& a, const State& b) { return a.v == b.v; }
  friend bool operator!=(const State& a, const State& b) { return !(a == b); }
  friend bool operator<(const State& a, const State& b) { return a.v < b.v; }
};

struct StateHash {
  std::size_t operator()(const State& s) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint16_t x : s.v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return (std::size_t)h;
  }
};

/// Partitions every numeric feature at the thresholds the program mentions
/// for it, so that all concrete values in one cell satisfy exactly the same
/// program literals. Categorical features pass through.
inline AbstractDomain cellify(const Schema& schema, const RuleSet& rules) {
  std::vector<std::set<Rational, std::less<Rational>>> thresholds(schema.size());
  auto add_threshold = [&](const std::string& feature, const Rational& t) {
    int f = schema.feature_index(feature);
    if (f < 0) return;
    const FeatureDecl& fd = schema.feature(f);
    if (t < fd.min || t > fd.max)
      throw domain_error("threshold " + t.str() + " outside declared domain of '" + feature + "'");
    thresholds[(std::size_t)f].insert(t);
  };
  for (const auto& r : rules.rules)
    for (const auto& lit : r.body)
      if (lit.kind == AtomKind::feature_leq || lit.kind == AtomKind::feature_gt)
        add_threshold(lit.subject, lit.threshold);

  AbstractDomain dom;
  dom.features.resize(schema.size());
  for (std::size_t f = 0; f < schema.size(); ++f) {
    const FeatureDecl& fd = schema.features[f];
    FeatureCells& fc = dom.features[f];
    if (!fd.numeric) {
      fc.count = fd.values.size();
      continue;
    }
    fc.numeric = true;
    Rational lo = fd.min;
    bool lo_closed = true;
    for (const Rational& t : thresholds[f]) {
      fc.cells.push_back({lo, t, lo_closed});
      lo = t;
      lo_closed = false;
      if (t == fd.max) break; // a threshold at max closes the partition
    }
    if (fc.cells.empty() || fc.cells.back().hi < fd.max)
      fc.cells.push_back({lo, fd.max, lo_closed});
    fc.count = fc.cells.size();
  }
  return dom;
}

/// One concrete feature value from an instance record.
struct ConcreteValue {
  bool numeric = false;
  Rational num;
  std::string sym;
};

using Record = std::vector<ConcreteValue>; // indexed by schema feature order

/// Maps a concrete record into abstract space. A value sitting exactly on a
/// threshold lands in the lower cell (closed upper bounds).
inline State abstract_state(const Record& record, const Schema& schema, const AbstractDomain& dom) {
  if (record.size() != schema.size())
    throw domain_error("record arity does not match schema");
  State s;
  s.v.resize(schema.size());
  for (std::size_t f = 0; f < schema.size(); ++f) {
    const FeatureDecl& fd = schema.features[f];
    const ConcreteValue& cv = record[f];
    if (fd.numeric) {
      if (!cv.numeric)
        throw domain_error("feature '" + fd.name + "' expects a numeric value");
      bool found = false;
      for (std::size_t c = 0; c < dom.features[f].cells.size(); ++c) {
        if (dom.features[f].cells[c].contains(cv.num)) {
          s.v[f] = (std::uint16_t)c;
          found = true;
          break;
        }
      }
      if (!found)
        throw domain_error("value " + cv.num.str() + " outside declared domain of '" + fd.name + "'");
    } else {
      if (cv.numeric)
        throw domain_error("feature '" + fd.name + "' expects a categorical value");
      int idx = fd.value_index(cv.sym);
      if (idx < 0)
        throw domain_error("value '" + cv.sym + "' not declared for feature '" + fd.name + "'");
      s.v[f] = (std::uint16_t)idx;
    }
  }
  return s;
}

/// Visits every abstract state exactly once, lexicographically in schema
/// feature order (first feature most significant). The callback may return
/// false to stop early.
inline void enumerate_states(const AbstractDomain& dom,
                             const std::function<bool(const State&)>& visit) {
  State s;
  s.v.assign(dom.features.size(), 0);
  if (dom.features.empty()) return;
  for (;;) {
    if (!visit(s)) return;
    std::size_t f = dom.features.size();
    while (f > 0) {
      --f;
      if (s.v[f] + 1u < dom.features[f].count) {
        ++s.v[f];
        break;
      }
      s.v[f] = 0;
      if (f == 0) return;
    }
  }
}

inline std::vector<State> all_states(const AbstractDomain& dom) {
  std::vector<State> out;
  out.reserve((std::size_t)dom.state_count());
  enumerate_states(dom, [&](const State& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

/// Human rendering of one abstract value: the symbol for categoricals, an
/// interval description for numeric cells.
inline std::string render_value(const Schema& schema, const AbstractDomain& dom, int f,
                                std::uint16_t idx) {
  const FeatureDecl& fd = schema.feature(f);
  if (!fd.numeric) return fd.values[idx];
  const Cell& c = dom.cell(f, idx);
  if (c.lo_closed && c.lo == c.hi) return "= " + c.lo.str();
  std::string lo = (c.lo_closed ? ">= " : "> ") + c.lo.str();
  return lo + " and =< " + c.hi.str();
}

} // namespace cfplan

#endif
