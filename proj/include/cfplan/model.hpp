#ifndef CFPLAN_MODEL_HPP
#define CFPLAN_MODEL_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cfplan/domain.hpp"
#include "cfplan/rules.hpp"
#include "cfplan/schema.hpp"
#include "cfplan/stratify.hpp"

namespace cfplan {

/// Raised when a literal cannot be decided on a cell. With a correctly
/// cellified domain this never happens; it signals an abstraction bug.
class undecidable_literal : public std::logic_error {
public:
  explicit undecidable_literal(const std::string& what) : std::logic_error(what) {}
};

class model_error : public std::runtime_error {
public:
  explicit model_error(const std::string& what) : std::runtime_error(what) {}
};

namespace compiled {

struct Lit {
  AtomKind kind;
  bool negated;
  int feature;           // feature_eq / leq / gt
  std::uint16_t value;   // feature_eq: declared-value index
  Rational threshold;    // leq / gt
  int pred;              // defined: predicate table index
  int pred_value;        // defined: per-predicate value index
};

struct CRule {
  RuleClass cls;
  int pred;                    // predicate table index of the head
  int pred_value;              // per-predicate head value index
  int head_feature;            // causal rules: schema feature index, else -1
  std::uint16_t head_abstract; // causal rules: value/cell index the head denotes
  int stratum;
  std::vector<Lit> body;
  std::size_t source_index;    // position in the parsed RuleSet
};

} // namespace compiled

/// Parsed program + schema compiled against the cellified domain: the one
/// immutable artifact every evaluation, enumeration and search runs over.
struct Model {
  Schema schema;
  StratifiedProgram program;
  AbstractDomain dom;

  std::vector<std::string> pred_names;
  std::vector<std::vector<std::string>> pred_values; // per predicate
  std::vector<compiled::CRule> rules;                // source order
  int strata_count = 1;

  std::vector<char> governed;                        // per feature
  std::vector<std::set<std::uint16_t>> head_values;  // per feature: causal head values
  std::vector<std::string> warnings;

  int pred_index(const std::string& name) const {
    for (std::size_t i = 0; i < pred_names.size(); ++i)
      if (pred_names[i] == name) return (int)i;
    return -1;
  }
};

namespace detail {

inline std::uint16_t head_abstract_value(const Schema& schema, const AbstractDomain& dom, int f,
                                         const std::string& symbol) {
  const FeatureDecl& fd = schema.feature(f);
  if (!fd.numeric) {
    int idx = fd.value_index(symbol);
    if (idx < 0)
      throw model_error("value '" + symbol + "' not declared for feature '" + fd.name + "'");
    return (std::uint16_t)idx;
  }
  Rational v = Rational::parse(symbol);
  for (std::size_t c = 0; c < dom.features[(std::size_t)f].cells.size(); ++c)
    if (dom.features[(std::size_t)f].cells[c].contains(v)) return (std::uint16_t)c;
  throw model_error("head value " + v.str() + " outside domain of '" + fd.name + "'");
}

// Warns about causal definitions that overlap (two head values derivable at
// once) or leave no legal value for some assignment of the cause features.
// Only feature-test bodies are analyzed; defined atoms in causal bodies are
// rare enough to skip.
inline void scan_causal_coverage(Model& m) {
  for (std::size_t f = 0; f < m.schema.size(); ++f) {
    if (!m.governed[f]) continue;
    std::vector<const compiled::CRule*> defs;
    std::set<int> causes;
    bool analyzable = true;
    for (const auto& r : m.rules) {
      if (r.cls != RuleClass::causal || r.head_feature != (int)f) continue;
      defs.push_back(&r);
      for (const auto& lit : r.body) {
        if (lit.kind == AtomKind::defined) { analyzable = false; break; }
        causes.insert(lit.feature);
      }
    }
    if (!analyzable || defs.empty()) continue;
    std::vector<int> cause_list(causes.begin(), causes.end());
    std::uint64_t combos = 1;
    for (int c : cause_list) combos *= m.dom.value_count(c);
    if (combos > 65536) continue;

    const bool full_cover = m.head_values[f].size() == m.dom.value_count((int)f);
    std::vector<std::uint16_t> asg(cause_list.size(), 0);
    bool overlap = false, gap = false;
    for (std::uint64_t i = 0; i < combos; ++i) {
      std::set<std::uint16_t> derived;
      for (const auto* r : defs) {
        bool fires = true;
        for (const auto& lit : r->body) {
          std::uint16_t sv = 0;
          for (std::size_t k = 0; k < cause_list.size(); ++k)
            if (cause_list[k] == lit.feature) sv = asg[k];
          bool truth = false;
          if (lit.kind == AtomKind::feature_eq) {
            truth = sv == lit.value;
            if (lit.negated) truth = !truth;
          } else {
            const Cell& cell = m.dom.cell(lit.feature, sv);
            if (lit.kind == AtomKind::feature_leq)
              truth = cell.hi <= lit.threshold;
            else
              truth = cell.lo_closed ? cell.lo > lit.threshold : cell.lo >= lit.threshold;
          }
          if (!truth) { fires = false; break; }
        }
        if (fires) derived.insert(r->head_abstract);
      }
      if (derived.size() > 1) overlap = true;
      if (derived.empty() && full_cover) gap = true;
      for (std::size_t k = cause_list.size(); k-- > 0;) {
        if (++asg[k] < m.dom.value_count(cause_list[k])) break;
        asg[k] = 0;
      }
    }
    if (overlap)
      m.warnings.push_back("causal definitions of '" + m.schema.feature((int)f).name +
                           "' overlap: some cause assignment derives more than one value");
    if (gap)
      m.warnings.push_back("causal definitions of '" + m.schema.feature((int)f).name +
                           "' leave a coverage gap: some cause assignment admits no value");
  }
}

} // namespace detail

/// Validates, stratifies, cellifies and index-compiles a parsed program.
inline Model compile(Schema schema, RuleSet ruleset) {
  Model m;
  m.program = validate_stratification(std::move(ruleset));
  m.dom = cellify(schema, m.program.ruleset);
  m.schema = std::move(schema);

  auto pred_id = [&](const std::string& name) {
    int i = m.pred_index(name);
    if (i >= 0) return i;
    m.pred_names.push_back(name);
    m.pred_values.emplace_back();
    return (int)m.pred_names.size() - 1;
  };
  auto pred_value_id = [&](int pred, const std::string& value) {
    auto& vals = m.pred_values[(std::size_t)pred];
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (vals[i] == value) return (int)i;
    vals.push_back(value);
    return (int)vals.size() - 1;
  };

  m.governed.assign(m.schema.size(), 0);
  m.head_values.assign(m.schema.size(), {});

  for (std::size_t ri = 0; ri < m.program.ruleset.rules.size(); ++ri) {
    const Rule& r = m.program.ruleset.rules[ri];
    compiled::CRule cr;
    cr.cls = r.cls;
    cr.source_index = ri;
    cr.pred = pred_id(r.head_pred);
    cr.pred_value = pred_value_id(cr.pred, r.head_value);
    cr.head_feature = -1;
    cr.head_abstract = 0;
    cr.stratum = m.program.stratum(r.head_pred);
    if (r.cls == RuleClass::causal) {
      cr.head_feature = m.schema.feature_index(r.head_pred);
      cr.head_abstract =
          detail::head_abstract_value(m.schema, m.dom, cr.head_feature, r.head_value);
      m.governed[(std::size_t)cr.head_feature] = 1;
      m.head_values[(std::size_t)cr.head_feature].insert(cr.head_abstract);
    }
    for (const Literal& lit : r.body) {
      compiled::Lit cl;
      cl.kind = lit.kind;
      cl.negated = lit.negated;
      cl.feature = -1;
      cl.value = 0;
      cl.pred = -1;
      cl.pred_value = -1;
      cl.threshold = lit.threshold;
      if (lit.kind == AtomKind::defined) {
        cl.pred = pred_id(lit.subject);
        cl.pred_value = pred_value_id(cl.pred, lit.value);
      } else {
        cl.feature = m.schema.feature_index(lit.subject);
        if (lit.kind == AtomKind::feature_eq) {
          int idx = m.schema.feature(cl.feature).value_index(lit.value);
          if (idx < 0)
            throw model_error("value '" + lit.value + "' not declared for feature '" +
                              lit.subject + "'");
          cl.value = (std::uint16_t)idx;
        }
      }
      cr.body.push_back(std::move(cl));
    }
    m.rules.push_back(std::move(cr));
  }
  m.strata_count = (int)m.program.strata.size();
  detail::scan_causal_coverage(m);
  return m;
}

} // namespace cfplan

#endif
