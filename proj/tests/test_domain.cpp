#include <catch2/catch_amalgamated.hpp>

#include "cfplan/domain.hpp"
#include "cfplan/load.hpp"

using namespace cfplan;

namespace {

std::string data_path(const std::string& rel) { return std::string(CFPLAN_DATA_DIR) + "/" + rel; }

Model load_corpus(const std::string& name) {
  return load_model(data_path(name + "/schema.cfs"), data_path(name + "/rules.cfr"));
}

// Concrete-value truth of a numeric literal, the reference for cell truth.
bool concrete_truth(const Literal& lit, const Rational& v) {
  bool t = lit.kind == AtomKind::feature_leq ? v <= lit.threshold : v > lit.threshold;
  return lit.negated ? !t : t;
}

} // namespace

TEST_CASE("capital_gain splits into three cells at its two thresholds") {
  Model m = load_corpus("adult");
  int f = m.schema.feature_index("capital_gain");
  REQUIRE(f >= 0);
  const auto& cells = m.dom.features[(std::size_t)f].cells;
  REQUIRE(cells.size() == 3);
  CHECK(cells[0] == Cell{Rational(0), Rational(5013), true});
  CHECK(cells[1] == Cell{Rational(5013), Rational(6849), false});
  CHECK(cells[2] == Cell{Rational(6849), Rational(99999), false});
}

TEST_CASE("credit_amount splits into three cells") {
  Model m = load_corpus("german");
  int f = m.schema.feature_index("credit_amount");
  const auto& cells = m.dom.features[(std::size_t)f].cells;
  REQUIRE(cells.size() == 3);
  CHECK(cells[0].lo == Rational(250));
  CHECK(cells[0].hi == Rational(428));
  CHECK(cells[1].hi == Rational(1345));
  CHECK(cells[2].hi == Rational(18424));
}

TEST_CASE("an unmentioned numeric feature keeps a single cell") {
  Schema s = parse_schema(
      "feature a numeric 0 10\n"
      "feature b numeric 0 10\n"
      "decision label undesired 'x'\n");
  RuleSet rs = parse_program("label(X,'x') :- a(X,N1), N1=<5.0.", s);
  AbstractDomain dom = cellify(s, rs);
  CHECK(dom.features[0].cells.size() == 2);
  CHECK(dom.features[1].cells.size() == 1);
  CHECK(dom.features[1].cells[0] == Cell{Rational(0), Rational(10), true});
}

TEST_CASE("a threshold at the domain minimum yields a point cell") {
  Schema s = parse_schema(
      "feature debt numeric 0 1000000\n"
      "decision label undesired 'x'\n");
  RuleSet rs = parse_program("label(X,'x') :- debt(X,N1), N1=<0.0.", s);
  AbstractDomain dom = cellify(s, rs);
  REQUIRE(dom.features[0].cells.size() == 2);
  CHECK(dom.features[0].cells[0] == Cell{Rational(0), Rational(0), true});
  CHECK(dom.features[0].cells[1] == Cell{Rational(0), Rational(1000000), false});
}

TEST_CASE("a threshold at the domain maximum closes the partition") {
  Schema s = parse_schema(
      "feature a numeric 0 10\n"
      "decision label undesired 'x'\n");
  RuleSet rs = parse_program("label(X,'x') :- a(X,N1), N1=<10.0.", s);
  AbstractDomain dom = cellify(s, rs);
  REQUIRE(dom.features[0].cells.size() == 1);
  CHECK(dom.features[0].cells[0] == Cell{Rational(0), Rational(10), true});
}

TEST_CASE("out-of-range thresholds are rejected") {
  Schema s = parse_schema(
      "feature a numeric 0 10\n"
      "decision label undesired 'x'\n");
  RuleSet rs = parse_program("label(X,'x') :- a(X,N1), N1=<11.0.", s);
  CHECK_THROWS_AS(cellify(s, rs), domain_error);
}

TEST_CASE("cells partition the domain: disjoint, ordered, covering") {
  Model m = load_corpus("adult");
  for (std::size_t f = 0; f < m.schema.size(); ++f) {
    const auto& fd = m.schema.features[f];
    if (!fd.numeric) continue;
    const auto& cells = m.dom.features[f].cells;
    CHECK(cells.front().lo == fd.min);
    CHECK(cells.front().lo_closed);
    CHECK(cells.back().hi == fd.max);
    for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
      CHECK(cells[c].hi == cells[c + 1].lo);
      CHECK_FALSE(cells[c + 1].lo_closed);
    }
  }
}

TEST_CASE("abstract_state maps concrete records to containing cells") {
  Model m = load_corpus("adult");
  Record rec = load_instance(data_path("adult/instance.csv"), m.schema);
  State s = abstract_state(rec, m.schema, m.dom);
  int cg = m.schema.feature_index("capital_gain");
  CHECK(s.v[(std::size_t)cg] == 1); // 6000 lands in (5013, 6849]
  int rel = m.schema.feature_index("relationship");
  CHECK(m.schema.feature(rel).values[s.v[(std::size_t)rel]] == "Unmarried");
}

TEST_CASE("a value exactly on a threshold lands in the lower cell") {
  Model m = load_corpus("adult");
  Record rec = load_instance(data_path("adult/instance.csv"), m.schema);
  int cg = m.schema.feature_index("capital_gain");
  rec[(std::size_t)cg].num = Rational(5013);
  State s = abstract_state(rec, m.schema, m.dom);
  CHECK(s.v[(std::size_t)cg] == 0);
  rec[(std::size_t)cg].num = Rational::parse("5013.5");
  CHECK(abstract_state(rec, m.schema, m.dom).v[(std::size_t)cg] == 1);
}

TEST_CASE("balance 40000 sits below the 60000 threshold") {
  Model m = load_corpus("example1");
  Record rec = load_instance(data_path("example1/instance.csv"), m.schema);
  State s = abstract_state(rec, m.schema, m.dom);
  int bal = m.schema.feature_index("bank_balance");
  CHECK(s.v[(std::size_t)bal] == 0);
  CHECK(m.dom.cell(bal, 0).hi == Rational(60000));
}

TEST_CASE("out-of-domain record values are rejected") {
  Model m = load_corpus("example1");
  Record rec = load_instance(data_path("example1/instance.csv"), m.schema);
  rec[0].num = Rational(120); // age domain is [1, 99]
  CHECK_THROWS_AS(abstract_state(rec, m.schema, m.dom), domain_error);
}

TEST_CASE("enumeration counts are products of per-feature sizes") {
  Schema s2 = parse_schema(
      "feature a categorical {'x', 'y'}\n"
      "feature b categorical {'u', 'v'}\n"
      "decision label undesired 'q'\n");
  AbstractDomain d2 = cellify(s2, RuleSet{});
  CHECK(all_states(d2).size() == 4);

  Model cars = load_corpus("cars");
  CHECK(cars.dom.state_count() == 3ull * 3 * 4 * 4);
  CHECK(all_states(cars.dom).size() == cars.dom.state_count());

  Schema s1 = parse_schema(
      "feature only categorical {'v'}\n"
      "decision label undesired 'q'\n");
  CHECK(all_states(cellify(s1, RuleSet{})).size() == 1);
}

TEST_CASE("enumeration is lexicographic in schema feature order") {
  Schema s = parse_schema(
      "feature a categorical {'x', 'y'}\n"
      "feature b categorical {'u', 'v'}\n"
      "decision label undesired 'q'\n");
  auto states = all_states(cellify(s, RuleSet{}));
  REQUIRE(states.size() == 4);
  CHECK(states[0].v == std::vector<std::uint16_t>{0, 0});
  CHECK(states[1].v == std::vector<std::uint16_t>{0, 1});
  CHECK(states[2].v == std::vector<std::uint16_t>{1, 0});
  CHECK(states[3].v == std::vector<std::uint16_t>{1, 1});
  std::vector<State> sorted = states;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == states);
}

TEST_CASE("literal-invariance: sampled concrete values agree across each cell") {
  for (const char* name : {"german", "adult", "example2"}) {
    INFO(name);
    Model m = load_corpus(name);
    for (const auto& rule : m.program.ruleset.rules) {
      for (const auto& lit : rule.body) {
        if (lit.kind != AtomKind::feature_leq && lit.kind != AtomKind::feature_gt) continue;
        int f = m.schema.feature_index(lit.subject);
        for (const Cell& cell : m.dom.features[(std::size_t)f].cells) {
          // Ten interior points plus the closed upper bound.
          std::vector<Rational> samples{cell.hi};
          for (int i = 1; i <= 10; ++i)
            samples.push_back(cell.lo + (cell.hi - cell.lo) * Rational(i, 11));
          bool expect = concrete_truth(lit, cell.hi);
          for (const Rational& v : samples) {
            if (!cell.contains(v)) continue; // lo of an open point-free sample
            CHECK(concrete_truth(lit, v) == expect);
          }
        }
      }
    }
  }
}

TEST_CASE("abstraction is idempotent on cell representatives") {
  Model m = load_corpus("german");
  Record rec = load_instance(data_path("german/instance.csv"), m.schema);
  for (std::size_t f = 0; f < m.schema.size(); ++f) {
    if (!m.schema.features[f].numeric) continue;
    const auto& cells = m.dom.features[f].cells;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      Record probe = rec;
      probe[f].num = cells[c].hi; // the closed upper bound lies inside its cell
      CHECK(abstract_state(probe, m.schema, m.dom).v[f] == c);
    }
  }
}

TEST_CASE("value rendering distinguishes intervals, points and symbols") {
  Model m = load_corpus("example2");
  int debt = m.schema.feature_index("debt");
  int credit = m.schema.feature_index("credit_score");
  CHECK(render_value(m.schema, m.dom, debt, 0) == "= 0");
  CHECK(render_value(m.schema, m.dom, debt, 1) == "> 0 and =< 1000000");
  CHECK(render_value(m.schema, m.dom, credit, 0) == ">= 300 and =< 599");
  Model cars = load_corpus("cars");
  int maint = cars.schema.feature_index("maint");
  CHECK(render_value(cars.schema, cars.dom, maint, 3) == "low");
}
