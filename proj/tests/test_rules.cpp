#include <catch2/catch_amalgamated.hpp>

#include "cfplan/load.hpp"
#include "cfplan/rules.hpp"
#include "cfplan/stratify.hpp"

using namespace cfplan;

namespace {

Schema cars_schema() {
  return parse_schema(
      "feature persons categorical {'2', '4', 'more'}\n"
      "feature safety categorical {'low', 'med', 'high'}\n"
      "feature buying categorical {'vhigh', 'high', 'med', 'low'}\n"
      "feature maint categorical {'vhigh', 'high', 'med', 'low'}\n"
      "decision label undesired 'negative'\n");
}

Schema german_mini_schema() {
  return parse_schema(
      "feature property categorical {'real estate', 'car or other'}\n"
      "feature credit_amount numeric 250 18424\n"
      "decision label undesired 'good'\n");
}

std::string data_path(const std::string& rel) { return std::string(CFPLAN_DATA_DIR) + "/" + rel; }

} // namespace

TEST_CASE("single categorical decision rule") {
  RuleSet rs = parse_program("label(X,'negative') :- persons(X,'2').", cars_schema());
  REQUIRE(rs.rules.size() == 1);
  const Rule& r = rs.rules[0];
  CHECK(r.cls == RuleClass::decision);
  CHECK(r.head_value == "negative");
  REQUIRE(r.body.size() == 1);
  CHECK(r.body[0].kind == AtomKind::feature_eq);
  CHECK(r.body[0].subject == "persons");
  CHECK(r.body[0].value == "2");
  CHECK_FALSE(r.body[0].negated);
}

TEST_CASE("numeric binder pairs fuse into leq literals") {
  RuleSet rs = parse_program(
      "ab1(X,'True') :- property(X,'car or other'), credit_amount(X,N2), N2=<1345.0.",
      german_mini_schema());
  REQUIRE(rs.rules.size() == 1);
  const Rule& r = rs.rules[0];
  CHECK(r.cls == RuleClass::auxiliary);
  REQUIRE(r.body.size() == 2);
  CHECK(r.body[0].kind == AtomKind::feature_eq);
  CHECK(r.body[1].kind == AtomKind::feature_leq);
  CHECK(r.body[1].subject == "credit_amount");
  CHECK(r.body[1].threshold == Rational(1345));
}

TEST_CASE("negated comparison fuses into gt") {
  RuleSet rs = parse_program(
      "label(X,'good') :- credit_amount(X,N2), not(N2=<428.0).", german_mini_schema());
  REQUIRE(rs.rules[0].body.size() == 1);
  CHECK(rs.rules[0].body[0].kind == AtomKind::feature_gt);
  CHECK(rs.rules[0].body[0].threshold == Rational(428));
}

TEST_CASE("backquote values parse like plain quotes") {
  RuleSet a = parse_program("label(X,`negative') :- persons(X,`2').", cars_schema());
  RuleSet b = parse_program("label(X,'negative') :- persons(X,'2').", cars_schema());
  CHECK(a == b);
}

TEST_CASE("empty input gives an empty ruleset") {
  RuleSet rs = parse_program("", cars_schema());
  CHECK(rs.rules.empty());
  RuleSet rs2 = parse_program("% only a comment\n", cars_schema());
  CHECK(rs2.rules.empty());
}

TEST_CASE("parse errors carry position and cause") {
  Schema s = cars_schema();
  CHECK_THROWS_AS(parse_program("label(X,'negative') :- unknown(X,'2').", s), parse_error);
  CHECK_THROWS_AS(parse_program("label(X,'negative') :- persons(X,N1), N1=<2.0.", s),
                  parse_error); // comparison on categorical feature
  CHECK_THROWS_AS(parse_program("label(X,'negative') :- persons(X,'2')", s),
                  parse_error); // missing dot
  CHECK_THROWS_AS(parse_program("label(X,'negative') :- safety(X,'none').", s),
                  parse_error); // undeclared value
  CHECK_THROWS_AS(parse_program("label(Y,'negative').", s), parse_error); // subject must be X
  CHECK_THROWS_AS(parse_program("label(X,'negative') :- persons(X,N1).", s),
                  parse_error); // dangling numeric binder
  try {
    parse_program("label(X,'negative') :-\n  nonsense(X,'2').", s);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 2);
    CHECK(e.col == 3);
    CHECK(std::string(e.what()).find("unknown feature or predicate") != std::string::npos);
  }
}

TEST_CASE("equality test on a numeric feature is rejected") {
  CHECK_THROWS_AS(
      parse_program("label(X,'good') :- credit_amount(X,'500').", german_mini_schema()),
      parse_error);
}

TEST_CASE("fact rules have empty bodies") {
  RuleSet rs = parse_program("label(X,'negative').", cars_schema());
  REQUIRE(rs.rules.size() == 1);
  CHECK(rs.rules[0].body.empty());
}

TEST_CASE("defined body predicates must head some rule") {
  Schema s = german_mini_schema();
  CHECK_THROWS_AS(parse_program("label(X,'good') :- not ab1(X,'True').", s), parse_error);
  RuleSet ok = parse_program(
      "label(X,'good') :- not ab1(X,'True').\n"
      "ab1(X,'True') :- property(X,'car or other').",
      s);
  CHECK(ok.rules[0].body[0].kind == AtomKind::defined);
}

TEST_CASE("print and reparse is structurally identical") {
  std::string src =
      "label(X,'good') :- not property(X,'real estate'), credit_amount(X,N1), N1=<428.0, "
      "not ab1(X,'True').\n"
      "ab1(X,'True') :- property(X,'car or other'), credit_amount(X,N2), not(N2=<1345.0).\n";
  Schema s = german_mini_schema();
  RuleSet rs = parse_program(src, s);
  RuleSet rs2 = parse_program(print_program(rs), s);
  CHECK(rs == rs2);
}

TEST_CASE("corpus rule counts match the bundled listings") {
  struct Case {
    const char* dir;
    std::size_t decision, causal, aux;
  } cases[] = {
      {"german", 2, 2, 1},
      {"adult", 2, 6, 0},
      {"cars", 5, 0, 0},
  };
  for (const auto& c : cases) {
    INFO(c.dir);
    Schema schema = parse_schema(read_file(data_path(std::string(c.dir) + "/schema.cfs")));
    RuleSet rs = parse_program(read_file(data_path(std::string(c.dir) + "/rules.cfr")), schema);
    CHECK(rs.count(RuleClass::decision) == c.decision);
    CHECK(rs.count(RuleClass::causal) == c.causal);
    CHECK(rs.count(RuleClass::auxiliary) == c.aux);
    RuleSet again = parse_program(print_program(rs), schema);
    CHECK(rs == again);
  }
}

TEST_CASE("stratification: NAF dependencies sit strictly lower") {
  Schema schema = parse_schema(read_file(data_path("german/schema.cfs")));
  RuleSet rs = parse_program(read_file(data_path("german/rules.cfr")), schema);
  StratifiedProgram sp = validate_stratification(rs);
  CHECK(sp.stratum("ab1") < sp.stratum("label"));
}

TEST_CASE("p :- not p is unstratifiable") {
  Schema s = cars_schema();
  RuleSet rs = parse_program("p(X,'a') :- not p(X,'a').", s);
  CHECK_THROWS_AS(validate_stratification(rs), stratification_error);
  try {
    validate_stratification(rs);
  } catch (const stratification_error& e) {
    CHECK(std::string(e.what()).find("p") != std::string::npos);
  }
}

TEST_CASE("programs without NAF or defined bodies form a single stratum") {
  Schema s = cars_schema();
  RuleSet rs = parse_program(
      "label(X,'negative') :- persons(X,'2').\n"
      "label(X,'negative') :- safety(X,'low').\n",
      s);
  StratifiedProgram sp = validate_stratification(rs);
  CHECK(sp.strata.size() == 1);
}

TEST_CASE("positive mutual recursion is stratifiable") {
  Schema s = cars_schema();
  RuleSet rs = parse_program(
      "p(X,'a') :- q(X,'a').\n"
      "q(X,'a') :- p(X,'a').\n",
      s);
  StratifiedProgram sp = validate_stratification(rs);
  CHECK(sp.stratum("p") == sp.stratum("q"));
}
