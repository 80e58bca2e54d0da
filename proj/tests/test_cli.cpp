#include <doctest.h>

#include "fixtures.hpp"
#include "sfs/analysis.hpp"
#include "sfs/io.hpp"

using namespace sfs;
using nlohmann::json;

namespace {

const char* kTiny = R"({
  "schema_version": 1,
  "n": 1,
  "parameters": ["a", "b"],
  "channels": [{"m": 1, "l": 0}],
  "A": [{"row": 0, "col": 0, "terms": [{"coeff": "1/1", "monomial": {"a": 1}}]}],
  "B": [[{"row": 0, "col": 0, "terms": [{"coeff": "2", "monomial": {"b": 1}}]}]],
  "C": [[]]
})";

std::string where_of(const std::string& text) {
  try {
    parse_system(text);
  } catch (const SchemaError& e) {
    return e.where();
  }
  return "<no error>";
}

std::string patched(const std::string& from, const std::string& to) {
  std::string s = kTiny;
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("parse a small system") {
  const auto sys = parse_system(kTiny);
  CHECK(sys.n() == 1);
  CHECK(sys.q() == 2);
  CHECK(sys.B_block(0).at(0, 0) == ParamPoly::variable(1, 2));
  CHECK(sys.param_names() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("parse errors carry a location") {
  CHECK(where_of("{\n  \"n\": 1,\n  oops\n}") == "line 3, column 3");
  CHECK(where_of(patched(R"({"a": 1})", R"({"c": 1})")) == "/A/0/terms/0/monomial/c");
  CHECK(where_of(patched(R"("row": 0, "col": 0, "terms": [{"coeff": "1/1")", R"("row": 5, "col": 0, "terms": [{"coeff": "1/1")")) == "/A/0/row");
  CHECK(where_of(patched(R"("n": 1)", R"("n": 1, "extra": true)")) == "/extra");
  CHECK(where_of(patched(R"("coeff": "2")", R"("coeff": "2/0")")) == "/B/0/0/terms/0/coeff");
  CHECK(where_of(patched(R"(["a", "b"])", R"(["a", "a"])")) == "/parameters/1");
  CHECK(where_of(patched(R"("schema_version": 1)", R"("schema_version": 2)")) == "/schema_version");
  CHECK(where_of(patched(R"("n": 1)", R"("n": 0)")) == "/n");
  CHECK(where_of(patched(R"({"b": 1})", R"({"b": 0})")) == "/B/0/0/terms/0/monomial/b");
}

TEST_CASE("schema round trip on the corpus") {
  for (const char* name : fx::kCorpus) {
    CAPTURE(name);
    const auto sys = fx::corpus(name);
    const json j = system_to_json(sys);
    const auto again = system_from_json(j);
    CHECK(system_to_json(again) == j);
    CHECK(again.A() == sys.A());
  }
}

TEST_CASE("classification") {
  const auto c = classify(fx::two_channel());
  CHECK(c.polynomial);
  CHECK(c.linear);
  CHECK(c.binary);
  CHECK_FALSE(c.unitary);
  CHECK_FALSE(c.nonlinear_reason.has_value());
  const auto bad = classify(fx::counterexample());
  CHECK_FALSE(bad.linear);
  CHECK(bad.nonlinear_reason.has_value());
}

TEST_CASE("analyze the two-channel example") {
  const Report r = analyze(fx::corpus("two_channel.json"));
  CHECK_FALSE(r.theorem1.has_sfs);
  REQUIRE(r.theorem2.has_value());
  REQUIRE(r.theorem3.has_value());
  CHECK_FALSE(r.theorem2->has_sfs);
  CHECK_FALSE(r.theorem3->has_sfs);
  CHECK(r.consistent);
  CHECK(exit_code(r) == kExitOk);
  CHECK(r.spectra.size() == 3);
}

TEST_CASE("analyze the non-linear counterexample") {
  const Report r = analyze(fx::corpus("not_linear.json"));
  CHECK_FALSE(r.classification.linear);
  CHECK_FALSE(r.theorem2.has_value());
  CHECK_FALSE(r.theorem3.has_value());
}

TEST_CASE("budget exhaustion surfaces in the report") {
  AnalyzeOptions opts;
  opts.budget = 2;
  const Report r = analyze(fx::corpus("two_channel.json"), opts);
  CHECK(r.theorem3_error.has_value());
  CHECK_FALSE(r.theorem3.has_value());
  CHECK(exit_code(r) == kExitBudget);
}

TEST_CASE("report json round trip and determinism") {
  for (const char* name : fx::kCorpus) {
    CAPTURE(name);
    AnalyzeOptions opts;
    opts.seed = 17;
    const Report r = analyze(fx::corpus(name), opts);
    const json j = to_json(r);
    CHECK(to_json(report_from_json(j)) == j);
    CHECK(to_json(analyze(fx::corpus(name), opts)).dump() == j.dump());
    CHECK(j.at("settings").at("seed") == 17);
    CHECK(j.at("verdicts").contains("theorem2") == r.classification.linear);
    CHECK(j.at("verdicts").contains("theorem3") == r.classification.binary);
  }
}

TEST_CASE("assignments") {
  const auto sys = fx::corpus("two_channel.json");
  const auto pt = parse_assignments(sys, {"p1=1", "p2=-1/2", "p3=3", "p4=0"});
  CHECK(pt.values[1] == Rational(-1, 2));
  try {
    parse_assignments(sys, {"p1=1", "p3=3"});
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()) == "unassigned parameters: p2, p4");
  }
  CHECK_THROWS_AS(parse_assignments(sys, {"p9=1"}), std::invalid_argument);
  CHECK_THROWS_AS(parse_assignments(sys, {"p1"}), std::invalid_argument);
  CHECK_THROWS_AS(parse_assignments(sys, {"p1=1", "p1=2"}), std::invalid_argument);
}

TEST_CASE("fixed modes command") {
  const auto sys = fx::corpus("two_channel.json");
  const auto r = fixed_modes_at(sys, parse_assignments(sys, {"p1=1", "p2=1", "p3=1", "p4=1"}), 1e-9, 1000, 0);
  CHECK(r.pencil.eigenvalues.empty());
  CHECK(r.oracle.empty());
  CHECK(r.agree);

  const auto no_io = fx::corpus("no_io.json");
  const auto n = fixed_modes_at(no_io, parse_assignments(no_io, {"p1=2", "p2=5", "p3=1"}), 1e-9, 100, 0);
  CHECK(n.pencil.eigenvalues.size() == 2);
  CHECK(n.agree);

  const auto classic = fixed_modes_at(fx::corpus("classic_fixed_mode.json"), RationalPoint{}, 1e-9, 1000, 0);
  REQUIRE(classic.pencil.eigenvalues.size() == 1);
  CHECK(std::abs(classic.pencil.eigenvalues[0].value - Complex(1, 0)) < 1e-6);
  CHECK(classic.agree);
}

TEST_CASE("crosscheck command") {
  const auto a = crosscheck(fx::corpus("two_channel.json"), 0, 10, kDefaultBudget);
  CHECK(a.agree);
  CHECK_FALSE(a.rank_deficient);
  CHECK_FALSE(a.no_unbalanced_class);
  const auto b = crosscheck(fx::corpus("shared_loop.json"), 0, 10, kDefaultBudget);
  CHECK(b.agree);
  CHECK(b.rank_deficient);
  CHECK(b.no_unbalanced_class);
  CHECK_THROWS_AS(crosscheck(fx::corpus("not_linear.json"), 0, 10, kDefaultBudget), std::invalid_argument);
}

TEST_CASE("graph command") {
  CHECK(graph_dot(fx::corpus("two_channel.json")).rfind("digraph G {", 0) == 0);
  CHECK_THROWS_AS(graph_dot(fx::corpus("not_linear.json")), std::invalid_argument);
}

TEST_CASE("complex formatting") {
  CHECK(format_complex(Complex(-0.0, 0.0)) == "0");
  CHECK(format_complex(Complex(1.5, -2.0)) == "1.5-2i");
  CHECK(format_complex(Complex(3.0, -0.0)) == "3");
}
