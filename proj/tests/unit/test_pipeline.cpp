#include <cstdio>
#include <fstream>
#include <regex>

#include "doctest.h"
#include "forge/errors.hpp"
#include "forge/parallel.hpp"
#include "forge/pipeline.hpp"
#include "support.hpp"

using namespace forge;
using namespace fixtures;

namespace {

std::size_t occurrences(const std::string& text, const std::string& pattern) {
  const std::regex re(pattern);
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

Json small_spec() {
  return Json::parse(R"({
    "groups": [{"id": "Z", "kind": "free_abelian", "generators": ["a"]}],
    "graphs": [{"id": "line", "kind": "coned_off", "group": "Z", "generators": ["a"]}],
    "pipeline": [{"id": "ball", "op": "audit", "check": "ball", "graph": "line", "radius": 3,
                  "expect": {"vertices": 7, "edges": 6, "tree": true}}]
  })");
}

}  // namespace

TEST_CASE("builtin examples") {
  const auto all = builtin_examples();
  CHECK(all.size() >= 5);
  for (const char* name : {"example-amalgam-1", "example-amalgam-2", "example-hnn-point", "example-hnn-coalesce",
                           "example-negative-fineness"})
    CHECK(builtin_example(name).has_value());
  for (const auto& e : all) {
    CAPTURE(e.name);
    const RunReport r = run_pipeline(e.spec);
    CHECK(r.error == "");
    if (e.name == "example-negative-fineness") {
      CHECK(r.exit_code() == 1);
      REQUIRE(r.verdicts.size() == 1);
      CHECK(r.verdicts[0].name == "fineness");
      CHECK(r.verdicts[0].verdict == Verdict::Fail);
    } else {
      CHECK(r.exit_code() == 0);
      CHECK_FALSE(r.verdicts.empty());
    }
  }
}

TEST_CASE("run_pipeline exit codes") {
  CHECK(run_pipeline(Json::object()).exit_code() == 0);
  CHECK(run_pipeline(Json::object()).steps.empty());
  CHECK(run_pipeline(small_spec()).exit_code() == 0);

  Json unknown = small_spec();
  unknown["extra"] = 1;
  CHECK(run_pipeline(unknown).exit_code() == 3);
  Json bad_key = small_spec();
  bad_key["groups"][0]["colour"] = "red";
  CHECK(run_pipeline(bad_key).exit_code() == 3);
  Json missing = small_spec();
  missing["pipeline"][0]["graph"] = "nowhere";
  CHECK(run_pipeline(missing).exit_code() == 3);
  Json zero = small_spec();
  zero["budgets"] = Json{{"radius", 0}};
  CHECK(run_pipeline(zero).exit_code() == 3);

  Json cycle = Json::parse(R"({
    "groups": [{"id": "G", "kind": "free_product", "factors": ["H"]},
               {"id": "H", "kind": "free_product", "factors": ["G"]}]
  })");
  auto rc = run_pipeline(cycle);
  CHECK(rc.exit_code() == 3);
  CHECK(rc.error.find("cycle") != std::string::npos);

  Json tight = small_spec();
  tight["budgets"] = Json{{"max_vertices", 3}};
  auto rt = run_pipeline(tight);
  CHECK(rt.exit_code() == 2);
  CHECK(rt.budget_exhausted);
  REQUIRE(rt.steps.size() == 1);
  CHECK(rt.steps[0].status == "budget-exhausted");

  Json wrong = small_spec();
  wrong["pipeline"][0]["expect"]["vertices"] = 8;
  CHECK(run_pipeline(wrong).exit_code() == 1);

  PipelineOptions o;
  o.radius = 2;
  auto ro = run_pipeline(small_spec(), o);
  CHECK(ro.budgets["radius"] == 2);
}

TEST_CASE("report json") {
  auto spec = *builtin_example("example-amalgam-2");
  set_parallelism(4);
  const std::string a = run_pipeline(spec).to_json().dump();
  const std::string b = run_pipeline(spec).to_json().dump();
  set_parallelism(1);
  const std::string c = run_pipeline(spec).to_json().dump();
  set_parallelism(0);
  CHECK(a == b);
  CHECK(a == c);
  auto j = Json::parse(a);
  for (const char* k : {"steps", "verdicts", "budgets", "timings_ms"}) CHECK(j.contains(k));
  CHECK(j["timings_ms"].empty());
  PipelineOptions o;
  o.timings = true;
  CHECK(run_pipeline(spec, o).to_json()["timings_ms"].size() == run_pipeline(spec).steps.size());
  o.audits_only = true;
  for (const auto& s : run_pipeline(spec, o).steps) CHECK(s.op == "audit");
}

TEST_CASE("export_dot") {
  auto one = plain_graph(1, {});
  const std::string d1 = export_dot(one);
  CHECK(occurrences(d1, R"(n\d+ \[label)") == 1);
  CHECK(occurrences(d1, "--") == 0);

  const std::string d5 = export_dot(cycle_graph(5), "c5", {2});
  CHECK(occurrences(d5, R"(n\d+ \[label)") == 5);
  CHECK(occurrences(d5, R"(n\d+ -- n\d+)") == 5);
  CHECK(occurrences(d5, "doublecircle") == 1);
  CHECK(export_dot(cycle_graph(5), "c5", {2}) == d5);

  // node count of the exported window of the amalgam example matches the ball itself
  auto spec = *builtin_example("example-amalgam-2");
  const std::string path = "forge_test_export.dot";
  spec["exports"] = Json::array({Json{{"graph", "Z"}, {"format", "dot"}, {"path", path}, {"radius", 3},
                                      {"stab_length", 1}}});
  auto r = run_pipeline(spec);
  REQUIRE(r.exit_code() == 0);
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::remove(path.c_str());
  auto e = example2();
  auto x = coned_off(e.a, {make_subgroup(e.a, {e.a->parse("a1"), e.a->parse("a2")})}, {e.a->parse("a3")}, "X");
  auto y = coned_off(e.b, {make_subgroup(e.b, {e.b->parse("b1"), e.b->parse("b2")})}, {e.b->parse("b3")}, "Y");
  auto p = c_pushout(x, y, x->vertices()->base(1), y->vertices()->base(1), e.g);
  BallOptions bo;
  bo.stab_length = 1;
  auto ball = ball_view(p.graph, {p.graph->provenance().z}, 3, bo);
  CHECK(occurrences(text, R"(n\d+ \[label)") == ball.size());
  CHECK(occurrences(text, R"(n\d+ -- n\d+)") == ball.edges.size());

  CHECK_THROWS_AS(write_text("/nonexistent-dir/x.dot", "x"), IOError);
}
