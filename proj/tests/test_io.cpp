#include <doctest.h>

#include "ppdb/io.hpp"
#include "test_util.hpp"

using namespace ppdb;

namespace {

const char* kSchemaJson = R"({
  "attributes": {
    "A": {"kind": "int_range", "lo": 0, "hi": 9},
    "B": {"kind": "real_interval", "lo": "-inf", "hi": "inf"},
    "C": {"kind": "categorical", "values": ["x", "y"]}
  },
  "relations": {"R": ["A", "C"], "T": ["B"]}
})";

}  // namespace

TEST_CASE("schema round-trips through JSON") {
    Schema s = schema_from_json(kSchemaJson);
    CHECK(s.arity("R") == 2);
    CHECK(s.domain_of("B").kind == DomainKind::RealInterval);
    CHECK(std::isinf(s.domain_of("B").real_hi));
    Schema again = schema_from_json(schema_to_json(s));
    CHECK(again == s);
}

TEST_CASE("instances round-trip through JSON lines") {
    Schema s = schema_from_json(kSchemaJson);
    BagInstance d;
    d.insert(Fact("R", {Value(std::int64_t{1}), Value(std::string("x"))}), 2);
    d.insert(Fact("T", {Value(0.5)}));
    BagInstance again = instance_from_json_lines(instance_to_json_lines(d), s);
    CHECK(again == d);
}

TEST_CASE("instance lines reject inadmissible facts") {
    Schema s = schema_from_json(kSchemaJson);
    CHECK_THROWS_AS(instance_from_json_lines(R"(["R", [99, "x"]])", s), Error);
    CHECK_THROWS_AS(instance_from_json_lines(R"(["Z", [1]])", s), Error);
}

TEST_CASE("csv ingestion accumulates repeated rows") {
    Schema s = schema_from_json(kSchemaJson);
    BagInstance d;
    instance_add_csv(d, s, "R", "1,x\n1,x\n2,y\n");
    CHECK(d.multiplicity(Fact("R", {Value(std::int64_t{1}), Value(std::string("x"))})) == 2);
    CHECK(d.multiplicity(Fact("R", {Value(std::int64_t{2}), Value(std::string("y"))})) == 1);
    CHECK_THROWS_AS(instance_add_csv(d, s, "R", "notanint,x\n"), Error);
}

TEST_CASE("set expressions round-trip through JSON") {
    Schema s = schema_from_json(kSchemaJson);
    FactSetExpr set = set_expr_from_json(R"({
      "R": {"op": "and", "args": [
        {"atom": "interval", "attr": 0, "lo": 0, "hi": 5, "lo_closed": true, "hi_closed": false},
        {"op": "not", "args": [{"atom": "equals", "attr": 1, "value": "y"}]}
      ]},
      "T": {"atom": "interval", "attr": 0, "lo": "*", "hi": "1.5"}
    })");
    type_check(set, s);
    CHECK(contains(set, s, Fact("R", {Value(std::int64_t{2}), Value(std::string("x"))})));
    CHECK_FALSE(contains(set, s, Fact("R", {Value(std::int64_t{2}), Value(std::string("y"))})));
    CHECK(contains(set, s, Fact("T", {Value(-100.0)})));
    CHECK_FALSE(contains(set, s, Fact("T", {Value(2.0)})));

    FactSetExpr again = set_expr_from_json(set_expr_to_json(set));
    CHECK(to_canonical_string(again) == to_canonical_string(set));
}

TEST_CASE("events and partitions parse") {
    CountingEvent ev = event_from_json(
        R"({"set": {"R": {"atom": "equals", "attr": 0, "value": 1}}, "cmp": "eq", "n": 2})");
    CHECK(ev.cmp == CountingEvent::Cmp::Eq);
    CHECK(ev.n == 2);
    Partition part = partition_from_json(
        R"({"cells": [{"R": {"atom": "equals", "attr": 0, "value": 1}},
                      {"R": {"atom": "equals", "attr": 0, "value": 2}}]})");
    CHECK(part.cells.size() == 2);
}

TEST_CASE("finite pdbs round-trip with exact probabilities") {
    Schema s = schema_from_json(kSchemaJson);
    FinitePdb pdb;
    BagInstance w1, w2;
    w1.insert(Fact("R", {Value(std::int64_t{1}), Value(std::string("x"))}));
    w2.insert(Fact("R", {Value(std::int64_t{2}), Value(std::string("y"))}), 3);
    pdb.worlds = {{w1, Rational(1, 3)}, {w2, Rational(2, 3)}};
    PdbFile parsed = pdb_from_json(finite_pdb_to_json(pdb), s);
    REQUIRE(std::holds_alternative<FinitePdb>(parsed));
    const FinitePdb& again = std::get<FinitePdb>(parsed);
    REQUIRE(again.worlds.size() == 2);
    CHECK(again.worlds[0].second + again.worlds[1].second == Rational(1));
}

TEST_CASE("pdb files validate probabilities") {
    Schema s = schema_from_json(kSchemaJson);
    CHECK_THROWS_AS(pdb_from_json(
                        R"({"kind": "finite", "worlds": [{"prob": "1/2", "facts": []}]})", s),
                    Error);
    CHECK_THROWS_AS(pdb_from_json(R"({"kind": "nope"})", s), Error);
}

TEST_CASE("point-process files validate against the schema") {
    Schema s = schema_from_json(kSchemaJson);
    PdbFile pp = pdb_from_json(R"({
      "kind": "point_process",
      "relations": {
        "R": {"count": {"kind": "fixed", "n": 2},
              "tuple": [{"kind": "uniform_int", "lo": 0, "hi": 9},
                        {"kind": "categorical", "values": ["x", "y"], "weights": [1, 1]}]}
      }
    })", s);
    CHECK(std::holds_alternative<PointProcessPdb>(pp));
    // tuple model out of domain
    CHECK_THROWS_AS(pdb_from_json(R"({
      "kind": "point_process",
      "relations": {
        "R": {"count": {"kind": "fixed", "n": 2},
              "tuple": [{"kind": "uniform_int", "lo": 0, "hi": 99},
                        {"kind": "categorical", "values": ["x"], "weights": [1]}]}
      }
    })", s), Error);
}

TEST_CASE("estimates serialize with the documented keys") {
    Estimate e;
    e.p_hat = 0.5;
    e.n = 100;
    e.ci_lo = 0.4;
    e.ci_hi = 0.6;
    e.level = 0.95;
    e.seed = 42;
    std::string j = estimate_to_json(e);
    CHECK(j.find("\"p_hat\"") != std::string::npos);
    CHECK(j.find("\"ci\"") != std::string::npos);
    CHECK(j.find("\"seed\":42") != std::string::npos);
}
