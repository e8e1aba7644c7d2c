#include <doctest.h>

#include "ppdb/schema.hpp"
#include "test_util.hpp"

using namespace ppdb;

namespace {

bool has_error(const std::vector<SchemaError>& errs, ErrorCode code) {
    for (const auto& e : errs)
        if (e.code == code) return true;
    return false;
}

}  // namespace

TEST_CASE("validate_schema accepts a well-formed schema") {
    Schema s;
    s.attributes.emplace("A", AttributeDomain::integer_range(0, 9));
    s.attributes.emplace("B", AttributeDomain::categorical({"x", "y"}));
    s.relations["R"] = {"A", "B"};
    CHECK(validate_schema(s).empty());
}

TEST_CASE("validate_schema flags a repeated attribute in one type") {
    Schema s;
    s.attributes.emplace("A", AttributeDomain::integer_range(0, 9));
    s.relations["R"] = {"A", "A"};
    CHECK(has_error(validate_schema(s), ErrorCode::DuplicateAttributeInType));
}

TEST_CASE("validate_schema flags an undeclared attribute") {
    Schema s;
    s.relations["R"] = {"A"};
    CHECK(has_error(validate_schema(s), ErrorCode::UnknownAttribute));
}

TEST_CASE("validate_schema flags name clashes, bad ranges, empty categoricals") {
    Schema s;
    s.attributes.emplace("R", AttributeDomain::integer_range(5, 2));
    s.attributes.emplace("C", AttributeDomain::categorical({}));
    s.attributes.emplace("C2", AttributeDomain::categorical({"x", "x"}));
    s.relations["R"] = {"R"};
    auto errs = validate_schema(s);
    CHECK(has_error(errs, ErrorCode::NameClash));
    CHECK(has_error(errs, ErrorCode::BadRange));
    CHECK(has_error(errs, ErrorCode::EmptyCategorical));
}

TEST_CASE("validate_schema is idempotent") {
    Schema s = testutil::small_schema();
    auto first = validate_schema(s);
    auto second = validate_schema(s);
    CHECK(first.size() == second.size());
    CHECK(first.empty());
}

TEST_CASE("fact_in_domain checks arity and componentwise admissibility") {
    Schema s;
    s.attributes.emplace("A", AttributeDomain::integer_range(0, 9));
    s.attributes.emplace("B", AttributeDomain::real_interval(0, 1));
    s.attributes.emplace("C", AttributeDomain::categorical({"x"}));
    s.relations["R"] = {"A"};
    s.relations["T"] = {"B", "C"};

    CHECK(fact_in_domain(s, "R", {Value(std::int64_t{5})}));
    CHECK_FALSE(fact_in_domain(s, "R", {Value(std::int64_t{12})}));
    CHECK_FALSE(fact_in_domain(s, "R", {Value(0.5)}));
    CHECK_FALSE(fact_in_domain(s, "R", {Value(std::int64_t{1}), Value(std::int64_t{2})}));
    CHECK(fact_in_domain(s, "T", {Value(0.5), Value(std::string("x"))}));
    CHECK_FALSE(fact_in_domain(s, "T", {Value(0.5), Value(std::string("q"))}));
    CHECK_THROWS_AS((void)fact_in_domain(s, "Z", {}), Error);
}

TEST_CASE("fact_in_domain is the product of the attribute checks") {
    // exhaustive on a tiny finite product domain
    Schema s;
    s.attributes.emplace("A", AttributeDomain::integer_range(0, 2));
    s.attributes.emplace("C", AttributeDomain::categorical({"x", "y"}));
    s.relations["R"] = {"A", "C"};
    const auto& da = s.domain_of("A");
    const auto& dc = s.domain_of("C");
    for (std::int64_t a = -1; a <= 3; ++a)
        for (std::string c : {"x", "y", "z"}) {
            std::vector<Value> t{Value(a), Value(c)};
            CHECK(fact_in_domain(s, "R", t) == (da.admits(t[0]) && dc.admits(t[1])));
        }
}

TEST_CASE("domain order respects categorical declaration order") {
    auto d = AttributeDomain::categorical({"low", "mid", "high"});
    CHECK(d.order(Value(std::string("low")), Value(std::string("high"))) < 0);
    CHECK(d.order(Value(std::string("high")), Value(std::string("mid"))) > 0);
    CHECK(d.finite_size() == 3);
    CHECK(d.enumerate().size() == 3);
}

TEST_CASE("infinite domains report no finite size") {
    CHECK_FALSE(AttributeDomain::integer_all().finite_size().has_value());
    CHECK_FALSE(AttributeDomain::real_interval(0, 1).finite_size().has_value());
    CHECK(AttributeDomain::integer_range(3, 7).finite_size() == 5);
}
