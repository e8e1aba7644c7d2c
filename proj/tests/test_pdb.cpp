#include <doctest.h>

#include <cmath>
#include <map>

#include "ppdb/pdb.hpp"
#include "test_util.hpp"

using namespace ppdb;

namespace {

Schema unary_schema(std::int64_t hi = 9) {
    Schema s;
    s.attributes.emplace("A", AttributeDomain::integer_range(0, hi));
    s.relations["R"] = {"A"};
    return s;
}

Fact r(std::int64_t v) { return Fact("R", {Value(v)}); }

BagInstance world(std::initializer_list<std::int64_t> vs) {
    BagInstance d;
    for (auto v : vs) d.insert(r(v));
    return d;
}

}  // namespace

TEST_CASE("finite pdb normalization merges duplicates and checks the total") {
    FinitePdb pdb;
    pdb.worlds = {{world({1}), Rational(1, 4)},
                  {world({1}), Rational(1, 4)},
                  {world({2}), Rational(1, 2)},
                  {world({3}), Rational(0)}};
    pdb.normalize();
    REQUIRE(pdb.worlds.size() == 2);
    Rational total(0);
    for (const auto& [w, p] : pdb.worlds) total += p;
    CHECK(total == Rational(1));

    FinitePdb bad;
    bad.worlds = {{world({1}), Rational(1, 2)}};
    CHECK_THROWS_AS(bad.normalize(), Error);
}

TEST_CASE("is_simple respects the almost-surely qualifier") {
    FinitePdb all_sets;
    all_sets.worlds = {{world({1}), Rational(1, 2)}, {world({2, 3}), Rational(1, 2)}};
    CHECK(is_simple(all_sets));

    BagInstance dup;
    dup.insert(r(1), 2);
    FinitePdb with_dup;
    with_dup.worlds = {{world({1}), Rational(3, 4)}, {dup, Rational(1, 4)}};
    CHECK_FALSE(is_simple(with_dup));
}

TEST_CASE("exact_event_probability sums satisfying worlds") {
    Schema s = unary_schema();
    FinitePdb pdb;
    pdb.worlds = {{world({1}), Rational(1, 2)}, {world({2}), Rational(1, 2)}};

    CountingEvent hit_one = CountingEvent::exactly(FactSetExpr::singleton(r(1)), 1);
    CHECK(exact_event_probability(pdb, s, hit_one) == Rational(1, 2));

    CountingEvent certain = CountingEvent::at_least(FactSetExpr::full(s), 0);
    CHECK(exact_event_probability(pdb, s, certain) == Rational(1));

    CountingEvent none = CountingEvent::at_most(FactSetExpr::singleton(r(1)), 0);
    CHECK(exact_event_probability(pdb, s, none) == Rational(1, 2));
}

TEST_CASE("counting predicates =0,=1,...,>=K partition the space") {
    Schema s = unary_schema();
    FinitePdb pdb;
    pdb.worlds = {{world({1}), Rational(1, 6)},
                  {world({1, 2}), Rational(1, 2)},
                  {world({1, 2, 3}), Rational(1, 3)}};
    FactSetExpr full = FactSetExpr::full(s);
    Rational total(0);
    for (std::uint64_t n = 0; n < 3; ++n)
        total += exact_event_probability(pdb, s, CountingEvent::exactly(full, n));
    total += exact_event_probability(pdb, s, CountingEvent::at_least(full, 3));
    CHECK(total == Rational(1));
}

TEST_CASE("fixed zero counts give the empty instance for every seed") {
    Schema s = unary_schema();
    PointProcessPdb pdb;
    RelationModel m;
    m.count.kind = CountModel::Kind::Fixed;
    m.count.fixed_n = 0;
    TupleComponent c;
    c.kind = TupleComponent::Kind::UniformInt;
    c.int_lo = 0;
    c.int_hi = 9;
    m.tuple = {c};
    pdb.relations["R"] = m;
    validate_pdb(pdb, s);
    for (std::uint64_t seed : {0ull, 1ull, 99ull})
        CHECK(sample_world(pdb, s, seed, 0).empty());
}

TEST_CASE("degenerate tuple model collides deterministically") {
    Schema s;
    s.attributes.emplace("C", AttributeDomain::categorical({"only"}));
    s.relations["R"] = {"C"};
    PointProcessPdb pdb;
    RelationModel m;
    m.count.kind = CountModel::Kind::Fixed;
    m.count.fixed_n = 2;
    TupleComponent c;
    c.kind = TupleComponent::Kind::CategoricalWeighted;
    c.values = {Value(std::string("only"))};
    c.weights = {1.0};
    m.tuple = {c};
    pdb.relations["R"] = m;
    validate_pdb(pdb, s);
    BagInstance w = sample_world(pdb, s, 5, 0);
    CHECK(w.multiplicity(Fact("R", {Value(std::string("only"))})) == 2);
}

TEST_CASE("samplers are deterministic and index-addressable") {
    Schema s = unary_schema();
    PointProcessPdb pdb;
    RelationModel m;
    m.count.kind = CountModel::Kind::Poisson;
    m.count.lambda = 2.0;
    m.count.n_max = 16;
    TupleComponent c;
    c.kind = TupleComponent::Kind::UniformInt;
    c.int_lo = 0;
    c.int_hi = 9;
    m.tuple = {c};
    pdb.relations["R"] = m;
    validate_pdb(pdb, s);

    WorldSampler sampler = make_sampler(pdb, s);
    for (std::uint64_t i = 0; i < 50; ++i)
        CHECK(sampler.sample(7, i) == sampler.sample(7, i));
    // out-of-order access yields the same sequence
    BagInstance late = sampler.sample(7, 49);
    BagInstance early = sampler.sample(7, 0);
    CHECK(late == sampler.sample(7, 49));
    CHECK(early == sampler.sample(7, 0));
    // different seeds diverge somewhere
    bool diverged = false;
    for (std::uint64_t i = 0; i < 20 && !diverged; ++i)
        diverged = !(sampler.sample(7, i) == sampler.sample(8, i));
    CHECK(diverged);
}

TEST_CASE("truncated Poisson empirical mean is close to lambda") {
    Schema s = unary_schema();
    PointProcessPdb pdb;
    RelationModel m;
    m.count.kind = CountModel::Kind::Poisson;
    m.count.lambda = 3.0;
    m.count.n_max = 64;
    TupleComponent c;
    c.kind = TupleComponent::Kind::UniformInt;
    c.int_lo = 0;
    c.int_hi = 9;
    m.tuple = {c};
    pdb.relations["R"] = m;
    validate_pdb(pdb, s);

    const std::uint64_t N = 100000;
    double sum = 0;
    for (std::uint64_t i = 0; i < N; ++i) sum += (double)sample_world(pdb, s, 13, i).cardinality();
    double mean = sum / (double)N;
    CHECK(std::abs(mean - 3.0) <= 3.0 * std::sqrt(3.0 / (double)N));
}

TEST_CASE("fixed-count empirical fact frequencies match the product distribution") {
    Schema s;
    s.attributes.emplace("A", AttributeDomain::integer_range(0, 3));
    s.relations["R"] = {"A"};
    PointProcessPdb pdb;
    RelationModel m;
    m.count.kind = CountModel::Kind::Fixed;
    m.count.fixed_n = 1;
    TupleComponent c;
    c.kind = TupleComponent::Kind::UniformInt;
    c.int_lo = 0;
    c.int_hi = 3;
    m.tuple = {c};
    pdb.relations["R"] = m;
    validate_pdb(pdb, s);

    const std::uint64_t N = 100000;
    std::map<std::int64_t, std::uint64_t> freq;
    for (std::uint64_t i = 0; i < N; ++i) {
        BagInstance w = sample_world(pdb, s, 99, i);
        for (const auto& [f, mult] : w.entries())
            freq[std::get<std::int64_t>(f.tuple[0])] += mult;
    }
    double p = 0.25;
    double se = std::sqrt(p * (1 - p) / (double)N);
    for (std::int64_t v = 0; v <= 3; ++v)
        CHECK(std::abs((double)freq[v] / (double)N - p) <= 4 * se);
}

TEST_CASE("normal components are truncated to the attribute interval") {
    Schema s;
    s.attributes.emplace("X", AttributeDomain::real_interval(0, 1));
    s.relations["R"] = {"X"};
    PointProcessPdb pdb;
    RelationModel m;
    m.count.kind = CountModel::Kind::Fixed;
    m.count.fixed_n = 3;
    TupleComponent c;
    c.kind = TupleComponent::Kind::Normal;
    c.mu = 0.5;
    c.sigma = 2.0;  // wide: truncation matters
    m.tuple = {c};
    pdb.relations["R"] = m;
    validate_pdb(pdb, s);
    for (std::uint64_t i = 0; i < 500; ++i) {
        BagInstance w = sample_world(pdb, s, 3, i);
        for (const auto& [f, mult] : w.entries()) {
            double x = std::get<double>(f.tuple[0]);
            CHECK(x >= 0.0);
            CHECK(x <= 1.0);
        }
    }
}

TEST_CASE("validate_pdb rejects bad parameters") {
    Schema s = unary_schema();
    PointProcessPdb pdb;
    RelationModel m;
    m.count.kind = CountModel::Kind::Poisson;
    m.count.lambda = -1.0;
    TupleComponent c;
    c.kind = TupleComponent::Kind::UniformInt;
    c.int_lo = 0;
    c.int_hi = 9;
    m.tuple = {c};
    pdb.relations["R"] = m;
    CHECK_THROWS_AS(validate_pdb(pdb, s), Error);

    // component range outside the attribute domain
    PointProcessPdb bad;
    RelationModel m2;
    m2.count.kind = CountModel::Kind::Fixed;
    m2.count.fixed_n = 1;
    TupleComponent c2;
    c2.kind = TupleComponent::Kind::UniformInt;
    c2.int_lo = 0;
    c2.int_hi = 99;
    m2.tuple = {c2};
    bad.relations["R"] = m2;
    CHECK_THROWS_AS(validate_pdb(bad, s), Error);
}

TEST_CASE("finite-support sampler reproduces world frequencies") {
    FinitePdb pdb;
    pdb.worlds = {{world({1}), Rational(1, 4)}, {world({2}), Rational(3, 4)}};
    WorldSampler sampler = make_finite_sampler(pdb);
    const std::uint64_t N = 50000;
    std::uint64_t first = 0;
    for (std::uint64_t i = 0; i < N; ++i)
        if (sampler.sample(11, i) == pdb.worlds[0].first) ++first;
    double p = 0.25;
    double se = std::sqrt(p * (1 - p) / (double)N);
    CHECK(std::abs((double)first / (double)N - p) <= 4 * se);
}
