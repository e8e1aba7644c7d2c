// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Each check recomputes its expected values with an independent
// oracle rather than reusing the engine's own code paths.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ppdb/aggregates.hpp"
#include "ppdb/inference.hpp"
#include "ppdb/io.hpp"
#include "ppdb/parser.hpp"
#include "test_util.hpp"

using namespace ppdb;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << "  [" << idx << "] " << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << std::endl;
    if (!ok) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- criterion 1

using TupleKey = std::vector<Value>;

std::map<TupleKey, std::uint64_t> tuples_of(const BagInstance& d, const std::string& rel) {
    std::map<TupleKey, std::uint64_t> m;
    for (const auto& [f, mult] : d.entries())
        if (f.relation == rel) m[f.tuple] = mult;
    return m;
}

bool same_bag(const BagInstance& got, const std::map<TupleKey, std::uint64_t>& expect,
              const std::string& out_rel) {
    std::map<TupleKey, std::uint64_t> g;
    for (const auto& [f, mult] : got.entries()) {
        if (f.relation != out_rel) return false;
        g[f.tuple] = mult;
    }
    std::map<TupleKey, std::uint64_t> e;
    for (const auto& [t, m] : expect)
        if (m > 0) e[t] = m;
    return g == e;
}

bool criterion_operator_conformance() {
    auto t0 = std::chrono::steady_clock::now();
    Schema s = testutil::small_schema();
    testutil::Rng rng(101);
    int trials = 120;
    bool ok = true;

    auto pred = SetTree::make_atom(SetAtom::equals(0, Value(std::int64_t{2})));
    auto sat = [](const Fact& f) { return f.tuple[0] == Value(std::int64_t{2}); };

    for (int t = 0; t < trials && ok; ++t) {
        BagInstance d = testutil::random_instance(rng, s, 8, 4);
        auto r1 = tuples_of(d, "R1");
        auto r2 = tuples_of(d, "R2");
        auto sb = tuples_of(d, "S");
        auto ub = tuples_of(d, "U");

        // empty / singleton / extract
        ok = ok && eval(*q_empty("R1"), s, d).empty();
        Fact single = testutil::random_fact(rng, s, "S");
        ok = ok && same_bag(eval(*q_singleton(single), s, d), {{single.tuple, 1}}, "S");
        ok = ok && same_bag(eval(*q_extract("R1"), s, d), r1, "R1");

        // rename S.B -> A: tuples unchanged
        ok = ok && same_bag(eval(*q_rename(q_extract("S"), "B", "A"), s, d), sb, "S");

        // union family: per-tuple formulas over the union of supports
        std::set<TupleKey> keys;
        for (const auto& [k, m] : r1) keys.insert(k);
        for (const auto& [k, m] : r2) keys.insert(k);
        auto get = [](const std::map<TupleKey, std::uint64_t>& m, const TupleKey& k) {
            auto it = m.find(k);
            return it == m.end() ? std::uint64_t{0} : it->second;
        };
        std::map<TupleKey, std::uint64_t> uplus, minus, minint, maxun;
        for (const auto& k : keys) {
            std::uint64_t a = get(r1, k), b = get(r2, k);
            uplus[k] = a + b;
            minus[k] = a > b ? a - b : 0;
            minint[k] = std::min(a, b);
            maxun[k] = std::max(a, b);
        }
        auto q1 = q_extract("R1");
        auto q2 = q_extract("R2");
        ok = ok && same_bag(eval(*q_additive_union(q1, q2), s, d), uplus, "R1");
        ok = ok && same_bag(eval(*q_difference(q1, q2), s, d), minus, "R1");
        ok = ok && same_bag(eval(*q_min_intersect(q1, q2), s, d), minint, "R1");
        ok = ok && same_bag(eval(*q_max_union(q1, q2), s, d), maxun, "R1");

        // dedup
        std::map<TupleKey, std::uint64_t> dd;
        for (const auto& [k, m] : r1) dd[k] = 1;
        ok = ok && same_bag(eval(*q_dedup(q1), s, d), dd, "R1");

        // select: keep multiplicity where the predicate holds
        std::map<TupleKey, std::uint64_t> sel;
        for (const auto& [k, m] : r1)
            if (sat(Fact("R1", k))) sel[k] = m;
        ok = ok && same_bag(eval(*q_select(q1, pred), s, d), sel, "R1");

        // project onto (B): sum over agreeing facts
        std::map<TupleKey, std::uint64_t> proj;
        for (const auto& [k, m] : r1) proj[{k[1]}] += m;
        ok = ok && same_bag(eval(*q_project(q1, {"B"}), s, d), proj, "R1");

        // cross product R1 x U: multiplicities multiply
        std::map<TupleKey, std::uint64_t> cross;
        for (const auto& [k1, m1] : r1)
            for (const auto& [k2, m2] : ub) cross[{k1[0], k1[1], k2[0]}] = m1 * m2;
        ok = ok && same_bag(eval(*q_cross(q1, q_extract("U")), s, d), cross, "R1");

        // natural join R1(A,B) |x| S(B): product of the two restrictions
        std::map<TupleKey, std::uint64_t> join;
        for (const auto& [k1, m1] : r1) {
            std::uint64_t ms = get(sb, {k1[1]});
            if (ms > 0) join[k1] = m1 * ms;
        }
        ok = ok && same_bag(eval(*q_join(q1, q_extract("S")), s, d), join, "R1");
    }
    double dt = elapsed_s(t0);
    report(1, "operator multiplicity formulas on randomized instances", ok && dt < 10.0,
           std::to_string(trials) + " instances x 13 operators, " + std::to_string(dt) + "s");
    return ok;
}

// ---------------------------------------------------------------- criterion 2

bool criterion_redundancy_identities() {
    Schema s = testutil::small_schema();
    testutil::Rng rng(102);
    auto r1 = q_extract("R1");
    auto r2 = q_extract("R2");
    bool ok = true;
    for (int t = 0; t < 1000 && ok; ++t) {
        BagInstance d = testutil::random_instance(rng, s, {"R1", "R2"}, 7, 4);
        BagInstance maxu = eval(*q_max_union(r1, r2), s, d);
        BagInstance derived =
            eval(*q_difference(q_additive_union(r1, r2), q_min_intersect(r1, r2)), s, d);
        ok = ok && maxu.canonicalize() == derived.canonicalize();
        BagInstance mini = eval(*q_min_intersect(r1, r2), s, d);
        BagInstance mini_derived = eval(*q_difference(r1, q_difference(r1, r2)), s, d);
        ok = ok && mini.canonicalize() == mini_derived.canonicalize();
    }
    report(2, "max-union / min-intersect derivable from uplus and minus", ok, "1000 instances");
    return ok;
}

// ---------------------------------------------------------------- criterion 3

bool criterion_cross_counting_law() {
    Schema s = testutil::small_schema();  // S(B), U(D), disjoint attributes
    testutil::Rng rng(103);
    std::uniform_int_distribution<std::int64_t> lo(0, 4);
    bool ok = true;
    for (int t = 0; t < 500 && ok; ++t) {
        BagInstance d = testutil::random_instance(rng, s, {"S", "U"}, 8, 3);
        std::int64_t b0 = lo(rng), b1 = std::min<std::int64_t>(4, b0 + lo(rng));
        std::int64_t u0 = lo(rng), u1 = std::min<std::int64_t>(4, u0 + lo(rng));
        auto ival = [](std::size_t pos, std::int64_t l, std::int64_t h) {
            return SetTree::make_atom(SetAtom::interval(pos, Value(l), Value(h), true, true));
        };
        FactSetExpr f1 = FactSetExpr::of_relation("S", ival(0, b0, b1));
        FactSetExpr f2 = FactSetExpr::of_relation("U", ival(0, u0, u1));
        // the rectangle F1 x F2 inside the product space (output keeps the
        // left child's relation name)
        FactSetExpr rect = FactSetExpr::of_relation(
            "S", SetTree::make_and({ival(0, b0, b1), ival(1, u0, u1)}));
        BagInstance prod = eval(*q_cross(q_extract("S"), q_extract("U")), s, d);
        Schema out = infer_schema(*q_cross(q_extract("S"), q_extract("U")), s);
        std::uint64_t lhs = count_in_set(prod, rect, out);
        std::uint64_t rhs = count_in_set(d, f1, s) * count_in_set(d, f2, s);
        ok = ok && lhs == rhs;
    }
    report(3, "cross-product counting law on rectangle events", ok, "500 instances");
    return ok;
}

// ---------------------------------------------------------------- criterion 4

bool criterion_aggregator_symmetry() {
    testutil::Rng rng(104);
    std::uniform_int_distribution<std::int64_t> val(-100, 100);
    std::uniform_int_distribution<std::size_t> len(1, 15);
    AttributeDomain dom = AttributeDomain::integer_all();
    bool ok = true;
    for (int t = 0; t < 1000 && ok; ++t) {
        std::vector<Value> seq;
        std::size_t n = len(rng);
        for (std::size_t i = 0; i < n; ++i) seq.emplace_back(val(rng));
        std::vector<Value> perm = seq;
        std::shuffle(perm.begin(), perm.end(), rng);
        for (const char* agg : {"CNT", "CNTd", "SUM", "MIN", "MAX"})
            ok = ok && apply_aggregator_sequence(agg, seq, dom) ==
                           apply_aggregator_sequence(agg, perm, dom);
        double a = std::get<double>(apply_aggregator_sequence("AVG", seq, dom));
        double b = std::get<double>(apply_aggregator_sequence("AVG", perm, dom));
        ok = ok && std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
    }
    report(4, "aggregator results invariant under insertion order", ok, "1000 bags x 6 aggregators");
    return ok;
}

// ---------------------------------------------------------------- criterion 5

bool criterion_group_by_oracle() {
    Schema s = testutil::small_schema();
    testutil::Rng rng(105);
    bool ok = true;
    for (int t = 0; t < 500 && ok; ++t) {
        BagInstance d = testutil::random_instance(rng, s, {"R1"}, 8, 3);
        for (const char* agg : {"CNT", "CNTd", "SUM", "MIN", "MAX"}) {
            BagInstance grouped = group_aggregate(s, "R1", {"A"}, agg, "B", d);
            // brute force: distinct keys, then select(key) -> project -> fold
            BagInstance keys = eval(*q_dedup(q_project(q_extract("R1"), {"A"})), s, d);
            BagInstance expect;
            for (const auto& [kf, km] : keys.entries()) {
                auto sel = q_select(q_extract("R1"),
                                    SetTree::make_atom(SetAtom::equals(0, kf.tuple[0])));
                BagInstance vals = eval(*q_project(sel, {"B"}), s, d);
                ValueBag bag;
                for (const auto& [vf, vm] : vals.entries()) bag.emplace_back(vf.tuple[0], vm);
                Value v = apply_aggregator(agg, bag, s.domain_of("B"));
                expect.insert(Fact("R1", {kf.tuple[0], v}), 1);
            }
            ok = ok && grouped == expect;
        }
    }
    report(5, "group-by equals the select/project decomposition", ok, "500 instances");
    return ok;
}

// ---------------------------------------------------------------- criterion 6

bool criterion_datalog_closure() {
    Schema s;
    s.attributes.emplace("A", AttributeDomain::integer_range(0, 11));
    s.attributes.emplace("B", AttributeDomain::integer_range(0, 11));
    s.relations["E"] = {"A", "B"};
    DatalogProgram p = parse_datalog(
        "#output Path\n"
        "Path(X, Y) :- E(X, Y).\n"
        "Path(X, Z) :- Path(X, Y), E(Y, Z).\n");
    testutil::Rng rng(106);
    bool ok = true;
    for (int t = 0; t < 100 && ok; ++t) {
        int n = std::uniform_int_distribution<int>(2, 12)(rng);
        // random DAG: edges only from lower to higher node ids
        std::set<std::pair<std::int64_t, std::int64_t>> edges;
        int m = std::uniform_int_distribution<int>(0, 2 * n)(rng);
        for (int i = 0; i < m; ++i) {
            std::int64_t a = std::uniform_int_distribution<std::int64_t>(0, n - 2)(rng);
            std::int64_t b = std::uniform_int_distribution<std::int64_t>(a + 1, n - 1)(rng);
            edges.emplace(a, b);
        }
        BagInstance d;
        for (auto [a, b] : edges) d.insert(Fact("E", {Value(a), Value(b)}));

        // brute-force reachability by repeated squaring of the edge set
        std::set<std::pair<std::int64_t, std::int64_t>> closure = edges;
        bool changed = true;
        while (changed) {
            changed = false;
            auto snap = closure;
            for (auto [a, b] : snap)
                for (auto [c, e] : snap)
                    if (b == c && closure.emplace(a, e).second) changed = true;
        }

        BagInstance out = eval_datalog(p, s, d);
        std::set<std::pair<std::int64_t, std::int64_t>> got;
        for (const auto& [f, mult] : out.entries()) {
            ok = ok && mult == 1;
            got.emplace(std::get<std::int64_t>(f.tuple[0]), std::get<std::int64_t>(f.tuple[1]));
        }
        ok = ok && got == closure;
        ok = ok && eval_datalog_naive(p, s, d) == out;

        // inflationary stages stabilize within the bound
        std::size_t bound = (std::size_t)n * (std::size_t)n;  // |adom|^arity, 1 IDB
        BagInstance prev = eval_stage(p, s, d, 0);
        bool stabilized = false;
        for (std::size_t k = 1; k <= bound + 1; ++k) {
            BagInstance cur = eval_stage(p, s, d, k);
            for (const auto& [f, mult] : prev.entries()) ok = ok && cur.multiplicity(f) == 1;
            if (cur == prev) {
                stabilized = true;
                ok = ok && cur == out;
                break;
            }
            prev = cur;
        }
        ok = ok && stabilized;
    }
    report(6, "transitive closure vs brute-force reachability on random DAGs", ok,
           "100 DAGs, naive = semi-naive, stage bound");
    return ok;
}

// -------------------------------------------------------- criteria 7, 8, 11

Schema unary_schema() {
    Schema s;
    s.attributes.emplace("A", AttributeDomain::integer_range(0, 9));
    s.relations["R"] = {"A"};
    return s;
}

struct RandomCase {
    FinitePdb pdb;
    QueryPtr query;
    CountingEvent event;
};

std::vector<RandomCase> random_cases(const Schema& s, int count, testutil::Rng& rng) {
    std::vector<std::string> pool = {
        "R", "dedup(R)", "select(R, A in [0,4])", "R uplus R", "R minus dedup(R)",
    };
    std::vector<RandomCase> cases;
    for (int i = 0; i < count; ++i) {
        RandomCase c;
        int worlds = std::uniform_int_distribution<int>(1, 6)(rng);
        std::vector<std::uint64_t> weights;
        std::uint64_t total = 0;
        for (int w = 0; w < worlds; ++w) {
            std::uint64_t wt = std::uniform_int_distribution<std::uint64_t>(1, 9)(rng);
            weights.push_back(wt);
            total += wt;
        }
        for (int w = 0; w < worlds; ++w) {
            BagInstance d = testutil::random_instance(rng, s, {"R"}, 4, 2);
            c.pdb.worlds.emplace_back(d, Rational((std::int64_t)weights[w], (std::int64_t)total));
        }
        c.pdb.normalize();
        c.query = parse_query(pool[i % pool.size()], s);
        std::int64_t lo = std::uniform_int_distribution<std::int64_t>(0, 6)(rng);
        std::int64_t hi = lo + std::uniform_int_distribution<std::int64_t>(0, 3)(rng);
        FactSetExpr set = FactSetExpr::of_relation(
            "R", SetTree::make_atom(SetAtom::interval(0, Value(lo), Value(hi), true, true)));
        std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(0, 3)(rng);
        int cmp = std::uniform_int_distribution<int>(0, 2)(rng);
        c.event = cmp == 0 ? CountingEvent::exactly(set, n)
                  : cmp == 1 ? CountingEvent::at_least(set, n)
                             : CountingEvent::at_most(set, n);
        cases.push_back(std::move(c));
    }
    return cases;
}

// hand-rolled Eq.-(1) oracle: enumerate worlds, evaluate, count, compare
Rational enumeration_oracle(const RandomCase& c, const Schema& s) {
    Rational total(0);
    Schema out = infer_schema(*c.query, s);
    for (const auto& [world, p] : c.pdb.worlds) {
        BagInstance mapped = eval(*c.query, s, world);
        std::uint64_t hits = count_in_set(mapped, c.event.set, out);
        bool in = c.event.cmp == CountingEvent::Cmp::Eq        ? hits == c.event.n
                  : c.event.cmp == CountingEvent::Cmp::AtLeast ? hits >= c.event.n
                                                               : hits <= c.event.n;
        if (in) total += p;
    }
    return total;
}

bool criterion_exact_pushforward(std::vector<RandomCase>& cases_out) {
    Schema s = unary_schema();
    testutil::Rng rng(107);
    cases_out = random_cases(s, 50, rng);
    bool ok = true;
    for (const auto& c : cases_out)
        ok = ok && pushforward_exact(c.pdb, s, *c.query, c.event) == enumeration_oracle(c, s);
    report(7, "exact push-forward equals world enumeration", ok,
           "50 random finite PDBs, queries, events");
    return ok;
}

bool criterion_exact_vs_mc(const std::vector<RandomCase>& cases) {
    auto t0 = std::chrono::steady_clock::now();
    Schema s = unary_schema();
    // pick a case whose exact probability is in the interior so the error
    // bound is informative
    const RandomCase* chosen = nullptr;
    Rational p_exact(0);
    for (const auto& c : cases) {
        Rational p = pushforward_exact(c.pdb, s, *c.query, c.event);
        if (p > Rational(1, 10) && p < Rational(9, 10)) {
            chosen = &c;
            p_exact = p;
            break;
        }
    }
    if (!chosen) {
        report(8, "Monte Carlo matches the exact path", false, "no interior-probability case");
        return false;
    }
    const std::uint64_t N = 100000;
    double p = p_exact.to_double();
    double bound = 4.0 * std::sqrt(p * (1 - p) / (double)N);
    WorldSampler sampler = make_finite_sampler(chosen->pdb);
    int good = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Estimate e = pushforward_mc(sampler, s, *chosen->query, chosen->event, N, seed);
        if (std::abs(e.p_hat - p) <= bound) ++good;
    }
    double dt = elapsed_s(t0);
    bool ok = good >= 19 && dt < 60.0;
    report(8, "Monte Carlo matches the exact path within 4 standard errors", ok,
           std::to_string(good) + "/20 seeds, N=100000, " + std::to_string(dt) + "s");
    return ok;
}

bool criterion_mc_convergence() {
    Schema s = unary_schema();
    FinitePdb pdb;
    BagInstance w1, w2;
    w1.insert(Fact("R", {Value(std::int64_t{1})}));
    w2.insert(Fact("R", {Value(std::int64_t{2})}));
    pdb.worlds = {{w1, Rational(1, 2)}, {w2, Rational(1, 2)}};
    WorldSampler sampler = make_finite_sampler(pdb);
    QueryPtr id = q_extract("R");
    CountingEvent ev = CountingEvent::exactly(FactSetExpr::singleton(w1.entries().begin()->first), 1);

    std::vector<std::uint64_t> sizes = {100, 1000, 10000, 100000};
    std::vector<double> log_n, log_err;
    for (std::uint64_t n : sizes) {
        double mae = 0;
        const int seeds = 40;
        for (int seed = 1; seed <= seeds; ++seed) {
            Estimate e = pushforward_mc(sampler, s, *id, ev, n, (std::uint64_t)seed * 7919);
            mae += std::abs(e.p_hat - 0.5);
        }
        mae /= seeds;
        log_n.push_back(std::log10((double)n));
        log_err.push_back(std::log10(mae));
    }
    // least-squares slope of log10(error) vs log10(N)
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < log_n.size(); ++i) { mx += log_n[i]; my += log_err[i]; }
    mx /= log_n.size();
    my /= log_n.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        num += (log_n[i] - mx) * (log_err[i] - my);
        den += (log_n[i] - mx) * (log_n[i] - mx);
    }
    double slope = num / den;
    bool ok = std::abs(slope + 0.5) <= 0.1;
    char buf[64];
    std::snprintf(buf, sizeof buf, "slope %.3f", slope);
    report(11, "Monte Carlo error decays like 1/sqrt(N)", ok, buf);
    return ok;
}

// --------------------------------------------------------- criteria 9 and 10

bool criterion_conditioning_value() {
    Schema s = unary_schema();
    auto world = [](std::int64_t v) {
        BagInstance d;
        d.insert(Fact("R", {Value(v)}));
        return d;
    };
    FinitePdb pdb;
    pdb.worlds = {{world(1), Rational(1, 6)},
                  {world(2), Rational(1, 2)},
                  {world(3), Rational(1, 3)}};
    CountingEvent first_two = CountingEvent::at_least(
        FactSetExpr::of_relation("R", SetTree::make_atom(SetAtom::in_finite(
                                          0, {Value(std::int64_t{1}), Value(std::int64_t{2})}))),
        1);
    FinitePdb cond = condition(pdb, s, first_two);
    Rational p1(-1);
    for (const auto& [w, p] : cond.worlds)
        if (w == world(1)) p1 = p;
    bool ok = p1 == Rational(1, 4) && cond.worlds.size() == 2;
    report(9, "conditioning the three-world PDB gives exactly 1/4", ok, p1.to_string());
    return ok;
}

bool criterion_threshold_separation() {
    Schema s = unary_schema();
    BagInstance shared;  // the world both PDBs can realize
    shared.insert(Fact("R", {Value(std::int64_t{1})}));
    BagInstance other;
    other.insert(Fact("R", {Value(std::int64_t{2})}));

    FinitePdb delta1;
    delta1.worlds = {{shared, Rational(1)}};
    FinitePdb delta2;
    delta2.worlds = {{shared, Rational(1, 2)}, {other, Rational(1, 2)}};

    Partition cells;
    cells.cells = {FactSetExpr::singleton(Fact("R", {Value(std::int64_t{1})})),
                   FactSetExpr::singleton(Fact("R", {Value(std::int64_t{2})}))};
    QueryPtr id = q_extract("R");
    auto out1 = threshold_exact(delta1, s, *id, cells, 1.0);
    auto out2 = threshold_exact(delta2, s, *id, cells, 1.0);
    // same instance {R(1)} occurs in both PDBs, but the threshold view keeps
    // its fact under Delta_1 and drops it under Delta_2: no instance-level
    // map can produce both outputs
    bool ok = out1.size() == 1 && out1[0] == 0 && out2.empty();
    report(10, "threshold view separates the two PDBs sharing a world", ok,
           "alpha=1: kept under one, dropped under the other");
    return ok;
}

// ---------------------------------------------------------------- criterion 12

std::string run_cli(const std::string& args, int* exit_code) {
    std::string cmd = std::string(PPDB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        *exit_code = -1;
        return "";
    }
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    *exit_code = pclose(pipe);
    return out;
}

bool criterion_cli_determinism() {
    std::string fx = PPDB_FIXTURES_DIR;
    bool ok = true;
    std::vector<std::string> cmds = {
        "estimate -s " + fx + "/schema_rs.json -p " + fx + "/pp_small.json -q " + fx +
            "/query_join_project.txt -e " + fx + "/event_lo.json --samples 20000 --seed 42",
        "sample -s " + fx + "/schema_rs.json -p " + fx + "/pp_small.json --seed 7 -n 5",
        "exact -s " + fx + "/schema_r.json -p " + fx + "/finite_three_worlds.json -e " + fx +
            "/event_first_two.json",
    };
    for (const auto& cmd : cmds) {
        int rc1 = 0, rc2 = 0;
        std::string a = run_cli(cmd, &rc1);
        std::string b = run_cli(cmd, &rc2);
        ok = ok && rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
    }
    report(12, "randomized CLI commands are byte-identical across reruns", ok,
           std::to_string(cmds.size()) + " commands x 2 runs");
    return ok;
}

}  // namespace

int main() {
    criterion_operator_conformance();
    criterion_redundancy_identities();
    criterion_cross_counting_law();
    criterion_aggregator_symmetry();
    criterion_group_by_oracle();
    criterion_datalog_closure();
    std::vector<RandomCase> cases;
    criterion_exact_pushforward(cases);
    criterion_exact_vs_mc(cases);
    criterion_conditioning_value();
    criterion_threshold_separation();
    criterion_mc_convergence();
    criterion_cli_determinism();
    if (g_failures) {
        std::cout << g_failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all 12 acceptance criteria passed" << std::endl;
    return 0;
}
