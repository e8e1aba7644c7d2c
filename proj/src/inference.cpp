#include "ppdb/inference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ppdb {

double normal_quantile_two_sided(double level) {
    if (!(level > 0 && level < 1))
        throw Error(ErrorCode::TypeMismatch, "confidence level must lie in (0,1)");
    // Acklam's rational approximation of the inverse normal CDF
    double p = 1.0 - (1.0 - level) / 2.0;
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double q, r, x;
    if (p < plow) {
        q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= phigh) {
        q = p - 0.5;
        r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    return x;
}

Estimate wilson_estimate(std::uint64_t hits, std::uint64_t n, double level,
                         std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::TypeMismatch, "estimate needs at least one sample");
    double z = normal_quantile_two_sided(level);
    double p = (double)hits / (double)n;
    double z2 = z * z;
    double denom = 1.0 + z2 / (double)n;
    double center = (p + z2 / (2.0 * (double)n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / (double)n + z2 / (4.0 * (double)n * (double)n)) / denom;
    Estimate e;
    e.p_hat = p;
    e.n = n;
    e.ci_lo = std::max(0.0, center - half);
    e.ci_hi = std::min(1.0, center + half);
    e.level = level;
    e.seed = seed;
    return e;
}

void Partition::validate(const Schema& schema) const {
    for (const auto& cell : cells) type_check(cell, schema);
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i + 1; j < cells.size(); ++j)
            if (!provably_disjoint(cells[i], cells[j], schema))
                throw Error(ErrorCode::PartitionOverlap,
                            "cells " + std::to_string(i) + " and " + std::to_string(j) +
                                " overlap");
}

Rational pushforward_exact(const FinitePdb& pdb, const Schema& schema, const QueryAst& query,
                           const CountingEvent& event) {
    Schema out_schema = infer_schema(query, schema);
    type_check(event.set, out_schema);
    Rational p(0);
    for (const auto& [world, prob] : pdb.worlds)
        if (event_satisfied(event, out_schema, eval(query, schema, world))) p += prob;
    return p;
}

namespace {

// Shared MC kernel: counts event hits over indexed draws.  The per-index
// work is pure, so the parallel and serial paths agree exactly.
std::uint64_t count_hits(const WorldSampler& sampler, const Schema& schema,
                         const QueryAst& query, const CountingEvent& event,
                         std::uint64_t samples, std::uint64_t seed, bool parallel) {
    Schema out_schema = infer_schema(query, schema);
    type_check(event.set, out_schema);
    std::uint64_t hits = 0;
    std::string error;
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for reduction(+ : hits) schedule(static)
        for (std::int64_t i = 0; i < (std::int64_t)samples; ++i) {
            try {
                BagInstance world = sampler.sample(seed, (std::uint64_t)i);
                if (event_satisfied(event, out_schema, eval(query, schema, world))) hits += 1;
            } catch (const std::exception& e) {
#pragma omp critical
                error = e.what();
            }
        }
        if (!error.empty()) throw Error(ErrorCode::TypeMismatch, error);
        return hits;
    }
#endif
    (void)parallel;
    for (std::uint64_t i = 0; i < samples; ++i) {
        BagInstance world = sampler.sample(seed, i);
        if (event_satisfied(event, out_schema, eval(query, schema, world))) hits += 1;
    }
    return hits;
}

}  // namespace

Estimate pushforward_mc(const WorldSampler& sampler, const Schema& schema,
                        const QueryAst& query, const CountingEvent& event,
                        std::uint64_t samples, std::uint64_t seed, double level) {
    std::uint64_t hits = count_hits(sampler, schema, query, event, samples, seed, true);
    return wilson_estimate(hits, samples, level, seed);
}

Estimate pushforward_mc_serial(const WorldSampler& sampler, const Schema& schema,
                               const QueryAst& query, const CountingEvent& event,
                               std::uint64_t samples, std::uint64_t seed, double level) {
    std::uint64_t hits = count_hits(sampler, schema, query, event, samples, seed, false);
    return wilson_estimate(hits, samples, level, seed);
}

std::vector<Rational> marginals_exact(const FinitePdb& pdb, const Schema& schema,
                                      const QueryAst& query, const Partition& partition) {
    Schema out_schema = infer_schema(query, schema);
    Partition p = partition;
    for (const auto& cell : p.cells) type_check(cell, out_schema);
    p.validate(out_schema);
    std::vector<Rational> out(p.cells.size(), Rational(0));
    for (const auto& [world, prob] : pdb.worlds) {
        BagInstance result = eval(query, schema, world);
        for (std::size_t c = 0; c < p.cells.size(); ++c)
            if (count_in_set(result, p.cells[c], out_schema) > 0) out[c] += prob;
    }
    return out;
}

std::vector<Estimate> marginals_mc(const WorldSampler& sampler, const Schema& schema,
                                   const QueryAst& query, const Partition& partition,
                                   std::uint64_t samples, std::uint64_t seed, double level) {
    Schema out_schema = infer_schema(query, schema);
    partition.validate(out_schema);
    std::size_t ncells = partition.cells.size();
    std::vector<std::uint64_t> hits(ncells, 0);
    std::string error;
#ifdef _OPENMP
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(ncells, 0);
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < (std::int64_t)samples; ++i) {
            try {
                BagInstance result = eval(query, schema, sampler.sample(seed, (std::uint64_t)i));
                for (std::size_t c = 0; c < ncells; ++c)
                    if (count_in_set(result, partition.cells[c], out_schema) > 0) local[c] += 1;
            } catch (const std::exception& e) {
#pragma omp critical
                error = e.what();
            }
        }
#pragma omp critical
        for (std::size_t c = 0; c < ncells; ++c) hits[c] += local[c];
    }
    if (!error.empty()) throw Error(ErrorCode::TypeMismatch, error);
#else
    for (std::uint64_t i = 0; i < samples; ++i) {
        BagInstance result = eval(query, schema, sampler.sample(seed, i));
        for (std::size_t c = 0; c < ncells; ++c)
            if (count_in_set(result, partition.cells[c], out_schema) > 0) hits[c] += 1;
    }
#endif
    std::vector<Estimate> out;
    for (std::size_t c = 0; c < ncells; ++c)
        out.push_back(wilson_estimate(hits[c], samples, level, seed));
    return out;
}

std::vector<std::size_t> threshold_exact(const FinitePdb& pdb, const Schema& schema,
                                         const QueryAst& query, const Partition& partition,
                                         double alpha) {
    if (!(alpha > 0 && alpha <= 1))
        throw Error(ErrorCode::TypeMismatch, "alpha must lie in (0,1]");
    auto margs = marginals_exact(pdb, schema, query, partition);
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < margs.size(); ++c) {
        // cross-multiplied comparison against the double's exact value
        if ((long double)margs[c].num() >= (long double)alpha * (long double)margs[c].den())
            out.push_back(c);
    }
    return out;
}

std::vector<ThresholdDecision> threshold_mc(const WorldSampler& sampler, const Schema& schema,
                                            const QueryAst& query, const Partition& partition,
                                            double alpha, std::uint64_t samples,
                                            std::uint64_t seed, double level) {
    if (!(alpha > 0 && alpha <= 1))
        throw Error(ErrorCode::TypeMismatch, "alpha must lie in (0,1]");
    auto ests = marginals_mc(sampler, schema, query, partition, samples, seed, level);
    std::vector<ThresholdDecision> out;
    for (const auto& e : ests) {
        if (e.ci_lo >= alpha) out.push_back(ThresholdDecision::In);
        else if (e.ci_hi < alpha) out.push_back(ThresholdDecision::Out);
        else out.push_back(ThresholdDecision::Undecided);
    }
    return out;
}

namespace {

bool cell_order_less(const Partition& p, std::size_t a, std::size_t b) {
    return to_canonical_string(p.cells[a]) < to_canonical_string(p.cells[b]);
}

}  // namespace

std::vector<std::pair<std::size_t, Rational>> topk_exact(const FinitePdb& pdb,
                                                         const Schema& schema,
                                                         const QueryAst& query,
                                                         const Partition& partition,
                                                         std::size_t k) {
    if (k == 0) throw Error(ErrorCode::TypeMismatch, "k must be >= 1");
    auto margs = marginals_exact(pdb, schema, query, partition);
    std::vector<std::size_t> idx(margs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (margs[a] != margs[b]) return margs[a] > margs[b];
        return cell_order_less(partition, a, b);
    });
    std::vector<std::pair<std::size_t, Rational>> out;
    for (std::size_t i = 0; i < idx.size() && i < k; ++i)
        out.emplace_back(idx[i], margs[idx[i]]);
    return out;
}

std::vector<TopkMcEntry> topk_mc(const WorldSampler& sampler, const Schema& schema,
                                 const QueryAst& query, const Partition& partition,
                                 std::size_t k, std::uint64_t samples, std::uint64_t seed,
                                 double level) {
    if (k == 0) throw Error(ErrorCode::TypeMismatch, "k must be >= 1");
    auto ests = marginals_mc(sampler, schema, query, partition, samples, seed, level);
    std::vector<std::size_t> idx(ests.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (ests[a].p_hat != ests[b].p_hat) return ests[a].p_hat > ests[b].p_hat;
        return cell_order_less(partition, a, b);
    });
    std::vector<TopkMcEntry> out;
    for (std::size_t i = 0; i < idx.size() && i < k; ++i) {
        TopkMcEntry entry;
        entry.cell = idx[i];
        entry.estimate = ests[idx[i]];
        // overlapping CI with the next-ranked cell makes the cut ambiguous
        if (i + 1 < idx.size())
            entry.ci_overlaps_neighbor = ests[idx[i + 1]].ci_hi >= ests[idx[i]].ci_lo;
        out.push_back(entry);
    }
    return out;
}

FinitePdb condition(const FinitePdb& pdb, const Schema& schema, const CountingEvent& event) {
    type_check(event.set, schema);
    Rational total(0);
    std::vector<std::pair<BagInstance, Rational>> kept;
    for (const auto& [world, prob] : pdb.worlds)
        if (event_satisfied(event, schema, world)) {
            kept.emplace_back(world, prob);
            total += prob;
        }
    if (total == Rational(0))
        throw Error(ErrorCode::ZeroProbabilityCondition, "conditioning event has probability 0");
    FinitePdb out;
    for (auto& [world, prob] : kept) out.worlds.emplace_back(std::move(world), prob / total);
    out.normalize();
    return out;
}

std::string classify_demo() {
    std::ostringstream report;

    Schema schema;
    schema.attributes["A"] = AttributeDomain::integer_range(0, 9);
    schema.relations["R"] = {"A"};

    Fact f("R", {Value((std::int64_t)1)});
    Fact f2("R", {Value((std::int64_t)2)});

    // threshold separation: identical world {f}, different marginals
    FinitePdb d1;
    {
        BagInstance w;
        w.insert(f, 1);
        d1.worlds.emplace_back(w, Rational(1));
        d1.normalize();
    }
    FinitePdb d2;
    {
        BagInstance w1, w2;
        w1.insert(f, 1);
        w2.insert(f2, 1);
        d2.worlds.emplace_back(w1, Rational(1, 2));
        d2.worlds.emplace_back(w2, Rational(1, 2));
        d2.normalize();
    }
    Partition cells{{FactSetExpr::singleton(f), FactSetExpr::singleton(f2)}};
    QueryPtr id = q_extract("R");
    auto m1 = marginals_exact(d1, schema, *id, cells);
    auto m2 = marginals_exact(d2, schema, *id, cells);
    double alpha = 1.0;
    auto t1 = threshold_exact(d1, schema, *id, cells, alpha);
    auto t2 = threshold_exact(d2, schema, *id, cells, alpha);
    bool separated = (t1 != t2);
    report << "threshold view (alpha=1):\n";
    report << "  marginals under PDB 1: " << m1[0].to_string() << ", " << m1[1].to_string()
           << " -> " << t1.size() << " cell(s) pass\n";
    report << "  marginals under PDB 2: " << m2[0].to_string() << ", " << m2[1].to_string()
           << " -> " << t2.size() << " cell(s) pass\n";
    report << (separated
                   ? "  type II witnessed: outputs on the shared world {R(1)} differ across "
                     "the two PDBs, so no single instance-level map explains the view\n"
                   : "  separation NOT witnessed\n");

    // conditioning separation: conditioned probability attained by no event
    Fact g1("R", {Value((std::int64_t)1)});
    Fact g2("R", {Value((std::int64_t)2)});
    Fact g3("R", {Value((std::int64_t)3)});
    FinitePdb d3;
    {
        BagInstance w1, w2, w3;
        w1.insert(g1, 1);
        w2.insert(g2, 1);
        w3.insert(g3, 1);
        d3.worlds.emplace_back(w1, Rational(1, 6));
        d3.worlds.emplace_back(w2, Rational(1, 2));
        d3.worlds.emplace_back(w3, Rational(1, 3));
        d3.normalize();
    }
    FactSetExpr first_two = FactSetExpr::of_relation(
        "R", SetTree::make_atom(SetAtom::in_finite(0, {Value((std::int64_t)1),
                                                       Value((std::int64_t)2)})));
    FinitePdb conditioned = condition(d3, schema, CountingEvent::at_least(first_two, 1));
    Rational p_first(0);
    for (const auto& [w, p] : conditioned.worlds)
        if (w.multiplicity(g1) == 1) p_first = p;
    report << "conditioning view (worlds 1/6, 1/2, 1/3; condition on the first two):\n";
    report << "  conditioned probability of world 1 = " << p_first.to_string() << "\n";
    bool attained = false;
    for (unsigned mask = 0; mask < 8; ++mask) {
        Rational p(0);
        for (unsigned b = 0; b < 3; ++b)
            if (mask & (1u << b)) p += d3.worlds[b].second;
        if (p == p_first) attained = true;
    }
    report << (attained ? "  some event of the base PDB has probability 1/4\n"
                        : "  no event has probability 1/4: conditioning is type I but not "
                          "type II\n");

    // a one-world PDB makes every view trivially uniformly local
    report << "single-world PDB: every view is trivially type III (push-forward of the "
              "unique world)\n";
    return report.str();
}

}  // namespace ppdb
