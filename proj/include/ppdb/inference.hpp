#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ppdb/algebra.hpp"
#include "ppdb/pdb.hpp"
#include "ppdb/rational.hpp"

namespace ppdb {

/// A Monte Carlo probability estimate with a Wilson score interval.
struct Estimate {
    double p_hat = 0;
    std::uint64_t n = 0;
    double ci_lo = 0, ci_hi = 1;
    double level = 0.95;
    std::uint64_t seed = 0;
};

/// Wilson score interval for `hits` successes out of `n`.
Estimate wilson_estimate(std::uint64_t hits, std::uint64_t n, double level, std::uint64_t seed);

/// Two-sided standard normal quantile for confidence level `level`.
double normal_quantile_two_sided(double level);

/// A finite list of pairwise-disjoint measurable cells.  Disjointness is
/// verified on construction (enumeration on finite domains, rectangle
/// interval analysis on continuous ones).
struct Partition {
    std::vector<FactSetExpr> cells;

    void validate(const Schema& schema) const;
};

/// Exact push-forward: P'(E') = P(Q^{-1}(E')) summed over worlds.
Rational pushforward_exact(const FinitePdb& pdb, const Schema& schema, const QueryAst& query,
                           const CountingEvent& event);

/// Monte Carlo push-forward over `samples` indexed draws; OpenMP-parallel
/// across the draw index with an order-independent integer reduction.
Estimate pushforward_mc(const WorldSampler& sampler, const Schema& schema,
                        const QueryAst& query, const CountingEvent& event,
                        std::uint64_t samples, std::uint64_t seed, double level = 0.95);

/// Serial reference implementation; same result, kept for testing and the
/// benchmark target.
Estimate pushforward_mc_serial(const WorldSampler& sampler, const Schema& schema,
                               const QueryAst& query, const CountingEvent& event,
                               std::uint64_t samples, std::uint64_t seed, double level = 0.95);

/// Per-cell marginal: P(#_{Q(D)}(cell) > 0).
std::vector<Rational> marginals_exact(const FinitePdb& pdb, const Schema& schema,
                                      const QueryAst& query, const Partition& partition);

std::vector<Estimate> marginals_mc(const WorldSampler& sampler, const Schema& schema,
                                   const QueryAst& query, const Partition& partition,
                                   std::uint64_t samples, std::uint64_t seed,
                                   double level = 0.95);

/// Exact threshold query: indices of cells with marginal >= alpha.
std::vector<std::size_t> threshold_exact(const FinitePdb& pdb, const Schema& schema,
                                         const QueryAst& query, const Partition& partition,
                                         double alpha);

enum class ThresholdDecision { In, Out, Undecided };

/// Monte Carlo threshold query: tri-state per cell.  A cell is In when its
/// CI lower bound clears alpha, Out when the upper bound stays below it.
std::vector<ThresholdDecision> threshold_mc(const WorldSampler& sampler, const Schema& schema,
                                            const QueryAst& query, const Partition& partition,
                                            double alpha, std::uint64_t samples,
                                            std::uint64_t seed, double level = 0.95);

/// Top-k cells by exact marginal; ties broken by the cells' canonical
/// string order.
std::vector<std::pair<std::size_t, Rational>> topk_exact(const FinitePdb& pdb,
                                                         const Schema& schema,
                                                         const QueryAst& query,
                                                         const Partition& partition,
                                                         std::size_t k);

struct TopkMcEntry {
    std::size_t cell = 0;
    Estimate estimate;
    bool ci_overlaps_neighbor = false;  // ordering ambiguous at this level
};

std::vector<TopkMcEntry> topk_mc(const WorldSampler& sampler, const Schema& schema,
                                 const QueryAst& query, const Partition& partition,
                                 std::size_t k, std::uint64_t samples, std::uint64_t seed,
                                 double level = 0.95);

/// Conditioning on a counting event: keeps satisfying worlds, rescales by
/// 1/P(event) in exact rationals.  Throws ZeroProbabilityCondition.
FinitePdb condition(const FinitePdb& pdb, const Schema& schema, const CountingEvent& event);

/// Runs the two locality separations on built-in example PDBs and returns a
/// text report: the threshold view is pointwise- but not uniformly-local,
/// and conditioning is not pointwise-local.
std::string classify_demo();

}  // namespace ppdb
