#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ppdb/instance.hpp"
#include "ppdb/rational.hpp"
#include "ppdb/schema.hpp"
#include "ppdb/set_expr.hpp"

namespace ppdb {

/// A counting event C(F, n): "the instance has =n / >=n / <=n hits in F".
struct CountingEvent {
    enum class Cmp { Eq, AtLeast, AtMost };
    FactSetExpr set;
    Cmp cmp = Cmp::AtLeast;
    std::uint64_t n = 1;

    static CountingEvent exactly(FactSetExpr f, std::uint64_t n) {
        return {std::move(f), Cmp::Eq, n};
    }
    static CountingEvent at_least(FactSetExpr f, std::uint64_t n) {
        return {std::move(f), Cmp::AtLeast, n};
    }
    static CountingEvent at_most(FactSetExpr f, std::uint64_t n) {
        return {std::move(f), Cmp::AtMost, n};
    }
};

bool event_satisfied(const CountingEvent& event, const Schema& schema,
                     const BagInstance& instance);

/// A PDB given as an explicit finite probability space of worlds.
/// Probabilities are exact rationals, summing to 1; duplicate worlds are
/// merged at normalization.
struct FinitePdb {
    std::vector<std::pair<BagInstance, Rational>> worlds;

    /// Merges duplicate worlds, drops zero-probability ones, verifies the
    /// probabilities are nonnegative and sum to 1.
    void normalize();
};

/// True iff almost every realization is a set (multiplicities <= 1).
bool is_simple(const FinitePdb& pdb);

/// P(C(F, n)) by exact world enumeration.
Rational exact_event_probability(const FinitePdb& pdb, const Schema& schema,
                                 const CountingEvent& event);

// --- point-process samplers -------------------------------------------------

struct CountModel {
    enum class Kind { Fixed, Poisson, Categorical };
    Kind kind = Kind::Fixed;
    std::uint64_t fixed_n = 0;
    double lambda = 1.0;          // Poisson
    std::uint64_t n_max = 64;     // Poisson truncation bound
    std::vector<double> weights;  // Categorical over {0..weights.size()-1}
};

struct TupleComponent {
    enum class Kind { UniformInt, CategoricalWeighted, UniformReal, Normal };
    Kind kind = Kind::UniformInt;
    std::int64_t int_lo = 0, int_hi = 0;   // UniformInt
    double real_lo = 0, real_hi = 1;       // UniformReal
    double mu = 0, sigma = 1;              // Normal, truncated to the domain
    std::vector<Value> values;             // CategoricalWeighted support
    std::vector<double> weights;
};

struct RelationModel {
    CountModel count;
    std::vector<TupleComponent> tuple;
};

/// A PDB given as an independent finite point process per relation: draw a
/// count N from the count model, then N i.i.d. tuples from the per-attribute
/// distributions.
struct PointProcessPdb {
    std::map<std::string, RelationModel> relations;
    bool declared_simple = false;
};

/// Checks model parameters and admissibility against the schema.
void validate_pdb(const PointProcessPdb& pdb, const Schema& schema);

/// Deterministic draw: bit-identical output for identical (seed, index).
BagInstance sample_world(const PointProcessPdb& pdb, const Schema& schema,
                         std::uint64_t seed, std::uint64_t index);

/// A seeded world sampler; pure function of (seed, index).
struct WorldSampler {
    std::function<BagInstance(std::uint64_t seed, std::uint64_t index)> sample;
};

WorldSampler make_sampler(const PointProcessPdb& pdb, const Schema& schema);

/// Finite-support sampler drawing world i with its exact probability
/// (inverse CDF over the world list).  Used to cross-check Monte Carlo
/// inference against the exact path.
WorldSampler make_finite_sampler(const FinitePdb& pdb);

}  // namespace ppdb
