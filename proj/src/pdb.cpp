#include "ppdb/pdb.hpp"

#include <algorithm>
#include <cmath>

#include "ppdb/rng.hpp"

namespace ppdb {

bool event_satisfied(const CountingEvent& event, const Schema& schema,
                     const BagInstance& instance) {
    std::uint64_t c = count_in_set(instance, event.set, schema);
    switch (event.cmp) {
        case CountingEvent::Cmp::Eq: return c == event.n;
        case CountingEvent::Cmp::AtLeast: return c >= event.n;
        case CountingEvent::Cmp::AtMost: return c <= event.n;
    }
    return false;
}

void FinitePdb::normalize() {
    std::map<std::vector<std::pair<Fact, std::uint64_t>>, Rational> merged;
    for (auto& [world, p] : worlds) {
        if (p < Rational(0))
            throw Error(ErrorCode::InvalidPdb, "negative world probability");
        if (p == Rational(0)) continue;
        merged[world.canonicalize()] += p;
    }
    Rational total(0);
    std::vector<std::pair<BagInstance, Rational>> out;
    for (auto& [canon, p] : merged) {
        BagInstance w;
        for (const auto& [f, m] : canon) w.insert(f, m);
        total += p;
        out.emplace_back(std::move(w), p);
    }
    if (total != Rational(1))
        throw Error(ErrorCode::InvalidPdb,
                    "world probabilities sum to " + total.to_string() + ", expected 1");
    worlds = std::move(out);
}

bool is_simple(const FinitePdb& pdb) {
    for (const auto& [world, p] : pdb.worlds)
        if (p > Rational(0) && !world.is_set()) return false;
    return true;
}

Rational exact_event_probability(const FinitePdb& pdb, const Schema& schema,
                                 const CountingEvent& event) {
    type_check(event.set, schema);
    Rational p(0);
    for (const auto& [world, prob] : pdb.worlds)
        if (event_satisfied(event, schema, world)) p += prob;
    return p;
}

void validate_pdb(const PointProcessPdb& pdb, const Schema& schema) {
    for (const auto& [rel, model] : pdb.relations) {
        if (!schema.has_relation(rel))
            throw Error(ErrorCode::UnknownRelation, rel);
        const auto& doms = schema.relation_domains(rel);
        if (model.tuple.size() != doms.size())
            throw Error(ErrorCode::InvalidPdb,
                        rel + ": tuple model arity does not match the relation type");
        switch (model.count.kind) {
            case CountModel::Kind::Fixed:
                break;
            case CountModel::Kind::Poisson:
                if (!(model.count.lambda > 0))
                    throw Error(ErrorCode::InvalidPdb, rel + ": lambda must be > 0");
                if (model.count.n_max == 0)
                    throw Error(ErrorCode::InvalidPdb, rel + ": n_max must be >= 1");
                break;
            case CountModel::Kind::Categorical: {
                if (model.count.weights.empty())
                    throw Error(ErrorCode::InvalidPdb, rel + ": empty count weights");
                double total = 0;
                for (double w : model.count.weights) {
                    if (w < 0 || !std::isfinite(w))
                        throw Error(ErrorCode::InvalidPdb, rel + ": bad count weight");
                    total += w;
                }
                if (!(total > 0))
                    throw Error(ErrorCode::InvalidPdb, rel + ": weights not normalizable");
                break;
            }
        }
        for (std::size_t i = 0; i < model.tuple.size(); ++i) {
            const auto& comp = model.tuple[i];
            const auto& dom = doms[i];
            switch (comp.kind) {
                case TupleComponent::Kind::UniformInt: {
                    if (comp.int_lo > comp.int_hi)
                        throw Error(ErrorCode::InvalidPdb, rel + ": uniform_int lo > hi");
                    if (!dom.admits(Value(comp.int_lo)) || !dom.admits(Value(comp.int_hi)))
                        throw Error(ErrorCode::InvalidPdb,
                                    rel + ": uniform_int range outside the attribute domain");
                    break;
                }
                case TupleComponent::Kind::UniformReal: {
                    if (!(comp.real_lo <= comp.real_hi))
                        throw Error(ErrorCode::InvalidPdb, rel + ": uniform_real lo > hi");
                    if (!dom.admits(Value(comp.real_lo)) || !dom.admits(Value(comp.real_hi)))
                        throw Error(ErrorCode::InvalidPdb,
                                    rel + ": uniform_real range outside the attribute domain");
                    break;
                }
                case TupleComponent::Kind::Normal: {
                    if (!(comp.sigma > 0))
                        throw Error(ErrorCode::InvalidPdb, rel + ": sigma must be > 0");
                    if (dom.kind != DomainKind::RealInterval)
                        throw Error(ErrorCode::InvalidPdb,
                                    rel + ": normal component needs a real attribute");
                    break;
                }
                case TupleComponent::Kind::CategoricalWeighted: {
                    if (comp.values.empty() || comp.values.size() != comp.weights.size())
                        throw Error(ErrorCode::InvalidPdb,
                                    rel + ": categorical values/weights mismatch");
                    double total = 0;
                    for (double w : comp.weights) {
                        if (w < 0 || !std::isfinite(w))
                            throw Error(ErrorCode::InvalidPdb, rel + ": bad weight");
                        total += w;
                    }
                    if (!(total > 0))
                        throw Error(ErrorCode::InvalidPdb, rel + ": weights not normalizable");
                    for (const auto& v : comp.values)
                        if (!dom.admits(v))
                            throw Error(ErrorCode::InvalidPdb,
                                        rel + ": categorical value outside the attribute domain");
                    break;
                }
            }
        }
    }
}

namespace {

std::vector<double> cumulative(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    std::vector<double> cdf;
    double acc = 0;
    for (double w : weights) {
        acc += w / total;
        cdf.push_back(acc);
    }
    return cdf;
}

constexpr int kNormalRejectionCap = 1024;

Value draw_component(const TupleComponent& comp, const AttributeDomain& dom,
                     CounterStream& stream) {
    switch (comp.kind) {
        case TupleComponent::Kind::UniformInt:
            return Value(stream.next_int(comp.int_lo, comp.int_hi));
        case TupleComponent::Kind::UniformReal:
            return Value(stream.next_real(comp.real_lo, comp.real_hi));
        case TupleComponent::Kind::CategoricalWeighted:
            return comp.values[stream.next_categorical(cumulative(comp.weights))];
        case TupleComponent::Kind::Normal: {
            // rejection against the attribute interval; clamp after the cap
            // so admissibility holds surely
            for (int attempt = 0; attempt < kNormalRejectionCap; ++attempt) {
                double x = comp.mu + comp.sigma * stream.next_normal();
                if (x >= dom.real_lo && x <= dom.real_hi && std::isfinite(x)) return Value(x);
            }
            double lo = std::isfinite(dom.real_lo) ? dom.real_lo : comp.mu;
            double hi = std::isfinite(dom.real_hi) ? dom.real_hi : comp.mu;
            return Value(std::clamp(comp.mu, lo, hi));
        }
    }
    throw Error(ErrorCode::InvalidPdb, "unknown tuple component kind");
}

std::uint64_t draw_count(const CountModel& count, CounterStream& stream) {
    switch (count.kind) {
        case CountModel::Kind::Fixed:
            return count.fixed_n;
        case CountModel::Kind::Poisson: {
            auto cdf = truncated_poisson_cdf(count.lambda, count.n_max);
            return (std::uint64_t)stream.next_categorical(cdf);
        }
        case CountModel::Kind::Categorical:
            return (std::uint64_t)stream.next_categorical(cumulative(count.weights));
    }
    return 0;
}

}  // namespace

BagInstance sample_world(const PointProcessPdb& pdb, const Schema& schema,
                         std::uint64_t seed, std::uint64_t index) {
    BagInstance world;
    std::uint64_t rel_ordinal = 0;
    for (const auto& [rel, model] : pdb.relations) {
        const auto& doms = schema.relation_domains(rel);
        CounterStream count_stream{seed, index, rel_ordinal, 0};
        std::uint64_t n = draw_count(model.count, count_stream);
        for (std::uint64_t t = 0; t < n; ++t) {
            // separate stream per tuple so draws are order-independent
            CounterStream tuple_stream{seed, index, rel_ordinal, t + 1};
            std::vector<Value> tuple;
            for (std::size_t i = 0; i < model.tuple.size(); ++i)
                tuple.push_back(draw_component(model.tuple[i], doms[i], tuple_stream));
            world.insert(Fact(rel, tuple), 1);
        }
        ++rel_ordinal;
    }
    return world;
}

WorldSampler make_sampler(const PointProcessPdb& pdb, const Schema& schema) {
    validate_pdb(pdb, schema);
    PointProcessPdb copy = pdb;
    Schema s = schema;
    return WorldSampler{[copy, s](std::uint64_t seed, std::uint64_t index) {
        return sample_world(copy, s, seed, index);
    }};
}

WorldSampler make_finite_sampler(const FinitePdb& pdb) {
    std::vector<double> weights;
    for (const auto& [w, p] : pdb.worlds) weights.push_back(p.to_double());
    std::vector<double> cdf = cumulative(weights);
    std::vector<BagInstance> worlds;
    for (const auto& [w, p] : pdb.worlds) worlds.push_back(w);
    return WorldSampler{[cdf, worlds](std::uint64_t seed, std::uint64_t index) {
        CounterStream stream{seed, index, 0, 0};
        return worlds[stream.next_categorical(cdf)];
    }};
}

}  // namespace ppdb
