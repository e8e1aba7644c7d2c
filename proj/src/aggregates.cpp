#include "ppdb/aggregates.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>

namespace ppdb {

namespace {

std::map<std::string, CustomAggregator>& registry() {
    static std::map<std::string, CustomAggregator> r;
    return r;
}

std::int64_t as_int(const Value& v) {
    if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
    throw Error(ErrorCode::TypeMismatch, "integer value expected");
}

double as_number(const Value& v) {
    if (auto* i = std::get_if<std::int64_t>(&v)) return (double)*i;
    if (auto* d = std::get_if<double>(&v)) return *d;
    throw Error(ErrorCode::TypeMismatch, "numeric value expected");
}

bool all_int(const ValueBag& bag) {
    return std::all_of(bag.begin(), bag.end(), [](const auto& p) {
        return std::holds_alternative<std::int64_t>(p.first);
    });
}

std::int64_t checked_imul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Error(ErrorCode::MultiplicityOverflow, "SUM overflow");
    return r;
}

std::int64_t checked_iadd(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw Error(ErrorCode::MultiplicityOverflow, "SUM overflow");
    return r;
}

std::uint64_t bag_count(const ValueBag& bag) {
    std::uint64_t n = 0;
    for (const auto& [v, m] : bag) n = checked_add(n, m);
    return n;
}

Value builtin_sum(const ValueBag& bag) {
    if (bag.empty()) return Value(std::int64_t(0));
    if (all_int(bag)) {
        std::int64_t s = 0;
        for (const auto& [v, m] : bag)
            s = checked_iadd(s, checked_imul(as_int(v), (std::int64_t)m));
        return Value(s);
    }
    double s = 0;
    for (const auto& [v, m] : bag) s += as_number(v) * (double)m;
    return Value(s);
}

}  // namespace

bool is_builtin_aggregator(const std::string& name) {
    return name == "CNT" || name == "CNTd" || name == "SUM" || name == "MIN" ||
           name == "MAX" || name == "AVG";
}

bool is_registered_aggregator(const std::string& name) {
    return registry().count(name) > 0;
}

namespace {

Value run_custom_fold(const CustomAggregator& agg, const std::vector<Value>& seq) {
    Value acc = agg.init;
    for (const auto& v : seq) acc = agg.combine(acc, v);
    if (agg.finalize) acc = agg.finalize(acc, seq.size());
    return acc;
}

}  // namespace

void register_aggregator(const std::string& name, CustomAggregator agg) {
    if (is_builtin_aggregator(name))
        throw Error(ErrorCode::NameClash, "aggregator " + name + " is built in");
    // permutation invariance check on sample bags
    std::mt19937_64 gen(0x5eedULL);
    for (int trial = 0; trial < 32; ++trial) {
        std::vector<Value> seq;
        int n = (int)(gen() % 8);
        for (int i = 0; i < n; ++i) seq.emplace_back((std::int64_t)(gen() % 10));
        Value base = run_custom_fold(agg, seq);
        for (int shuffle = 0; shuffle < 4; ++shuffle) {
            std::shuffle(seq.begin(), seq.end(), gen);
            if (compare_values(run_custom_fold(agg, seq), base) != 0)
                throw Error(ErrorCode::TypeMismatch,
                            "aggregator " + name + " is not permutation invariant");
        }
    }
    registry()[name] = std::move(agg);
}

Value apply_aggregator(const std::string& name, const ValueBag& bag,
                       const AttributeDomain& dom) {
    if (name == "CNT") return Value((std::int64_t)bag_count(bag));
    if (name == "CNTd") return Value((std::int64_t)bag.size());
    if (name == "SUM") return builtin_sum(bag);
    if (name == "MIN" || name == "MAX") {
        if (bag.empty())
            throw Error(ErrorCode::EmptyBagUndefined, name + " of the empty bag");
        const Value* best = &bag[0].first;
        for (const auto& [v, m] : bag) {
            auto c = dom.order(v, *best);
            if ((name == "MIN" && c < 0) || (name == "MAX" && c > 0)) best = &v;
        }
        return *best;
    }
    if (name == "AVG") {
        if (bag.empty())
            throw Error(ErrorCode::EmptyBagUndefined, "AVG of the empty bag");
        std::uint64_t n = bag_count(bag);
        Value s = builtin_sum(bag);
        return Value(as_number(s) / (double)n);
    }
    auto it = registry().find(name);
    if (it == registry().end())
        throw Error(ErrorCode::TypeMismatch, "unknown aggregator " + name);
    std::vector<Value> seq;
    for (const auto& [v, m] : bag)
        for (std::uint64_t i = 0; i < m; ++i) seq.push_back(v);
    return run_custom_fold(it->second, seq);
}

Value apply_aggregator_sequence(const std::string& name, const std::vector<Value>& seq,
                                const AttributeDomain& dom) {
    if (is_builtin_aggregator(name)) {
        // fold directly in the given order; results must match the bag path
        if (name == "CNT") return Value((std::int64_t)seq.size());
        if (name == "CNTd") {
            std::vector<Value> sorted = seq;
            std::sort(sorted.begin(), sorted.end(), value_less);
            sorted.erase(std::unique(sorted.begin(), sorted.end(),
                                     [](const Value& a, const Value& b) {
                                         return compare_values(a, b) == 0;
                                     }),
                         sorted.end());
            return Value((std::int64_t)sorted.size());
        }
        ValueBag bag;
        for (const auto& v : seq) bag.emplace_back(v, 1);
        if (name == "SUM") {
            if (seq.empty()) return Value(std::int64_t(0));
            bool ints = std::all_of(seq.begin(), seq.end(), [](const Value& v) {
                return std::holds_alternative<std::int64_t>(v);
            });
            if (ints) {
                std::int64_t s = 0;
                for (const auto& v : seq) s = checked_iadd(s, as_int(v));
                return Value(s);
            }
            double s = 0;
            for (const auto& v : seq) s += as_number(v);
            return Value(s);
        }
        if (name == "MIN" || name == "MAX" || name == "AVG") return apply_aggregator(name, bag, dom);
    }
    auto it = registry().find(name);
    if (it == registry().end())
        throw Error(ErrorCode::TypeMismatch, "unknown aggregator " + name);
    return run_custom_fold(it->second, seq);
}

AttributeDomain aggregator_output_domain(const std::string& name,
                                         const AttributeDomain& input) {
    if (name == "CNT" || name == "CNTd") return AttributeDomain::integer_all();
    if (name == "SUM") {
        if (input.kind == DomainKind::RealInterval)
            return AttributeDomain::real_interval(-std::numeric_limits<double>::infinity(),
                                                  std::numeric_limits<double>::infinity());
        return AttributeDomain::integer_all();
    }
    if (name == "MIN" || name == "MAX") return input;
    if (name == "AVG")
        return AttributeDomain::real_interval(-std::numeric_limits<double>::infinity(),
                                              std::numeric_limits<double>::infinity());
    // custom aggregators: integers in, integers out
    return AttributeDomain::integer_all();
}

BagInstance aggregate_query(const Schema& schema, const std::string& relation,
                            const std::string& agg, const BagInstance& instance) {
    const auto& type = schema.type_of(relation);
    if (type.size() != 1)
        throw Error(ErrorCode::TypeMismatch,
                    "aggregate_query requires a unary relation, got " + relation);
    const AttributeDomain& dom = schema.domain_of(type[0]);
    ValueBag bag;
    for (const auto& [f, m] : instance.entries())
        if (f.relation == relation) bag.emplace_back(f.tuple[0], m);
    Value v = apply_aggregator(agg, bag, dom);
    BagInstance out;
    out.insert(Fact(relation, {v}), 1);
    return out;
}

BagInstance group_aggregate(const Schema& schema, const std::string& relation,
                            const std::vector<std::string>& group_attrs,
                            const std::string& agg, const std::string& agg_attr,
                            const BagInstance& instance) {
    const auto& type = schema.type_of(relation);
    auto pos_of = [&](const std::string& a) {
        auto it = std::find(type.begin(), type.end(), a);
        if (it == type.end())
            throw Error(ErrorCode::UnknownAttribute, relation + ": " + a);
        return (std::size_t)(it - type.begin());
    };
    std::vector<std::size_t> group_pos;
    for (const auto& a : group_attrs) {
        if (a == agg_attr)
            throw Error(ErrorCode::TypeMismatch, "grouping attribute equals aggregate attribute");
        group_pos.push_back(pos_of(a));
    }
    std::size_t agg_pos = pos_of(agg_attr);
    const AttributeDomain& dom = schema.domain_of(agg_attr);

    auto tuple_less = [](const std::vector<Value>& a, const std::vector<Value>& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), value_less);
    };
    // group key -> canonical value bag of the aggregate attribute
    std::map<std::vector<Value>, std::map<Value, std::uint64_t, bool (*)(const Value&, const Value&)>,
             decltype(tuple_less)>
        groups(tuple_less);
    for (const auto& [f, m] : instance.entries()) {
        if (f.relation != relation) continue;
        std::vector<Value> key;
        for (auto p : group_pos) key.push_back(f.tuple[p]);
        auto it = groups.find(key);
        if (it == groups.end())
            it = groups.emplace(key, std::map<Value, std::uint64_t, bool (*)(const Value&, const Value&)>(
                                         &value_less))
                     .first;
        auto& slot = it->second[f.tuple[agg_pos]];
        slot = checked_add(slot, m);
    }

    BagInstance out;
    for (const auto& [key, valmap] : groups) {
        ValueBag merged(valmap.begin(), valmap.end());
        Value v = apply_aggregator(agg, merged, dom);
        std::vector<Value> tuple = key;
        tuple.push_back(v);
        out.insert(Fact(relation, tuple), 1);
    }
    return out;
}

}  // namespace ppdb
