#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ppdb/instance.hpp"
#include "ppdb/schema.hpp"

namespace ppdb {

/// A bag of values in canonical order: (value, multiplicity) pairs.
using ValueBag = std::vector<std::pair<Value, std::uint64_t>>;

/// Built-ins: CNT, CNTd, SUM, MIN, MAX, AVG.
bool is_builtin_aggregator(const std::string& name);

/// Custom aggregators are folds over the bag's canonical sequence with a
/// declared commutative-monoid combine.  Registration runs a permutation
/// invariance check on sample bags and rejects non-symmetric combines.
struct CustomAggregator {
    Value init;
    std::function<Value(const Value&, const Value&)> combine;
    // finalize(acc, n) with n the bag cardinality; identity if unset
    std::function<Value(const Value&, std::uint64_t)> finalize;
};

void register_aggregator(const std::string& name, CustomAggregator agg);
bool is_registered_aggregator(const std::string& name);

/// Applies an aggregator to a bag of values.  `dom` supplies the domain
/// order for MIN/MAX on categoricals.  Empty-bag conventions: CNT/CNTd/SUM
/// yield 0; MIN/MAX/AVG throw EmptyBagUndefined.
Value apply_aggregator(const std::string& name, const ValueBag& bag,
                       const AttributeDomain& dom);

/// Fold over an explicitly ordered sequence; used by the permutation
/// invariance property tests.
Value apply_aggregator_sequence(const std::string& name, const std::vector<Value>& seq,
                                const AttributeDomain& dom);

/// Output domain V of an aggregator given its input domain U.
AttributeDomain aggregator_output_domain(const std::string& name, const AttributeDomain& input);

/// varpi_Phi(R): aggregates the single attribute of unary relation R over
/// the whole instance; output is the singleton bag {R'(v)}.
BagInstance aggregate_query(const Schema& schema, const std::string& relation,
                            const std::string& agg, const BagInstance& instance);

/// varpi_{A1..Ak,Phi(A)}(R): one output fact R'(key..., v) per distinct
/// group key present in the instance, multiplicity 1.
BagInstance group_aggregate(const Schema& schema, const std::string& relation,
                            const std::vector<std::string>& group_attrs,
                            const std::string& agg, const std::string& agg_attr,
                            const BagInstance& instance);

}  // namespace ppdb
