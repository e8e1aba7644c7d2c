#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ppdb/instance.hpp"
#include "ppdb/schema.hpp"

namespace ppdb {

/// An atomic constraint on one fact of a fixed relation.  Every atom denotes
/// a measurable rectangle (or a diagonal/half-plane slice), so any Boolean
/// combination is Borel by construction.
struct SetAtom {
    enum class Kind { Interval, Equals, InFinite, PairEquals, PairLess };
    Kind kind = Kind::Equals;
    std::size_t attr = 0;              // primary attribute position
    std::size_t attr2 = 0;             // second position for Pair* atoms
    std::optional<Value> lo, hi;       // Interval; nullopt side = unbounded
    bool lo_closed = true, hi_closed = true;
    Value value;                       // Equals
    std::vector<Value> values;         // InFinite (finite value set)

    static SetAtom interval(std::size_t attr, std::optional<Value> lo, std::optional<Value> hi,
                            bool lo_closed = true, bool hi_closed = true);
    static SetAtom equals(std::size_t attr, Value v);
    static SetAtom in_finite(std::size_t attr, std::vector<Value> vs);
    static SetAtom pair_equals(std::size_t i, std::size_t j);
    static SetAtom pair_less(std::size_t i, std::size_t j);
};

/// Boolean tree over SetAtoms for one relation.
struct SetTree {
    enum class Kind { True, False, Atom, Not, And, Or };
    Kind kind = Kind::True;
    SetAtom atom;
    std::vector<std::shared_ptr<SetTree>> children;

    static std::shared_ptr<SetTree> make_true();
    static std::shared_ptr<SetTree> make_false();
    static std::shared_ptr<SetTree> make_atom(SetAtom a);
    static std::shared_ptr<SetTree> make_not(std::shared_ptr<SetTree> c);
    static std::shared_ptr<SetTree> make_and(std::vector<std::shared_ptr<SetTree>> cs);
    static std::shared_ptr<SetTree> make_or(std::vector<std::shared_ptr<SetTree>> cs);
};

/// A constructible measurable set of facts: per relation, a Boolean tree.
/// Relations absent from the map contribute the empty set.
struct FactSetExpr {
    std::map<std::string, std::shared_ptr<SetTree>> per_relation;

    /// The whole fact space of `schema`.
    static FactSetExpr full(const Schema& schema);
    /// The empty set.
    static FactSetExpr empty() { return {}; }
    /// All facts of one relation satisfying `tree`.
    static FactSetExpr of_relation(const std::string& r, std::shared_ptr<SetTree> tree);
    /// The singleton {fact}.
    static FactSetExpr singleton(const Fact& fact);
};

/// Validates positions and domain agreement of every atom against the schema.
void type_check(const FactSetExpr& set, const Schema& schema);

/// Characteristic function of the denoted set.
bool contains(const FactSetExpr& set, const Schema& schema, const Fact& fact);

/// #_D(F): sum of multiplicities of facts of `instance` inside `set`.
std::uint64_t count_in_set(const BagInstance& instance, const FactSetExpr& set,
                           const Schema& schema);

/// Conservative disjointness test for two set expressions under `schema`.
/// Decides by exhaustive enumeration when every touched relation's fact space
/// is finite and small, otherwise by interval-overlap analysis of rectangle
/// (conjunction-only) trees.  Throws PartitionOverlap if it cannot decide.
bool provably_disjoint(const FactSetExpr& a, const FactSetExpr& b, const Schema& schema);

/// Stable textual form used for tie-breaking and serialization tests.
std::string to_canonical_string(const FactSetExpr& set);

}  // namespace ppdb
