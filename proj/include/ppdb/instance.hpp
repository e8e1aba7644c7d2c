#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ppdb/error.hpp"
#include "ppdb/schema.hpp"
#include "ppdb/value.hpp"

namespace ppdb {

/// One fact R(a1, ..., ak).  Facts are totally ordered by relation name,
/// then lexicographically on the tuple, so canonical forms are unique.
struct Fact {
    std::string relation;
    std::vector<Value> tuple;

    Fact() = default;
    Fact(std::string rel, std::vector<Value> t) : relation(std::move(rel)), tuple(std::move(t)) {
        for (const auto& v : tuple)
            if (auto* d = std::get_if<double>(&v); d && std::isnan(*d))
                throw Error(ErrorCode::DomainMismatch, "NaN is not a valid fact component");
    }

    friend std::strong_ordering operator<=>(const Fact& a, const Fact& b) {
        if (auto c = a.relation.compare(b.relation) <=> 0; c != 0) return c;
        if (auto c = a.tuple.size() <=> b.tuple.size(); c != 0) return c;
        for (std::size_t i = 0; i < a.tuple.size(); ++i)
            if (auto c = compare_values(a.tuple[i], b.tuple[i]); c != 0) return c;
        return std::strong_ordering::equal;
    }
    friend bool operator==(const Fact& a, const Fact& b) { return (a <=> b) == 0; }

    std::string to_string() const;
};

/// A finite bag of facts in the multiplicity representation.  Facts with
/// multiplicity 0 are never stored.  Value type: all mutation goes through
/// insert/remove, and the ordered map doubles as the canonical order.
class BagInstance {
public:
    using Map = std::map<Fact, std::uint64_t>;

    BagInstance() = default;

    /// Adds `count` occurrences of `fact`.  Overflow throws.
    void insert(const Fact& fact, std::uint64_t count = 1);

    /// Removes up to `count` occurrences.
    void remove(const Fact& fact, std::uint64_t count = 1);

    /// #_D(f); 0 for absent facts.
    std::uint64_t multiplicity(const Fact& fact) const;

    /// |D| = sum of multiplicities.  Overflow throws.
    std::uint64_t cardinality() const;

    bool empty() const { return mult_.empty(); }
    std::size_t support_size() const { return mult_.size(); }
    const Map& entries() const { return mult_; }

    /// The quotient-view representative: sorted (fact, multiplicity) pairs.
    /// Two bags are equal iff their canonical forms are identical.
    std::vector<std::pair<Fact, std::uint64_t>> canonicalize() const;

    /// Multiplicity-1 copy of the support.
    BagInstance support() const;

    /// Restriction to one relation.
    BagInstance restrict_to(const std::string& relation) const;

    friend bool operator==(const BagInstance& a, const BagInstance& b) {
        return a.mult_ == b.mult_;
    }

    /// True if the bag is a set (all multiplicities <= 1).
    bool is_set() const;

private:
    Map mult_;
};

/// Checked multiply/add for multiplicities.
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);

}  // namespace ppdb
