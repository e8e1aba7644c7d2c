#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppdb/error.hpp"
#include "ppdb/value.hpp"

namespace ppdb {

enum class DomainKind { IntegerAll, IntegerRange, RealInterval, Categorical };

/// An attribute domain, one of:
///   IntegerAll                 -- all of Z
///   IntegerRange(lo, hi)       -- integers in [lo, hi]
///   RealInterval(lo, hi)       -- reals in [lo, hi]; endpoints may be +-inf
///   Categorical(values)        -- finite list of strings; the declared order
///                                 is the domain order (MIN/MAX use it)
struct AttributeDomain {
    DomainKind kind = DomainKind::IntegerAll;
    std::int64_t int_lo = 0, int_hi = 0;        // IntegerRange
    double real_lo = 0.0, real_hi = 0.0;        // RealInterval
    std::vector<std::string> categories;        // Categorical

    static AttributeDomain integer_all() { return {}; }
    static AttributeDomain integer_range(std::int64_t lo, std::int64_t hi) {
        AttributeDomain d;
        d.kind = DomainKind::IntegerRange;
        d.int_lo = lo;
        d.int_hi = hi;
        return d;
    }
    static AttributeDomain real_interval(double lo, double hi) {
        AttributeDomain d;
        d.kind = DomainKind::RealInterval;
        d.real_lo = lo;
        d.real_hi = hi;
        return d;
    }
    static AttributeDomain categorical(std::vector<std::string> values) {
        AttributeDomain d;
        d.kind = DomainKind::Categorical;
        d.categories = std::move(values);
        return d;
    }

    bool operator==(const AttributeDomain& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case DomainKind::IntegerAll: return true;
            case DomainKind::IntegerRange: return int_lo == o.int_lo && int_hi == o.int_hi;
            case DomainKind::RealInterval: return real_lo == o.real_lo && real_hi == o.real_hi;
            case DomainKind::Categorical: return categories == o.categories;
        }
        return false;
    }

    /// Membership test for a Value in this domain.
    bool admits(const Value& v) const;

    /// Index of a categorical value in the declared order, if present.
    std::optional<std::size_t> category_index(const std::string& s) const;

    /// Domain order on two admissible values (categoricals by declared order).
    std::strong_ordering order(const Value& a, const Value& b) const;

    /// Number of elements for finite domains; nullopt if infinite.
    std::optional<std::uint64_t> finite_size() const;

    /// Enumerates all values of a finite domain in domain order.
    std::vector<Value> enumerate() const;
};

struct SchemaError {
    ErrorCode code;
    std::string detail;
};

/// A named-perspective schema: attribute declarations plus relation types.
struct Schema {
    std::map<std::string, AttributeDomain> attributes;
    std::map<std::string, std::vector<std::string>> relations;

    bool operator==(const Schema&) const = default;

    std::size_t arity(const std::string& relation) const;
    const std::vector<std::string>& type_of(const std::string& relation) const;
    const AttributeDomain& domain_of(const std::string& attribute) const;
    bool has_relation(const std::string& r) const { return relations.count(r) > 0; }

    /// Domains of a relation's attributes in type order.
    std::vector<AttributeDomain> relation_domains(const std::string& relation) const;
};

/// Checks every Schema invariant; returns all violations (empty == valid).
std::vector<SchemaError> validate_schema(const Schema& schema);

/// Throws the first violation as Error.
void validate_schema_or_throw(const Schema& schema);

/// True iff `tuple` is an admissible fact of `relation`: correct arity and
/// every component in its attribute domain.  Throws UnknownRelation.
bool fact_in_domain(const Schema& schema, const std::string& relation,
                    const std::vector<Value>& tuple);

}  // namespace ppdb
