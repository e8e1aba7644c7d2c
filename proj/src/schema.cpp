#include "ppdb/schema.hpp"

#include <algorithm>
#include <set>

namespace ppdb {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DuplicateAttributeInType: return "DuplicateAttributeInType";
        case ErrorCode::UnknownAttribute: return "UnknownAttribute";
        case ErrorCode::UnknownRelation: return "UnknownRelation";
        case ErrorCode::NameClash: return "NameClash";
        case ErrorCode::EmptyCategorical: return "EmptyCategorical";
        case ErrorCode::BadRange: return "BadRange";
        case ErrorCode::BadAttributePosition: return "BadAttributePosition";
        case ErrorCode::DomainMismatch: return "DomainMismatch";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::TypeMismatch: return "TypeMismatch";
        case ErrorCode::MultiplicityOverflow: return "MultiplicityOverflow";
        case ErrorCode::EmptyBagUndefined: return "EmptyBagUndefined";
        case ErrorCode::UnsafeRule: return "UnsafeRule";
        case ErrorCode::PartitionOverlap: return "PartitionOverlap";
        case ErrorCode::ZeroProbabilityCondition: return "ZeroProbabilityCondition";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidPdb: return "InvalidPdb";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

bool AttributeDomain::admits(const Value& v) const {
    switch (kind) {
        case DomainKind::IntegerAll:
            return std::holds_alternative<std::int64_t>(v);
        case DomainKind::IntegerRange: {
            auto* i = std::get_if<std::int64_t>(&v);
            return i && *i >= int_lo && *i <= int_hi;
        }
        case DomainKind::RealInterval: {
            auto* r = std::get_if<double>(&v);
            // stored reals are always finite; +-inf appears only as endpoints
            return r && std::isfinite(*r) && *r >= real_lo && *r <= real_hi;
        }
        case DomainKind::Categorical: {
            auto* s = std::get_if<std::string>(&v);
            return s && category_index(*s).has_value();
        }
    }
    return false;
}

std::optional<std::size_t> AttributeDomain::category_index(const std::string& s) const {
    auto it = std::find(categories.begin(), categories.end(), s);
    if (it == categories.end()) return std::nullopt;
    return (std::size_t)(it - categories.begin());
}

std::strong_ordering AttributeDomain::order(const Value& a, const Value& b) const {
    if (kind == DomainKind::Categorical) {
        auto ia = category_index(std::get<std::string>(a));
        auto ib = category_index(std::get<std::string>(b));
        if (!ia || !ib) throw Error(ErrorCode::DomainMismatch, "value outside categorical domain");
        return *ia <=> *ib;
    }
    return compare_values(a, b);
}

std::optional<std::uint64_t> AttributeDomain::finite_size() const {
    switch (kind) {
        case DomainKind::IntegerAll: return std::nullopt;
        case DomainKind::IntegerRange: return (std::uint64_t)(int_hi - int_lo) + 1;
        case DomainKind::RealInterval:
            return real_lo == real_hi ? std::optional<std::uint64_t>(1) : std::nullopt;
        case DomainKind::Categorical: return categories.size();
    }
    return std::nullopt;
}

std::vector<Value> AttributeDomain::enumerate() const {
    std::vector<Value> out;
    switch (kind) {
        case DomainKind::IntegerRange:
            for (std::int64_t i = int_lo; i <= int_hi; ++i) out.emplace_back(i);
            break;
        case DomainKind::RealInterval:
            if (real_lo == real_hi) out.emplace_back(real_lo);
            else throw Error(ErrorCode::DomainMismatch, "cannot enumerate a continuous interval");
            break;
        case DomainKind::Categorical:
            for (const auto& c : categories) out.emplace_back(c);
            break;
        case DomainKind::IntegerAll:
            throw Error(ErrorCode::DomainMismatch, "cannot enumerate an unbounded domain");
    }
    return out;
}

std::size_t Schema::arity(const std::string& relation) const {
    return type_of(relation).size();
}

const std::vector<std::string>& Schema::type_of(const std::string& relation) const {
    auto it = relations.find(relation);
    if (it == relations.end())
        throw Error(ErrorCode::UnknownRelation, relation);
    return it->second;
}

const AttributeDomain& Schema::domain_of(const std::string& attribute) const {
    auto it = attributes.find(attribute);
    if (it == attributes.end())
        throw Error(ErrorCode::UnknownAttribute, attribute);
    return it->second;
}

std::vector<AttributeDomain> Schema::relation_domains(const std::string& relation) const {
    std::vector<AttributeDomain> out;
    for (const auto& a : type_of(relation)) out.push_back(domain_of(a));
    return out;
}

std::vector<SchemaError> validate_schema(const Schema& schema) {
    std::vector<SchemaError> errs;
    for (const auto& [name, dom] : schema.attributes) {
        if (schema.relations.count(name))
            errs.push_back({ErrorCode::NameClash, name});
        switch (dom.kind) {
            case DomainKind::IntegerRange:
                if (dom.int_lo > dom.int_hi)
                    errs.push_back({ErrorCode::BadRange, name});
                break;
            case DomainKind::RealInterval:
                if (!(dom.real_lo <= dom.real_hi))
                    errs.push_back({ErrorCode::BadRange, name});
                break;
            case DomainKind::Categorical: {
                if (dom.categories.empty())
                    errs.push_back({ErrorCode::EmptyCategorical, name});
                std::set<std::string> seen(dom.categories.begin(), dom.categories.end());
                if (seen.size() != dom.categories.size())
                    errs.push_back({ErrorCode::BadRange, name + ": duplicate category"});
                break;
            }
            case DomainKind::IntegerAll:
                break;
        }
    }
    for (const auto& [rel, type] : schema.relations) {
        std::set<std::string> seen;
        for (const auto& attr : type) {
            if (!schema.attributes.count(attr))
                errs.push_back({ErrorCode::UnknownAttribute, rel + ": " + attr});
            if (!seen.insert(attr).second)
                errs.push_back({ErrorCode::DuplicateAttributeInType, rel + ": " + attr});
        }
    }
    return errs;
}

void validate_schema_or_throw(const Schema& schema) {
    auto errs = validate_schema(schema);
    if (!errs.empty()) throw Error(errs[0].code, errs[0].detail);
}

bool fact_in_domain(const Schema& schema, const std::string& relation,
                    const std::vector<Value>& tuple) {
    const auto& type = schema.type_of(relation);
    if (tuple.size() != type.size()) return false;
    for (std::size_t i = 0; i < type.size(); ++i)
        if (!schema.domain_of(type[i]).admits(tuple[i])) return false;
    return true;
}

}  // namespace ppdb
