#include "ppdb/algebra.hpp"

#include <algorithm>
#include <set>

#include "ppdb/aggregates.hpp"
#include "ppdb/datalog.hpp"

namespace ppdb {

namespace {

QueryPtr node(QueryAst::Kind kind, std::vector<QueryPtr> children = {}) {
    auto q = std::make_shared<QueryAst>();
    q->kind = kind;
    q->children = std::move(children);
    return q;
}

}  // namespace

QueryPtr q_empty(std::string relation) {
    auto q = node(QueryAst::Kind::EmptyConst);
    q->relation = std::move(relation);
    return q;
}
QueryPtr q_singleton(Fact f) {
    auto q = node(QueryAst::Kind::SingletonConst);
    q->fact = std::move(f);
    return q;
}
QueryPtr q_extract(std::string relation) {
    auto q = node(QueryAst::Kind::Extract);
    q->relation = std::move(relation);
    return q;
}
QueryPtr q_rename(QueryPtr child, std::string from, std::string to) {
    auto q = node(QueryAst::Kind::Rename, {std::move(child)});
    q->rename_from = std::move(from);
    q->rename_to = std::move(to);
    return q;
}
QueryPtr q_additive_union(QueryPtr l, QueryPtr r) {
    return node(QueryAst::Kind::AdditiveUnion, {std::move(l), std::move(r)});
}
QueryPtr q_difference(QueryPtr l, QueryPtr r) {
    return node(QueryAst::Kind::Difference, {std::move(l), std::move(r)});
}
QueryPtr q_min_intersect(QueryPtr l, QueryPtr r) {
    return node(QueryAst::Kind::MinIntersect, {std::move(l), std::move(r)});
}
QueryPtr q_max_union(QueryPtr l, QueryPtr r) {
    return node(QueryAst::Kind::MaxUnion, {std::move(l), std::move(r)});
}
QueryPtr q_dedup(QueryPtr child) { return node(QueryAst::Kind::Dedup, {std::move(child)}); }
QueryPtr q_select(QueryPtr child, std::shared_ptr<SetTree> predicate) {
    auto q = node(QueryAst::Kind::Select, {std::move(child)});
    q->predicate = std::move(predicate);
    return q;
}
QueryPtr q_project(QueryPtr child, std::vector<std::string> attrs) {
    auto q = node(QueryAst::Kind::Project, {std::move(child)});
    q->attrs = std::move(attrs);
    return q;
}
QueryPtr q_cross(QueryPtr l, QueryPtr r) {
    return node(QueryAst::Kind::CrossProduct, {std::move(l), std::move(r)});
}
QueryPtr q_join(QueryPtr l, QueryPtr r) {
    return node(QueryAst::Kind::NaturalJoin, {std::move(l), std::move(r)});
}
QueryPtr q_aggregate(QueryPtr child, std::string agg, std::string attr) {
    auto q = node(QueryAst::Kind::AggregateSimple, {std::move(child)});
    q->agg_name = std::move(agg);
    q->agg_attr = std::move(attr);
    return q;
}
QueryPtr q_group_aggregate(QueryPtr child, std::vector<std::string> group_attrs,
                           std::string agg, std::string attr) {
    auto q = node(QueryAst::Kind::AggregateGroup, {std::move(child)});
    q->attrs = std::move(group_attrs);
    q->agg_name = std::move(agg);
    q->agg_attr = std::move(attr);
    return q;
}
QueryPtr q_datalog(std::shared_ptr<DatalogProgram> program) {
    auto q = node(QueryAst::Kind::Datalog);
    q->program = std::move(program);
    return q;
}

bool RelType::doms_equal(const RelType& o) const {
    if (doms.size() != o.doms.size()) return false;
    for (std::size_t i = 0; i < doms.size(); ++i)
        if (!(doms[i] == o.doms[i])) return false;
    return true;
}

namespace {

RelType rel_type_of(const Schema& s, const std::string& rel) {
    RelType t;
    t.name = rel;
    t.attrs = s.type_of(rel);
    t.doms = s.relation_domains(rel);
    return t;
}

std::size_t attr_pos(const RelType& t, const std::string& attr) {
    auto it = std::find(t.attrs.begin(), t.attrs.end(), attr);
    if (it == t.attrs.end())
        throw Error(ErrorCode::TypeMismatch,
                    "attribute " + attr + " not in type of " + t.name);
    return (std::size_t)(it - t.attrs.begin());
}

}  // namespace

RelType infer_rel(const QueryAst& q, const Schema& input) {
    using K = QueryAst::Kind;
    switch (q.kind) {
        case K::EmptyConst:
        case K::Extract:
            return rel_type_of(input, q.relation);
        case K::SingletonConst: {
            RelType t = rel_type_of(input, q.fact.relation);
            if (!fact_in_domain(input, q.fact.relation, q.fact.tuple))
                throw Error(ErrorCode::TypeMismatch,
                            "singleton fact outside the fact space: " + q.fact.to_string());
            return t;
        }
        case K::Rename: {
            RelType t = infer_rel(*q.children[0], input);
            auto it = std::find(t.attrs.begin(), t.attrs.end(), q.rename_from);
            if (it == t.attrs.end())
                throw Error(ErrorCode::TypeMismatch,
                            "rename: " + q.rename_from + " does not appear in the type");
            if (std::find(t.attrs.begin(), t.attrs.end(), q.rename_to) != t.attrs.end())
                throw Error(ErrorCode::TypeMismatch,
                            "rename: " + q.rename_to + " already appears in the type");
            *it = q.rename_to;
            return t;
        }
        case K::AdditiveUnion:
        case K::Difference:
        case K::MinIntersect:
        case K::MaxUnion: {
            RelType l = infer_rel(*q.children[0], input);
            RelType r = infer_rel(*q.children[1], input);
            if (!l.same_type(r))
                throw Error(ErrorCode::TypeMismatch,
                            "union-family operands must be of the same type");
            return l;  // output keeps the left operand's relation name
        }
        case K::Dedup:
        case K::Select: {
            RelType t = infer_rel(*q.children[0], input);
            return t;
        }
        case K::Project: {
            RelType t = infer_rel(*q.children[0], input);
            std::set<std::string> seen;
            RelType out;
            out.name = t.name;
            for (const auto& a : q.attrs) {
                if (!seen.insert(a).second)
                    throw Error(ErrorCode::TypeMismatch, "project: duplicate attribute " + a);
                std::size_t p = attr_pos(t, a);
                out.attrs.push_back(a);
                out.doms.push_back(t.doms[p]);
            }
            return out;
        }
        case K::CrossProduct: {
            RelType l = infer_rel(*q.children[0], input);
            RelType r = infer_rel(*q.children[1], input);
            for (const auto& a : r.attrs)
                if (std::find(l.attrs.begin(), l.attrs.end(), a) != l.attrs.end())
                    throw Error(ErrorCode::TypeMismatch,
                                "cross product: attribute " + a + " occurs on both sides");
            RelType out = l;
            out.attrs.insert(out.attrs.end(), r.attrs.begin(), r.attrs.end());
            out.doms.insert(out.doms.end(), r.doms.begin(), r.doms.end());
            return out;
        }
        case K::NaturalJoin: {
            RelType l = infer_rel(*q.children[0], input);
            RelType r = infer_rel(*q.children[1], input);
            RelType out = l;
            for (std::size_t i = 0; i < r.attrs.size(); ++i) {
                auto it = std::find(l.attrs.begin(), l.attrs.end(), r.attrs[i]);
                if (it != l.attrs.end()) {
                    if (!(l.doms[it - l.attrs.begin()] == r.doms[i]))
                        throw Error(ErrorCode::TypeMismatch,
                                    "join: shared attribute " + r.attrs[i] +
                                        " has differing domains");
                } else {
                    out.attrs.push_back(r.attrs[i]);
                    out.doms.push_back(r.doms[i]);
                }
            }
            return out;
        }
        case K::AggregateSimple: {
            RelType t = infer_rel(*q.children[0], input);
            if (t.attrs.size() != 1)
                throw Error(ErrorCode::TypeMismatch,
                            "simple aggregation requires a unary input (project first)");
            if (t.attrs[0] != q.agg_attr)
                throw Error(ErrorCode::TypeMismatch,
                            "aggregation attribute " + q.agg_attr + " is not the child's attribute");
            RelType out;
            out.name = t.name;
            out.attrs = {q.agg_attr};
            out.doms = {aggregator_output_domain(q.agg_name, t.doms[0])};
            return out;
        }
        case K::AggregateGroup: {
            RelType t = infer_rel(*q.children[0], input);
            RelType out;
            out.name = t.name;
            std::set<std::string> seen;
            for (const auto& a : q.attrs) {
                if (a == q.agg_attr || !seen.insert(a).second)
                    throw Error(ErrorCode::TypeMismatch,
                                "grouping attributes must be distinct from each other "
                                "and from the aggregate attribute");
                std::size_t p = attr_pos(t, a);
                out.attrs.push_back(a);
                out.doms.push_back(t.doms[p]);
            }
            std::size_t p = attr_pos(t, q.agg_attr);
            out.attrs.push_back(q.agg_attr);
            out.doms.push_back(aggregator_output_domain(q.agg_name, t.doms[p]));
            return out;
        }
        case K::Datalog: {
            Schema out = datalog_output_schema(*q.program, input);
            return rel_type_of(out, q.program->output);
        }
    }
    throw Error(ErrorCode::TypeMismatch, "unknown query node");
}

Schema infer_schema(const QueryAst& q, const Schema& input) {
    RelType t = infer_rel(q, input);
    Schema out;
    std::vector<std::string> type;
    for (std::size_t i = 0; i < t.attrs.size(); ++i) {
        out.attributes[t.attrs[i]] = t.doms[i];
        type.push_back(t.attrs[i]);
    }
    out.relations[t.name] = type;
    return out;
}

namespace {

// Rebuilds a child's output bag under a new relation name.
BagInstance rekey(const BagInstance& in, const std::string& name) {
    BagInstance out;
    for (const auto& [f, m] : in.entries()) {
        if (f.relation == name) out.insert(f, m);
        else out.insert(Fact(name, f.tuple), m);
    }
    return out;
}

// A schema holding exactly one relation, used to evaluate selection
// predicates against a child's inferred type.
Schema schema_of(const RelType& t) {
    Schema s;
    std::vector<std::string> type;
    for (std::size_t i = 0; i < t.attrs.size(); ++i) {
        s.attributes[t.attrs[i]] = t.doms[i];
        type.push_back(t.attrs[i]);
    }
    s.relations[t.name] = type;
    return s;
}

}  // namespace

BagInstance eval(const QueryAst& q, const Schema& input, const BagInstance& instance) {
    using K = QueryAst::Kind;
    RelType out_type = infer_rel(q, input);
    switch (q.kind) {
        case K::EmptyConst:
            return {};
        case K::SingletonConst: {
            BagInstance out;
            out.insert(q.fact, 1);
            return out;
        }
        case K::Extract:
            return instance.restrict_to(q.relation);
        case K::Rename:
            // facts are positional; only the schema changes
            return eval(*q.children[0], input, instance);
        case K::AdditiveUnion:
        case K::Difference:
        case K::MinIntersect:
        case K::MaxUnion: {
            BagInstance l = rekey(eval(*q.children[0], input, instance), out_type.name);
            BagInstance r = rekey(eval(*q.children[1], input, instance), out_type.name);
            BagInstance out;
            auto visit = [&](const Fact& f) {
                std::uint64_t a = l.multiplicity(f), b = r.multiplicity(f);
                std::uint64_t m = 0;
                switch (q.kind) {
                    case K::AdditiveUnion: m = checked_add(a, b); break;
                    case K::Difference: m = a > b ? a - b : 0; break;
                    case K::MinIntersect: m = std::min(a, b); break;
                    case K::MaxUnion: m = std::max(a, b); break;
                    default: break;
                }
                if (m) out.insert(f, m);
            };
            for (const auto& [f, m] : l.entries()) visit(f);
            for (const auto& [f, m] : r.entries())
                if (l.multiplicity(f) == 0) visit(f);
            return out;
        }
        case K::Dedup:
            return eval(*q.children[0], input, instance).support();
        case K::Select: {
            RelType child_type = infer_rel(*q.children[0], input);
            Schema child_schema = schema_of(child_type);
            FactSetExpr pred = FactSetExpr::of_relation(child_type.name, q.predicate);
            type_check(pred, child_schema);
            BagInstance child = eval(*q.children[0], input, instance);
            BagInstance out;
            for (const auto& [f, m] : child.entries())
                if (contains(pred, child_schema, f)) out.insert(f, m);
            return out;
        }
        case K::Project: {
            RelType child_type = infer_rel(*q.children[0], input);
            std::vector<std::size_t> pos;
            for (const auto& a : q.attrs) pos.push_back(attr_pos(child_type, a));
            BagInstance child = eval(*q.children[0], input, instance);
            BagInstance out;
            for (const auto& [f, m] : child.entries()) {
                std::vector<Value> tuple;
                for (auto p : pos) tuple.push_back(f.tuple[p]);
                out.insert(Fact(out_type.name, tuple), m);
            }
            return out;
        }
        case K::CrossProduct: {
            BagInstance l = eval(*q.children[0], input, instance);
            BagInstance r = eval(*q.children[1], input, instance);
            BagInstance out;
            for (const auto& [fl, ml] : l.entries()) {
                for (const auto& [fr, mr] : r.entries()) {
                    std::vector<Value> tuple = fl.tuple;
                    tuple.insert(tuple.end(), fr.tuple.begin(), fr.tuple.end());
                    out.insert(Fact(out_type.name, tuple), checked_mul(ml, mr));
                }
            }
            return out;
        }
        case K::NaturalJoin: {
            RelType lt = infer_rel(*q.children[0], input);
            RelType rt = infer_rel(*q.children[1], input);
            // positions of shared attributes on each side, and of the
            // right-only attributes appended to the output
            std::vector<std::pair<std::size_t, std::size_t>> shared;
            std::vector<std::size_t> right_only;
            for (std::size_t i = 0; i < rt.attrs.size(); ++i) {
                auto it = std::find(lt.attrs.begin(), lt.attrs.end(), rt.attrs[i]);
                if (it != lt.attrs.end())
                    shared.emplace_back((std::size_t)(it - lt.attrs.begin()), i);
                else
                    right_only.push_back(i);
            }
            BagInstance l = eval(*q.children[0], input, instance);
            BagInstance r = eval(*q.children[1], input, instance);
            BagInstance out;
            for (const auto& [fl, ml] : l.entries()) {
                for (const auto& [fr, mr] : r.entries()) {
                    bool match = true;
                    for (auto [pl, pr] : shared)
                        if (compare_values(fl.tuple[pl], fr.tuple[pr]) != 0) {
                            match = false;
                            break;
                        }
                    if (!match) continue;
                    std::vector<Value> tuple = fl.tuple;
                    for (auto p : right_only) tuple.push_back(fr.tuple[p]);
                    out.insert(Fact(out_type.name, tuple), checked_mul(ml, mr));
                }
            }
            return out;
        }
        case K::AggregateSimple: {
            RelType child_type = infer_rel(*q.children[0], input);
            Schema child_schema = schema_of(child_type);
            BagInstance child = rekey(eval(*q.children[0], input, instance), child_type.name);
            return aggregate_query(child_schema, child_type.name, q.agg_name, child);
        }
        case K::AggregateGroup: {
            RelType child_type = infer_rel(*q.children[0], input);
            Schema child_schema = schema_of(child_type);
            BagInstance child = rekey(eval(*q.children[0], input, instance), child_type.name);
            // output tuples are (group key in q.attrs order, aggregate value),
            // matching the inferred output type
            return group_aggregate(child_schema, child_type.name, q.attrs,
                                   q.agg_name, q.agg_attr, child);
        }
        case K::Datalog:
            return eval_datalog(*q.program, input, instance);
    }
    throw Error(ErrorCode::TypeMismatch, "unknown query node");
}

Schema infer_view_schema(const View& v, const Schema& input) {
    Schema out;
    std::set<std::string> names;
    for (const auto& q : v.queries) {
        RelType t = infer_rel(*q, input);
        if (!names.insert(t.name).second)
            throw Error(ErrorCode::TypeMismatch,
                        "view: duplicate output relation " + t.name);
        for (std::size_t i = 0; i < t.attrs.size(); ++i) {
            auto it = out.attributes.find(t.attrs[i]);
            if (it != out.attributes.end() && !(it->second == t.doms[i]))
                throw Error(ErrorCode::TypeMismatch,
                            "view: attribute " + t.attrs[i] + " has conflicting domains");
            out.attributes[t.attrs[i]] = t.doms[i];
        }
        out.relations[t.name] = t.attrs;
    }
    return out;
}

BagInstance eval_view(const View& v, const Schema& input, const BagInstance& instance) {
    infer_view_schema(v, input);  // validates distinctness
    BagInstance out;
    for (const auto& q : v.queries) {
        RelType t = infer_rel(*q, input);
        BagInstance part = rekey(eval(*q, input, instance), t.name);
        for (const auto& [f, m] : part.entries()) out.insert(f, m);
    }
    return out;
}

}  // namespace ppdb
