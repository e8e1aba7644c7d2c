#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ppdb/instance.hpp"
#include "ppdb/schema.hpp"
#include "ppdb/set_expr.hpp"

namespace ppdb {

struct DatalogProgram;

/// A bag-algebra query tree.  Every node evaluates to a bag over a single
/// output relation (datalog nodes may produce several IDB relations but
/// expose only the designated output one).
struct QueryAst {
    enum class Kind {
        EmptyConst,     // empty bag typed like `relation`
        SingletonConst, // {fact}
        Extract,        // the R-facts of the input
        Rename,         // attribute rename A -> B
        AdditiveUnion,
        Difference,
        MinIntersect,
        MaxUnion,
        Dedup,
        Select,         // predicate over the child's output relation
        Project,
        CrossProduct,
        NaturalJoin,
        AggregateSimple,  // varpi_Phi over a unary child
        AggregateGroup,   // varpi_{A1..Ak,Phi(A)}
        Datalog,
    };

    Kind kind = Kind::EmptyConst;
    std::vector<std::shared_ptr<QueryAst>> children;

    std::string relation;                  // EmptyConst / Extract
    Fact fact;                             // SingletonConst
    std::string rename_from, rename_to;    // Rename
    std::shared_ptr<SetTree> predicate;    // Select
    std::vector<std::string> attrs;        // Project / AggregateGroup group attrs
    std::string agg_name, agg_attr;        // Aggregate*
    std::shared_ptr<DatalogProgram> program;  // Datalog
};

using QueryPtr = std::shared_ptr<QueryAst>;

QueryPtr q_empty(std::string relation);
QueryPtr q_singleton(Fact f);
QueryPtr q_extract(std::string relation);
QueryPtr q_rename(QueryPtr child, std::string from, std::string to);
QueryPtr q_additive_union(QueryPtr l, QueryPtr r);
QueryPtr q_difference(QueryPtr l, QueryPtr r);
QueryPtr q_min_intersect(QueryPtr l, QueryPtr r);
QueryPtr q_max_union(QueryPtr l, QueryPtr r);
QueryPtr q_dedup(QueryPtr child);
QueryPtr q_select(QueryPtr child, std::shared_ptr<SetTree> predicate);
QueryPtr q_project(QueryPtr child, std::vector<std::string> attrs);
QueryPtr q_cross(QueryPtr l, QueryPtr r);
QueryPtr q_join(QueryPtr l, QueryPtr r);
QueryPtr q_aggregate(QueryPtr child, std::string agg, std::string attr);
QueryPtr q_group_aggregate(QueryPtr child, std::vector<std::string> group_attrs,
                           std::string agg, std::string attr);
QueryPtr q_datalog(std::shared_ptr<DatalogProgram> program);

/// Output relation of a query: name, attribute list, attribute domains.
struct RelType {
    std::string name;
    std::vector<std::string> attrs;
    std::vector<AttributeDomain> doms;

    bool same_type(const RelType& o) const { return attrs == o.attrs && doms_equal(o); }
    bool doms_equal(const RelType& o) const;
};

/// Type inference for one node per the operator prerequisites; throws
/// TypeMismatch naming the violated prerequisite.
RelType infer_rel(const QueryAst& q, const Schema& input);

/// Output schema wrapping infer_rel's relation into a one-relation schema.
Schema infer_schema(const QueryAst& q, const Schema& input);

/// Evaluates the query on one instance (eager, node by node).
BagInstance eval(const QueryAst& q, const Schema& input, const BagInstance& instance);

/// A view: queries with pairwise-distinct output relations.
struct View {
    std::vector<QueryPtr> queries;
};

Schema infer_view_schema(const View& v, const Schema& input);
BagInstance eval_view(const View& v, const Schema& input, const BagInstance& instance);

}  // namespace ppdb
