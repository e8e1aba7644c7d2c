#pragma once

#include <map>
#include <string>
#include <vector>

#include "ppdb/instance.hpp"
#include "ppdb/schema.hpp"

namespace ppdb {

/// A term in a datalog atom: variable or constant.
struct DlTerm {
    bool is_var = false;
    std::string var;
    Value constant;

    static DlTerm variable(std::string name) {
        DlTerm t;
        t.is_var = true;
        t.var = std::move(name);
        return t;
    }
    static DlTerm value(Value v) {
        DlTerm t;
        t.constant = std::move(v);
        return t;
    }
};

struct DlAtom {
    std::string relation;
    std::vector<DlTerm> terms;
};

struct DlRule {
    DlAtom head;
    std::vector<DlAtom> body;
};

/// A positive datalog program under set semantics.  EDB relations come from
/// the input schema; IDB relations are the rule heads; `output` designates
/// the result relation.
struct DatalogProgram {
    std::vector<DlRule> rules;
    std::string output;
};

/// Safety + typing check; returns the inferred per-position domains of every
/// IDB relation.  Throws UnsafeRule / TypeMismatch / UnknownRelation.
std::map<std::string, std::vector<AttributeDomain>> check_program(const DatalogProgram& program,
                                                                  const Schema& edb);

/// Schema of the program's output relation (generated attribute names).
Schema datalog_output_schema(const DatalogProgram& program, const Schema& edb);

/// Least fixpoint, restricted to the output relation; all multiplicities 1.
/// Semi-naive evaluation.
BagInstance eval_datalog(const DatalogProgram& program, const Schema& edb,
                         const BagInstance& instance);

/// Naive evaluation; same output as eval_datalog (kept for cross-checking).
BagInstance eval_datalog_naive(const DatalogProgram& program, const Schema& edb,
                               const BagInstance& instance);

/// n-th inflationary stage: n rounds of the immediate-consequence operator
/// starting from the empty IDB; restricted to the output relation.
BagInstance eval_stage(const DatalogProgram& program, const Schema& edb,
                       const BagInstance& instance, std::size_t n);

}  // namespace ppdb
