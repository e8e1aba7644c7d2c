#pragma once

#include <string>

#include "ppdb/algebra.hpp"
#include "ppdb/datalog.hpp"
#include "ppdb/schema.hpp"

namespace ppdb {

/// Parses the query language:
///
///   empty(R) | one R(v,...) | R | rename(q, A->B) | dedup(q)
///   select(q, <pred>) | project(q, A1,...,Ak)
///   agg(q, SUM(A)) | agg(q, group A1,...,Ak, SUM(A))
///   q1 uplus q2 | q1 minus q2 | q1 minint q2 | q1 maxun q2 | q1 x q2 | q1 join q2
///
/// Binary operators are left-associative with equal precedence; parenthesize
/// to override.  Selection predicates:
///
///   A in [0,1) | A in {1,2} | A = 3 | A == B | A < B | and/or/not | true/false
///
/// Attribute names are resolved against the child's inferred output type, so
/// parsing needs the input schema.  Errors carry line:column and a caret line.
QueryPtr parse_query(const std::string& text, const Schema& schema);

/// One rule per line `Head(X,Y) :- Body(X,Z), Body2(Z,Y).`, `% comments`,
/// and a `#output Head` directive.  Uppercase-initial identifiers are
/// variables; numbers, quoted strings and lowercase identifiers are constants.
DatalogProgram parse_datalog(const std::string& text);

}  // namespace ppdb
