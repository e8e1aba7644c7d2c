#pragma once

#include <string>
#include <variant>

#include "ppdb/inference.hpp"
#include "ppdb/pdb.hpp"
#include "ppdb/schema.hpp"
#include "ppdb/set_expr.hpp"

namespace ppdb {

// Schema file:
//   {"attributes": {"A": {"kind":"int_range","lo":0,"hi":9}, ...},
//    "relations": {"R": ["A","B"]}}
// Kinds: int_all | int_range | real_interval (lo/hi may be "-inf"/"inf") |
// categorical (with "values").
Schema schema_from_json(const std::string& json_text);
std::string schema_to_json(const Schema& schema);

// Instance data: JSON lines, one fact per line as ["R",[v,...]] or
// ["R",[v,...],multiplicity].
BagInstance instance_from_json_lines(const std::string& text, const Schema& schema);
std::string instance_to_json_lines(const BagInstance& instance);

// CSV ingestion for one relation: columns in type order, repeated rows
// accumulate multiplicity.
void instance_add_csv(BagInstance& instance, const Schema& schema,
                      const std::string& relation, const std::string& csv_text);

// Canonical JSON array [["R",[v,...],m], ...] used by `--format json`.
std::string instance_to_json(const BagInstance& instance);

// Event/set file: {"R": {"op":"and","args":[{"atom":"interval","attr":0,
// "lo":"0","hi":"1","lo_closed":true,"hi_closed":false}, ...]}}
FactSetExpr set_expr_from_json(const std::string& json_text);
std::string set_expr_to_json(const FactSetExpr& set);

// Counting event: {"set": {...}, "cmp": "eq"|"ge"|"le", "n": 1}
CountingEvent event_from_json(const std::string& json_text);

// Partition: {"cells": [<set-expr>, ...]}
Partition partition_from_json(const std::string& json_text);

// PDB file, either
//   {"kind":"finite","worlds":[{"prob":"1/6","facts":[["R",[1,2],1],...]},...]}
// or
//   {"kind":"point_process","relations":{"R":{"count":{...},"tuple":[...]}}}
using PdbFile = std::variant<FinitePdb, PointProcessPdb>;
PdbFile pdb_from_json(const std::string& json_text, const Schema& schema);
std::string finite_pdb_to_json(const FinitePdb& pdb);

std::string estimate_to_json(const Estimate& e);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ppdb
