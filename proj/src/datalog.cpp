#include "ppdb/datalog.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace ppdb {

namespace {

bool domains_equal(const AttributeDomain& a, const AttributeDomain& b) { return a == b; }

AttributeDomain domain_for_constant(const Value& v) {
    switch (v.index()) {
        case 0: return AttributeDomain::integer_all();
        case 1:
            return AttributeDomain::real_interval(-std::numeric_limits<double>::infinity(),
                                                  std::numeric_limits<double>::infinity());
        default: return AttributeDomain::categorical({std::get<std::string>(v)});
    }
}

// Widening join of two domains for IDB typing; identical domains are kept,
// compatible kinds are widened, incompatible kinds are an error.
AttributeDomain join_domains(const AttributeDomain& a, const AttributeDomain& b) {
    if (a == b) return a;
    auto is_int = [](const AttributeDomain& d) {
        return d.kind == DomainKind::IntegerAll || d.kind == DomainKind::IntegerRange;
    };
    if (is_int(a) && is_int(b)) {
        if (a.kind == DomainKind::IntegerAll || b.kind == DomainKind::IntegerAll)
            return AttributeDomain::integer_all();
        return AttributeDomain::integer_range(std::min(a.int_lo, b.int_lo),
                                              std::max(a.int_hi, b.int_hi));
    }
    if (a.kind == DomainKind::RealInterval && b.kind == DomainKind::RealInterval)
        return AttributeDomain::real_interval(std::min(a.real_lo, b.real_lo),
                                              std::max(a.real_hi, b.real_hi));
    if (a.kind == DomainKind::Categorical && b.kind == DomainKind::Categorical) {
        auto merged = a.categories;
        for (const auto& c : b.categories)
            if (std::find(merged.begin(), merged.end(), c) == merged.end())
                merged.push_back(c);
        return AttributeDomain::categorical(merged);
    }
    throw Error(ErrorCode::TypeMismatch, "incompatible domains across datalog rules");
}

}  // namespace

std::map<std::string, std::vector<AttributeDomain>> check_program(const DatalogProgram& program,
                                                                  const Schema& edb) {
    std::set<std::string> idb_names;
    for (const auto& r : program.rules) idb_names.insert(r.head.relation);
    for (const auto& name : idb_names)
        if (edb.has_relation(name))
            throw Error(ErrorCode::NameClash, "IDB relation " + name + " shadows an EDB relation");
    // an output relation no rule produces denotes the empty IDB; only
    // datalog_output_schema needs it to be typed

    // safety + arity consistency
    std::map<std::string, std::size_t> idb_arity;
    for (const auto& r : program.rules) {
        std::set<std::string> body_vars;
        for (const auto& atom : r.body) {
            if (!edb.has_relation(atom.relation) && !idb_names.count(atom.relation))
                throw Error(ErrorCode::UnknownRelation, atom.relation);
            for (const auto& t : atom.terms)
                if (t.is_var) body_vars.insert(t.var);
        }
        for (const auto& t : r.head.terms)
            if (t.is_var && !body_vars.count(t.var))
                throw Error(ErrorCode::UnsafeRule,
                            "head variable " + t.var + " does not occur in the body");
        auto [it, fresh] = idb_arity.emplace(r.head.relation, r.head.terms.size());
        if (!fresh && it->second != r.head.terms.size())
            throw Error(ErrorCode::TypeMismatch,
                        "inconsistent arity for IDB relation " + r.head.relation);
    }

    // iterate domain inference to a fixpoint (IDB atoms in bodies may only
    // become typed once some rule for them has been processed)
    std::map<std::string, std::vector<AttributeDomain>> idb;
    for (const auto& [name, ar] : idb_arity)
        idb[name] = std::vector<AttributeDomain>(ar, AttributeDomain::integer_all());
    std::map<std::string, std::vector<bool>> typed;
    for (const auto& [name, ar] : idb_arity) typed[name] = std::vector<bool>(ar, false);

    auto atom_domains = [&](const DlAtom& atom) -> std::vector<AttributeDomain> {
        if (edb.has_relation(atom.relation)) {
            auto doms = edb.relation_domains(atom.relation);
            if (doms.size() != atom.terms.size())
                throw Error(ErrorCode::TypeMismatch,
                            "arity mismatch for " + atom.relation);
            return doms;
        }
        if (idb[atom.relation].size() != atom.terms.size())
            throw Error(ErrorCode::TypeMismatch, "arity mismatch for " + atom.relation);
        return idb[atom.relation];
    };

    for (int pass = 0; pass < (int)program.rules.size() + 2; ++pass) {
        for (const auto& r : program.rules) {
            std::map<std::string, AttributeDomain> var_dom;
            std::map<std::string, bool> var_typed;
            for (const auto& atom : r.body) {
                auto doms = atom_domains(atom);
                for (std::size_t i = 0; i < atom.terms.size(); ++i) {
                    const auto& t = atom.terms[i];
                    bool src_typed = edb.has_relation(atom.relation)
                                         ? true
                                         : typed[atom.relation][i];
                    if (t.is_var) {
                        if (!src_typed) continue;
                        auto it = var_dom.find(t.var);
                        if (it == var_dom.end()) {
                            var_dom.emplace(t.var, doms[i]);
                            var_typed[t.var] = true;
                        } else if (!domains_equal(it->second, doms[i])) {
                            it->second = join_domains(it->second, doms[i]);
                        }
                    }
                }
            }
            auto& head_doms = idb[r.head.relation];
            auto& head_typed = typed[r.head.relation];
            for (std::size_t i = 0; i < r.head.terms.size(); ++i) {
                const auto& t = r.head.terms[i];
                AttributeDomain d;
                bool have = false;
                if (t.is_var) {
                    auto it = var_dom.find(t.var);
                    if (it != var_dom.end()) {
                        d = it->second;
                        have = true;
                    }
                } else {
                    d = domain_for_constant(t.constant);
                    have = true;
                }
                if (!have) continue;
                if (!head_typed[i]) {
                    head_doms[i] = d;
                    head_typed[i] = true;
                } else if (!domains_equal(head_doms[i], d)) {
                    head_doms[i] = join_domains(head_doms[i], d);
                }
            }
        }
    }
    return idb;
}

Schema datalog_output_schema(const DatalogProgram& program, const Schema& edb) {
    if (edb.has_relation(program.output)) {
        Schema out;
        out.relations[program.output] = edb.type_of(program.output);
        for (const auto& a : edb.type_of(program.output))
            out.attributes[a] = edb.domain_of(a);
        return out;
    }
    auto idb = check_program(program, edb);
    auto it = idb.find(program.output);
    if (it == idb.end())
        throw Error(ErrorCode::UnknownRelation, "output relation " + program.output);
    Schema out;
    std::vector<std::string> type;
    for (std::size_t i = 0; i < it->second.size(); ++i) {
        std::string attr = program.output + "_" + std::to_string(i + 1);
        out.attributes[attr] = it->second[i];
        type.push_back(attr);
    }
    out.relations[program.output] = type;
    return out;
}

namespace {

// One matching pass of a single rule: extends `db` facts into new head facts.
// If `delta` is non-null, at least one body atom must match a delta fact
// (standard semi-naive restriction).
void apply_rule(const DlRule& rule, const std::set<Fact>& db, const std::set<Fact>* delta,
                std::set<Fact>& out) {
    struct Frame {
        std::size_t atom_idx;
        std::map<std::string, Value> binding;
        bool used_delta;
    };
    std::vector<Frame> stack;
    stack.push_back({0, {}, false});
    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        if (fr.atom_idx == rule.body.size()) {
            if (delta && !fr.used_delta) continue;
            std::vector<Value> tuple;
            for (const auto& t : rule.head.terms)
                tuple.push_back(t.is_var ? fr.binding.at(t.var) : t.constant);
            out.insert(Fact(rule.head.relation, tuple));
            continue;
        }
        const DlAtom& atom = rule.body[fr.atom_idx];
        for (const auto& f : db) {
            if (f.relation != atom.relation || f.tuple.size() != atom.terms.size()) continue;
            std::map<std::string, Value> b = fr.binding;
            bool ok = true;
            for (std::size_t i = 0; i < atom.terms.size(); ++i) {
                const auto& t = atom.terms[i];
                if (t.is_var) {
                    auto it = b.find(t.var);
                    if (it == b.end()) b.emplace(t.var, f.tuple[i]);
                    else if (compare_values(it->second, f.tuple[i]) != 0) { ok = false; break; }
                } else if (compare_values(t.constant, f.tuple[i]) != 0) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            bool used = fr.used_delta || (delta && delta->count(f) > 0);
            stack.push_back({fr.atom_idx + 1, std::move(b), used});
        }
    }
}

std::set<Fact> dedup_edb(const BagInstance& instance) {
    std::set<Fact> db;
    for (const auto& [f, m] : instance.entries()) db.insert(f);
    return db;
}

BagInstance restrict_output(const std::set<Fact>& db, const std::string& output) {
    BagInstance out;
    for (const auto& f : db)
        if (f.relation == output) out.insert(f, 1);
    return out;
}

}  // namespace

BagInstance eval_datalog(const DatalogProgram& program, const Schema& edb,
                         const BagInstance& instance) {
    check_program(program, edb);
    std::set<Fact> db = dedup_edb(instance);
    std::set<Fact> delta = db;
    bool first = true;
    while (!delta.empty()) {
        std::set<Fact> derived;
        for (const auto& rule : program.rules)
            apply_rule(rule, db, first ? nullptr : &delta, derived);
        first = false;
        std::set<Fact> fresh;
        for (const auto& f : derived)
            if (!db.count(f)) fresh.insert(f);
        for (const auto& f : fresh) db.insert(f);
        delta = std::move(fresh);
    }
    return restrict_output(db, program.output);
}

BagInstance eval_datalog_naive(const DatalogProgram& program, const Schema& edb,
                               const BagInstance& instance) {
    check_program(program, edb);
    std::set<Fact> db = dedup_edb(instance);
    while (true) {
        std::set<Fact> derived;
        for (const auto& rule : program.rules) apply_rule(rule, db, nullptr, derived);
        std::size_t before = db.size();
        db.insert(derived.begin(), derived.end());
        if (db.size() == before) break;
    }
    return restrict_output(db, program.output);
}

BagInstance eval_stage(const DatalogProgram& program, const Schema& edb,
                       const BagInstance& instance, std::size_t n) {
    check_program(program, edb);
    std::set<Fact> db = dedup_edb(instance);
    for (std::size_t i = 0; i < n; ++i) {
        std::set<Fact> derived;
        for (const auto& rule : program.rules) apply_rule(rule, db, nullptr, derived);
        db.insert(derived.begin(), derived.end());
    }
    return restrict_output(db, program.output);
}

}  // namespace ppdb
