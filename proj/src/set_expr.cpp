#include "ppdb/set_expr.hpp"

#include <algorithm>
#include <cmath>

namespace ppdb {

SetAtom SetAtom::interval(std::size_t attr, std::optional<Value> lo, std::optional<Value> hi,
                          bool lo_closed, bool hi_closed) {
    SetAtom a;
    a.kind = Kind::Interval;
    a.attr = attr;
    a.lo = std::move(lo);
    a.hi = std::move(hi);
    a.lo_closed = lo_closed;
    a.hi_closed = hi_closed;
    return a;
}

SetAtom SetAtom::equals(std::size_t attr, Value v) {
    SetAtom a;
    a.kind = Kind::Equals;
    a.attr = attr;
    a.value = std::move(v);
    return a;
}

SetAtom SetAtom::in_finite(std::size_t attr, std::vector<Value> vs) {
    SetAtom a;
    a.kind = Kind::InFinite;
    a.attr = attr;
    a.values = std::move(vs);
    return a;
}

SetAtom SetAtom::pair_equals(std::size_t i, std::size_t j) {
    SetAtom a;
    a.kind = Kind::PairEquals;
    a.attr = i;
    a.attr2 = j;
    return a;
}

SetAtom SetAtom::pair_less(std::size_t i, std::size_t j) {
    SetAtom a;
    a.kind = Kind::PairLess;
    a.attr = i;
    a.attr2 = j;
    return a;
}

std::shared_ptr<SetTree> SetTree::make_true() {
    auto t = std::make_shared<SetTree>();
    t->kind = Kind::True;
    return t;
}
std::shared_ptr<SetTree> SetTree::make_false() {
    auto t = std::make_shared<SetTree>();
    t->kind = Kind::False;
    return t;
}
std::shared_ptr<SetTree> SetTree::make_atom(SetAtom a) {
    auto t = std::make_shared<SetTree>();
    t->kind = Kind::Atom;
    t->atom = std::move(a);
    return t;
}
std::shared_ptr<SetTree> SetTree::make_not(std::shared_ptr<SetTree> c) {
    auto t = std::make_shared<SetTree>();
    t->kind = Kind::Not;
    t->children.push_back(std::move(c));
    return t;
}
std::shared_ptr<SetTree> SetTree::make_and(std::vector<std::shared_ptr<SetTree>> cs) {
    auto t = std::make_shared<SetTree>();
    t->kind = Kind::And;
    t->children = std::move(cs);
    return t;
}
std::shared_ptr<SetTree> SetTree::make_or(std::vector<std::shared_ptr<SetTree>> cs) {
    auto t = std::make_shared<SetTree>();
    t->kind = Kind::Or;
    t->children = std::move(cs);
    return t;
}

FactSetExpr FactSetExpr::full(const Schema& schema) {
    FactSetExpr e;
    for (const auto& [rel, type] : schema.relations)
        e.per_relation[rel] = SetTree::make_true();
    return e;
}

FactSetExpr FactSetExpr::of_relation(const std::string& r, std::shared_ptr<SetTree> tree) {
    FactSetExpr e;
    e.per_relation[r] = std::move(tree);
    return e;
}

FactSetExpr FactSetExpr::singleton(const Fact& fact) {
    std::vector<std::shared_ptr<SetTree>> atoms;
    for (std::size_t i = 0; i < fact.tuple.size(); ++i)
        atoms.push_back(SetTree::make_atom(SetAtom::equals(i, fact.tuple[i])));
    return of_relation(fact.relation, atoms.empty() ? SetTree::make_true()
                                                    : SetTree::make_and(std::move(atoms)));
}

namespace {

bool value_kind_matches(const Value& v, const AttributeDomain& d) {
    switch (d.kind) {
        case DomainKind::IntegerAll:
        case DomainKind::IntegerRange: return std::holds_alternative<std::int64_t>(v);
        case DomainKind::RealInterval: return std::holds_alternative<double>(v);
        case DomainKind::Categorical: return std::holds_alternative<std::string>(v);
    }
    return false;
}

void check_atom(const SetAtom& atom, const std::string& rel,
                const std::vector<AttributeDomain>& doms) {
    auto pos_ok = [&](std::size_t p) {
        if (p >= doms.size())
            throw Error(ErrorCode::BadAttributePosition,
                        rel + ": position " + std::to_string(p));
    };
    pos_ok(atom.attr);
    const AttributeDomain& d = doms[atom.attr];
    switch (atom.kind) {
        case SetAtom::Kind::Interval: {
            for (const auto& ep : {atom.lo, atom.hi})
                if (ep && !value_kind_matches(*ep, d))
                    throw Error(ErrorCode::DomainMismatch, rel + ": interval endpoint kind");
            if (d.kind == DomainKind::Categorical) {
                for (const auto& ep : {atom.lo, atom.hi})
                    if (ep && !d.category_index(std::get<std::string>(*ep)))
                        throw Error(ErrorCode::DomainMismatch,
                                    rel + ": endpoint not a declared category");
                if (atom.lo && atom.hi &&
                    d.order(*atom.lo, *atom.hi) > 0)
                    throw Error(ErrorCode::BadRange, rel + ": lo > hi in category order");
            }
            break;
        }
        case SetAtom::Kind::Equals:
            if (!value_kind_matches(atom.value, d))
                throw Error(ErrorCode::DomainMismatch, rel + ": equality value kind");
            break;
        case SetAtom::Kind::InFinite:
            for (const auto& v : atom.values)
                if (!value_kind_matches(v, d))
                    throw Error(ErrorCode::DomainMismatch, rel + ": membership value kind");
            break;
        case SetAtom::Kind::PairEquals:
        case SetAtom::Kind::PairLess:
            pos_ok(atom.attr2);
            if (!(doms[atom.attr] == doms[atom.attr2]))
                throw Error(ErrorCode::DomainMismatch, rel + ": compared attribute domains differ");
            break;
    }
}

void check_tree(const SetTree& t, const std::string& rel,
                const std::vector<AttributeDomain>& doms) {
    if (t.kind == SetTree::Kind::Atom) check_atom(t.atom, rel, doms);
    for (const auto& c : t.children) check_tree(*c, rel, doms);
}

bool atom_matches(const SetAtom& atom, const std::vector<AttributeDomain>& doms,
                  const std::vector<Value>& tuple) {
    const Value& v = tuple[atom.attr];
    const AttributeDomain& d = doms[atom.attr];
    switch (atom.kind) {
        case SetAtom::Kind::Interval: {
            if (atom.lo) {
                auto c = d.order(v, *atom.lo);
                if (c < 0 || (c == 0 && !atom.lo_closed)) return false;
            }
            if (atom.hi) {
                auto c = d.order(v, *atom.hi);
                if (c > 0 || (c == 0 && !atom.hi_closed)) return false;
            }
            return true;
        }
        case SetAtom::Kind::Equals:
            return compare_values(v, atom.value) == 0;
        case SetAtom::Kind::InFinite:
            return std::any_of(atom.values.begin(), atom.values.end(),
                               [&](const Value& w) { return compare_values(v, w) == 0; });
        case SetAtom::Kind::PairEquals:
            return compare_values(v, tuple[atom.attr2]) == 0;
        case SetAtom::Kind::PairLess:
            return d.order(v, tuple[atom.attr2]) < 0;
    }
    return false;
}

bool tree_matches(const SetTree& t, const std::vector<AttributeDomain>& doms,
                  const std::vector<Value>& tuple) {
    switch (t.kind) {
        case SetTree::Kind::True: return true;
        case SetTree::Kind::False: return false;
        case SetTree::Kind::Atom: return atom_matches(t.atom, doms, tuple);
        case SetTree::Kind::Not: return !tree_matches(*t.children[0], doms, tuple);
        case SetTree::Kind::And:
            return std::all_of(t.children.begin(), t.children.end(),
                               [&](const auto& c) { return tree_matches(*c, doms, tuple); });
        case SetTree::Kind::Or:
            return std::any_of(t.children.begin(), t.children.end(),
                               [&](const auto& c) { return tree_matches(*c, doms, tuple); });
    }
    return false;
}

}  // namespace

void type_check(const FactSetExpr& set, const Schema& schema) {
    for (const auto& [rel, tree] : set.per_relation) {
        if (!schema.has_relation(rel))
            throw Error(ErrorCode::UnknownRelation, rel);
        check_tree(*tree, rel, schema.relation_domains(rel));
    }
}

bool contains(const FactSetExpr& set, const Schema& schema, const Fact& fact) {
    auto it = set.per_relation.find(fact.relation);
    if (it == set.per_relation.end()) return false;
    auto doms = schema.relation_domains(fact.relation);
    if (fact.tuple.size() != doms.size())
        throw Error(ErrorCode::SchemaMismatch, "fact arity does not match schema");
    return tree_matches(*it->second, doms, fact.tuple);
}

std::uint64_t count_in_set(const BagInstance& instance, const FactSetExpr& set,
                           const Schema& schema) {
    std::uint64_t total = 0;
    for (const auto& [fact, m] : instance.entries())
        if (contains(set, schema, fact)) total = checked_add(total, m);
    return total;
}

// ---------------------------------------------------------------------------
// Disjointness analysis
// ---------------------------------------------------------------------------

namespace {

// Per-attribute constraint of a rectangle: either an explicit finite value
// set or an interval with open/closed endpoints.
struct Constraint {
    bool is_finite = false;
    std::vector<Value> vals;                 // is_finite
    std::optional<Value> lo, hi;             // interval otherwise
    bool lo_closed = true, hi_closed = true;
    bool is_empty = false;

    static Constraint everything() { return {}; }
};

bool in_interval(const Value& v, const Constraint& c, const AttributeDomain& d) {
    if (c.lo) {
        auto r = d.order(v, *c.lo);
        if (r < 0 || (r == 0 && !c.lo_closed)) return false;
    }
    if (c.hi) {
        auto r = d.order(v, *c.hi);
        if (r > 0 || (r == 0 && !c.hi_closed)) return false;
    }
    return true;
}

Constraint intersect(const Constraint& a, const Constraint& b, const AttributeDomain& d) {
    if (a.is_empty || b.is_empty) { Constraint c; c.is_empty = true; return c; }
    if (a.is_finite || b.is_finite) {
        const Constraint& fin = a.is_finite ? a : b;
        const Constraint& other = a.is_finite ? b : a;
        Constraint c;
        c.is_finite = true;
        for (const auto& v : fin.vals) {
            bool keep;
            if (other.is_finite)
                keep = std::any_of(other.vals.begin(), other.vals.end(),
                                   [&](const Value& w) { return compare_values(v, w) == 0; });
            else
                keep = in_interval(v, other, d);
            if (keep) c.vals.push_back(v);
        }
        c.is_empty = c.vals.empty();
        return c;
    }
    Constraint c;
    c.lo = a.lo;
    c.lo_closed = a.lo_closed;
    if (b.lo && (!c.lo || d.order(*b.lo, *c.lo) > 0 ||
                 (d.order(*b.lo, *c.lo) == 0 && !b.lo_closed))) {
        c.lo = b.lo;
        c.lo_closed = b.lo_closed;
    }
    c.hi = a.hi;
    c.hi_closed = a.hi_closed;
    if (b.hi && (!c.hi || d.order(*b.hi, *c.hi) < 0 ||
                 (d.order(*b.hi, *c.hi) == 0 && !b.hi_closed))) {
        c.hi = b.hi;
        c.hi_closed = b.hi_closed;
    }
    return c;
}

// Does the constraint contain at least one point of the domain?
bool constraint_nonempty(const Constraint& c, const AttributeDomain& d) {
    if (c.is_empty) return false;
    if (c.is_finite) {
        return std::any_of(c.vals.begin(), c.vals.end(),
                           [&](const Value& v) { return d.admits(v); });
    }
    switch (d.kind) {
        case DomainKind::IntegerAll:
        case DomainKind::IntegerRange: {
            // smallest integer satisfying lo, largest satisfying hi
            std::int64_t ilo, ihi;
            if (c.lo) {
                std::int64_t l = std::get<std::int64_t>(*c.lo);
                ilo = c.lo_closed ? l : l + 1;
            } else ilo = INT64_MIN;
            if (c.hi) {
                std::int64_t h = std::get<std::int64_t>(*c.hi);
                ihi = c.hi_closed ? h : h - 1;
            } else ihi = INT64_MAX;
            if (d.kind == DomainKind::IntegerRange) {
                ilo = std::max(ilo, d.int_lo);
                ihi = std::min(ihi, d.int_hi);
            }
            return ilo <= ihi;
        }
        case DomainKind::RealInterval: {
            double lo = d.real_lo, hi = d.real_hi;
            bool loc = true, hic = true;
            if (c.lo) {
                double l = std::get<double>(*c.lo);
                if (l > lo || (l == lo && !c.lo_closed)) { lo = l; loc = c.lo_closed; }
            }
            if (c.hi) {
                double h = std::get<double>(*c.hi);
                if (h < hi || (h == hi && !c.hi_closed)) { hi = h; hic = c.hi_closed; }
            }
            return lo < hi || (lo == hi && loc && hic);
        }
        case DomainKind::Categorical: {
            for (const auto& cat : d.categories)
                if (in_interval(Value(cat), c, d)) return true;
            return false;
        }
    }
    return false;
}

// A rectangle: per-attribute constraints (missing position = unconstrained),
// or "empty" for a tree containing False.
struct Rectangle {
    std::map<std::size_t, Constraint> per_attr;
    bool empty = false;
};

std::optional<Rectangle> tree_to_rectangle(const SetTree& t,
                                           const std::vector<AttributeDomain>& doms) {
    switch (t.kind) {
        case SetTree::Kind::True: return Rectangle{};
        case SetTree::Kind::False: {
            Rectangle r;
            r.empty = true;
            return r;
        }
        case SetTree::Kind::Atom: {
            Rectangle r;
            Constraint c;
            switch (t.atom.kind) {
                case SetAtom::Kind::Interval:
                    c.lo = t.atom.lo;
                    c.hi = t.atom.hi;
                    c.lo_closed = t.atom.lo_closed;
                    c.hi_closed = t.atom.hi_closed;
                    break;
                case SetAtom::Kind::Equals:
                    c.is_finite = true;
                    c.vals = {t.atom.value};
                    break;
                case SetAtom::Kind::InFinite:
                    c.is_finite = true;
                    c.vals = t.atom.values;
                    c.is_empty = c.vals.empty();
                    break;
                default:
                    return std::nullopt;  // pair atoms are not rectangular
            }
            r.per_attr[t.atom.attr] = std::move(c);
            return r;
        }
        case SetTree::Kind::And: {
            Rectangle r;
            for (const auto& ch : t.children) {
                auto sub = tree_to_rectangle(*ch, doms);
                if (!sub) return std::nullopt;
                if (sub->empty) { r.empty = true; return r; }
                for (auto& [pos, c] : sub->per_attr) {
                    auto it = r.per_attr.find(pos);
                    if (it == r.per_attr.end()) r.per_attr[pos] = c;
                    else it->second = intersect(it->second, c, doms[pos]);
                }
            }
            return r;
        }
        default:
            return std::nullopt;  // Not/Or not supported in rectangle form
    }
}

bool rectangles_disjoint(const Rectangle& a, const Rectangle& b,
                         const std::vector<AttributeDomain>& doms) {
    if (a.empty || b.empty) return true;
    for (std::size_t pos = 0; pos < doms.size(); ++pos) {
        auto ia = a.per_attr.find(pos);
        auto ib = b.per_attr.find(pos);
        Constraint ca = ia == a.per_attr.end() ? Constraint::everything() : ia->second;
        Constraint cb = ib == b.per_attr.end() ? Constraint::everything() : ib->second;
        if (!constraint_nonempty(intersect(ca, cb, doms[pos]), doms[pos]))
            return true;
    }
    return false;
}

std::optional<std::uint64_t> fact_space_size(const Schema& schema, const std::string& rel) {
    std::uint64_t n = 1;
    for (const auto& d : schema.relation_domains(rel)) {
        auto s = d.finite_size();
        if (!s) return std::nullopt;
        if (__builtin_mul_overflow(n, *s, &n)) return std::nullopt;
    }
    return n;
}

constexpr std::uint64_t kEnumerationCap = 200000;

bool any_common_tuple_by_enumeration(const SetTree& ta, const SetTree& tb,
                                     const std::vector<AttributeDomain>& doms) {
    std::vector<std::vector<Value>> axes;
    for (const auto& d : doms) axes.push_back(d.enumerate());
    std::vector<std::size_t> idx(doms.size(), 0);
    std::vector<Value> tuple(doms.size());
    while (true) {
        for (std::size_t i = 0; i < doms.size(); ++i) tuple[i] = axes[i][idx[i]];
        if (tree_matches(ta, doms, tuple) && tree_matches(tb, doms, tuple)) return true;
        std::size_t i = 0;
        for (; i < doms.size(); ++i) {
            if (++idx[i] < axes[i].size()) break;
            idx[i] = 0;
        }
        if (i == doms.size()) return false;
    }
}

}  // namespace

bool provably_disjoint(const FactSetExpr& a, const FactSetExpr& b, const Schema& schema) {
    for (const auto& [rel, ta] : a.per_relation) {
        auto it = b.per_relation.find(rel);
        if (it == b.per_relation.end()) continue;
        const auto& tb = it->second;
        auto doms = schema.relation_domains(rel);
        auto size = fact_space_size(schema, rel);
        if (size && *size <= kEnumerationCap && *size > 0) {
            if (any_common_tuple_by_enumeration(*ta, *tb, doms)) return false;
            continue;
        }
        auto ra = tree_to_rectangle(*ta, doms);
        auto rb = tree_to_rectangle(*tb, doms);
        if (!ra || !rb)
            throw Error(ErrorCode::PartitionOverlap,
                        rel + ": cannot decide disjointness of non-rectangular cells "
                              "over an infinite domain");
        if (!rectangles_disjoint(*ra, *rb, doms)) return false;
    }
    return true;
}

namespace {

std::string atom_string(const SetAtom& a) {
    auto v2s = [](const std::optional<Value>& v) { return v ? value_to_string(*v) : "*"; };
    switch (a.kind) {
        case SetAtom::Kind::Interval:
            return "ivl(" + std::to_string(a.attr) + "," + (a.lo_closed ? "[" : "(") +
                   v2s(a.lo) + "," + v2s(a.hi) + (a.hi_closed ? "]" : ")") + ")";
        case SetAtom::Kind::Equals:
            return "eq(" + std::to_string(a.attr) + "," + value_to_string(a.value) + ")";
        case SetAtom::Kind::InFinite: {
            std::string s = "in(" + std::to_string(a.attr);
            for (const auto& v : a.values) s += "," + value_to_string(v);
            return s + ")";
        }
        case SetAtom::Kind::PairEquals:
            return "peq(" + std::to_string(a.attr) + "," + std::to_string(a.attr2) + ")";
        case SetAtom::Kind::PairLess:
            return "plt(" + std::to_string(a.attr) + "," + std::to_string(a.attr2) + ")";
    }
    return "?";
}

std::string tree_string(const SetTree& t) {
    switch (t.kind) {
        case SetTree::Kind::True: return "true";
        case SetTree::Kind::False: return "false";
        case SetTree::Kind::Atom: return atom_string(t.atom);
        case SetTree::Kind::Not: return "not(" + tree_string(*t.children[0]) + ")";
        case SetTree::Kind::And:
        case SetTree::Kind::Or: {
            std::string s = t.kind == SetTree::Kind::And ? "and(" : "or(";
            for (std::size_t i = 0; i < t.children.size(); ++i) {
                if (i) s += ",";
                s += tree_string(*t.children[i]);
            }
            return s + ")";
        }
    }
    return "?";
}

}  // namespace

std::string to_canonical_string(const FactSetExpr& set) {
    std::string s = "{";
    bool first = true;
    for (const auto& [rel, tree] : set.per_relation) {
        if (!first) s += ";";
        first = false;
        s += rel + ":" + tree_string(*tree);
    }
    return s + "}";
}

}  // namespace ppdb
