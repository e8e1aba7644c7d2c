#include "ppdb/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ppdb {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

Value value_from_json(const json& j) {
    if (j.is_number_integer() || j.is_number_unsigned()) return Value((std::int64_t)j.get<std::int64_t>());
    if (j.is_number_float()) return Value(j.get<double>());
    if (j.is_string()) return Value(j.get<std::string>());
    throw Error(ErrorCode::ParseError, "expected scalar value, got " + j.dump());
}

json value_to_json(const Value& v) {
    switch (v.index()) {
        case 0: return std::get<std::int64_t>(v);
        case 1: return std::get<double>(v);
        default: return std::get<std::string>(v);
    }
}

double endpoint_from_json(const json& j, bool is_lo) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        try {
            return std::stod(s);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad interval endpoint: " + s);
        }
    }
    if (j.is_number()) return j.get<double>();
    throw Error(ErrorCode::ParseError, std::string("bad ") + (is_lo ? "lo" : "hi") + " endpoint");
}

}  // namespace

Schema schema_from_json(const std::string& text) {
    json j = parse_json(text);
    Schema s;
    if (!j.contains("attributes") || !j.contains("relations"))
        throw Error(ErrorCode::ParseError, "schema file needs 'attributes' and 'relations'");
    for (const auto& [name, a] : j.at("attributes").items()) {
        std::string kind = a.at("kind").get<std::string>();
        AttributeDomain d;
        if (kind == "int_all") {
            d = AttributeDomain::integer_all();
        } else if (kind == "int_range") {
            d = AttributeDomain::integer_range(a.at("lo").get<std::int64_t>(),
                                               a.at("hi").get<std::int64_t>());
        } else if (kind == "real_interval") {
            d = AttributeDomain::real_interval(endpoint_from_json(a.at("lo"), true),
                                               endpoint_from_json(a.at("hi"), false));
        } else if (kind == "categorical") {
            std::vector<std::string> vals;
            for (const auto& v : a.at("values")) vals.push_back(v.get<std::string>());
            d = AttributeDomain::categorical(std::move(vals));
        } else {
            throw Error(ErrorCode::ParseError, "unknown attribute kind " + kind);
        }
        s.attributes[name] = d;
    }
    for (const auto& [name, type] : j.at("relations").items()) {
        std::vector<std::string> attrs;
        for (const auto& a : type) attrs.push_back(a.get<std::string>());
        s.relations[name] = attrs;
    }
    validate_schema_or_throw(s);
    return s;
}

std::string schema_to_json(const Schema& schema) {
    json attrs = json::object();
    for (const auto& [name, d] : schema.attributes) {
        json a;
        switch (d.kind) {
            case DomainKind::IntegerAll:
                a = {{"kind", "int_all"}};
                break;
            case DomainKind::IntegerRange:
                a = {{"kind", "int_range"}, {"lo", d.int_lo}, {"hi", d.int_hi}};
                break;
            case DomainKind::RealInterval: {
                auto ep = [](double x) -> json {
                    if (x == -std::numeric_limits<double>::infinity()) return "-inf";
                    if (x == std::numeric_limits<double>::infinity()) return "inf";
                    return x;
                };
                a = {{"kind", "real_interval"}, {"lo", ep(d.real_lo)}, {"hi", ep(d.real_hi)}};
                break;
            }
            case DomainKind::Categorical:
                a = {{"kind", "categorical"}, {"values", d.categories}};
                break;
        }
        attrs[name] = a;
    }
    json rels = json::object();
    for (const auto& [name, type] : schema.relations) rels[name] = type;
    return json{{"attributes", attrs}, {"relations", rels}}.dump(2);
}

namespace {

std::pair<Fact, std::uint64_t> fact_from_json(const json& j, const Schema& schema) {
    if (!j.is_array() || j.size() < 2 || j.size() > 3)
        throw Error(ErrorCode::ParseError, "fact must be [relation, tuple] or [relation, tuple, m]");
    std::string rel = j[0].get<std::string>();
    std::vector<Value> tuple;
    for (const auto& v : j[1]) tuple.push_back(value_from_json(v));
    if (!fact_in_domain(schema, rel, tuple))
        throw Error(ErrorCode::SchemaMismatch, "fact outside the fact space: " + rel);
    std::uint64_t m = j.size() == 3 ? j[2].get<std::uint64_t>() : 1;
    return {Fact(rel, std::move(tuple)), m};
}

}  // namespace

BagInstance instance_from_json_lines(const std::string& text, const Schema& schema) {
    BagInstance out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
        if (blank) continue;
        auto [fact, m] = fact_from_json(parse_json(line), schema);
        out.insert(fact, m);
    }
    return out;
}

std::string instance_to_json_lines(const BagInstance& instance) {
    std::string out;
    for (const auto& [f, m] : instance.entries()) {
        json tuple = json::array();
        for (const auto& v : f.tuple) tuple.push_back(value_to_json(v));
        out += json::array({f.relation, tuple, m}).dump();
        out += "\n";
    }
    return out;
}

std::string instance_to_json(const BagInstance& instance) {
    json arr = json::array();
    for (const auto& [f, m] : instance.entries()) {
        json tuple = json::array();
        for (const auto& v : f.tuple) tuple.push_back(value_to_json(v));
        arr.push_back(json::array({f.relation, tuple, m}));
    }
    return arr.dump();
}

void instance_add_csv(BagInstance& instance, const Schema& schema,
                      const std::string& relation, const std::string& csv_text) {
    const auto& doms = schema.relation_domains(relation);
    std::istringstream in(csv_text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string cur;
        for (char c : line) {
            if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else
                cur += c;
        }
        fields.push_back(cur);
        if (fields.size() != doms.size())
            throw Error(ErrorCode::SchemaMismatch,
                        relation + " line " + std::to_string(lineno) + ": expected " +
                            std::to_string(doms.size()) + " columns");
        std::vector<Value> tuple;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto& field = fields[i];
            try {
                switch (doms[i].kind) {
                    case DomainKind::IntegerAll:
                    case DomainKind::IntegerRange:
                        tuple.push_back(Value((std::int64_t)std::stoll(field)));
                        break;
                    case DomainKind::RealInterval:
                        tuple.push_back(Value(std::stod(field)));
                        break;
                    case DomainKind::Categorical:
                        tuple.push_back(Value(field));
                        break;
                }
            } catch (const std::exception&) {
                throw Error(ErrorCode::ParseError, relation + " line " + std::to_string(lineno) +
                                                       ": bad value '" + field + "'");
            }
        }
        if (!fact_in_domain(schema, relation, tuple))
            throw Error(ErrorCode::SchemaMismatch,
                        relation + " line " + std::to_string(lineno) + ": fact outside domain");
        instance.insert(Fact(relation, std::move(tuple)), 1);
    }
}

namespace {

std::optional<Value> interval_endpoint(const json& j) {
    if (j.is_null()) return std::nullopt;
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "-inf" || s == "inf" || s == "+inf" || s == "*") return std::nullopt;
        // decimal strings parse to the nearest float for bit-exact endpoints
        try {
            return Value(std::stod(s));
        } catch (const std::exception&) {
            return Value(s);  // categorical endpoint
        }
    }
    return value_from_json(j);
}

std::shared_ptr<SetTree> tree_from_json(const json& j) {
    if (j.is_boolean()) return j.get<bool>() ? SetTree::make_true() : SetTree::make_false();
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "bad set expression: " + j.dump());
    if (j.contains("atom")) {
        std::string kind = j.at("atom").get<std::string>();
        if (kind == "interval") {
            SetAtom a = SetAtom::interval(
                j.at("attr").get<std::size_t>(),
                j.contains("lo") ? interval_endpoint(j.at("lo")) : std::nullopt,
                j.contains("hi") ? interval_endpoint(j.at("hi")) : std::nullopt,
                j.value("lo_closed", true), j.value("hi_closed", true));
            return SetTree::make_atom(std::move(a));
        }
        if (kind == "equals")
            return SetTree::make_atom(
                SetAtom::equals(j.at("attr").get<std::size_t>(), value_from_json(j.at("value"))));
        if (kind == "in") {
            std::vector<Value> vals;
            for (const auto& v : j.at("values")) vals.push_back(value_from_json(v));
            return SetTree::make_atom(
                SetAtom::in_finite(j.at("attr").get<std::size_t>(), std::move(vals)));
        }
        if (kind == "pair_equals")
            return SetTree::make_atom(SetAtom::pair_equals(j.at("i").get<std::size_t>(),
                                                           j.at("j").get<std::size_t>()));
        if (kind == "pair_less")
            return SetTree::make_atom(SetAtom::pair_less(j.at("i").get<std::size_t>(),
                                                         j.at("j").get<std::size_t>()));
        throw Error(ErrorCode::ParseError, "unknown atom kind " + kind);
    }
    std::string op = j.at("op").get<std::string>();
    if (op == "true") return SetTree::make_true();
    if (op == "false") return SetTree::make_false();
    std::vector<std::shared_ptr<SetTree>> children;
    for (const auto& c : j.at("args")) children.push_back(tree_from_json(c));
    if (op == "not") {
        if (children.size() != 1)
            throw Error(ErrorCode::ParseError, "'not' takes exactly one argument");
        return SetTree::make_not(children[0]);
    }
    if (op == "and") return SetTree::make_and(std::move(children));
    if (op == "or") return SetTree::make_or(std::move(children));
    throw Error(ErrorCode::ParseError, "unknown op " + op);
}

json tree_to_json(const SetTree& t) {
    switch (t.kind) {
        case SetTree::Kind::True: return json{{"op", "true"}};
        case SetTree::Kind::False: return json{{"op", "false"}};
        case SetTree::Kind::Atom: {
            const SetAtom& a = t.atom;
            switch (a.kind) {
                case SetAtom::Kind::Interval: {
                    json o{{"atom", "interval"},
                           {"attr", a.attr},
                           {"lo_closed", a.lo_closed},
                           {"hi_closed", a.hi_closed}};
                    if (a.lo) o["lo"] = value_to_json(*a.lo);
                    if (a.hi) o["hi"] = value_to_json(*a.hi);
                    return o;
                }
                case SetAtom::Kind::Equals:
                    return json{{"atom", "equals"}, {"attr", a.attr}, {"value", value_to_json(a.value)}};
                case SetAtom::Kind::InFinite: {
                    json vals = json::array();
                    for (const auto& v : a.values) vals.push_back(value_to_json(v));
                    return json{{"atom", "in"}, {"attr", a.attr}, {"values", vals}};
                }
                case SetAtom::Kind::PairEquals:
                    return json{{"atom", "pair_equals"}, {"i", a.attr}, {"j", a.attr2}};
                case SetAtom::Kind::PairLess:
                    return json{{"atom", "pair_less"}, {"i", a.attr}, {"j", a.attr2}};
            }
            break;
        }
        case SetTree::Kind::Not:
            return json{{"op", "not"}, {"args", json::array({tree_to_json(*t.children[0])})}};
        case SetTree::Kind::And:
        case SetTree::Kind::Or: {
            json args = json::array();
            for (const auto& c : t.children) args.push_back(tree_to_json(*c));
            return json{{"op", t.kind == SetTree::Kind::And ? "and" : "or"}, {"args", args}};
        }
    }
    throw Error(ErrorCode::ParseError, "bad set tree");
}

FactSetExpr set_expr_from_json_value(const json& j) {
    FactSetExpr e;
    for (const auto& [rel, tree] : j.items()) e.per_relation[rel] = tree_from_json(tree);
    return e;
}

}  // namespace

FactSetExpr set_expr_from_json(const std::string& text) {
    return set_expr_from_json_value(parse_json(text));
}

std::string set_expr_to_json(const FactSetExpr& set) {
    json j = json::object();
    for (const auto& [rel, tree] : set.per_relation) j[rel] = tree_to_json(*tree);
    return j.dump(2);
}

CountingEvent event_from_json(const std::string& text) {
    json j = parse_json(text);
    CountingEvent e;
    e.set = set_expr_from_json_value(j.at("set"));
    std::string cmp = j.value("cmp", "ge");
    if (cmp == "eq") e.cmp = CountingEvent::Cmp::Eq;
    else if (cmp == "ge") e.cmp = CountingEvent::Cmp::AtLeast;
    else if (cmp == "le") e.cmp = CountingEvent::Cmp::AtMost;
    else throw Error(ErrorCode::ParseError, "unknown cmp " + cmp);
    e.n = j.value("n", (std::uint64_t)1);
    return e;
}

Partition partition_from_json(const std::string& text) {
    json j = parse_json(text);
    Partition p;
    for (const auto& cell : j.at("cells")) p.cells.push_back(set_expr_from_json_value(cell));
    return p;
}

PdbFile pdb_from_json(const std::string& text, const Schema& schema) {
    json j = parse_json(text);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "finite") {
        FinitePdb pdb;
        for (const auto& w : j.at("worlds")) {
            Rational p = Rational::parse(w.at("prob").get<std::string>());
            BagInstance world;
            for (const auto& f : w.at("facts")) {
                auto [fact, m] = fact_from_json(f, schema);
                world.insert(fact, m);
            }
            pdb.worlds.emplace_back(std::move(world), p);
        }
        pdb.normalize();
        return pdb;
    }
    if (kind == "point_process") {
        PointProcessPdb pdb;
        pdb.declared_simple = j.value("simple", false);
        for (const auto& [rel, m] : j.at("relations").items()) {
            RelationModel model;
            const json& count = m.at("count");
            std::string ck = count.at("kind").get<std::string>();
            if (ck == "fixed") {
                model.count.kind = CountModel::Kind::Fixed;
                model.count.fixed_n = count.at("n").get<std::uint64_t>();
            } else if (ck == "poisson") {
                model.count.kind = CountModel::Kind::Poisson;
                model.count.lambda = count.at("lambda").get<double>();
                model.count.n_max = count.value("n_max", (std::uint64_t)64);
            } else if (ck == "categorical") {
                model.count.kind = CountModel::Kind::Categorical;
                for (const auto& w : count.at("weights"))
                    model.count.weights.push_back(w.get<double>());
            } else {
                throw Error(ErrorCode::ParseError, "unknown count kind " + ck);
            }
            for (const auto& c : m.at("tuple")) {
                TupleComponent comp;
                std::string tk = c.at("kind").get<std::string>();
                if (tk == "uniform_int") {
                    comp.kind = TupleComponent::Kind::UniformInt;
                    comp.int_lo = c.at("lo").get<std::int64_t>();
                    comp.int_hi = c.at("hi").get<std::int64_t>();
                } else if (tk == "uniform_real") {
                    comp.kind = TupleComponent::Kind::UniformReal;
                    comp.real_lo = c.at("lo").get<double>();
                    comp.real_hi = c.at("hi").get<double>();
                } else if (tk == "normal") {
                    comp.kind = TupleComponent::Kind::Normal;
                    comp.mu = c.at("mu").get<double>();
                    comp.sigma = c.at("sigma").get<double>();
                } else if (tk == "categorical") {
                    comp.kind = TupleComponent::Kind::CategoricalWeighted;
                    for (const auto& v : c.at("values")) comp.values.push_back(value_from_json(v));
                    for (const auto& w : c.at("weights")) comp.weights.push_back(w.get<double>());
                } else {
                    throw Error(ErrorCode::ParseError, "unknown tuple component kind " + tk);
                }
                model.tuple.push_back(std::move(comp));
            }
            pdb.relations[rel] = std::move(model);
        }
        validate_pdb(pdb, schema);
        return pdb;
    }
    throw Error(ErrorCode::ParseError, "unknown pdb kind " + kind);
}

std::string finite_pdb_to_json(const FinitePdb& pdb) {
    json worlds = json::array();
    for (const auto& [world, p] : pdb.worlds) {
        json facts = json::array();
        for (const auto& [f, m] : world.entries()) {
            json tuple = json::array();
            for (const auto& v : f.tuple) tuple.push_back(value_to_json(v));
            facts.push_back(json::array({f.relation, tuple, m}));
        }
        worlds.push_back(json{{"prob", p.to_string()}, {"facts", facts}});
    }
    return json{{"kind", "finite"}, {"worlds", worlds}}.dump(2);
}

std::string estimate_to_json(const Estimate& e) {
    json j{{"p_hat", e.p_hat}, {"n", e.n},     {"ci", json::array({e.ci_lo, e.ci_hi})},
           {"level", e.level}, {"seed", e.seed}};
    return j.dump();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
    out << content;
}

}  // namespace ppdb
