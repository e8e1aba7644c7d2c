#include "ppdb/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace ppdb {

namespace {

const std::set<std::string> kKeywords = {
    "empty", "one", "rename", "dedup", "select", "project", "agg",  "group",
    "uplus", "minus", "minint", "maxun", "x",     "join",   "and",  "or",
    "not",   "true",  "false",  "in"};

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        std::size_t line = 1, col = 1, line_start = 0;
        for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
                line_start = i + 1;
            } else
                ++col;
        }
        std::size_t line_end = text.find('\n', line_start);
        if (line_end == std::string::npos) line_end = text.size();
        std::string src = text.substr(line_start, line_end - line_start);
        std::string caret(col > 0 ? col - 1 : 0, ' ');
        caret += '^';
        throw Error(ErrorCode::ParseError, msg + " at " + std::to_string(line) + ":" +
                                               std::to_string(col) + "\n  " + src + "\n  " + caret);
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    // peeks an identifier without consuming
    std::string peek_ident() {
        skip_ws();
        std::size_t p = pos;
        if (p >= text.size() || (!std::isalpha((unsigned char)text[p]) && text[p] != '_'))
            return "";
        std::string s;
        while (p < text.size() && (std::isalnum((unsigned char)text[p]) || text[p] == '_'))
            s += text[p++];
        return s;
    }

    std::string ident() {
        std::string s = peek_ident();
        if (s.empty()) fail("expected identifier");
        pos += s.size();
        return s;
    }

    bool accept_word(const std::string& w) {
        if (peek_ident() == w) {
            skip_ws();
            pos += w.size();
            return true;
        }
        return false;
    }

    Value value() {
        skip_ws();
        if (pos >= text.size()) fail("expected value");
        if (text[pos] == '"') {
            ++pos;
            std::string s;
            while (pos < text.size() && text[pos] != '"') s += text[pos++];
            if (pos >= text.size()) fail("unterminated string");
            ++pos;
            return Value(s);
        }
        std::size_t start = pos;
        if (text[pos] == '-' || text[pos] == '+') ++pos;
        bool is_real = false;
        while (pos < text.size() &&
               (std::isdigit((unsigned char)text[pos]) || text[pos] == '.' ||
                text[pos] == 'e' || text[pos] == 'E' ||
                ((text[pos] == '-' || text[pos] == '+') && pos > start &&
                 (text[pos - 1] == 'e' || text[pos - 1] == 'E')))) {
            if (text[pos] == '.' || text[pos] == 'e' || text[pos] == 'E') is_real = true;
            ++pos;
        }
        if (pos == start) fail("expected value");
        std::string lit = text.substr(start, pos - start);
        try {
            if (is_real) return Value(std::stod(lit));
            return Value((std::int64_t)std::stoll(lit));
        } catch (const std::exception&) {
            pos = start;
            fail("bad numeric literal");
        }
    }
};

std::size_t resolve_attr(Cursor& cur, const RelType& type, const std::string& name) {
    auto it = std::find(type.attrs.begin(), type.attrs.end(), name);
    if (it == type.attrs.end()) cur.fail("unknown attribute " + name);
    return (std::size_t)(it - type.attrs.begin());
}

std::shared_ptr<SetTree> parse_pred_or(Cursor& cur, const RelType& type);

std::shared_ptr<SetTree> parse_pred_primary(Cursor& cur, const RelType& type) {
    if (cur.accept_word("true")) return SetTree::make_true();
    if (cur.accept_word("false")) return SetTree::make_false();
    if (cur.accept_word("not")) return SetTree::make_not(parse_pred_primary(cur, type));
    if (cur.peek() == '(') {
        cur.expect('(');
        auto t = parse_pred_or(cur, type);
        cur.expect(')');
        return t;
    }
    std::string attr = cur.ident();
    std::size_t pos = resolve_attr(cur, type, attr);
    if (cur.accept_word("in")) {
        if (cur.accept('{')) {
            std::vector<Value> vals;
            if (!cur.accept('}')) {
                do vals.push_back(cur.value());
                while (cur.accept(','));
                cur.expect('}');
            }
            return SetTree::make_atom(SetAtom::in_finite(pos, std::move(vals)));
        }
        bool lo_closed;
        if (cur.accept('[')) lo_closed = true;
        else if (cur.accept('(')) lo_closed = false;
        else cur.fail("expected interval or value set after 'in'");
        std::optional<Value> lo, hi;
        if (!cur.accept('*')) lo = cur.value();
        cur.expect(',');
        if (!cur.accept('*')) hi = cur.value();
        bool hi_closed;
        if (cur.accept(']')) hi_closed = true;
        else if (cur.accept(')')) hi_closed = false;
        else cur.fail("expected ']' or ')'");
        return SetTree::make_atom(SetAtom::interval(pos, std::move(lo), std::move(hi),
                                                    lo_closed, hi_closed));
    }
    if (cur.accept('=')) {
        if (cur.accept('=')) {
            std::string other = cur.ident();
            return SetTree::make_atom(SetAtom::pair_equals(pos, resolve_attr(cur, type, other)));
        }
        return SetTree::make_atom(SetAtom::equals(pos, cur.value()));
    }
    if (cur.accept('<')) {
        std::string other = cur.ident();
        return SetTree::make_atom(SetAtom::pair_less(pos, resolve_attr(cur, type, other)));
    }
    cur.fail("expected 'in', '=', '==' or '<' after attribute");
}

std::shared_ptr<SetTree> parse_pred_and(Cursor& cur, const RelType& type) {
    std::vector<std::shared_ptr<SetTree>> parts{parse_pred_primary(cur, type)};
    while (cur.accept_word("and")) parts.push_back(parse_pred_primary(cur, type));
    return parts.size() == 1 ? parts[0] : SetTree::make_and(std::move(parts));
}

std::shared_ptr<SetTree> parse_pred_or(Cursor& cur, const RelType& type) {
    std::vector<std::shared_ptr<SetTree>> parts{parse_pred_and(cur, type)};
    while (cur.accept_word("or")) parts.push_back(parse_pred_and(cur, type));
    return parts.size() == 1 ? parts[0] : SetTree::make_or(std::move(parts));
}

QueryPtr parse_expr(Cursor& cur, const Schema& schema);

QueryPtr parse_term(Cursor& cur, const Schema& schema) {
    if (cur.accept('(')) {
        auto q = parse_expr(cur, schema);
        cur.expect(')');
        return q;
    }
    if (cur.accept_word("empty")) {
        cur.expect('(');
        std::string rel = cur.ident();
        cur.expect(')');
        if (!schema.has_relation(rel)) cur.fail("unknown relation " + rel);
        return q_empty(rel);
    }
    if (cur.accept_word("one")) {
        std::string rel = cur.ident();
        if (!schema.has_relation(rel)) cur.fail("unknown relation " + rel);
        cur.expect('(');
        std::vector<Value> vals;
        if (!cur.accept(')')) {
            do vals.push_back(cur.value());
            while (cur.accept(','));
            cur.expect(')');
        }
        return q_singleton(Fact(rel, std::move(vals)));
    }
    if (cur.accept_word("rename")) {
        cur.expect('(');
        auto child = parse_expr(cur, schema);
        cur.expect(',');
        std::string from = cur.ident();
        cur.expect('-');
        cur.expect('>');
        std::string to = cur.ident();
        cur.expect(')');
        return q_rename(std::move(child), std::move(from), std::move(to));
    }
    if (cur.accept_word("dedup")) {
        cur.expect('(');
        auto child = parse_expr(cur, schema);
        cur.expect(')');
        return q_dedup(std::move(child));
    }
    if (cur.accept_word("select")) {
        cur.expect('(');
        auto child = parse_expr(cur, schema);
        cur.expect(',');
        RelType type = infer_rel(*child, schema);
        auto pred = parse_pred_or(cur, type);
        cur.expect(')');
        return q_select(std::move(child), std::move(pred));
    }
    if (cur.accept_word("project")) {
        cur.expect('(');
        auto child = parse_expr(cur, schema);
        cur.expect(',');
        std::vector<std::string> attrs;
        do attrs.push_back(cur.ident());
        while (cur.accept(','));
        cur.expect(')');
        return q_project(std::move(child), std::move(attrs));
    }
    if (cur.accept_word("agg")) {
        cur.expect('(');
        auto child = parse_expr(cur, schema);
        cur.expect(',');
        std::vector<std::string> group;
        bool grouped = cur.accept_word("group");
        std::string first = cur.ident();
        if (grouped) {
            group.push_back(first);
            while (cur.accept(',')) {
                // lookahead: the aggregator name is the one followed by '('
                std::string name = cur.ident();
                if (cur.peek() == '(') {
                    first = name;
                    break;
                }
                group.push_back(name);
            }
            if (cur.peek() != '(') cur.fail("expected aggregator call");
        }
        cur.expect('(');
        std::string attr = cur.ident();
        cur.expect(')');
        cur.expect(')');
        if (group.empty()) {
            // simple aggregation; project the child onto the attribute first
            auto projected = q_project(std::move(child), {attr});
            return q_aggregate(std::move(projected), first, attr);
        }
        return q_group_aggregate(std::move(child), std::move(group), first, attr);
    }
    std::string rel = cur.ident();
    if (kKeywords.count(rel)) cur.fail("unexpected keyword " + rel);
    if (!schema.has_relation(rel)) cur.fail("unknown relation " + rel);
    return q_extract(rel);
}

QueryPtr parse_expr(Cursor& cur, const Schema& schema) {
    QueryPtr left = parse_term(cur, schema);
    while (true) {
        if (cur.accept_word("uplus")) left = q_additive_union(left, parse_term(cur, schema));
        else if (cur.accept_word("minus")) left = q_difference(left, parse_term(cur, schema));
        else if (cur.accept_word("minint")) left = q_min_intersect(left, parse_term(cur, schema));
        else if (cur.accept_word("maxun")) left = q_max_union(left, parse_term(cur, schema));
        else if (cur.accept_word("x")) left = q_cross(left, parse_term(cur, schema));
        else if (cur.accept_word("join")) left = q_join(left, parse_term(cur, schema));
        else break;
    }
    return left;
}

}  // namespace

QueryPtr parse_query(const std::string& text, const Schema& schema) {
    Cursor cur{text};
    QueryPtr q = parse_expr(cur, schema);
    if (!cur.eof()) cur.fail("trailing input after query");
    infer_rel(*q, schema);  // surface type errors with the parse
    return q;
}

namespace {

bool is_upper_initial(const std::string& s) {
    return !s.empty() && std::isupper((unsigned char)s[0]);
}

DlAtom parse_atom(Cursor& cur) {
    DlAtom atom;
    atom.relation = cur.ident();
    cur.expect('(');
    if (!cur.accept(')')) {
        do {
            cur.skip_ws();
            char c = cur.peek();
            if (std::isalpha((unsigned char)c) || c == '_') {
                std::string name = cur.ident();
                if (is_upper_initial(name)) atom.terms.push_back(DlTerm::variable(name));
                else atom.terms.push_back(DlTerm::value(Value(name)));
            } else {
                atom.terms.push_back(DlTerm::value(cur.value()));
            }
        } while (cur.accept(','));
        cur.expect(')');
    }
    return atom;
}

}  // namespace

DatalogProgram parse_datalog(const std::string& text) {
    DatalogProgram program;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        start = end + 1;
        auto comment = line.find('%');
        if (comment != std::string::npos) line = line.substr(0, comment);
        bool blank = std::all_of(line.begin(), line.end(),
                                 [](char c) { return std::isspace((unsigned char)c); });
        if (blank) {
            if (end == text.size()) break;
            continue;
        }
        Cursor cur{line};
        if (cur.accept('#')) {
            if (!cur.accept_word("output")) cur.fail("expected 'output' directive");
            program.output = cur.ident();
            if (!cur.eof()) cur.fail("trailing input after directive");
            if (end == text.size()) break;
            continue;
        }
        DlRule rule;
        rule.head = parse_atom(cur);
        cur.expect(':');
        cur.expect('-');
        do rule.body.push_back(parse_atom(cur));
        while (cur.accept(','));
        cur.expect('.');
        if (!cur.eof()) cur.fail("trailing input after rule");
        program.rules.push_back(std::move(rule));
        if (end == text.size()) break;
    }
    if (program.output.empty())
        throw Error(ErrorCode::ParseError, "datalog program needs a '#output' directive");
    return program;
}

}  // namespace ppdb
