// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
#include "trapgen/parser.hpp"

#include <cctype>
#include <sstream>

namespace trapgen {

namespace {

struct SExpr {
    bool is_list = false;
    std::string atom;
    std::vector<SExpr> items;
    std::size_t line = 1;
    std::size_t column = 1;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, column); }

    bool is_atom(std::string_view text) const { return !is_list && atom == text; }

    const SExpr& head() const {
        if (!is_list || items.empty()) {
            fail("expected a non-empty list");
        }
        return items.front();
    }
};

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        for (skip_space(); pos_ < text_.size(); skip_space()) {
            out.push_back(read());
        }
        return out;
    }

private:
    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    SExpr read() {
        SExpr e;
        e.line = line_;
        e.column = column_;
        char c = text_[pos_];
        if (c == ')') {
            e.fail("unexpected ')'");
        }
        if (c == '(') {
            e.is_list = true;
            advance();
            for (;;) {
                skip_space();
                if (pos_ >= text_.size()) {
                    e.fail("unterminated list");
                }
                if (text_[pos_] == ')') {
                    advance();
                    return e;
                }
                e.items.push_back(read());
            }
        }
        while (pos_ < text_.size()) {
            c = text_[pos_];
            if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) {
                break;
            }
            e.atom.push_back(c);
            advance();
        }
        return e;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'')) {
            return false;
        }
    }
    return true;
}

Rational literal(const SExpr& e) {
    if (e.is_list) {
        e.fail("expected a rational literal");
    }
    auto q = parse_rational(e.atom);
    if (!q) {
        e.fail("malformed rational literal '" + e.atom + "'");
    }
    return *q;
}

Dimension variable(const SExpr& e, const VarTable& vars) {
    if (e.is_list || !is_identifier(e.atom)) {
        e.fail("expected a variable name");
    }
    auto d = vars.find(e.atom);
    if (!d) {
        e.fail("undeclared variable '" + e.atom + "'");
    }
    return *d;
}

Polynomial polynomial(const SExpr& e, const VarTable& vars) {
    if (!e.is_list) {
        if (auto q = parse_rational(e.atom)) {
            return Polynomial(*q);
        }
        return Polynomial::variable(variable(e, vars));
    }
    const SExpr& op = e.head();
    const auto& args = e.items;
    if (op.is_atom("+")) {
        if (args.size() < 2) {
            e.fail("'+' needs at least one operand");
        }
        Polynomial sum;
        for (std::size_t i = 1; i < args.size(); ++i) {
            sum += polynomial(args[i], vars);
        }
        return sum;
    }
    if (op.is_atom("-")) {
        if (args.size() == 2) {
            return -polynomial(args[1], vars);
        }
        if (args.size() != 3) {
            e.fail("'-' takes one or two operands");
        }
        return polynomial(args[1], vars) - polynomial(args[2], vars);
    }
    if (op.is_atom("*")) {
        if (args.size() != 3) {
            e.fail("'*' takes a rational literal and a term");
        }
        return polynomial(args[2], vars) * literal(args[1]);
    }
    op.fail("unknown polynomial operator");
}

std::optional<RelOp> relop(const SExpr& e) {
    if (e.is_list) {
        return std::nullopt;
    }
    for (RelOp op : {RelOp::Eq, RelOp::Lt, RelOp::Leq, RelOp::Gt, RelOp::Geq}) {
        if (e.atom == to_string(op)) {
            return op;
        }
    }
    return std::nullopt;
}

Formula formula(const SExpr& e, const VarTable& vars) {
    const SExpr& head = e.head();
    if (head.is_atom("and") || head.is_atom("or")) {
        if (e.items.size() < 2) {
            e.fail("'" + head.atom + "' needs at least one operand");
        }
        std::vector<Formula> children;
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            children.push_back(formula(e.items[i], vars));
        }
        return head.atom == "and" ? Formula::conj(std::move(children)) : Formula::disj(std::move(children));
    }
    if (head.is_atom("not")) {
        if (e.items.size() != 2) {
            e.fail("'not' takes exactly one operand");
        }
        return Formula::negate(formula(e.items[1], vars));
    }
    auto op = relop(head);
    if (!op) {
        head.fail("expected and/or/not or a relation");
    }
    if (e.items.size() != 3) {
        e.fail("a relation takes exactly two polynomials");
    }
    return Formula::atom({polynomial(e.items[1], vars), *op, polynomial(e.items[2], vars)});
}

std::string canonical_order(const std::vector<std::pair<std::string, VarType>>& decls) {
    std::string out = "(vars";
    for (VarType t : {VarType::Integer, VarType::Rational}) {
        for (const auto& [name, type] : decls) {
            if (type == t) {
                out += " (" + name + (t == VarType::Integer ? " int)" : " rat)");
            }
        }
    }
    return out + ")";
}

VarTable var_table(const SExpr& decl) {
    std::vector<std::pair<std::string, VarType>> decls;
    std::vector<const SExpr*> where;
    if (decl.items.size() < 2) {
        decl.fail("'vars' needs at least one declaration");
    }
    for (std::size_t i = 1; i < decl.items.size(); ++i) {
        const SExpr& v = decl.items[i];
        if (!v.is_list || v.items.size() != 2 || v.items[0].is_list || v.items[1].is_list) {
            v.fail("expected (name int) or (name rat)");
        }
        const std::string& name = v.items[0].atom;
        if (!is_identifier(name)) {
            v.items[0].fail("invalid variable name '" + name + "'");
        }
        VarType type;
        if (v.items[1].atom == "int") {
            type = VarType::Integer;
        } else if (v.items[1].atom == "rat") {
            type = VarType::Rational;
        } else {
            v.items[1].fail("variable type must be 'int' or 'rat'");
        }
        decls.emplace_back(name, type);
        where.push_back(&v);
    }
    VarTable vars;
    bool seen_rational = false;
    for (std::size_t i = 0; i < decls.size(); ++i) {
        const auto& [name, type] = decls[i];
        if (vars.find(name)) {
            where[i]->fail("duplicate variable '" + name + "'");
        }
        if (type == VarType::Integer && seen_rational) {
            where[i]->fail("integer variable '" + name +
                           "' declared after a rational variable; integer variables must come first, e.g. " +
                           canonical_order(decls));
        }
        seen_rational = seen_rational || type == VarType::Rational;
        vars.add(name, type);
    }
    return vars;
}

Vector reference(const SExpr& decl, const VarTable& vars) {
    Vector v(vars.size());
    std::vector<bool> bound(vars.size(), false);
    for (std::size_t i = 1; i < decl.items.size(); ++i) {
        const SExpr& b = decl.items[i];
        if (!b.is_list || b.items.size() != 2) {
            b.fail("expected (name value)");
        }
        Dimension d = variable(b.items[0], vars);
        if (bound[d.index - 1]) {
            b.fail("variable '" + vars.name(d) + "' bound twice");
        }
        Rational value = literal(b.items[1]);
        if (vars.is_integer(d) && !is_integral(value)) {
            b.items[1].fail("integer variable '" + vars.name(d) + "' given non-integral value " + value.get_str());
        }
        v[d] = value;
        bound[d.index - 1] = true;
    }
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!bound[i]) {
            decl.fail("reference does not assign variable '" + vars.name(Dimension(i + 1)) + "'");
        }
    }
    return v;
}

VariableBound region_bound(const SExpr& e, const VarTable& vars) {
    if (!e.is_list || e.items.size() != 3) {
        e.fail("expected (op variable polynomial)");
    }
    auto op = relop(e.items[0]);
    if (!op) {
        e.items[0].fail("expected a relation operator");
    }
    VariableBound b{variable(e.items[1], vars), *op, polynomial(e.items[2], vars)};
    if (!b.is_normalized()) {
        e.fail("bound on '" + vars.name(b.var) + "' mentions a variable of equal or higher dimension");
    }
    return b;
}

} // namespace

Problem parse_problem(std::string_view text) {
    std::vector<SExpr> decls = Reader(text).read_all();
    const SExpr* vars_decl = nullptr;
    const SExpr* assert_decl = nullptr;
    const SExpr* ref_decl = nullptr;
    for (const auto& d : decls) {
        const SExpr& head = d.head();
        const SExpr** slot = nullptr;
        if (head.is_atom("vars")) {
            slot = &vars_decl;
        } else if (head.is_atom("assert")) {
            slot = &assert_decl;
        } else if (head.is_atom("reference")) {
            slot = &ref_decl;
        } else {
            head.fail("expected vars, assert or reference");
        }
        if (*slot) {
            d.fail("duplicate '" + head.atom + "' declaration");
        }
        *slot = &d;
    }
    if (!vars_decl) {
        throw ParseError("missing (vars ...) declaration", 1, 1);
    }
    if (!assert_decl) {
        throw ParseError("missing (assert ...) declaration", 1, 1);
    }
    if (assert_decl->items.size() != 2) {
        assert_decl->fail("'assert' takes exactly one formula");
    }
    Problem p{var_table(*vars_decl), Formula::atom({}), std::nullopt};
    p.formula = formula(assert_decl->items[1], p.vars);
    if (ref_decl) {
        p.reference = reference(*ref_decl, p.vars);
    }
    return p;
}

Region parse_region(std::string_view text, const VarTable& vars) {
    std::vector<SExpr> top = Reader(text).read_all();
    if (top.size() != 1) {
        throw ParseError("expected exactly one region", 1, 1);
    }
    const SExpr& e = top.front();
    if (!e.head().is_atom("region") || e.items.size() != 3) {
        e.fail("expected (region SIGN (bounds...))");
    }
    const SExpr& sign = e.items[1];
    if (!sign.is_atom("+") && !sign.is_atom("-")) {
        sign.fail("region sign must be + or -");
    }
    const SExpr& body = e.items[2];
    if (!body.is_list) {
        body.fail("expected a list of bounds");
    }
    std::vector<VariableBound> bounds;
    for (const auto& b : body.items) {
        bounds.push_back(region_bound(b, vars));
    }
    Trapezoid t;
    try {
        t = Trapezoid::from_bounds(std::move(bounds));
    } catch (const MalformedInput& ex) {
        body.fail(ex.what());
    }
    return {sign.is_atom("+") ? Region::Sign::Positive : Region::Sign::Negative, std::move(t)};
}

Vector parse_vector(std::string_view line, const VarTable& vars) {
    std::vector<SExpr> atoms = Reader(line).read_all();
    if (atoms.size() != vars.size()) {
        throw ParseError("expected " + std::to_string(vars.size()) + " values, got " + std::to_string(atoms.size()),
                         1, 1);
    }
    Vector v(vars.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        Dimension d(i + 1);
        v[d] = literal(atoms[i]);
        if (vars.is_integer(d) && !is_integral(v[d])) {
            atoms[i].fail("integer variable '" + vars.name(d) + "' given non-integral value");
        }
    }
    return v;
}

std::string render_polynomial(const Polynomial& p, const VarTable& vars) {
    std::vector<std::string> parts;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const std::string& name = vars.name(it->var);
        parts.push_back(it->coeff == 1 ? name : "(* " + it->coeff.get_str() + " " + name + ")");
    }
    if (parts.empty() || p.constant() != 0) {
        parts.push_back(p.constant().get_str());
    }
    if (parts.size() == 1) {
        return parts.front();
    }
    std::string out = "(+";
    for (const auto& s : parts) {
        out += " " + s;
    }
    return out + ")";
}

std::string render_bound(const VariableBound& b, const VarTable& vars) {
    return "(" + std::string(to_string(b.op)) + " " + vars.name(b.var) + " " + render_polynomial(b.poly, vars) + ")";
}

std::string render_region(const Region& r, const VarTable& vars) {
    std::string out = r.is_positive() ? "(region + (" : "(region - (";
    bool first = true;
    for (const auto& b : r.body.bounds()) {
        out += (first ? "" : " ") + render_bound(b, vars);
        first = false;
    }
    return out + "))";
}

std::string render_formula(const Formula& f, const VarTable& vars) {
    switch (f.kind()) {
    case Formula::Kind::Atom: {
        const auto& r = f.relation();
        return "(" + std::string(to_string(r.op)) + " " + render_polynomial(r.lhs, vars) + " " +
               render_polynomial(r.rhs, vars) + ")";
    }
    case Formula::Kind::Not: return "(not " + render_formula(f.children().front(), vars) + ")";
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        std::string out = f.kind() == Formula::Kind::And ? "(and" : "(or";
        for (const auto& c : f.children()) {
            out += " " + render_formula(c, vars);
        }
        return out + ")";
    }
    }
    return {};
}

std::string render_vector(const Vector& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) {
            out += ' ';
        }
        out += v.values()[i].get_str();
    }
    return out;
}

std::string render_problem(const Problem& p) {
    std::ostringstream os;
    os << "(vars";
    for (const auto& e : p.vars.entries()) {
        os << " (" << e.name << (e.type == VarType::Integer ? " int)" : " rat)");
    }
    os << ")\n(assert " << render_formula(p.formula, p.vars) << ")\n";
    if (p.reference) {
        os << "(reference";
        for (std::size_t i = 1; i <= p.vars.size(); ++i) {
            os << " (" << p.vars.name(Dimension(i)) << " " << (*p.reference)[Dimension(i)].get_str() << ")";
        }
        os << ")\n";
    }
    return os.str();
}

} // namespace trapgen
