/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "linterm/program.hpp"

#include <json.hpp>

#include <cctype>
#include <map>
#include <sstream>

namespace linterm {

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string &src) : s_(src) { advance(); }

    const Token &peek() const { return cur_; }
    Token take() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_space();
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= s_.size()) {
            cur_.kind = Tok::End;
            cur_.text.clear();
            return;
        }
        char c = s_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                id += get();
            if (pos_ < s_.size() && s_[pos_] == '\'') {
                id += get();
            }
            cur_ = {Tok::Ident, id, cur_.line, cur_.col};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                num += get();
            cur_ = {Tok::Number, num, cur_.line, cur_.col};
            return;
        }
        if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
            get();
            get();
            cur_ = {Tok::Sym, "->", cur_.line, cur_.col};
            return;
        }
        if ((c == '<' || c == '>') && pos_ + 1 < s_.size() && s_[pos_ + 1] == '=') {
            std::string op;
            op += get();
            op += get();
            cur_ = {Tok::Sym, op, cur_.line, cur_.col};
            return;
        }
        cur_ = {Tok::Sym, std::string(1, get()), cur_.line, cur_.col};
    }

    void skip_space() {
        for (;;) {
            while (pos_ < s_.size() &&
                   std::isspace(static_cast<unsigned char>(s_[pos_])))
                get();
            if (pos_ < s_.size() && s_[pos_] == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') get();
                continue;
            }
            break;
        }
    }

    char get() {
        char c = s_[pos_++];
        if (c == '\n') {
            line_++;
            col_ = 1;
        } else {
            col_++;
        }
        return c;
    }

    std::string s_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_;
};

class Parser {
public:
    explicit Parser(const std::string &src) : lex_(src) {}

    Program parse() {
        bool saw_loop = false, saw_cfg = false;
        while (lex_.peek().kind != Tok::End) {
            Token t = expect_ident("statement");
            if (t.text == "vars") {
                if (!vars_.empty()) err(t, "duplicate vars statement");
                while (lex_.peek().kind == Tok::Ident && !is_keyword(lex_.peek().text)) {
                    Token v = lex_.take();
                    if (v.text.back() == '\'') err(v, "primed name in vars");
                    vars_.push_back(v.text);
                }
                if (vars_.empty()) err(t, "vars statement lists no variables");
            } else if (t.text == "domain") {
                Token d = expect_ident("domain name");
                if (d.text == "int")
                    domain_ = Domain::Int;
                else if (d.text == "rat")
                    domain_ = Domain::Rat;
                else if (d.text == "real")
                    domain_ = Domain::Real;
                else
                    err(d, "unknown domain '" + d.text + "'");
            } else if (t.text == "init") {
                if (lex_.peek().kind == Tok::Ident) {
                    Token loc = lex_.take();
                    init_loc_ = loc.text;
                }
                init_ = block(false);
            } else if (t.text == "invariant") {
                Token loc = expect_ident("location name");
                invariants_[loc.text] = block(false);
            } else if (t.text == "edge") {
                saw_cfg = true;
                Token src = expect_ident("source location");
                expect_sym("->");
                Token dst = expect_ident("target location");
                edges_.push_back({src.text, dst.text, block(true)});
            } else if (t.text == "loop") {
                saw_loop = true;
                expect_sym("{");
                while (lex_.peek().kind == Tok::Ident && lex_.peek().text == "path") {
                    lex_.take();
                    paths_.push_back(block(true));
                }
                if (paths_.empty()) err(t, "loop with no paths");
                expect_sym("}");
            } else {
                err(t, "unknown statement '" + t.text + "'");
            }
        }
        if (vars_.empty()) throw SyntaxError(1, 1, "missing vars statement");
        if (saw_loop && saw_cfg) throw SyntaxError(1, 1, "cannot mix loop and edge statements");
        if (saw_loop) return build_mlc();
        if (saw_cfg) return build_cfg();
        throw SyntaxError(1, 1, "no loop or edge statements");
    }

private:
    static bool is_keyword(const std::string &s) {
        return s == "vars" || s == "domain" || s == "init" || s == "invariant" ||
               s == "edge" || s == "loop" || s == "path";
    }

    [[noreturn]] void err(const Token &t, const std::string &msg) {
        throw SyntaxError(t.line, t.col, msg);
    }

    Token expect_ident(const std::string &what) {
        Token t = lex_.take();
        if (t.kind != Tok::Ident) err(t, "expected " + what);
        return t;
    }
    void expect_sym(const std::string &s) {
        Token t = lex_.take();
        if (t.kind != Tok::Sym || t.text != s) err(t, "expected '" + s + "'");
    }

    VarId var_id(const Token &t, bool allow_primed) {
        std::string name = t.text;
        bool primed = !name.empty() && name.back() == '\'';
        if (primed) name.pop_back();
        for (size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == name)
                return primed ? static_cast<VarId>(vars_.size() + i) : static_cast<VarId>(i);
        }
        err(t, "undeclared variable '" + name + "'");
    }

    Rat number() {
        Token t = lex_.take();
        if (t.kind != Tok::Number) err(t, "expected number");
        Rat v = Rat::parse(t.text);
        if (lex_.peek().kind == Tok::Sym && lex_.peek().text == "/") {
            lex_.take();
            Token d = lex_.take();
            if (d.kind != Tok::Number) err(d, "expected denominator");
            Rat den = Rat::parse(d.text);
            if (den.is_zero()) err(d, "zero denominator");
            v /= den;
        }
        return v;
    }

    // term := coefficient ['*' var] | var
    void term(LinExpr &acc, const Rat &sign, bool allow_primed) {
        if (lex_.peek().kind == Tok::Number) {
            Rat c = number() * sign;
            if (lex_.peek().kind == Tok::Sym && lex_.peek().text == "*") {
                lex_.take();
                Token v = expect_ident("variable");
                bool primed = v.text.back() == '\'';
                if (primed && !allow_primed) err(v, "primed variable not allowed here");
                acc.add_term(var_id(v, allow_primed), c);
            } else {
                acc.set_constant(acc.constant() + c);
            }
            return;
        }
        Token v = expect_ident("variable or number");
        bool primed = v.text.back() == '\'';
        if (primed && !allow_primed) err(v, "primed variable not allowed here");
        acc.add_term(var_id(v, allow_primed), sign);
    }

    LinExpr sum(bool allow_primed) {
        LinExpr acc;
        Rat sign(1);
        if (lex_.peek().kind == Tok::Sym &&
            (lex_.peek().text == "-" || lex_.peek().text == "+")) {
            sign = lex_.take().text == "-" ? Rat(-1) : Rat(1);
        }
        term(acc, sign, allow_primed);
        while (lex_.peek().kind == Tok::Sym &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            Rat s = lex_.take().text == "-" ? Rat(-1) : Rat(1);
            term(acc, s, allow_primed);
        }
        return acc;
    }

    Ineq constraint(bool allow_primed) {
        LinExpr lhs = sum(allow_primed);
        Token op = lex_.take();
        if (op.kind != Tok::Sym ||
            (op.text != "<=" && op.text != ">=" && op.text != "=" && op.text != "<" &&
             op.text != ">"))
            err(op, "expected relation");
        LinExpr rhs = sum(allow_primed);
        LinExpr d = lhs - rhs;
        if (op.text == "=") return Ineq::eq(d);
        if (op.text == ">=") {
            d *= Rat(-1);
            return Ineq::le(d);
        }
        if (op.text == "<=") return Ineq::le(d);
        // Strict forms: admitted over the integers only, normalized to the
        // non-strict neighbor.
        if (domain_ != Domain::Int)
            throw DomainError("strict inequality at " + std::to_string(op.line) + ":" +
                              std::to_string(op.col) + " requires domain int");
        if (op.text == ">") d *= Rat(-1);
        d.set_constant(d.constant() + Rat(1));
        return Ineq::le(d);
    }

    std::vector<Ineq> block(bool allow_primed) {
        expect_sym("{");
        std::vector<Ineq> rows;
        if (lex_.peek().kind == Tok::Sym && lex_.peek().text == "}") {
            lex_.take();
            return rows;
        }
        rows.push_back(constraint(allow_primed));
        while (lex_.peek().kind == Tok::Sym && lex_.peek().text == ",") {
            lex_.take();
            rows.push_back(constraint(allow_primed));
        }
        expect_sym("}");
        return rows;
    }

    Poly rows_to_poly(const std::vector<Ineq> &rows, int dim) {
        Poly p(dim);
        for (const auto &r : rows) p.add(r);
        return p;
    }

    Program build_mlc() {
        MlcLoop m;
        m.n = static_cast<int>(vars_.size());
        m.domain = domain_;
        m.vars = vars_;
        for (const auto &rows : paths_) m.paths.emplace_back(m.n, rows_to_poly(rows, 2 * m.n));
        if (init_) m.init_states = rows_to_poly(*init_, m.n);
        if (!invariants_.empty())
            throw SyntaxError(1, 1, "invariant statements require edge form");
        return m;
    }

    Program build_cfg() {
        Cfg c;
        c.n = static_cast<int>(vars_.size());
        c.domain = domain_;
        c.vars = vars_;
        auto loc_id = [&](const std::string &name) {
            for (size_t i = 0; i < c.locations.size(); ++i)
                if (c.locations[i] == name) return static_cast<int>(i);
            c.locations.push_back(name);
            return static_cast<int>(c.locations.size() - 1);
        };
        for (const auto &e : edges_) {
            int s = loc_id(std::get<0>(e));
            int d = loc_id(std::get<1>(e));
            c.edges.push_back({s, d, TransRel(c.n, rows_to_poly(std::get<2>(e), 2 * c.n))});
        }
        if (init_loc_) {
            int id = c.loc_index(*init_loc_);
            if (id < 0) throw ArityError("init location '" + *init_loc_ + "' has no edges");
            c.initial = id;
        }
        if (init_) c.init_states = rows_to_poly(*init_, c.n);
        for (const auto &[loc, rows] : invariants_) {
            int id = c.loc_index(loc);
            if (id < 0) throw ArityError("invariant location '" + loc + "' has no edges");
            c.invariants[id] = rows_to_poly(rows, c.n);
        }
        return c;
    }

    Lexer lex_;
    std::vector<std::string> vars_;
    Domain domain_ = Domain::Rat;
    std::optional<std::vector<Ineq>> init_;
    std::optional<std::string> init_loc_;
    std::map<std::string, std::vector<Ineq>> invariants_;
    std::vector<std::tuple<std::string, std::string, std::vector<Ineq>>> edges_;
    std::vector<std::vector<Ineq>> paths_;
};

std::string rows_text(const Poly &p, const std::vector<std::string> &names) {
    std::string s;
    for (size_t i = 0; i < p.rows().size(); ++i) {
        if (i) s += ", ";
        s += p.rows()[i].str(names);
    }
    return s;
}

} // namespace

Program parse_program(const std::string &text) { return Parser(text).parse(); }

std::string print_program(const Program &p) {
    std::ostringstream out;
    const auto &vars = program_vars(p);
    out << "vars";
    for (const auto &v : vars) out << " " << v;
    out << "\n";
    out << "domain " << domain_name(program_domain(p)) << "\n";
    if (std::holds_alternative<MlcLoop>(p)) {
        const auto &m = std::get<MlcLoop>(p);
        auto names = m.names2n();
        if (m.init_states) out << "init { " << rows_text(*m.init_states, names) << " }\n";
        out << "loop {\n";
        for (const auto &q : m.paths) out << "  path { " << rows_text(q.rel, names) << " }\n";
        out << "}\n";
        return out.str();
    }
    const auto &c = std::get<Cfg>(p);
    auto names = c.names2n();
    if (c.init_states)
        out << "init " << c.locations[c.initial] << " { " << rows_text(*c.init_states, names)
            << " }\n";
    for (const auto &[loc, inv] : c.invariants)
        out << "invariant " << c.locations[loc] << " { " << rows_text(inv, names) << " }\n";
    for (const auto &e : c.edges)
        out << "edge " << c.locations[e.src] << " -> " << c.locations[e.dst] << " { "
            << rows_text(e.rel.rel, names) << " }\n";
    return out.str();
}

std::string program_to_json(const Program &p) {
    nlohmann::json j;
    j["schema"] = "1";
    j["vars"] = program_vars(p);
    j["domain"] = domain_name(program_domain(p));
    auto rows_json = [](const Poly &poly, const std::vector<std::string> &names) {
        std::vector<std::string> out;
        for (const auto &r : poly.rows()) out.push_back(r.str(names));
        return out;
    };
    if (std::holds_alternative<MlcLoop>(p)) {
        const auto &m = std::get<MlcLoop>(p);
        auto names = m.names2n();
        j["type"] = "mlc";
        j["locations"] = {"l0"};
        auto edges = nlohmann::json::array();
        for (const auto &q : m.paths)
            edges.push_back({{"src", "l0"}, {"dst", "l0"}, {"constraints", rows_json(q.rel, names)}});
        j["edges"] = edges;
        if (m.init_states) j["init"] = rows_json(*m.init_states, names);
        j["invariants"] = nlohmann::json::object();
        return j.dump(2);
    }
    const auto &c = std::get<Cfg>(p);
    auto names = c.names2n();
    j["type"] = "cfg";
    j["locations"] = c.locations;
    j["initial"] = c.locations[c.initial];
    auto edges = nlohmann::json::array();
    for (const auto &e : c.edges)
        edges.push_back({{"src", c.locations[e.src]},
                         {"dst", c.locations[e.dst]},
                         {"constraints", rows_json(e.rel.rel, names)}});
    j["edges"] = edges;
    if (c.init_states) j["init"] = rows_json(*c.init_states, names);
    auto invs = nlohmann::json::object();
    for (const auto &[loc, inv] : c.invariants) invs[c.locations[loc]] = rows_json(inv, names);
    j["invariants"] = invs;
    return j.dump(2);
}

} // namespace linterm
