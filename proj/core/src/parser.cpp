#include "csltl/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

namespace csltl {

namespace {

// ── Lexer ────────────────────────────────────────────────────────────────────

enum class TokKind {
    Ident,      // identifiers and keywords
    Atom,       // backtick-quoted constraint text
    LParen,
    RParen,
    Dot,
    Comma,
    Tilde,
    Amp,        // &
    Bar,        // |
    Plus,
    Arrow,      // ->
    ColonDash,  // :-
    Models,     // |=
    ParBar,     // ||
    End,
};

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(current_.line, current_.col, message);
    }

private:
    void advance() {
        skip_space();
        current_.line = line_;
        current_.col = col_;
        if (pos_ >= text_.size()) {
            current_.kind = TokKind::End;
            current_.text.clear();
            return;
        }
        char ch = text_[pos_];
        if (ch == '`') {
            bump();
            std::string body;
            while (pos_ < text_.size() && text_[pos_] != '`') body += take_char();
            if (pos_ >= text_.size()) {
                throw ParseError(current_.line, current_.col, "unterminated atom");
            }
            bump();  // closing backtick
            current_.kind = TokKind::Atom;
            current_.text = body;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::string word;
            while (pos_ < text_.size()) {
                char c = text_[pos_];
                if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'') {
                    word += take_char();
                } else {
                    break;
                }
            }
            current_.kind = TokKind::Ident;
            current_.text = std::move(word);
            return;
        }
        auto two = [&](char a, char b) {
            return ch == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
        };
        if (two('-', '>')) { bump(); bump(); current_ = tok(TokKind::Arrow, "->"); return; }
        if (two(':', '-')) { bump(); bump(); current_ = tok(TokKind::ColonDash, ":-"); return; }
        if (two('|', '|')) { bump(); bump(); current_ = tok(TokKind::ParBar, "||"); return; }
        if (two('|', '=')) { bump(); bump(); current_ = tok(TokKind::Models, "|="); return; }
        switch (ch) {
            case '(': bump(); current_ = tok(TokKind::LParen, "("); return;
            case ')': bump(); current_ = tok(TokKind::RParen, ")"); return;
            case '.': bump(); current_ = tok(TokKind::Dot, "."); return;
            case ',': bump(); current_ = tok(TokKind::Comma, ","); return;
            case '~': bump(); current_ = tok(TokKind::Tilde, "~"); return;
            case '&': bump(); current_ = tok(TokKind::Amp, "&"); return;
            case '|': bump(); current_ = tok(TokKind::Bar, "|"); return;
            case '+': bump(); current_ = tok(TokKind::Plus, "+"); return;
            default:
                throw ParseError(line_, col_, std::string("unexpected character '") + ch + "'");
        }
    }

    Token tok(TokKind kind, const char* text) const {
        Token t;
        t.kind = kind;
        t.text = text;
        t.line = current_.line;
        t.col = current_.col;
        return t;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char ch = text_[pos_];
            if (ch == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                bump();
            } else {
                break;
            }
        }
    }

    char take_char() {
        char ch = text_[pos_];
        bump();
        return ch;
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token current_;
};

// ── Formula parser ───────────────────────────────────────────────────────────

class FormulaParser {
public:
    FormulaParser(Lexer& lex, const ConstraintSystem& cs) : lex_(lex), cs_(cs) {}

    Formula parse() { return expr(); }

    Formula expr() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case TokKind::Tilde:
                lex_.take();
                return Formula::negate(expr());
            case TokKind::LParen:
                return group();
            case TokKind::Atom: {
                Token atom = lex_.take();
                return Formula::atom(resolve(atom));
            }
            case TokKind::Ident: {
                if (t.text == "true") { lex_.take(); return Formula::truth(); }
                if (t.text == "false") { lex_.take(); return Formula::falsity(); }
                if (t.text == "X") { lex_.take(); return Formula::next(expr()); }
                if (t.text == "F") { lex_.take(); return Formula::eventually(expr()); }
                if (t.text == "G") { lex_.take(); return Formula::always(expr()); }
                if (t.text == "E") {
                    lex_.take();
                    Token var = expect(TokKind::Ident, "variable");
                    expect(TokKind::Dot, "'.'");
                    return Formula::exists(Variable{var.text}, expr());
                }
                lex_.fail("unexpected identifier '" + t.text + "' in formula");
            }
            default:
                lex_.fail("expected a formula");
        }
    }

private:
    Formula group() {
        expect(TokKind::LParen, "'('");
        std::vector<Formula> parts;
        parts.push_back(expr());
        std::optional<TokKind> op;
        std::string op_text;
        while (lex_.peek().kind != TokKind::RParen) {
            const Token& t = lex_.peek();
            bool is_op = t.kind == TokKind::Amp || t.kind == TokKind::Bar ||
                         t.kind == TokKind::Arrow ||
                         (t.kind == TokKind::Ident && t.text == "U");
            if (!is_op) lex_.fail("expected an operator or ')'");
            if (op && (t.kind != *op || (t.kind == TokKind::Ident && t.text != op_text))) {
                lex_.fail("mixed operators need parentheses");
            }
            op = t.kind;
            op_text = t.text;
            lex_.take();
            parts.push_back(expr());
        }
        expect(TokKind::RParen, "')'");
        if (!op) return parts[0];
        Formula out = parts.back();
        for (std::size_t i = parts.size() - 1; i-- > 0;) {
            switch (*op) {
                case TokKind::Amp: out = Formula::conj(parts[i], std::move(out)); break;
                case TokKind::Bar: out = Formula::disj(parts[i], std::move(out)); break;
                case TokKind::Arrow: out = Formula::implies(parts[i], std::move(out)); break;
                default: out = Formula::until(parts[i], std::move(out)); break;
            }
        }
        return out;
    }

    Constraint resolve(const Token& atom) {
        try {
            return cs_.parse_atom(atom.text);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::UnknownAtom) {
                throw Error(ErrorKind::UnknownAtom,
                            std::string(e.what()) + " at " + std::to_string(atom.line) +
                                ":" + std::to_string(atom.col));
            }
            throw;
        }
    }

    Token expect(TokKind kind, const char* what) {
        if (lex_.peek().kind != kind) lex_.fail(std::string("expected ") + what);
        return lex_.take();
    }

    Lexer& lex_;
    const ConstraintSystem& cs_;
};

// ── Agent / program parser ───────────────────────────────────────────────────

class ProgramParser {
public:
    ProgramParser(Lexer& lex, const ConstraintSystem& cs) : lex_(lex), cs_(cs) {}

    Program parse_program() {
        std::vector<Declaration> decls;
        while (lex_.peek().kind != TokKind::End) {
            decls.push_back(declaration());
        }
        return Program(std::move(decls));
    }

    Interpretation parse_spec() {
        Interpretation out;
        while (lex_.peek().kind != TokKind::End) {
            Token name = expect(TokKind::Ident, "process name");
            std::vector<Variable> params = param_list();
            expect(TokKind::Models, "'|='");
            Formula f = FormulaParser(lex_, cs_).expr();
            expect(TokKind::Dot, "'.'");
            if (uses_exists(f)) {
                throw Error(ErrorKind::SpecUsesExists,
                            "specification for " + name.text + " uses a quantifier");
            }
            out.define(ProcessKey{name.text, params.size()}, params, std::move(f));
        }
        return out;
    }

private:
    static bool uses_exists(const Formula& f) {
        switch (f.kind()) {
            case FormulaKind::Exists: return true;
            case FormulaKind::Not:
            case FormulaKind::Next: return uses_exists(f.child());
            case FormulaKind::And:
            case FormulaKind::Until:
                return uses_exists(f.lhs()) || uses_exists(f.rhs());
            default: return false;
        }
    }

    Declaration declaration() {
        Token name = expect(TokKind::Ident, "process name");
        std::vector<Variable> params = param_list();
        expect(TokKind::ColonDash, "':-'");
        Agent body = agent();
        expect(TokKind::Dot, "'.'");
        return Declaration{name.text, std::move(params), std::move(body)};
    }

    std::vector<Variable> param_list() {
        expect(TokKind::LParen, "'('");
        std::vector<Variable> params;
        if (lex_.peek().kind != TokKind::RParen) {
            params.emplace_back(expect(TokKind::Ident, "variable").text);
            while (lex_.peek().kind == TokKind::Comma) {
                lex_.take();
                params.emplace_back(expect(TokKind::Ident, "variable").text);
            }
        }
        expect(TokKind::RParen, "')'");
        return params;
    }

    Agent agent() {
        Agent lhs = choice_term();
        if (lex_.peek().kind == TokKind::ParBar) {
            lex_.take();
            return Agent::par(std::move(lhs), agent());
        }
        return lhs;
    }

    Agent choice_term() {
        if (lex_.peek().kind == TokKind::Ident && lex_.peek().text == "ask") {
            std::vector<Agent::Branch> branches;
            branches.push_back(ask_branch());
            while (lex_.peek().kind == TokKind::Plus) {
                lex_.take();
                branches.push_back(ask_branch());
            }
            return Agent::choice(std::move(branches));
        }
        return simple();
    }

    Agent::Branch ask_branch() {
        expect_keyword("ask");
        Constraint guard = atom();
        expect(TokKind::Arrow, "'->'");
        return Agent::Branch{std::move(guard), simple()};
    }

    Agent simple() {
        const Token& t = lex_.peek();
        if (t.kind == TokKind::LParen) {
            lex_.take();
            Agent inner = agent();
            expect(TokKind::RParen, "')'");
            return inner;
        }
        if (t.kind != TokKind::Ident) lex_.fail("expected an agent");
        if (t.text == "skip") {
            lex_.take();
            return Agent::skip();
        }
        if (t.text == "tell") {
            lex_.take();
            return Agent::tell(atom());
        }
        if (t.text == "now") {
            lex_.take();
            Constraint cond = atom();
            expect_keyword("then");
            Agent then_agent = simple();
            expect_keyword("else");
            Agent else_agent = simple();
            return Agent::now(std::move(cond), std::move(then_agent), std::move(else_agent));
        }
        if (t.text == "exists") {
            lex_.take();
            Token var = expect(TokKind::Ident, "variable");
            return Agent::hide(Variable{var.text}, simple());
        }
        // process call
        Token name = lex_.take();
        std::vector<Variable> args = param_list();
        return Agent::call(name.text, std::move(args));
    }

    Constraint atom() {
        Token t = expect(TokKind::Atom, "a backtick atom");
        try {
            return cs_.parse_atom(t.text);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::UnknownAtom) {
                throw Error(ErrorKind::UnknownAtom,
                            std::string(e.what()) + " at " + std::to_string(t.line) + ":" +
                                std::to_string(t.col));
            }
            throw;
        }
    }

    void expect_keyword(const char* word) {
        if (lex_.peek().kind != TokKind::Ident || lex_.peek().text != word) {
            lex_.fail(std::string("expected '") + word + "'");
        }
        lex_.take();
    }

    Token expect(TokKind kind, const char* what) {
        if (lex_.peek().kind != kind) lex_.fail(std::string("expected ") + what);
        return lex_.take();
    }

    Lexer& lex_;
    const ConstraintSystem& cs_;
};

}  // namespace

Formula parse_formula(std::string_view text, const ConstraintSystem& cs) {
    Lexer lex(text);
    FormulaParser parser(lex, cs);
    Formula f = parser.parse();
    if (lex.peek().kind != TokKind::End) lex.fail("trailing input after formula");
    return f;
}

Program parse_program(std::string_view text, const ConstraintSystem& cs) {
    Lexer lex(text);
    return ProgramParser(lex, cs).parse_program();
}

Interpretation parse_spec(std::string_view text, const ConstraintSystem& cs) {
    Lexer lex(text);
    return ProgramParser(lex, cs).parse_spec();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Parse, "cannot open file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace csltl
