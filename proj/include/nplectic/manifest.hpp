#pragma once

//
// The textual description language for pairing spaces, named forms/fields
// and check directives.  A manifest looks like
//
//     # the R^6 counterexample space
//     manifold R6 plectic 3
//     omega: dx1^dx3^dx5^dx6 + dx2^dx4^dx5^dx6
//     form f1: (x4 - x1^2*x3) dx5^dx6
//     field V: 2*x1 @1 + 2*x2 @2
//     check nplectic
//     check classify f1
//     check bracket D2 (f1 f2)
//     check jacobi 3 (f1 f2 f3)
//     check kernel 2
//     check module g f1
//
// Coordinates are 1-based: x3 is a coordinate function, dx3 its differential
// and @3 the coordinate vector field.  Polynomial coefficients use integer
// or p/q rational literals with + - * ^ and juxtaposition as multiplication;
// ^ between basis symbols is the wedge product.  "#" starts a line comment.
//
// parse/render round-trip: render_manifest produces canonical text that
// parses back to an equal Manifest.
//

#include "space.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace nplectic {

enum class CheckKind { NPlectic, Classify, Bracket, Jacobi, Kernel, Module };

struct CheckDirective {
    CheckKind kind = CheckKind::NPlectic;
    int arity = 0;                   ///< D<arity> / jacobi <arity> / kernel <arity>
    std::vector<std::string> names;  ///< referenced form names, in order

    bool operator==(const CheckDirective& o) const {
        return kind == o.kind && arity == o.arity && names == o.names;
    }

    /// canonical one-line rendering (also used as the check id in reports)
    [[nodiscard]] std::string render() const {
        std::ostringstream os;
        switch (kind) {
            case CheckKind::NPlectic: os << "nplectic"; break;
            case CheckKind::Classify: os << "classify " << names[0]; break;
            case CheckKind::Bracket:
            case CheckKind::Jacobi:
                os << (kind == CheckKind::Bracket ? "bracket D" : "jacobi ") << arity << " (";
                for (std::size_t i = 0; i < names.size(); ++i) os << (i ? " " : "") << names[i];
                os << ")";
                break;
            case CheckKind::Kernel: os << "kernel " << arity; break;
            case CheckKind::Module: os << "module " << names[0] << " " << names[1]; break;
        }
        return os.str();
    }
};

struct Manifest {
    int dim = 0;
    int plectic_degree = 0;
    DiffForm omega;
    std::vector<std::pair<std::string, DiffForm>> forms;   ///< declaration order
    std::vector<std::pair<std::string, MultiVec>> fields;  ///< declaration order
    std::vector<CheckDirective> checks;

    [[nodiscard]] const DiffForm* find_form(const std::string& name) const {
        for (const auto& [n, f] : forms)
            if (n == name) return &f;
        return nullptr;
    }
    [[nodiscard]] const MultiVec* find_field(const std::string& name) const {
        for (const auto& [n, f] : fields)
            if (n == name) return &f;
        return nullptr;
    }

    bool operator==(const Manifest& o) const {
        return dim == o.dim && plectic_degree == o.plectic_degree && omega == o.omega &&
               forms == o.forms && fields == o.fields && checks == o.checks;
    }
};

namespace detail {

enum class TokKind { Ident, Int, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    long long value = 0;  // for Int
    int line = 0, column = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : src_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const Token& at, const std::string& msg) const {
        throw ParseError(at.line, at.column, msg);
    }

private:
    void advance() {
        skip_space_and_comments();
        tok_ = Token{};
        tok_.line = line_;
        tok_.column = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = TokKind::End;
            tok_.text = "<end of input>";
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            tok_.kind = TokKind::Int;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                tok_.text.push_back(take_char());
            if (tok_.text.size() > 12) throw ParseError(tok_.line, tok_.column, "integer literal too large");
            tok_.value = std::stoll(tok_.text);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            tok_.kind = TokKind::Ident;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                tok_.text.push_back(take_char());
            return;
        }
        if (std::string("+-*/^():@").find(c) != std::string::npos) {
            tok_.kind = TokKind::Punct;
            tok_.text.push_back(take_char());
            return;
        }
        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') take_char();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                take_char();
            } else {
                break;
            }
        }
    }

    char take_char() {
        const char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

/// intermediate value of an expression: a scalar part plus pure-covariant
/// and pure-contravariant parts (mixing dx and @ is rejected when combined)
struct ExprValue {
    Polynomial scalar;
    DiffForm cov;
    MultiVec con;

    explicit ExprValue(int dim) : scalar(dim), cov(dim), con(dim) {}

    [[nodiscard]] bool pure_scalar() const { return cov.is_zero() && con.is_zero(); }
};

class ExprParser {
public:
    ExprParser(Lexer& lx, int dim) : lx_(lx), dim_(dim) {}

    /// sum := term (('+'|'-') term)*
    ExprValue parse_sum() {
        ExprValue acc = parse_term();
        while (is_punct("+") || is_punct("-")) {
            const Token op = lx_.take();
            ExprValue rhs = parse_term();
            if (op.text == "-") negate(rhs);
            add_into(acc, rhs, op);
        }
        return acc;
    }

private:
    /// term := factor (('*' factor) | factor)*   -- juxtaposition multiplies
    ExprValue parse_term() {
        ExprValue acc = parse_factor();
        while (true) {
            if (is_punct("*")) {
                lx_.take();
                acc = multiply(acc, parse_factor(), lx_.peek());
            } else if (starts_factor()) {
                acc = multiply(acc, parse_factor(), lx_.peek());
            } else {
                break;
            }
        }
        return acc;
    }

    /// factor := ['-'] atom ('^' (INT | basis))*
    ExprValue parse_factor() {
        if (is_punct("-")) {
            lx_.take();
            ExprValue v = parse_factor();
            negate(v);
            return v;
        }
        ExprValue v = parse_atom();
        while (is_punct("^")) {
            const Token caret = lx_.take();
            if (lx_.peek().kind == TokKind::Int) {
                if (!v.pure_scalar())
                    lx_.fail(caret, "exponent applies to polynomials, not basis elements");
                const long long e = lx_.take().value;
                if (e < 0 || e > 64) lx_.fail(caret, "exponent out of range 0..64");
                Polynomial p = Polynomial::constant(dim_, 1);
                for (long long i = 0; i < e; ++i) p = p * v.scalar;
                v.scalar = std::move(p);
            } else {
                // wedge chain: basis ^ basis ^ ...
                if (v.pure_scalar())
                    lx_.fail(caret, "'^' after a polynomial requires an integer exponent");
                ExprValue rhs = parse_atom();
                v = multiply(v, rhs, caret);
            }
        }
        return v;
    }

    /// atom := INT ['/' INT] | xN | dxN | '@' INT | '(' sum ')'
    ExprValue parse_atom() {
        const Token t = lx_.peek();
        if (t.kind == TokKind::Int) {
            lx_.take();
            Rational c(t.value);
            if (is_punct("/")) {
                lx_.take();
                const Token den = lx_.peek();
                if (den.kind != TokKind::Int || den.value == 0)
                    lx_.fail(den, "expected a nonzero integer denominator");
                lx_.take();
                c = c / Rational(den.value);
            }
            ExprValue v(dim_);
            v.scalar = Polynomial::constant(dim_, c);
            return v;
        }
        if (t.kind == TokKind::Ident) {
            if (auto ix = basis_suffix(t.text, "dx")) {
                lx_.take();
                ExprValue v(dim_);
                v.cov.add_term({check_index(*ix, t)}, Polynomial::constant(dim_, 1));
                return v;
            }
            if (auto ix = basis_suffix(t.text, "x")) {
                lx_.take();
                ExprValue v(dim_);
                v.scalar = Polynomial::variable(dim_, check_index(*ix, t));
                return v;
            }
            lx_.fail(t, "expected a number, coordinate, basis element or '(' here, got '" +
                            t.text + "'");
        }
        if (is_punct("@")) {
            lx_.take();
            const Token ix = lx_.peek();
            if (ix.kind != TokKind::Int) lx_.fail(ix, "expected a coordinate index after '@'");
            lx_.take();
            ExprValue v(dim_);
            v.con.add_term({check_index(static_cast<int>(ix.value), ix)},
                           Polynomial::constant(dim_, 1));
            return v;
        }
        if (is_punct("(")) {
            lx_.take();
            ExprValue v = parse_sum();
            if (!is_punct(")")) lx_.fail(lx_.peek(), "expected ')'");
            lx_.take();
            return v;
        }
        lx_.fail(t, "expected an expression, got '" + t.text + "'");
    }

    [[nodiscard]] bool starts_factor() const {
        const Token& t = lx_.peek();
        if (t.kind == TokKind::Int) return true;
        if (t.kind == TokKind::Ident)
            return basis_suffix(t.text, "dx").has_value() || basis_suffix(t.text, "x").has_value();
        return t.kind == TokKind::Punct && (t.text == "(" || t.text == "@");
    }

    [[nodiscard]] bool is_punct(const char* s) const {
        return lx_.peek().kind == TokKind::Punct && lx_.peek().text == s;
    }

    /// "dx12" -> 12 for prefix "dx"; nullopt when the shape does not match
    static std::optional<int> basis_suffix(const std::string& text, const std::string& prefix) {
        if (text.size() <= prefix.size() || text.compare(0, prefix.size(), prefix) != 0)
            return std::nullopt;
        int v = 0;
        for (std::size_t i = prefix.size(); i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
            v = v * 10 + (text[i] - '0');
            if (v > 1000) return std::nullopt;
        }
        return v;
    }

    int check_index(int ix, const Token& at) const {
        if (ix < 1 || ix > dim_)
            lx_.fail(at, "coordinate index " + std::to_string(ix) + " outside 1.." +
                             std::to_string(dim_));
        return ix;
    }

    static void negate(ExprValue& v) {
        v.scalar = -v.scalar;
        v.cov = -v.cov;
        v.con = -v.con;
    }

    void add_into(ExprValue& acc, const ExprValue& rhs, const Token& at) const {
        acc.scalar += rhs.scalar;
        acc.cov += rhs.cov;
        acc.con += rhs.con;
        check_mix(acc, at);
    }

    ExprValue multiply(const ExprValue& a, const ExprValue& b, const Token& at) const {
        if (!a.cov.is_zero() && !b.con.is_zero())
            lx_.fail(at, "cannot multiply a form expression by a field expression");
        if (!a.con.is_zero() && !b.cov.is_zero())
            lx_.fail(at, "cannot multiply a field expression by a form expression");
        ExprValue r(dim_);
        r.scalar = a.scalar * b.scalar;
        // (s_a + A) ^ (s_b + B) = s_a s_b + s_a B + s_b A + A ^ B, per kind
        r.cov = a.scalar * b.cov + b.scalar * a.cov + wedge(a.cov, b.cov);
        r.con = a.scalar * b.con + b.scalar * a.con + wedge(a.con, b.con);
        check_mix(r, at);
        return r;
    }

    void check_mix(const ExprValue& v, const Token& at) const {
        if (!v.cov.is_zero() && !v.con.is_zero())
            lx_.fail(at, "expression mixes dx and @ basis elements");
    }

    Lexer& lx_;
    int dim_;
};

inline bool is_keyword(const std::string& s) {
    static const char* kw[] = {"manifold", "plectic", "omega",  "form",
                               "field",    "check",   "nplectic", "classify",
                               "bracket",  "jacobi",  "kernel", "module"};
    for (const char* k : kw)
        if (s == k) return true;
    return false;
}

/// user names must not collide with coordinates, differentials, fields,
/// bracket symbols or the R<d> header token
inline bool is_reserved_shape(const std::string& s) {
    const auto digits_after = [&](std::size_t k) {
        if (s.size() <= k) return false;
        for (std::size_t i = k; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    if (s.size() >= 2 && s[0] == 'x' && digits_after(1)) return true;
    if (s.size() >= 3 && s[0] == 'd' && s[1] == 'x' && digits_after(2)) return true;
    if (s.size() >= 2 && s[0] == 'D' && digits_after(1)) return true;
    if (s.size() >= 2 && s[0] == 'R' && digits_after(1)) return true;
    return false;
}

}  // namespace detail

inline Manifest parse_manifest(const std::string& text) {
    detail::Lexer lx(text);
    Manifest m;

    const auto expect_ident = [&](const char* what) {
        const detail::Token t = lx.peek();
        if (t.kind != detail::TokKind::Ident)
            lx.fail(t, std::string("expected ") + what + ", got '" + t.text + "'");
        return lx.take();
    };
    const auto expect_keyword = [&](const char* kw) {
        const detail::Token t = expect_ident(("'" + std::string(kw) + "'").c_str());
        if (t.text != kw) lx.fail(t, "expected '" + std::string(kw) + "', got '" + t.text + "'");
        return t;
    };
    const auto expect_int = [&](const char* what) {
        const detail::Token t = lx.peek();
        if (t.kind != detail::TokKind::Int)
            lx.fail(t, std::string("expected ") + what + ", got '" + t.text + "'");
        return lx.take();
    };
    const auto expect_punct = [&](const char* p) {
        const detail::Token t = lx.peek();
        if (t.kind != detail::TokKind::Punct || t.text != p)
            lx.fail(t, "expected '" + std::string(p) + "', got '" + t.text + "'");
        return lx.take();
    };

    // header: manifold R<d> plectic <n>
    expect_keyword("manifold");
    {
        const detail::Token r = expect_ident("a manifold token like 'R6'");
        if (r.text.size() < 2 || r.text[0] != 'R')
            lx.fail(r, "expected a manifold token like 'R6', got '" + r.text + "'");
        int d = 0;
        for (std::size_t i = 1; i < r.text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(r.text[i])))
                lx.fail(r, "expected a manifold token like 'R6', got '" + r.text + "'");
            d = d * 10 + (r.text[i] - '0');
        }
        if (d < 2 || d > 16) lx.fail(r, "manifold dimension must be in 2..16");
        m.dim = d;
    }
    expect_keyword("plectic");
    {
        const detail::Token n = expect_int("the pairing degree");
        if (n.value < 1 || n.value + 1 > m.dim)
            lx.fail(n, "pairing degree must satisfy 1 <= n <= dim-1");
        m.plectic_degree = static_cast<int>(n.value);
    }
    m.omega = DiffForm(m.dim);

    bool have_omega = false;
    std::map<std::string, char> declared;  // name -> 'f' (form) / 'v' (field)

    const auto parse_expr = [&]() {
        detail::ExprParser ep(lx, m.dim);
        return ep.parse_sum();
    };
    const auto declare = [&](const detail::Token& name) {
        if (detail::is_keyword(name.text) || detail::is_reserved_shape(name.text))
            lx.fail(name, "'" + name.text + "' is reserved and cannot name a form or field");
        if (declared.count(name.text)) lx.fail(name, "'" + name.text + "' is already declared");
    };
    const auto known_form = [&](const detail::Token& name) {
        if (!declared.count(name.text) || declared.at(name.text) != 'f')
            lx.fail(name, "'" + name.text + "' is not a declared form");
        return name.text;
    };

    while (lx.peek().kind != detail::TokKind::End) {
        const detail::Token head = expect_ident("a statement keyword");
        if (head.text == "omega") {
            if (have_omega) lx.fail(head, "omega is already defined");
            expect_punct(":");
            detail::ExprValue v = parse_expr();
            if (!v.con.is_zero()) lx.fail(head, "omega must be a form expression");
            if (!v.scalar.is_zero()) lx.fail(head, "omega cannot have a scalar part");
            DiffForm w = std::move(v.cov);
            if (w.is_zero()) lx.fail(head, "omega must be nonzero");
            if (!w.is_homogeneous() || w.degree() != m.plectic_degree + 1)
                lx.fail(head, "omega must be homogeneous of tensor degree " +
                                  std::to_string(m.plectic_degree + 1));
            m.omega = std::move(w);
            have_omega = true;
        } else if (head.text == "form") {
            const detail::Token name = expect_ident("a form name");
            declare(name);
            expect_punct(":");
            detail::ExprValue v = parse_expr();
            if (!v.con.is_zero()) lx.fail(name, "a form cannot contain '@' basis elements");
            DiffForm f = std::move(v.cov);
            if (!v.scalar.is_zero()) f.add_term({}, v.scalar);
            m.forms.emplace_back(name.text, std::move(f));
            declared.emplace(name.text, 'f');
        } else if (head.text == "field") {
            const detail::Token name = expect_ident("a field name");
            declare(name);
            expect_punct(":");
            detail::ExprValue v = parse_expr();
            if (!v.cov.is_zero()) lx.fail(name, "a field cannot contain 'dx' basis elements");
            MultiVec x = std::move(v.con);
            if (!v.scalar.is_zero()) x.add_term({}, v.scalar);
            m.fields.emplace_back(name.text, std::move(x));
            declared.emplace(name.text, 'v');
        } else if (head.text == "check") {
            CheckDirective dir;
            const detail::Token what = expect_ident("a check directive");
            if (what.text == "nplectic") {
                dir.kind = CheckKind::NPlectic;
            } else if (what.text == "classify") {
                dir.kind = CheckKind::Classify;
                dir.names.push_back(known_form(expect_ident("a form name")));
            } else if (what.text == "bracket" || what.text == "jacobi") {
                dir.kind = what.text == "bracket" ? CheckKind::Bracket : CheckKind::Jacobi;
                if (dir.kind == CheckKind::Bracket) {
                    const detail::Token dtok = expect_ident("a bracket symbol like 'D2'");
                    if (dtok.text.size() < 2 || dtok.text[0] != 'D' ||
                        !detail::is_reserved_shape(dtok.text))
                        lx.fail(dtok, "expected a bracket symbol like 'D2', got '" + dtok.text + "'");
                    dir.arity = std::stoi(dtok.text.substr(1));
                } else {
                    dir.arity = static_cast<int>(expect_int("the identity dimension").value);
                }
                if (dir.arity < 1 || dir.arity > 9)
                    lx.fail(what, "arity must be in 1..9");
                expect_punct("(");
                while (lx.peek().kind == detail::TokKind::Ident)
                    dir.names.push_back(known_form(lx.take()));
                expect_punct(")");
                if (static_cast<int>(dir.names.size()) != dir.arity)
                    lx.fail(what, "expected " + std::to_string(dir.arity) + " form names, got " +
                                      std::to_string(dir.names.size()));
            } else if (what.text == "kernel") {
                dir.kind = CheckKind::Kernel;
                const detail::Token k = expect_int("a multivector degree");
                if (k.value < 0 || k.value > m.dim)
                    lx.fail(k, "kernel degree must be in 0..dim");
                dir.arity = static_cast<int>(k.value);
            } else if (what.text == "module") {
                dir.kind = CheckKind::Module;
                dir.names.push_back(known_form(expect_ident("a scalar form name")));
                dir.names.push_back(known_form(expect_ident("a form name")));
            } else {
                lx.fail(what, "unknown check directive '" + what.text + "'");
            }
            m.checks.push_back(std::move(dir));
        } else {
            lx.fail(head, "expected 'omega', 'form', 'field' or 'check', got '" + head.text + "'");
        }
    }

    if (!have_omega) throw ParseError(1, 1, "manifest defines no omega");
    return m;
}

/// canonical text; parses back to an equal Manifest
inline std::string render_manifest(const Manifest& m) {
    std::ostringstream os;
    os << "manifold R" << m.dim << " plectic " << m.plectic_degree << "\n";
    os << "omega: " << m.omega.render() << "\n";
    for (const auto& [name, f] : m.forms) os << "form " << name << ": " << f.render() << "\n";
    for (const auto& [name, x] : m.fields) os << "field " << name << ": " << x.render() << "\n";
    for (const auto& c : m.checks) os << "check " << c.render() << "\n";
    return os.str();
}

/// the four built-in pairing spaces used by the randomized suites
inline Manifest builtin_manifest(const std::string& id) {
    std::ostringstream os;
    if (id == "symplectic-R2") {
        os << "manifold R2 plectic 1\nomega: dx1^dx2\n";
    } else if (id == "volume-R3") {
        os << "manifold R3 plectic 2\nomega: dx1^dx2^dx3\n";
    } else if (id == "paper-R6") {
        os << "manifold R6 plectic 3\nomega: dx1^dx3^dx5^dx6 + dx2^dx4^dx5^dx6\n";
    } else if (id == "darboux-R6") {
        os << "manifold R6 plectic 2\nomega: dx2^dx3^dx4 - dx1^dx3^dx5 - dx1^dx2^dx6\n";
    } else {
        throw InvalidArgument("unknown built-in space id: " + id);
    }
    os << "check nplectic\n";
    return parse_manifest(os.str());
}

}  // namespace nplectic
