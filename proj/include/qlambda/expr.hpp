#pragma once

#include <optional>
#include <string>

#include "qlambda/matrix_element.hpp"

namespace qlambda {

// Recursive-descent parser for the algebra-expression grammar:
//   expr  := term (('+'|'-') term)* ;
//   term  := [coeff '*'] atom ('*' atom)* ;
//   atom  := 'chi(' gamma ',' gamma ')' | 'd(' int ';' gamma ')'
//          | 'S(' int ',' int ')' | 'Sstar(' int ',' int ')' | 'e' ;
//   coeff := rational | '(' rational ('+'|'-') rational 'i' ')' ;
// 'chi(a,b)' alone is chi_{[a,b)}.delta_1; 'd(n;c)' is the pure translation
// delta_{[lambda^n : c]}, only meaningful inside a product with an interval
// factor.

namespace detail {

class ExprParser {
public:
    ExprParser(std::string text, RingPtr ring)
        : text_(std::move(text)), ring_(std::move(ring)) {}

    AlgebraElement parse_expr_toplevel() {
        AlgebraElement x = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) fail("unexpected trailing input");
        return x;
    }

private:
    // a product factor is either an algebra element or a bare group translation
    struct Factor {
        std::optional<AlgebraElement> elem;
        std::optional<GroupElement> delta;
    };

    [[noreturn]] void fail(const std::string& msg) const {
        size_t line = 1, col = 1;
        for (size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(ErrorCode::Parse, msg + " at line " + std::to_string(line) + ", column " +
                                          std::to_string(col));
    }

    void skip_ws() {
        while (pos_ < text_.size() && isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!consume(c)) fail(std::string("expected '") + c + "'");
    }
    bool consume_word(const char* w) {
        skip_ws();
        size_t len = std::strlen(w);
        if (text_.compare(pos_, len, w) != 0) return false;
        // the word must not continue as an identifier
        size_t after = pos_ + len;
        if (after < text_.size() && (isalnum(static_cast<unsigned char>(text_[after])) ||
                                     text_[after] == '_'))
            return false;
        pos_ += len;
        return true;
    }

    Int parse_int() {
        skip_ws();
        size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        size_t digits = pos_;
        while (pos_ < text_.size() && isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits) fail("expected integer");
        return Int(text_.substr(start, pos_ - start));
    }

    Rat parse_rational() {
        Int num = parse_int();
        if (consume('/')) {
            Int den = parse_int();
            return make_rat(num, den);
        }
        return Rat(num);
    }

    // gamma literal: scan to the next top-level ',' / ';' / ')' and hand the
    // slice to the gamma grammar
    GammaElement parse_gamma_literal() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ';' &&
               text_[pos_] != ')')
            ++pos_;
        std::string slice = text_.substr(start, pos_ - start);
        if (slice.empty()) fail("expected gamma element");
        try {
            return parse_gamma_element(slice, ring_);
        } catch (const Error& e) {
            pos_ = start;
            fail(e.what());
        }
    }

    CScalar parse_coeff() {
        if (consume('(')) {
            Rat re = parse_rational();
            skip_ws();
            int sign = 1;
            if (consume('+'))
                sign = 1;
            else if (consume('-'))
                sign = -1;
            else
                fail("expected '+' or '-' in complex coefficient");
            Rat im = parse_rational();
            if (sign < 0) im = -im;
            if (!consume('i')) fail("expected 'i' in complex coefficient");
            expect(')');
            return CScalar::from_rats(ring_, re, im);
        }
        return CScalar::from_rats(ring_, parse_rational(), Rat(0));
    }

    Factor parse_atom() {
        if (consume_word("chi")) {
            expect('(');
            GammaElement a = parse_gamma_literal();
            expect(',');
            GammaElement b = parse_gamma_literal();
            expect(')');
            return {AlgebraElement::generator(StepFunction::indicator(a, b),
                                              GroupElement::identity(ring_)),
                    std::nullopt};
        }
        if (consume_word("d")) {
            expect('(');
            Int n = parse_int();
            expect(';');
            GammaElement c = parse_gamma_literal();
            expect(')');
            return {std::nullopt, GroupElement{static_cast<int>(n.get_si()), c}};
        }
        if (consume_word("Sstar")) {
            expect('(');
            Int k = parse_int();
            expect(',');
            Int m = parse_int();
            expect(')');
            return {make_S(ring_, static_cast<int>(k.get_si()), m).adjoint(), std::nullopt};
        }
        if (consume_word("S")) {
            expect('(');
            Int k = parse_int();
            expect(',');
            Int m = parse_int();
            expect(')');
            return {make_S(ring_, static_cast<int>(k.get_si()), m), std::nullopt};
        }
        if (consume_word("e")) return {AlgebraElement::unit_e(ring_), std::nullopt};
        fail("expected atom (chi/d/S/Sstar/e)");
    }

    Factor multiply(const Factor& a, const Factor& b) {
        if (a.elem && b.elem) return {*a.elem * *b.elem, std::nullopt};
        if (a.elem && b.delta) {
            // x . delta_g: translate supports on the right
            AlgebraElement out(ring_);
            for (const auto& [h, f] : a.elem->terms())
                out = out + AlgebraElement::generator(f, h.compose(*b.delta));
            return {out, std::nullopt};
        }
        if (a.delta && b.elem) {
            // delta_g . x: terms (h, f) -> (g h, alpha_g(f))
            AlgebraElement out(ring_);
            for (const auto& [h, f] : b.elem->terms())
                out = out + AlgebraElement::generator(f.map_affine(a.delta->n, a.delta->c),
                                                      a.delta->compose(h));
            return {out, std::nullopt};
        }
        return {std::nullopt, a.delta->compose(*b.delta)};
    }

    AlgebraElement parse_term() {
        std::optional<CScalar> coeff;
        skip_ws();
        size_t save = pos_;
        char c = peek();
        if (isdigit(static_cast<unsigned char>(c)) || c == '(') {
            try {
                CScalar cv = parse_coeff();
                skip_ws();
                if (consume('*')) {
                    coeff = cv;
                } else {
                    pos_ = save; // bare number is not a term
                    fail("expected '*' after coefficient");
                }
            } catch (const Error&) {
                pos_ = save;
                if (c == '(') throw;
                throw;
            }
        }
        Factor acc = parse_atom();
        while (true) {
            skip_ws();
            size_t here = pos_;
            if (!consume('*')) break;
            if (peek() == '\0') {
                pos_ = here;
                fail("dangling '*'");
            }
            acc = multiply(acc, parse_atom());
        }
        if (!acc.elem) fail("bare d(n;c) is not an algebra element; multiply by an interval");
        AlgebraElement x = *acc.elem;
        if (coeff) x = x.scale(*coeff);
        return x;
    }

    AlgebraElement parse_expr() {
        skip_ws();
        int sign = 1;
        if (consume('-'))
            sign = -1;
        else
            consume('+');
        AlgebraElement acc = parse_term();
        if (sign < 0) acc = -acc;
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                acc = acc + parse_term();
            } else if (c == '-') {
                ++pos_;
                acc = acc - parse_term();
            } else {
                break;
            }
        }
        return acc;
    }

    std::string text_;
    RingPtr ring_;
    size_t pos_ = 0;
};

} // namespace detail

inline AlgebraElement parse_algebra_expr(const std::string& text, const RingPtr& ring) {
    return detail::ExprParser(text, ring).parse_expr_toplevel();
}

// Unitary builder names accepted by the CLI: "ukm(k,m;j,n)", "ujk(j,k)", or an
// explicit expression matrix "[[expr,expr],[expr,expr]]".
inline MatrixElement parse_matrix_element(const std::string& text, const RingPtr& ring) {
    std::string s = text;
    size_t b = s.find_first_not_of(" \t\n");
    size_t e = s.find_last_not_of(" \t\n");
    if (b == std::string::npos) throw Error(ErrorCode::Parse, "empty matrix expression");
    s = s.substr(b, e - b + 1);

    auto parse_args = [&](const std::string& body, size_t arity) {
        std::vector<Int> out;
        size_t start = 0;
        for (size_t i = 0; i <= body.size(); ++i) {
            if (i == body.size() || body[i] == ',' || body[i] == ';') {
                out.emplace_back(body.substr(start, i - start));
                start = i + 1;
            }
        }
        if (out.size() != arity)
            throw Error(ErrorCode::Parse, "expected " + std::to_string(arity) + " indices");
        return out;
    };

    if (s.rfind("ukm(", 0) == 0 && s.back() == ')') {
        auto a = parse_args(s.substr(4, s.size() - 5), 4);
        return build_u_double_index(ring, static_cast<int>(a[0].get_si()), a[1],
                                    static_cast<int>(a[2].get_si()), a[3]);
    }
    if (s.rfind("ujk(", 0) == 0 && s.back() == ')') {
        auto a = parse_args(s.substr(4, s.size() - 5), 2);
        return build_u_leftover(ring, static_cast<int>(a[0].get_si()),
                                static_cast<int>(a[1].get_si()));
    }
    if (s.front() == '[') {
        // [[expr,...],[expr,...],...] with commas split at bracket depth 1
        if (s.back() != ']') throw Error(ErrorCode::Parse, "unterminated matrix literal");
        std::vector<std::vector<AlgebraElement>> rows;
        int depth = 0;
        size_t row_start = 0;
        std::vector<std::string> row_texts;
        for (size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            if (c == '[') {
                if (depth == 1) row_start = i + 1;
                ++depth;
            } else if (c == ']') {
                --depth;
                if (depth == 1) row_texts.push_back(s.substr(row_start, i - row_start));
                if (depth < 0) throw Error(ErrorCode::Parse, "unbalanced ']'");
            }
        }
        if (depth != 0) throw Error(ErrorCode::Parse, "unbalanced '['");
        for (const auto& rt : row_texts) {
            std::vector<AlgebraElement> row;
            int pd = 0;
            size_t start = 0;
            for (size_t i = 0; i <= rt.size(); ++i) {
                if (i < rt.size() && (rt[i] == '(' || rt[i] == '[')) ++pd;
                if (i < rt.size() && (rt[i] == ')' || rt[i] == ']')) --pd;
                if (i == rt.size() || (rt[i] == ',' && pd == 0)) {
                    row.push_back(parse_algebra_expr(rt.substr(start, i - start), ring));
                    start = i + 1;
                }
            }
            rows.push_back(std::move(row));
        }
        size_t r = rows.size();
        for (const auto& row : rows)
            if (row.size() != r)
                throw Error(ErrorCode::Parse, "matrix literal must be square");
        MatrixElement m(ring, r);
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < r; ++j) m.at(i, j) = rows[i][j];
        return m;
    }
    // fall back: a single algebra expression as a 1x1 matrix
    return MatrixElement::from_entry(parse_algebra_expr(s, ring));
}

} // namespace qlambda
