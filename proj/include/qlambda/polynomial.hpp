#pragma once

#include <string>
#include <vector>

#include "qlambda/numeric.hpp"

namespace qlambda {

// Dense univariate polynomials, coefficient index = exponent.
// Normalized: no trailing zero coefficients (zero polynomial = empty vector).

using ZPoly = std::vector<Int>;
using QPoly = std::vector<Rat>;

template <class T>
inline void poly_trim(std::vector<T>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

template <class T>
inline int poly_degree(const std::vector<T>& p) {
    return static_cast<int>(p.size()) - 1; // zero poly: -1
}

template <class T>
inline std::vector<T> poly_add(std::vector<T> a, const std::vector<T>& b) {
    if (a.size() < b.size()) a.resize(b.size(), T(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    poly_trim(a);
    return a;
}

template <class T>
inline std::vector<T> poly_neg(std::vector<T> a) {
    for (auto& c : a) c = -c;
    return a;
}

template <class T>
inline std::vector<T> poly_sub(const std::vector<T>& a, const std::vector<T>& b) {
    return poly_add(a, poly_neg(b));
}

template <class T>
inline std::vector<T> poly_mul(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<T> r(a.size() + b.size() - 1, T(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    poly_trim(r);
    return r;
}

template <class T>
inline std::vector<T> poly_derivative(const std::vector<T>& a) {
    if (a.size() <= 1) return {};
    std::vector<T> r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * T(static_cast<long>(i));
    return r;
}

template <class T, class X>
inline X poly_eval(const std::vector<T>& a, const X& x) {
    X r(0);
    for (size_t i = a.size(); i-- > 0;) r = r * x + X(a[i]);
    return r;
}

inline QPoly zpoly_to_q(const ZPoly& a) {
    QPoly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = Rat(a[i]);
    return r;
}

// Euclidean division over Q; returns {quotient, remainder}.
inline std::pair<QPoly, QPoly> qpoly_divmod(QPoly num, const QPoly& den) {
    if (den.empty()) throw Error(ErrorCode::Internal, "polynomial division by zero");
    QPoly quo(num.size() > den.size() - 1 ? num.size() - den.size() + 1 : 0, Rat(0));
    while (num.size() >= den.size() && !num.empty()) {
        Rat c = num.back() / den.back();
        size_t shift = num.size() - den.size();
        quo[shift] = c;
        for (size_t i = 0; i < den.size(); ++i) num[shift + i] -= c * den[i];
        poly_trim(num);
    }
    poly_trim(quo);
    return {quo, num};
}

// Exact division over Z; returns quotient iff den | num with integer quotient.
inline bool zpoly_divides(const ZPoly& num, const ZPoly& den, ZPoly* quotient = nullptr) {
    auto [q, r] = qpoly_divmod(zpoly_to_q(num), zpoly_to_q(den));
    if (!r.empty()) return false;
    ZPoly zq(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
        if (q[i].get_den() != 1) return false;
        zq[i] = q[i].get_num();
    }
    if (quotient) *quotient = zq;
    return true;
}

inline QPoly qpoly_gcd(QPoly a, QPoly b) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        QPoly r = qpoly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) { // monic normalization
        Rat lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

// ---------------------------------------------------------------------------
// Sturm sequences and real-root counting on intervals with rational endpoints.

struct SturmChain {
    std::vector<QPoly> seq;

    // Number of sign changes of the chain at x (zeros skipped).
    int sign_changes_at(const Rat& x) const {
        int changes = 0, prev = 0;
        for (const auto& p : seq) {
            int s = sgn(poly_eval(p, x));
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++changes;
            prev = s;
        }
        return changes;
    }

    // Roots of the (squarefree) polynomial in the half-open interval (a, b].
    int count_roots(const Rat& a, const Rat& b) const {
        return sign_changes_at(a) - sign_changes_at(b);
    }
};

inline SturmChain sturm_chain(const QPoly& f) {
    SturmChain chain;
    QPoly p0 = f;
    poly_trim(p0);
    if (p0.empty()) return chain;
    QPoly p1 = poly_derivative(p0);
    chain.seq.push_back(p0);
    while (!p1.empty()) {
        chain.seq.push_back(p1);
        QPoly r = qpoly_divmod(chain.seq[chain.seq.size() - 2], p1).second;
        p1 = poly_neg(r);
    }
    return chain;
}

// ---------------------------------------------------------------------------
// Polynomial-in-x text parsing ("x^3-7*x+1", whitespace insensitive).

inline ZPoly parse_zpoly_in_x(const std::string& raw) {
    std::string s;
    for (char ch : raw)
        if (!isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw Error(ErrorCode::Parse, "empty polynomial");

    ZPoly poly;
    size_t i = 0;
    auto bump = [&](size_t exp, const Int& c) {
        if (poly.size() <= exp) poly.resize(exp + 1, Int(0));
        poly[exp] += c;
    };
    while (i < s.size()) {
        int sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        if (i >= s.size()) throw Error(ErrorCode::Parse, "dangling sign in polynomial");
        Int coeff(1);
        bool saw_coeff = false;
        if (isdigit(static_cast<unsigned char>(s[i]))) {
            size_t j = i;
            while (j < s.size() && isdigit(static_cast<unsigned char>(s[j]))) ++j;
            coeff = Int(s.substr(i, j - i));
            i = j;
            saw_coeff = true;
            if (i < s.size() && s[i] == '*') ++i;
        }
        size_t exp = 0;
        if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
            ++i;
            exp = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                size_t j = i;
                while (j < s.size() && isdigit(static_cast<unsigned char>(s[j]))) ++j;
                if (j == i) throw Error(ErrorCode::Parse, "missing exponent in polynomial");
                exp = std::stoul(s.substr(i, j - i));
                i = j;
            }
        } else if (!saw_coeff) {
            throw Error(ErrorCode::Parse, std::string("unexpected character '") + s[i] + "' in polynomial");
        }
        bump(exp, sign < 0 ? Int(-coeff) : coeff);
    }
    poly_trim(poly);
    return poly;
}

inline std::string zpoly_to_string_in_x(const ZPoly& p) {
    if (p.empty()) return "0";
    std::string out;
    for (size_t i = p.size(); i-- > 0;) {
        const Int& c = p[i];
        if (c == 0) continue;
        Int a = c < 0 ? Int(-c) : c;
        if (out.empty())
            out += (c < 0 ? "-" : "");
        else
            out += (c < 0 ? "-" : "+");
        if (i == 0) {
            out += a.get_str();
        } else {
            if (a != 1) out += a.get_str() + "*";
            out += "x";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace qlambda
