#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "qlambda/error.hpp"

namespace qlambda {

using Int = mpz_class;
using Rat = mpq_class;

inline int sign_of(const Int& x) { return sgn(x); }
inline int sign_of(const Rat& x) { return sgn(x); }

inline Int int_pow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat rat_pow(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    Rat r(int_pow(base.get_num(), a), int_pow(base.get_den(), a));
    r.canonicalize();
    if (e < 0) {
        if (r == 0) throw Error(ErrorCode::Internal, "rat_pow of zero with negative exponent");
        r = 1 / r;
    }
    return r;
}

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw Error(ErrorCode::Parse, "zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// 2^-bits as an exact rational
inline Rat pow2_neg(unsigned bits) {
    return Rat(Int(1), int_pow(Int(2), bits));
}

inline Int binomial(unsigned n, unsigned k) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// ---------------------------------------------------------------------------
// Rational intervals, used by the exact sign/approximation machinery.

struct QInterval {
    Rat lo, hi; // lo <= hi

    bool contains_zero() const { return sgn(lo) <= 0 && sgn(hi) >= 0; }
    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
};

inline QInterval iv_point(const Rat& x) { return {x, x}; }

inline QInterval iv_add(const QInterval& a, const QInterval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

inline QInterval iv_mul(const QInterval& a, const QInterval& b) {
    Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    Rat lo = std::min(std::min(p1, p2), std::min(p3, p4));
    Rat hi = std::max(std::max(p1, p2), std::max(p3, p4));
    return {lo, hi};
}

inline QInterval iv_scale(const QInterval& a, const Rat& c) {
    if (sgn(c) >= 0) return {a.lo * c, a.hi * c};
    return {a.hi * c, a.lo * c};
}

// Horner evaluation of c0 + c1 x + ... + cN x^N over an interval.
inline QInterval iv_eval_poly(const std::vector<Rat>& coeffs, const QInterval& x) {
    QInterval r = iv_point(Rat(0));
    for (size_t i = coeffs.size(); i-- > 0;) {
        r = iv_mul(r, x);
        r = iv_add(r, iv_point(coeffs[i]));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Text helpers.

inline std::string int_to_string(const Int& x) { return x.get_str(); }

inline std::string rat_to_string(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

// Parse "a" or "a/b" with optional leading sign.
inline Rat parse_rat(const std::string& text) {
    if (text.empty()) throw Error(ErrorCode::Parse, "empty rational");
    size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            Int n(text);
            return Rat(n);
        }
        Int n(text.substr(0, slash));
        Int d(text.substr(slash + 1));
        return make_rat(n, d);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::Parse, "bad rational literal '" + text + "'");
    }
}

// Decimal rendering of a rational, rounded to `digits` places after the point.
inline std::string decimal_string(const Rat& x, unsigned digits) {
    Int num = x.get_num(), den = x.get_den();
    bool neg = num < 0;
    if (neg) num = -num;
    Int scale = int_pow(Int(10), digits);
    // round half up
    Int scaled = (num * scale * 2 + den) / (den * 2);
    Int ip = scaled / scale, fp = scaled % scale;
    std::string out = (neg && scaled != 0 ? "-" : "") + ip.get_str();
    if (digits > 0) {
        std::string f = fp.get_str();
        f.insert(f.begin(), digits - f.size(), '0');
        while (!f.empty() && f.back() == '0') f.pop_back();
        if (!f.empty()) out += "." + f;
    }
    return out;
}

} // namespace qlambda
