#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qlambda/numeric.hpp"
#include "qlambda/polynomial.hpp"

namespace qlambda {

enum class SpecCase { Rational, Algebraic, SqrtReciprocal, Transcendental };

inline const char* spec_case_name(SpecCase c) {
    switch (c) {
    case SpecCase::Rational: return "rational";
    case SpecCase::Algebraic: return "algebraic";
    case SpecCase::SqrtReciprocal: return "sqrt";
    case SpecCase::Transcendental: return "transcendental";
    }
    return "?";
}

// Which lambda: p/q, invertible algebraic integer (minimal polynomial plus an
// isolating interval for the intended root), 1/sqrt(n), or a transcendental
// handled through a rational surrogate with an error bound.
struct LambdaSpec {
    SpecCase kind = SpecCase::Rational;

    // Rational
    Int p = 1, q = 2;

    // Algebraic: coeffs a_0..a_d of a_d x^d + ... + a_0
    ZPoly coeffs;
    Rat iso_lo, iso_hi;

    // SqrtReciprocal
    Int n = 2;

    // Transcendental
    Rat surrogate, surrogate_error;

    bool operator==(const LambdaSpec& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
        case SpecCase::Rational: return p == o.p && q == o.q;
        case SpecCase::Algebraic:
            return coeffs == o.coeffs && iso_lo == o.iso_lo && iso_hi == o.iso_hi;
        case SpecCase::SqrtReciprocal: return n == o.n;
        case SpecCase::Transcendental:
            return surrogate == o.surrogate && surrogate_error == o.surrogate_error;
        }
        return false;
    }

    static LambdaSpec rational(Int p, Int q) {
        LambdaSpec s;
        s.kind = SpecCase::Rational;
        s.p = std::move(p);
        s.q = std::move(q);
        return s;
    }
    static LambdaSpec algebraic(ZPoly coeffs, Rat lo, Rat hi) {
        LambdaSpec s;
        s.kind = SpecCase::Algebraic;
        s.coeffs = std::move(coeffs);
        s.iso_lo = std::move(lo);
        s.iso_hi = std::move(hi);
        return s;
    }
    static LambdaSpec sqrt_reciprocal(Int n) {
        LambdaSpec s;
        s.kind = SpecCase::SqrtReciprocal;
        s.n = std::move(n);
        return s;
    }
    static LambdaSpec transcendental(Rat surrogate, Rat eps) {
        LambdaSpec s;
        s.kind = SpecCase::Transcendental;
        s.surrogate = std::move(surrogate);
        s.surrogate_error = std::move(eps);
        return s;
    }

    std::string to_string() const {
        switch (kind) {
        case SpecCase::Rational:
            return "rat:" + p.get_str() + "/" + q.get_str();
        case SpecCase::Algebraic:
            return "alg:" + zpoly_to_string_in_x(coeffs) + ";root=[" + rat_to_string(iso_lo) +
                   "," + rat_to_string(iso_hi) + "]";
        case SpecCase::SqrtReciprocal:
            return "sqrt:" + n.get_str();
        case SpecCase::Transcendental:
            return "trans:approx=" + rat_to_string(surrogate) + ";eps=" + rat_to_string(surrogate_error);
        }
        return "?";
    }
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    ErrorCode code;
    std::string message;
};

enum class IrreducibilityVerdict { NotApplicable, Irreducible, AssertedByCaller, ReducibleFound };

inline const char* irreducibility_name(IrreducibilityVerdict v) {
    switch (v) {
    case IrreducibilityVerdict::NotApplicable: return "not_applicable";
    case IrreducibilityVerdict::Irreducible: return "irreducible";
    case IrreducibilityVerdict::AssertedByCaller: return "asserted_by_caller";
    case IrreducibilityVerdict::ReducibleFound: return "reducible_found";
    }
    return "?";
}

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
    bool squarefree = false; // algebraic case: gcd(f, f') constant
    IrreducibilityVerdict irreducibility = IrreducibilityVerdict::NotApplicable;
    std::string detail;

    bool has(ErrorCode c) const {
        for (const auto& v : violations)
            if (v.code == c) return true;
        return false;
    }
    void add(ErrorCode c, std::string msg) {
        ok = false;
        violations.push_back({c, std::move(msg)});
    }
};

namespace detail {

inline bool is_squarefree_int(const Int& n) {
    if (n < 2) return false;
    Int m = n;
    for (Int p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            m /= p;
            if (m % p == 0) return false;
        }
    }
    return true;
}

// Bounded search for a factorization f = g*h over Z with monic g of degree
// 2..d/2 and g(0) = +-1 (the only possibility for monic f with |f(0)| = 1).
// Coefficient bounds come from a Mignotte-style estimate, hard-capped so the
// search stays bounded.
inline bool bounded_factor_search(const ZPoly& f, ZPoly* factor_out = nullptr) {
    int d = poly_degree(f);
    if (d < 4) return false;
    Int norm2 = 0;
    for (const auto& c : f) norm2 += c * c;
    Int norm = 1;
    while (norm * norm < norm2) ++norm; // ceil sqrt
    const Int hard_cap = 12;
    const long max_candidates = 2'000'000;

    for (int k = 2; k <= d / 2; ++k) {
        std::vector<Int> bounds(k - 1);
        long total = 4; // two choices of g(0), two leading signs folded into monic
        bool overflow = false;
        for (int i = 1; i < k; ++i) {
            Int b = binomial(k, i) * norm;
            if (b > hard_cap) b = hard_cap;
            bounds[i - 1] = b;
            long span = 2 * b.get_si() + 1;
            if (total > max_candidates / span) overflow = true;
            total *= span;
        }
        if (overflow) continue;

        std::vector<Int> g(k + 1, Int(0));
        g[k] = 1;
        std::vector<Int> cur(k - 1);
        for (int i = 0; i < k - 1; ++i) cur[i] = -bounds[i];
        bool done = false;
        while (!done) {
            for (int c0 : {1, -1}) {
                g[0] = c0;
                for (int i = 1; i < k; ++i) g[i] = cur[i - 1];
                ZPoly gg = g;
                poly_trim(gg);
                if (zpoly_divides(f, gg)) {
                    if (factor_out) *factor_out = gg;
                    return true;
                }
            }
            int pos = 0;
            for (;; ++pos) {
                if (pos == k - 1) {
                    done = true;
                    break;
                }
                if (cur[pos] < bounds[pos]) {
                    ++cur[pos];
                    break;
                }
                cur[pos] = -bounds[pos];
            }
            if (k == 1) done = true;
        }
    }
    return false;
}

// Integer roots of f among divisors of the constant term (used for the
// definitive d<=3 verdict and for diagnosing invalid inputs).
inline std::optional<Int> find_integer_root(const ZPoly& f) {
    if (f.empty()) return std::nullopt;
    Int a0 = f[0];
    if (a0 == 0) return Int(0);
    Int abs0 = a0 < 0 ? Int(-a0) : a0;
    if (abs0 > 1'000'000) { // only try +-1 for huge constant terms
        for (int r : {1, -1})
            if (poly_eval(f, Int(r)) == 0) return Int(r);
        return std::nullopt;
    }
    for (Int dvs = 1; dvs <= abs0; ++dvs) {
        if (abs0 % dvs != 0) continue;
        if (poly_eval(f, dvs) == 0) return dvs;
        Int neg = -dvs;
        if (poly_eval(f, neg) == 0) return neg;
    }
    return std::nullopt;
}

} // namespace detail

inline ValidationReport validate_spec(const LambdaSpec& spec) {
    ValidationReport rep;
    switch (spec.kind) {
    case SpecCase::Rational: {
        if (!(spec.p > 0 && spec.q > 0 && spec.p < spec.q))
            rep.add(ErrorCode::Range, "rational lambda requires 0 < p < q");
        Int g;
        mpz_gcd(g.get_mpz_t(), spec.p.get_mpz_t(), spec.q.get_mpz_t());
        if (g != 1)
            rep.add(ErrorCode::Range, "p/q not in lowest terms (gcd = " + g.get_str() + ")");
        break;
    }
    case SpecCase::Algebraic: {
        const ZPoly& f = spec.coeffs;
        int d = poly_degree(f);
        if (d < 2) {
            rep.add(ErrorCode::Degree, "minimal polynomial must have degree >= 2");
            break;
        }
        if (f[static_cast<size_t>(d)] != 1)
            rep.add(ErrorCode::NotMonic, "minimal polynomial must be monic");
        if (f[0] != 1 && f[0] != -1)
            rep.add(ErrorCode::NonunitConstant,
                    "constant term must be +-1 (got " + f[0].get_str() + ")");

        if (poly_eval(f, Int(1)) == 0)
            rep.add(ErrorCode::Reducible, "f(1) = 0, so (x-1) divides f");
        if (poly_eval(f, Int(-1)) == 0)
            rep.add(ErrorCode::Reducible, "f(-1) = 0, so (x+1) divides f");
        if (auto root = detail::find_integer_root(f); root && *root != 1 && *root != -1)
            rep.add(ErrorCode::Reducible, "integer root " + root->get_str() + " found");

        if (!(sgn(spec.iso_lo) > 0 && spec.iso_hi < 1 && spec.iso_lo < spec.iso_hi))
            rep.add(ErrorCode::Range, "isolating interval must satisfy 0 < lo < hi < 1");
        else {
            SturmChain chain = sturm_chain(zpoly_to_q(f));
            int count = chain.count_roots(spec.iso_lo, spec.iso_hi);
            if (count != 1)
                rep.add(ErrorCode::RootCount, "Sturm root count on the interval is " +
                                                   std::to_string(count) + ", expected 1");
        }

        QPoly g = qpoly_gcd(zpoly_to_q(f), zpoly_to_q(poly_derivative(f)));
        rep.squarefree = poly_degree(g) <= 0;

        if (rep.has(ErrorCode::Reducible)) {
            rep.irreducibility = IrreducibilityVerdict::ReducibleFound;
        } else if (d <= 3) {
            // degree <= 3 reducible over Q iff it has a rational root; monic with
            // +-1 constant restricts candidates to +-1, already tested above
            rep.irreducibility = IrreducibilityVerdict::Irreducible;
        } else {
            ZPoly factor;
            if (detail::bounded_factor_search(f, &factor)) {
                rep.irreducibility = IrreducibilityVerdict::ReducibleFound;
                rep.add(ErrorCode::Reducible,
                        "factor found: " + zpoly_to_string_in_x(factor));
            } else {
                rep.irreducibility = IrreducibilityVerdict::AssertedByCaller;
                rep.detail = "irreducibility asserted by caller (bounded factor search found nothing)";
            }
        }
        break;
    }
    case SpecCase::SqrtReciprocal:
        if (!detail::is_squarefree_int(spec.n))
            rep.add(ErrorCode::NotSquarefreeN, "n must be a square-free integer >= 2");
        break;
    case SpecCase::Transcendental:
        if (!(sgn(spec.surrogate_error) > 0))
            rep.add(ErrorCode::Range, "surrogate_error must be positive");
        else if (!(sgn(spec.surrogate - spec.surrogate_error) > 0 &&
                   spec.surrogate + spec.surrogate_error < 1))
            rep.add(ErrorCode::Range, "surrogate interval must lie inside (0,1)");
        break;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Spec text grammar:
//   "rat:<p>/<q>" | "alg:<poly>;root=[<lo>,<hi>]" | "sqrt:<n>"
//   | "trans:approx=<rational>;eps=<rational>"

inline LambdaSpec parse_lambda_spec(const std::string& raw) {
    std::string s;
    for (char ch : raw)
        if (!isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    auto starts = [&](const char* prefix) { return s.rfind(prefix, 0) == 0; };
    try {
        if (starts("rat:")) {
            std::string body = s.substr(4);
            size_t slash = body.find('/');
            if (slash == std::string::npos) throw Error(ErrorCode::Parse, "expected rat:<p>/<q>");
            return LambdaSpec::rational(Int(body.substr(0, slash)), Int(body.substr(slash + 1)));
        }
        if (starts("alg:")) {
            std::string body = s.substr(4);
            size_t semi = body.find(';');
            if (semi == std::string::npos || body.compare(semi, 6, ";root=") != 0)
                throw Error(ErrorCode::Parse, "expected alg:<poly>;root=[lo,hi]");
            ZPoly poly = parse_zpoly_in_x(body.substr(0, semi));
            std::string rest = body.substr(semi + 6);
            if (rest.size() < 2 || rest.front() != '[' || rest.back() != ']')
                throw Error(ErrorCode::Parse, "expected root=[lo,hi]");
            rest = rest.substr(1, rest.size() - 2);
            size_t comma = rest.find(',');
            if (comma == std::string::npos) throw Error(ErrorCode::Parse, "expected root=[lo,hi]");
            return LambdaSpec::algebraic(poly, parse_rat(rest.substr(0, comma)),
                                         parse_rat(rest.substr(comma + 1)));
        }
        if (starts("sqrt:")) return LambdaSpec::sqrt_reciprocal(Int(s.substr(5)));
        if (starts("trans:")) {
            std::string body = s.substr(6);
            size_t semi = body.find(';');
            if (semi == std::string::npos || body.rfind("approx=", 0) != 0 ||
                body.compare(semi, 5, ";eps=") != 0)
                throw Error(ErrorCode::Parse, "expected trans:approx=<rat>;eps=<rat>");
            return LambdaSpec::transcendental(parse_rat(body.substr(7, semi - 7)),
                                              parse_rat(body.substr(semi + 5)));
        }
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::Parse, "bad integer literal in spec '" + raw + "'");
    }
    throw Error(ErrorCode::Parse, "unknown lambda spec '" + raw +
                                      "' (expected rat:/alg:/sqrt:/trans: form)");
}

// Finds an isolating interval strictly inside (0,1) for the leftmost root of a
// monic +-1-constant polynomial, if it has any roots there.
inline std::optional<std::pair<Rat, Rat>> isolate_root_in_unit_interval(const ZPoly& f) {
    QPoly fq = zpoly_to_q(f);
    SturmChain chain = sturm_chain(fq);
    Rat lo(0), hi(1);
    if (chain.count_roots(lo, hi) == 0) return std::nullopt;
    // Descend to the leftmost root, then shrink until it is isolated with
    // endpoints strictly inside (0,1). Rational midpoints are never roots of a
    // monic polynomial with unit constant term (its only rational roots are +-1).
    for (int iter = 0; iter < 512; ++iter) {
        int count = chain.count_roots(lo, hi);
        if (count == 1 && sgn(lo) > 0 && hi < 1) return std::make_pair(lo, hi);
        Rat mid = (lo + hi) / 2;
        if (chain.count_roots(lo, mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }
    return std::nullopt;
}

} // namespace qlambda
