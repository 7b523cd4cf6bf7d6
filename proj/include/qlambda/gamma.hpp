#pragma once

#include <map>
#include <memory>
#include <optional>
#include <variant>

#include "qlambda/int_matrix.hpp"
#include "qlambda/lambda_spec.hpp"
#include "qlambda/numeric.hpp"
#include "qlambda/polynomial.hpp"

namespace qlambda {

class GammaRing;
using RingPtr = std::shared_ptr<const GammaRing>;

// Default refinement depth for transcendental sign decisions; every entry
// point that can hit PRECISION_EXHAUSTED takes it as an explicit parameter.
inline constexpr int kDefaultMaxRefine = 40;
inline constexpr long kWorkBudget = 1 << 15;
inline constexpr long kAlgebraicIterationCap = 200000;

// Validated lambda context: the spec plus derived data shared by all elements.
// Immutable after construction, so freely shareable between threads.
class GammaRing : public std::enable_shared_from_this<GammaRing> {
public:
    static RingPtr create(const LambdaSpec& spec) {
        ValidationReport rep = validate_spec(spec);
        if (!rep.ok)
            throw Error(rep.violations.front().code,
                        "invalid lambda spec: " + rep.violations.front().message);
        return RingPtr(new GammaRing(spec));
    }

    const LambdaSpec& spec() const { return spec_; }
    SpecCase kind() const { return spec_.kind; }
    int degree() const { return d_; }
    const Int& base_n() const { return n_; } // rational: pq; sqrt: n
    const std::vector<Int>& lambda_inv_coords() const { return inv_coords_; }
    const SturmChain& chain() const { return chain_; }
    QInterval lambda_interval() const {
        switch (spec_.kind) {
        case SpecCase::Rational: {
            Rat l = make_rat(spec_.p, spec_.q);
            return {l, l};
        }
        case SpecCase::Algebraic: return {spec_.iso_lo, spec_.iso_hi};
        case SpecCase::Transcendental:
            return {spec_.surrogate - spec_.surrogate_error,
                    spec_.surrogate + spec_.surrogate_error};
        case SpecCase::SqrtReciprocal: {
            // crude rational bracket of 1/sqrt(n); callers refine via sqrt_interval
            QInterval r = sqrt_interval(8);
            return {1 / r.hi, 1 / r.lo};
        }
        }
        throw Error(ErrorCode::Internal, "bad spec case");
    }

    // Shrinking rational bracket of sqrt(n) by bisection.
    QInterval sqrt_interval(unsigned bits) const {
        Int s;
        mpz_sqrt(s.get_mpz_t(), n_.get_mpz_t());
        QInterval iv{Rat(s), Rat(s + 1)};
        Rat target = pow2_neg(bits);
        while (iv.width() > target) {
            Rat mid = iv.mid();
            if (mid * mid <= n_)
                iv.lo = mid;
            else
                iv.hi = mid;
        }
        return iv;
    }

    bool same(const GammaRing& o) const { return this == &o || spec_ == o.spec_; }

private:
    explicit GammaRing(const LambdaSpec& spec) : spec_(spec) {
        switch (spec_.kind) {
        case SpecCase::Rational: n_ = spec_.p * spec_.q; break;
        case SpecCase::SqrtReciprocal: n_ = spec_.n; break;
        case SpecCase::Algebraic: {
            d_ = poly_degree(spec_.coeffs);
            chain_ = sturm_chain(zpoly_to_q(spec_.coeffs));
            // lambda^{-1} = -a_0 * (a_1 + a_2 L + ... + a_{d-1} L^{d-2} + L^{d-1})
            inv_coords_.resize(d_);
            Int a0 = spec_.coeffs[0];
            for (int i = 0; i + 1 < d_; ++i) inv_coords_[i] = -a0 * spec_.coeffs[i + 1];
            inv_coords_[d_ - 1] = -a0;
            break;
        }
        case SpecCase::Transcendental: break;
        }
    }

    LambdaSpec spec_;
    int d_ = 0;
    Int n_ = 0;
    std::vector<Int> inv_coords_;
    SturmChain chain_;
};

inline void check_same_ring(const RingPtr& a, const RingPtr& b) {
    if (!a || !b || !a->same(*b))
        throw Error(ErrorCode::SpecMismatch, "operands belong to different lambda specs");
}

// ---------------------------------------------------------------------------
// Z[1/n] in the power normal form m / n^k with k = 0 or n not dividing m.

struct ZInvN {
    Int m{0};
    unsigned k{0};

    void normalize(const Int& n) {
        if (m == 0) {
            k = 0;
            return;
        }
        while (k > 0 && m % n == 0) {
            m /= n;
            --k;
        }
    }
    static ZInvN of(Int v) { return {std::move(v), 0}; }
    static ZInvN make(Int m, unsigned k, const Int& n) {
        ZInvN r{std::move(m), k};
        r.normalize(n);
        return r;
    }

    ZInvN add(const ZInvN& o, const Int& n) const {
        unsigned kk = std::max(k, o.k);
        Int mm = m * int_pow(n, kk - k) + o.m * int_pow(n, kk - o.k);
        return make(std::move(mm), kk, n);
    }
    ZInvN mul(const ZInvN& o, const Int& n) const { return make(m * o.m, k + o.k, n); }
    ZInvN mul_int(const Int& c, const Int& n) const { return make(m * c, k, n); }
    ZInvN neg() const { return {Int(-m), k}; }
    // division by n^j (stays in Z[1/n])
    ZInvN div_pow_n(unsigned j, const Int& n) const { return make(m, k + j, n); }
    int sign() const { return sgn(m); }
    Rat to_rat(const Int& n) const { return make_rat(m, int_pow(n, k)); }
    bool operator==(const ZInvN& o) const { return m == o.m && k == o.k; }

    static std::optional<ZInvN> from_rat(const Rat& r, const Int& n) {
        Int den = r.get_den();
        unsigned k = 0;
        Int pw = 1;
        while (pw % den != 0) {
            pw *= n;
            ++k;
            if (k > 4096) return std::nullopt;
        }
        return make(r.get_num() * (pw / den), k, n);
    }
};

// ---------------------------------------------------------------------------
// LambdaScalar: exact element of the Q-span of Gamma_lambda (the value ring of
// psi, tau and spectral flow). GammaElement below is the integer-coefficient
// subring Gamma_lambda itself.

struct SqrtPairQ {
    Rat a, b; // a + b*sqrt(n)
    bool operator==(const SqrtPairQ& o) const { return a == o.a && b == o.b; }
};

using LaurentQ = std::map<int, Rat>; // exponent -> coefficient, no zeros

class LambdaScalar {
public:
    using Payload = std::variant<Rat, std::vector<Rat>, SqrtPairQ, LaurentQ>;

    LambdaScalar() = default;

    static LambdaScalar zero(const RingPtr& ring) { return from_rat(ring, Rat(0)); }
    static LambdaScalar one(const RingPtr& ring) { return from_rat(ring, Rat(1)); }

    static LambdaScalar from_rat(const RingPtr& ring, const Rat& v) {
        LambdaScalar s;
        s.ring_ = ring;
        switch (ring->kind()) {
        case SpecCase::Rational: s.payload_ = v; break;
        case SpecCase::Algebraic: {
            std::vector<Rat> c(ring->degree(), Rat(0));
            c[0] = v;
            s.payload_ = std::move(c);
            break;
        }
        case SpecCase::SqrtReciprocal: s.payload_ = SqrtPairQ{v, Rat(0)}; break;
        case SpecCase::Transcendental: {
            LaurentQ t;
            if (v != 0) t[0] = v;
            s.payload_ = std::move(t);
            break;
        }
        }
        return s;
    }

    static LambdaScalar lambda(const RingPtr& ring) {
        return one(ring).mul_lambda_pow(1);
    }
    static LambdaScalar lambda_pow(const RingPtr& ring, int k) {
        return one(ring).mul_lambda_pow(k);
    }

    const RingPtr& ring() const { return ring_; }
    const Payload& payload() const { return payload_; }

    bool is_zero() const {
        switch (payload_.index()) {
        case 0: return std::get<0>(payload_) == 0;
        case 1: {
            for (const auto& c : std::get<1>(payload_))
                if (c != 0) return false;
            return true;
        }
        case 2: return std::get<2>(payload_).a == 0 && std::get<2>(payload_).b == 0;
        case 3: return std::get<3>(payload_).empty();
        }
        return true;
    }

    LambdaScalar operator+(const LambdaScalar& o) const {
        check_same_ring(ring_, o.ring_);
        LambdaScalar r = *this;
        switch (payload_.index()) {
        case 0: std::get<0>(r.payload_) += std::get<0>(o.payload_); break;
        case 1: {
            auto& a = std::get<1>(r.payload_);
            const auto& b = std::get<1>(o.payload_);
            for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
            break;
        }
        case 2: {
            auto& a = std::get<2>(r.payload_);
            const auto& b = std::get<2>(o.payload_);
            a.a += b.a;
            a.b += b.b;
            break;
        }
        case 3: {
            auto& a = std::get<3>(r.payload_);
            for (const auto& [e, c] : std::get<3>(o.payload_)) {
                Rat& slot = a[e];
                slot += c;
                if (slot == 0) a.erase(e);
            }
            break;
        }
        }
        return r;
    }

    LambdaScalar operator-() const {
        LambdaScalar r = *this;
        switch (r.payload_.index()) {
        case 0: std::get<0>(r.payload_) = -std::get<0>(r.payload_); break;
        case 1:
            for (auto& c : std::get<1>(r.payload_)) c = -c;
            break;
        case 2:
            std::get<2>(r.payload_).a = -std::get<2>(r.payload_).a;
            std::get<2>(r.payload_).b = -std::get<2>(r.payload_).b;
            break;
        case 3:
            for (auto& [e, c] : std::get<3>(r.payload_)) c = -c;
            break;
        }
        return r;
    }

    LambdaScalar operator-(const LambdaScalar& o) const { return *this + (-o); }

    LambdaScalar operator*(const LambdaScalar& o) const {
        check_same_ring(ring_, o.ring_);
        LambdaScalar r;
        r.ring_ = ring_;
        switch (payload_.index()) {
        case 0: r.payload_ = Rat(std::get<0>(payload_) * std::get<0>(o.payload_)); break;
        case 1: {
            const auto& x = std::get<1>(payload_);
            const auto& y = std::get<1>(o.payload_);
            size_t d = x.size();
            std::vector<Rat> conv(2 * d - 1, Rat(0));
            for (size_t i = 0; i < d; ++i) {
                if (x[i] == 0) continue;
                for (size_t j = 0; j < d; ++j) conv[i + j] += x[i] * y[j];
            }
            reduce_mod_min_poly(conv, *ring_);
            conv.resize(d);
            r.payload_ = std::move(conv);
            break;
        }
        case 2: {
            const auto& x = std::get<2>(payload_);
            const auto& y = std::get<2>(o.payload_);
            Rat n(ring_->base_n());
            r.payload_ = SqrtPairQ{x.a * y.a + n * x.b * y.b, x.a * y.b + x.b * y.a};
            break;
        }
        case 3: {
            const auto& x = std::get<3>(payload_);
            const auto& y = std::get<3>(o.payload_);
            LaurentQ conv;
            for (const auto& [e1, c1] : x)
                for (const auto& [e2, c2] : y) {
                    Rat& slot = conv[e1 + e2];
                    slot += c1 * c2;
                    if (slot == 0) conv.erase(e1 + e2);
                }
            r.payload_ = std::move(conv);
            break;
        }
        }
        return r;
    }

    LambdaScalar scale(const Rat& c) const {
        return *this * from_rat(ring_, c);
    }

    LambdaScalar mul_lambda_pow(int k) const {
        LambdaScalar r = *this;
        switch (payload_.index()) {
        case 0: {
            Rat l = make_rat(ring_->spec().p, ring_->spec().q);
            std::get<0>(r.payload_) *= rat_pow(l, k);
            break;
        }
        case 1: {
            auto& c = std::get<1>(r.payload_);
            size_t d = c.size();
            for (; k > 0; --k) {
                std::vector<Rat> shifted(d + 1, Rat(0));
                for (size_t i = 0; i < d; ++i) shifted[i + 1] = c[i];
                reduce_mod_min_poly(shifted, *ring_);
                shifted.resize(d);
                c = std::move(shifted);
            }
            for (; k < 0; ++k) {
                const auto& inv = ring_->lambda_inv_coords();
                std::vector<Rat> conv(2 * d - 1, Rat(0));
                for (size_t i = 0; i < d; ++i) {
                    if (c[i] == 0) continue;
                    for (size_t j = 0; j < d; ++j) conv[i + j] += c[i] * Rat(inv[j]);
                }
                reduce_mod_min_poly(conv, *ring_);
                conv.resize(d);
                c = std::move(conv);
            }
            break;
        }
        case 2: {
            auto& p = std::get<2>(r.payload_);
            Rat n(ring_->base_n());
            for (; k > 0; --k) { // multiply by lambda = sqrt(n)/n: (a,b) -> (b, a/n)
                Rat a = p.a;
                p.a = p.b;
                p.b = a / n;
            }
            for (; k < 0; ++k) { // multiply by sqrt(n): (a,b) -> (n b, a)
                Rat a = p.a;
                p.a = n * p.b;
                p.b = a;
            }
            break;
        }
        case 3: {
            LaurentQ shifted;
            for (const auto& [e, c] : std::get<3>(r.payload_)) shifted[e + k] = c;
            r.payload_ = std::move(shifted);
            break;
        }
        }
        return r;
    }

    bool operator==(const LambdaScalar& o) const {
        if (!ring_ || !o.ring_ || !ring_->same(*o.ring_)) return false;
        return payload_ == o.payload_;
    }
    bool operator!=(const LambdaScalar& o) const { return !(*this == o); }

    // Exact sign of the represented real number.
    int sign(int max_refine = kDefaultMaxRefine) const {
        if (is_zero()) return 0;
        switch (payload_.index()) {
        case 0: return sgn(std::get<0>(payload_));
        case 1: return algebraic_sign(std::get<1>(payload_));
        case 2: {
            const auto& p = std::get<2>(payload_);
            int sa = sgn(p.a), sb = sgn(p.b);
            if (sa == 0) return sb;
            if (sb == 0) return sa;
            if (sa == sb) return sa;
            Rat t = p.a * p.a - Rat(ring_->base_n()) * p.b * p.b; // nonzero: sqrt(n) irrational
            return sa * sgn(t);
        }
        case 3: return transcendental_sign(max_refine);
        }
        return 0;
    }

    int compare(const LambdaScalar& o, int max_refine = kDefaultMaxRefine) const {
        check_same_ring(ring_, o.ring_);
        return (*this - o).sign(max_refine);
    }

    // Rational approximation within 2^-bits.
    Rat approx(unsigned bits, int max_refine = kDefaultMaxRefine) const {
        Rat target = pow2_neg(bits) * 2; // enclosure width bound
        switch (payload_.index()) {
        case 0: return std::get<0>(payload_);
        case 1: {
            const auto& c = std::get<1>(payload_);
            QInterval iv = {ring_->spec().iso_lo, ring_->spec().iso_hi};
            for (long iter = 0; iter < kAlgebraicIterationCap; ++iter) {
                QInterval val = iv_eval_poly(c, iv);
                if (val.width() <= target) return val.mid();
                bisect_lambda(iv);
            }
            throw Error(ErrorCode::Internal, "approx refinement did not converge");
        }
        case 2: {
            const auto& p = std::get<2>(payload_);
            if (p.b == 0) return p.a;
            unsigned extra = 4;
            QInterval r = ring_->sqrt_interval(bits + extra);
            Rat w = r.width() * (p.b < 0 ? Rat(-p.b) : p.b);
            while (w > target) {
                extra += 4;
                r = ring_->sqrt_interval(bits + extra);
                w = r.width() * (p.b < 0 ? Rat(-p.b) : p.b);
            }
            QInterval val = iv_add(iv_point(p.a), iv_scale(r, p.b));
            return val.mid();
        }
        case 3: {
            QPoly poly;
            int shift = 0;
            laurent_as_poly(poly, shift);
            QInterval base = ring_->lambda_interval();
            // value = poly(lambda) / lambda^shift with shift >= 0
            for (int depth = 0; depth <= max_refine; ++depth) {
                long pieces = 1L << std::min(depth, 14);
                Rat step = base.width() / pieces;
                Rat lo, hi;
                bool first = true;
                for (long i = 0; i < pieces; ++i) {
                    QInterval piece{base.lo + step * i, base.lo + step * (i + 1)};
                    QInterval val = eval_shifted(poly, shift, piece);
                    if (first) {
                        lo = val.lo;
                        hi = val.hi;
                        first = false;
                    } else {
                        lo = std::min(lo, val.lo);
                        hi = std::max(hi, val.hi);
                    }
                }
                if (hi - lo <= target) return (lo + hi) / 2;
                if (pieces >= (1L << 14)) break;
            }
            throw Error(ErrorCode::PrecisionExhausted,
                        "surrogate interval too coarse for the requested precision");
        }
        }
        throw Error(ErrorCode::Internal, "bad payload");
    }

    std::string to_string() const;

    // Exposed for conversions by GammaElement and parsers.
    static LambdaScalar from_payload(const RingPtr& ring, Payload p) {
        LambdaScalar s;
        s.ring_ = ring;
        s.payload_ = std::move(p);
        return s;
    }

private:
    template <class Coeff>
    static void reduce_mod_min_poly(std::vector<Coeff>& c, const GammaRing& ring) {
        const ZPoly& f = ring.spec().coeffs;
        size_t d = static_cast<size_t>(ring.degree());
        for (size_t i = c.size(); i-- > d;) {
            Coeff t = c[i];
            if (t == 0) continue;
            c[i] = 0;
            // lambda^i = lambda^{i-d} * (-a_0 - a_1 L - ... - a_{d-1} L^{d-1})
            for (size_t j = 0; j < d; ++j) c[i - d + j] -= Coeff(f[j]) * t;
        }
    }

    void bisect_lambda(QInterval& iv) const {
        Rat mid = iv.mid();
        // monic, unit constant term: rational points of (0,1) are never roots
        if (ring_->chain().count_roots(iv.lo, mid) >= 1)
            iv.hi = mid;
        else
            iv.lo = mid;
    }

    int algebraic_sign(const std::vector<Rat>& c) const {
        QInterval iv = {ring_->spec().iso_lo, ring_->spec().iso_hi};
        for (long iter = 0; iter < kAlgebraicIterationCap; ++iter) {
            QInterval val = iv_eval_poly(c, iv);
            if (!val.contains_zero()) return sgn(val.lo) > 0 ? 1 : -1;
            bisect_lambda(iv);
        }
        throw Error(ErrorCode::Internal, "sign refinement did not converge");
    }

    void laurent_as_poly(QPoly& poly, int& shift) const {
        const auto& t = std::get<3>(payload_);
        int emin = t.begin()->first;
        shift = emin < 0 ? -emin : 0;
        int emax = t.rbegin()->first;
        poly.assign(static_cast<size_t>(emax + shift) + 1, Rat(0));
        for (const auto& [e, c] : t) poly[static_cast<size_t>(e + shift)] = c;
    }

    static QInterval eval_shifted(const QPoly& poly, int shift, const QInterval& x) {
        QInterval val = iv_eval_poly(poly, x);
        for (int s = 0; s < shift; ++s) {
            // divide by x (positive interval away from zero)
            val = iv_mul(val, {1 / x.hi, 1 / x.lo});
        }
        return val;
    }

    // Adaptive subdivision with a global work budget; 0 means undecidable at
    // the configured refinement.
    int trans_sign_piece(const QPoly& poly, int shift, const QInterval& piece, int depth,
                         long& budget) const {
        if (--budget < 0) return 0;
        QInterval val = eval_shifted(poly, shift, piece);
        if (!val.contains_zero()) return sgn(val.lo) > 0 ? 1 : -1;
        if (depth <= 0) return 0;
        Rat mid = piece.mid();
        int left = trans_sign_piece(poly, shift, {piece.lo, mid}, depth - 1, budget);
        if (left == 0) return 0;
        int right = trans_sign_piece(poly, shift, {mid, piece.hi}, depth - 1, budget);
        if (right != left) return 0;
        return left;
    }

    int transcendental_sign(int max_refine) const {
        QPoly poly;
        int shift = 0;
        laurent_as_poly(poly, shift);
        long budget = kWorkBudget;
        int s = trans_sign_piece(poly, shift, ring_->lambda_interval(), max_refine, budget);
        if (s == 0)
            throw Error(ErrorCode::PrecisionExhausted,
                        "sign undecided at the configured surrogate refinement");
        return s;
    }

    RingPtr ring_;
    Payload payload_{Rat(0)};
};

// ---------------------------------------------------------------------------
// GammaElement: exact element of Gamma_lambda with integer coefficients.

struct SqrtPairZ {
    ZInvN a, b; // a + b*sqrt(n), components in Z[1/n]
    bool operator==(const SqrtPairZ& o) const { return a == o.a && b == o.b; }
};

using LaurentZ = std::map<int, Int>;

class GammaElement {
public:
    using Payload = std::variant<ZInvN, std::vector<Int>, SqrtPairZ, LaurentZ>;

    GammaElement() = default;

    static GammaElement zero(const RingPtr& ring) { return from_int(ring, Int(0)); }
    static GammaElement one(const RingPtr& ring) { return from_int(ring, Int(1)); }
    static GammaElement lambda(const RingPtr& ring) { return one(ring).mul_lambda_pow(1); }

    static GammaElement from_int(const RingPtr& ring, const Int& v) {
        GammaElement g;
        g.ring_ = ring;
        switch (ring->kind()) {
        case SpecCase::Rational: g.payload_ = ZInvN::of(v); break;
        case SpecCase::Algebraic: {
            std::vector<Int> c(ring->degree(), Int(0));
            c[0] = v;
            g.payload_ = std::move(c);
            break;
        }
        case SpecCase::SqrtReciprocal: g.payload_ = SqrtPairZ{ZInvN::of(v), ZInvN::of(Int(0))}; break;
        case SpecCase::Transcendental: {
            LaurentZ t;
            if (v != 0) t[0] = v;
            g.payload_ = std::move(t);
            break;
        }
        }
        return g;
    }

    static GammaElement from_payload(const RingPtr& ring, Payload p) {
        GammaElement g;
        g.ring_ = ring;
        g.payload_ = std::move(p);
        return g;
    }

    const RingPtr& ring() const { return ring_; }
    const Payload& payload() const { return payload_; }

    bool is_zero() const {
        switch (payload_.index()) {
        case 0: return std::get<0>(payload_).m == 0;
        case 1: {
            for (const auto& c : std::get<1>(payload_))
                if (c != 0) return false;
            return true;
        }
        case 2:
            return std::get<2>(payload_).a.m == 0 && std::get<2>(payload_).b.m == 0;
        case 3: return std::get<3>(payload_).empty();
        }
        return true;
    }

    GammaElement operator+(const GammaElement& o) const {
        check_same_ring(ring_, o.ring_);
        GammaElement r = *this;
        const Int& n = ring_->base_n();
        switch (payload_.index()) {
        case 0:
            std::get<0>(r.payload_) = std::get<0>(payload_).add(std::get<0>(o.payload_), n);
            break;
        case 1: {
            auto& a = std::get<1>(r.payload_);
            const auto& b = std::get<1>(o.payload_);
            for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
            break;
        }
        case 2: {
            auto& a = std::get<2>(r.payload_);
            const auto& b = std::get<2>(o.payload_);
            a.a = a.a.add(b.a, n);
            a.b = a.b.add(b.b, n);
            break;
        }
        case 3: {
            auto& a = std::get<3>(r.payload_);
            for (const auto& [e, c] : std::get<3>(o.payload_)) {
                Int& slot = a[e];
                slot += c;
                if (slot == 0) a.erase(e);
            }
            break;
        }
        }
        return r;
    }

    GammaElement operator-() const {
        GammaElement r = *this;
        switch (r.payload_.index()) {
        case 0: std::get<0>(r.payload_) = std::get<0>(r.payload_).neg(); break;
        case 1:
            for (auto& c : std::get<1>(r.payload_)) c = -c;
            break;
        case 2:
            std::get<2>(r.payload_).a = std::get<2>(r.payload_).a.neg();
            std::get<2>(r.payload_).b = std::get<2>(r.payload_).b.neg();
            break;
        case 3:
            for (auto& [e, c] : std::get<3>(r.payload_)) c = -c;
            break;
        }
        return r;
    }

    GammaElement operator-(const GammaElement& o) const { return *this + (-o); }

    GammaElement operator*(const GammaElement& o) const {
        check_same_ring(ring_, o.ring_);
        GammaElement r;
        r.ring_ = ring_;
        const Int& n = ring_->base_n();
        switch (payload_.index()) {
        case 0: r.payload_ = std::get<0>(payload_).mul(std::get<0>(o.payload_), n); break;
        case 1: {
            const auto& x = std::get<1>(payload_);
            const auto& y = std::get<1>(o.payload_);
            size_t d = x.size();
            std::vector<Int> conv(2 * d - 1, Int(0));
            for (size_t i = 0; i < d; ++i) {
                if (x[i] == 0) continue;
                for (size_t j = 0; j < d; ++j) conv[i + j] += x[i] * y[j];
            }
            reduce_mod_min_poly(conv);
            conv.resize(d);
            r.payload_ = std::move(conv);
            break;
        }
        case 2: {
            const auto& x = std::get<2>(payload_);
            const auto& y = std::get<2>(o.payload_);
            // (a + b sqrt n)(c + e sqrt n) = (ac + n be) + (ae + bc) sqrt n
            ZInvN re = x.a.mul(y.a, n).add(x.b.mul(y.b, n).mul_int(n, n), n);
            ZInvN im = x.a.mul(y.b, n).add(x.b.mul(y.a, n), n);
            r.payload_ = SqrtPairZ{std::move(re), std::move(im)};
            break;
        }
        case 3: {
            const auto& x = std::get<3>(payload_);
            const auto& y = std::get<3>(o.payload_);
            LaurentZ conv;
            for (const auto& [e1, c1] : x)
                for (const auto& [e2, c2] : y) {
                    Int& slot = conv[e1 + e2];
                    slot += c1 * c2;
                    if (slot == 0) conv.erase(e1 + e2);
                }
            r.payload_ = std::move(conv);
            break;
        }
        }
        return r;
    }

    GammaElement mul_int(const Int& c) const { return *this * from_int(ring_, c); }

    GammaElement mul_lambda_pow(int k) const {
        GammaElement r = *this;
        const Int& n = ring_->base_n();
        switch (payload_.index()) {
        case 0: {
            // lambda = p^2/n, lambda^{-1} = q^2/n
            auto& z = std::get<0>(r.payload_);
            if (k > 0)
                z = ZInvN::make(z.m * int_pow(ring_->spec().p, 2 * k), z.k + k, n);
            else if (k < 0)
                z = ZInvN::make(z.m * int_pow(ring_->spec().q, static_cast<unsigned long>(-2L * k)),
                                z.k + static_cast<unsigned>(-k), n);
            break;
        }
        case 1: {
            auto& c = std::get<1>(r.payload_);
            size_t d = c.size();
            for (; k > 0; --k) {
                std::vector<Int> shifted(d + 1, Int(0));
                for (size_t i = 0; i < d; ++i) shifted[i + 1] = c[i];
                reduce_mod_min_poly(shifted);
                shifted.resize(d);
                c = std::move(shifted);
            }
            for (; k < 0; ++k) {
                const auto& inv = ring_->lambda_inv_coords();
                std::vector<Int> conv(2 * d - 1, Int(0));
                for (size_t i = 0; i < d; ++i) {
                    if (c[i] == 0) continue;
                    for (size_t j = 0; j < d; ++j) conv[i + j] += c[i] * inv[j];
                }
                reduce_mod_min_poly(conv);
                conv.resize(d);
                c = std::move(conv);
            }
            break;
        }
        case 2: {
            auto& p = std::get<2>(r.payload_);
            for (; k > 0; --k) { // (a,b) -> (b, a/n)
                ZInvN a = p.a;
                p.a = p.b;
                p.b = a.div_pow_n(1, n);
            }
            for (; k < 0; ++k) { // (a,b) -> (n b, a)
                ZInvN a = p.a;
                p.a = p.b.mul_int(n, n);
                p.b = a;
            }
            break;
        }
        case 3: {
            LaurentZ shifted;
            for (const auto& [e, c] : std::get<3>(r.payload_)) shifted[e + k] = c;
            r.payload_ = std::move(shifted);
            break;
        }
        }
        return r;
    }

    bool operator==(const GammaElement& o) const {
        if (!ring_ || !o.ring_ || !ring_->same(*o.ring_)) return false;
        return payload_ == o.payload_;
    }
    bool operator!=(const GammaElement& o) const { return !(*this == o); }

    LambdaScalar to_scalar() const {
        const Int& n = ring_->base_n();
        switch (payload_.index()) {
        case 0: return LambdaScalar::from_payload(ring_, std::get<0>(payload_).to_rat(n));
        case 1: {
            const auto& c = std::get<1>(payload_);
            std::vector<Rat> q(c.size());
            for (size_t i = 0; i < c.size(); ++i) q[i] = Rat(c[i]);
            return LambdaScalar::from_payload(ring_, std::move(q));
        }
        case 2: {
            const auto& p = std::get<2>(payload_);
            return LambdaScalar::from_payload(ring_, SqrtPairQ{p.a.to_rat(n), p.b.to_rat(n)});
        }
        case 3: {
            LaurentQ q;
            for (const auto& [e, c] : std::get<3>(payload_)) q[e] = Rat(c);
            return LambdaScalar::from_payload(ring_, std::move(q));
        }
        }
        throw Error(ErrorCode::Internal, "bad payload");
    }

    int sign(int max_refine = kDefaultMaxRefine) const { return to_scalar().sign(max_refine); }
    int compare(const GammaElement& o, int max_refine = kDefaultMaxRefine) const {
        check_same_ring(ring_, o.ring_);
        return (*this - o).sign(max_refine);
    }
    Rat approx(unsigned bits, int max_refine = kDefaultMaxRefine) const {
        return to_scalar().approx(bits, max_refine);
    }

    std::string to_string() const { return to_scalar().to_string(); }

    // Structural total order for use as container key (not the real-number
    // order; coordinatewise on normal forms, which is sound by uniqueness).
    static int structural_cmp(const GammaElement& x, const GammaElement& y) {
        if (x.payload_.index() != y.payload_.index())
            return x.payload_.index() < y.payload_.index() ? -1 : 1;
        switch (x.payload_.index()) {
        case 0: {
            const auto& a = std::get<0>(x.payload_);
            const auto& b = std::get<0>(y.payload_);
            if (int c = cmp(a.m, b.m)) return c;
            return a.k == b.k ? 0 : (a.k < b.k ? -1 : 1);
        }
        case 1: {
            const auto& a = std::get<1>(x.payload_);
            const auto& b = std::get<1>(y.payload_);
            for (size_t i = 0; i < a.size(); ++i)
                if (int c = cmp(a[i], b[i])) return c;
            return 0;
        }
        case 2: {
            const auto& a = std::get<2>(x.payload_);
            const auto& b = std::get<2>(y.payload_);
            if (int c = cmp(a.a.m, b.a.m)) return c;
            if (a.a.k != b.a.k) return a.a.k < b.a.k ? -1 : 1;
            if (int c = cmp(a.b.m, b.b.m)) return c;
            return a.b.k == b.b.k ? 0 : (a.b.k < b.b.k ? -1 : 1);
        }
        case 3: {
            const auto& a = std::get<3>(x.payload_);
            const auto& b = std::get<3>(y.payload_);
            auto ia = a.begin();
            auto ib = b.begin();
            for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
                if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
                if (int c = cmp(ia->second, ib->second)) return c;
            }
            if (ia == a.end() && ib == b.end()) return 0;
            return ia == a.end() ? -1 : 1;
        }
        }
        return 0;
    }

private:
    void reduce_mod_min_poly(std::vector<Int>& c) const {
        const ZPoly& f = ring_->spec().coeffs;
        size_t d = static_cast<size_t>(ring_->degree());
        for (size_t i = c.size(); i-- > d;) {
            Int t = c[i];
            if (t == 0) continue;
            c[i] = 0;
            for (size_t j = 0; j < d; ++j) c[i - d + j] -= f[j] * t;
        }
    }

    RingPtr ring_;
    Payload payload_{ZInvN{}};
};

// Downcast: succeeds iff the scalar has integer coordinates in the Gamma basis.
inline std::optional<GammaElement> to_gamma(const LambdaScalar& s) {
    const RingPtr& ring = s.ring();
    const Int& n = ring->base_n();
    switch (s.payload().index()) {
    case 0: {
        auto z = ZInvN::from_rat(std::get<0>(s.payload()), n);
        if (!z) return std::nullopt;
        return GammaElement::from_payload(ring, *z);
    }
    case 1: {
        const auto& q = std::get<1>(s.payload());
        std::vector<Int> c(q.size());
        for (size_t i = 0; i < q.size(); ++i) {
            if (q[i].get_den() != 1) return std::nullopt;
            c[i] = q[i].get_num();
        }
        return GammaElement::from_payload(ring, std::move(c));
    }
    case 2: {
        const auto& p = std::get<2>(s.payload());
        auto a = ZInvN::from_rat(p.a, n);
        auto b = ZInvN::from_rat(p.b, n);
        if (!a || !b) return std::nullopt;
        return GammaElement::from_payload(ring, SqrtPairZ{*a, *b});
    }
    case 3: {
        const auto& q = std::get<3>(s.payload());
        LaurentZ t;
        for (const auto& [e, c] : q) {
            if (c.get_den() != 1) return std::nullopt;
            t[e] = c.get_num();
        }
        return GammaElement::from_payload(ring, std::move(t));
    }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Printing in the gamma text grammar (Laurent polynomial in "L" and, for the
// sqrt case, "R").

namespace detail {
inline void print_term(std::string& out, const Rat& coeff, const std::string& sym) {
    if (coeff == 0) return;
    bool neg = coeff < 0;
    Rat a = neg ? Rat(-coeff) : coeff;
    if (out.empty())
        out += neg ? "-" : "";
    else
        out += neg ? "-" : "+";
    if (sym.empty()) {
        out += rat_to_string(a);
    } else {
        if (a != 1) out += rat_to_string(a) + "*";
        out += sym;
    }
}
} // namespace detail

inline std::string LambdaScalar::to_string() const {
    std::string out;
    switch (payload_.index()) {
    case 0: detail::print_term(out, std::get<0>(payload_), ""); break;
    case 1: {
        const auto& c = std::get<1>(payload_);
        for (size_t i = 0; i < c.size(); ++i) {
            std::string sym = i == 0 ? "" : (i == 1 ? "L" : "L^" + std::to_string(i));
            detail::print_term(out, c[i], sym);
        }
        break;
    }
    case 2: {
        const auto& p = std::get<2>(payload_);
        detail::print_term(out, p.a, "");
        detail::print_term(out, p.b, "R");
        break;
    }
    case 3: {
        for (const auto& [e, c] : std::get<3>(payload_)) {
            std::string sym = e == 0 ? "" : (e == 1 ? "L" : "L^" + std::to_string(e));
            detail::print_term(out, c, sym);
        }
        break;
    }
    }
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------
// Gamma text grammar parsing: sum of '*'-joined factors, each a rational or
// L^k / R^k.

inline LambdaScalar parse_lambda_scalar(const std::string& raw, const RingPtr& ring) {
    std::string s;
    for (char ch : raw)
        if (!isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw Error(ErrorCode::Parse, "empty gamma expression");

    size_t i = 0;
    auto parse_int = [&]() -> long {
        size_t j = i;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        size_t k = j;
        while (k < s.size() && isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (k == j) throw Error(ErrorCode::Parse, "expected integer at position " + std::to_string(i));
        long v = std::stol(s.substr(i, k - i));
        i = k;
        return v;
    };
    auto parse_rat_tok = [&]() -> Rat {
        size_t j = i;
        while (j < s.size() && isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i) throw Error(ErrorCode::Parse, "expected number at position " + std::to_string(i));
        Int num(s.substr(i, j - i));
        i = j;
        if (i < s.size() && s[i] == '/') {
            ++i;
            size_t k = i;
            while (k < s.size() && isdigit(static_cast<unsigned char>(s[k]))) ++k;
            if (k == i) throw Error(ErrorCode::Parse, "expected denominator at position " + std::to_string(i));
            Int den(s.substr(i, k - i));
            i = k;
            return make_rat(num, den);
        }
        return Rat(num);
    };

    LambdaScalar total = LambdaScalar::zero(ring);
    while (i < s.size()) {
        int sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        if (i >= s.size()) throw Error(ErrorCode::Parse, "dangling sign");
        LambdaScalar term = LambdaScalar::from_rat(ring, Rat(sign));
        bool expect_factor = true;
        while (expect_factor) {
            if (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) {
                term = term.scale(parse_rat_tok());
            } else if (i < s.size() && (s[i] == 'L' || s[i] == 'R')) {
                char sym = s[i++];
                long e = 1;
                if (i < s.size() && s[i] == '^') {
                    ++i;
                    e = parse_int();
                }
                if (sym == 'L') {
                    term = term.mul_lambda_pow(static_cast<int>(e));
                } else {
                    if (ring->kind() != SpecCase::SqrtReciprocal)
                        throw Error(ErrorCode::Parse, "symbol R only valid for sqrt specs");
                    // R = sqrt(n) = lambda^{-1}
                    term = term.mul_lambda_pow(static_cast<int>(-e));
                }
            } else {
                throw Error(ErrorCode::Parse,
                            "expected factor at position " + std::to_string(i) + " in '" + raw + "'");
            }
            if (i < s.size() && s[i] == '*') {
                ++i;
                expect_factor = true;
            } else {
                expect_factor = false;
            }
        }
        total = total + term;
    }
    return total;
}

inline GammaElement parse_gamma_element(const std::string& raw, const RingPtr& ring) {
    LambdaScalar s = parse_lambda_scalar(raw, ring);
    auto g = to_gamma(s);
    if (!g)
        throw Error(ErrorCode::Parse, "'" + raw + "' is not an element of Gamma_lambda");
    return *g;
}

// ---------------------------------------------------------------------------
// Gaussian-rational scalars over the lambda ring (step-function values).

struct CScalar {
    LambdaScalar re, im;

    static CScalar zero(const RingPtr& ring) {
        return {LambdaScalar::zero(ring), LambdaScalar::zero(ring)};
    }
    static CScalar one(const RingPtr& ring) {
        return {LambdaScalar::one(ring), LambdaScalar::zero(ring)};
    }
    static CScalar of(LambdaScalar r) {
        RingPtr ring = r.ring();
        return {std::move(r), LambdaScalar::zero(ring)};
    }
    static CScalar from_rats(const RingPtr& ring, const Rat& r, const Rat& i) {
        return {LambdaScalar::from_rat(ring, r), LambdaScalar::from_rat(ring, i)};
    }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    CScalar operator+(const CScalar& o) const { return {re + o.re, im + o.im}; }
    CScalar operator-(const CScalar& o) const { return {re - o.re, im - o.im}; }
    CScalar operator-() const { return {-re, -im}; }
    CScalar operator*(const CScalar& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CScalar conj() const { return {re, -im}; }
    CScalar scale_int(long c) const {
        Rat r(c);
        return {re.scale(r), im.scale(r)};
    }

    bool operator==(const CScalar& o) const { return re == o.re && im == o.im; }
    bool operator!=(const CScalar& o) const { return !(*this == o); }

    std::string to_string() const {
        if (im.is_zero()) return re.to_string();
        return "(" + re.to_string() + ")+(" + im.to_string() + ")i";
    }
};

// ---------------------------------------------------------------------------
// Matrix of multiplication by lambda on the basis (1, lambda, ..., lambda^{d-1}).

inline IntMatrix lambda_matrix(const RingPtr& ring) {
    if (ring->kind() != SpecCase::Algebraic)
        throw Error(ErrorCode::WrongCase, "lambda_matrix requires an algebraic-integer spec");
    int d = ring->degree();
    const ZPoly& f = ring->spec().coeffs;
    IntMatrix L(d, d);
    for (int j = 0; j + 1 < d; ++j) L.at(j + 1, j) = 1;
    for (int i = 0; i < d; ++i) L.at(i, d - 1) = -f[i];
    return L;
}

} // namespace qlambda
