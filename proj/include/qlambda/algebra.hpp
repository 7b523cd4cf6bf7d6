#pragma once

#include <map>
#include <vector>

#include "qlambda/step_function.hpp"

namespace qlambda {

// g = [lambda^n : c] acting by t -> lambda^n t + c; |g| = det(g) = lambda^n.
struct GroupElement {
    int n = 0;
    GammaElement c;

    static GroupElement identity(const RingPtr& ring) {
        return {0, GammaElement::zero(ring)};
    }

    int grade() const { return n; }

    // [lambda^n : a] . [lambda^m : b] = [lambda^{n+m} : lambda^n b + a]
    GroupElement compose(const GroupElement& o) const {
        return {n + o.n, o.c.mul_lambda_pow(n) + c};
    }
    GroupElement inverse() const { return {-n, (-c).mul_lambda_pow(-n)}; }
    GammaElement apply(const GammaElement& t) const { return t.mul_lambda_pow(n) + c; }
    bool is_identity() const { return n == 0 && c.is_zero(); }

    bool operator==(const GroupElement& o) const { return n == o.n && c == o.c; }
    bool operator!=(const GroupElement& o) const { return !(*this == o); }

    std::string to_string() const {
        return "d(" + std::to_string(n) + ";" + c.to_string() + ")";
    }
};

struct GroupLess {
    bool operator()(const GroupElement& a, const GroupElement& b) const {
        if (a.n != b.n) return a.n < b.n;
        return GammaElement::structural_cmp(a.c, b.c) < 0;
    }
};

// Finitely supported x : G_lambda -> step functions; the symbolic
// crossed-product element. Zero step functions are never stored.
class AlgebraElement {
public:
    using Terms = std::map<GroupElement, StepFunction, GroupLess>;

    AlgebraElement() = default;
    explicit AlgebraElement(RingPtr ring) : ring_(std::move(ring)) {}

    static AlgebraElement zero(const RingPtr& ring) { return AlgebraElement(ring); }

    // f . delta_g
    static AlgebraElement generator(const StepFunction& f, const GroupElement& g) {
        AlgebraElement x(f.ring());
        if (!f.is_zero()) x.terms_.emplace(g, f);
        return x;
    }

    // e = chi_{[0,1)} . delta_1, the unit of Q^lambda
    static AlgebraElement unit_e(const RingPtr& ring) {
        return generator(
            StepFunction::indicator(GammaElement::zero(ring), GammaElement::one(ring)),
            GroupElement::identity(ring));
    }

    const RingPtr& ring() const { return ring_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool operator==(const AlgebraElement& o) const { return terms_ == o.terms_; }
    bool operator!=(const AlgebraElement& o) const { return !(*this == o); }

    AlgebraElement operator+(const AlgebraElement& o) const {
        check_same_ring(ring_, o.ring_);
        AlgebraElement r = *this;
        for (const auto& [g, f] : o.terms_) {
            auto it = r.terms_.find(g);
            if (it == r.terms_.end()) {
                r.terms_.emplace(g, f);
            } else {
                StepFunction s = it->second + f;
                if (s.is_zero())
                    r.terms_.erase(it);
                else
                    it->second = std::move(s);
            }
        }
        return r;
    }

    AlgebraElement operator-() const {
        AlgebraElement r = *this;
        for (auto& [g, f] : r.terms_) f = -f;
        return r;
    }
    AlgebraElement operator-(const AlgebraElement& o) const { return *this + (-o); }

    // (x.y)(g) = sum_h x(h) alpha_h(y(h^{-1} g))
    AlgebraElement operator*(const AlgebraElement& o) const {
        check_same_ring(ring_, o.ring_);
        AlgebraElement r(ring_);
        for (const auto& [h, f1] : terms_)
            for (const auto& [k, f2] : o.terms_) {
                StepFunction piece = f1 * f2.map_affine(h.n, h.c); // f1 . alpha_h(f2)
                if (piece.is_zero()) continue;
                GroupElement g = h.compose(k);
                auto it = r.terms_.find(g);
                if (it == r.terms_.end()) {
                    r.terms_.emplace(g, std::move(piece));
                } else {
                    StepFunction s = it->second + piece;
                    if (s.is_zero())
                        r.terms_.erase(it);
                    else
                        it->second = std::move(s);
                }
            }
        return r;
    }

    // x*(g) = alpha_g((x(g^{-1}))^*)
    AlgebraElement adjoint() const {
        AlgebraElement r(ring_);
        for (const auto& [g, f] : terms_) {
            GroupElement gi = g.inverse();
            StepFunction fs = f.conj().map_affine(gi.n, gi.c);
            if (!fs.is_zero()) r.terms_.emplace(gi, std::move(fs));
        }
        return r;
    }

    AlgebraElement scale(const CScalar& c) const {
        AlgebraElement r(ring_);
        for (const auto& [g, f] : terms_) {
            StepFunction fs = f.scale(c);
            if (!fs.is_zero()) r.terms_.emplace(g, std::move(fs));
        }
        return r;
    }

    // e . x . e computed componentwise: restrict x(g) to [0,1) cap [g(0), g(1)).
    AlgebraElement compress_e() const {
        AlgebraElement r(ring_);
        GammaElement zero = GammaElement::zero(ring_), one = GammaElement::one(ring_);
        for (const auto& [g, f] : terms_) {
            GammaElement lo = g.apply(zero), hi = g.apply(one);
            if (lo.compare(zero) < 0) lo = zero;
            if (hi.compare(one) > 0) hi = one;
            StepFunction fs = f.restrict(lo, hi);
            if (!fs.is_zero()) r.terms_.emplace(g, std::move(fs));
        }
        return r;
    }

    bool is_in_Q() const { return compress_e() == *this; }
    bool is_in_F() const {
        for (const auto& [g, f] : terms_)
            if (g.n != 0) return false;
        return is_in_Q();
    }
    bool is_projection() const {
        return adjoint() == *this && (*this * *this) == *this;
    }
    bool is_partial_isometry() const {
        return (*this * adjoint() * *this) == *this;
    }
    bool is_unitary_in_Q() const {
        AlgebraElement e = unit_e(ring_);
        return (adjoint() * *this) == e && (*this * adjoint()) == e;
    }

    // Gauge grading: grade of a term is n with |g| = lambda^n.
    std::map<int, AlgebraElement> grade_decompose() const {
        std::map<int, AlgebraElement> out;
        for (const auto& [g, f] : terms_) {
            auto it = out.find(g.n);
            if (it == out.end()) it = out.emplace(g.n, AlgebraElement(ring_)).first;
            it->second.terms_.emplace(g, f);
        }
        return out;
    }

    AlgebraElement phi_k(int k) const {
        AlgebraElement r(ring_);
        for (const auto& [g, f] : terms_)
            if (g.n == k) r.terms_.emplace(g, f);
        return r;
    }

    // Phi = Phi_0, the expectation onto F^lambda.
    AlgebraElement expectation_F() const { return phi_k(0); }

    // psi = Lebesgue integral of the identity-group-element component.
    CScalar psi() const {
        auto it = terms_.find(GroupElement::identity(ring_));
        if (it == terms_.end()) return CScalar::zero(ring_);
        return it->second.integral();
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [g, f] : terms_) {
            // one term per piece so the output re-parses under the grammar
            for (size_t i = 0; i < f.values().size(); ++i) {
                if (f.values()[i].is_zero()) continue;
                if (!out.empty()) out += "+";
                if (!(f.values()[i] == CScalar::one(ring_)))
                    out += "(" + f.values()[i].to_string() + ")*";
                out += "chi(" + f.breakpoints()[i].to_string() + "," +
                       f.breakpoints()[i + 1].to_string() + ")";
                if (!g.is_identity()) out += "*" + g.to_string();
            }
        }
        return out.empty() ? "0" : out;
    }

private:
    RingPtr ring_;
    Terms terms_;
};

// ---------------------------------------------------------------------------
// KMS state checks. psi is tau.Phi; for y homogeneous of grade k the identity
// lambda^k psi(x y) = psi(y x) must hold exactly; non-homogeneous y is
// decomposed and every grade is checked.
inline bool kms_check(const AlgebraElement& x, const AlgebraElement& y,
                      int max_refine = kDefaultMaxRefine) {
    (void)max_refine;
    for (const auto& [k, yk] : y.grade_decompose()) {
        CScalar lhs = (x * yk).psi();
        LambdaScalar lam_k = LambdaScalar::lambda_pow(x.ring(), k);
        lhs = CScalar{lhs.re * lam_k, lhs.im * lam_k};
        CScalar rhs = (yk * x).psi();
        if (!(lhs == rhs)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// m_k: the unique positive integer with m_k lambda^k < 1 <= (m_k + 1) lambda^k.

namespace detail {
// largest m in [1, hi] with m lambda^k < 1 (binary search, gamma_sign predicate)
inline Int mk_binary_search(const RingPtr& ring, const GammaElement& lambda_k, Int hi,
                            int max_refine) {
    GammaElement one = GammaElement::one(ring);
    auto pred = [&](const Int& m) {
        return (one - lambda_k.mul_int(m)).sign(max_refine) > 0;
    };
    Int lo = 1; // lambda^k < 1 always
    while (lo < hi) {
        Int mid = (lo + hi + 1) / 2;
        if (pred(mid))
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}
} // namespace detail

inline Int m_k(const RingPtr& ring, int k, int max_refine = kDefaultMaxRefine) {
    if (k < 1) throw Error(ErrorCode::IndexRange, "m_k requires k >= 1");
    GammaElement one = GammaElement::one(ring);
    GammaElement lambda1 = GammaElement::lambda(ring);
    // m_1 by exponential bracketing, then binary search
    Int hi = 2;
    while ((one - lambda1.mul_int(hi)).sign(max_refine) > 0) hi *= 2;
    Int m1 = detail::mk_binary_search(ring, lambda1, hi, max_refine);
    if (k == 1) return m1;
    // window [1, (m_1+1)^k] contains m_k since ((m_1+1) lambda)^k >= 1
    Int window = int_pow(m1 + 1, static_cast<unsigned long>(k));
    return detail::mk_binary_search(ring, one.mul_lambda_pow(k), window, max_refine);
}

// ---------------------------------------------------------------------------
// The canonical partial isometries S_{k,m} = chi_{[m lambda^k, (m+1) lambda^k)}
// . delta_{[lambda^k : m lambda^k]}, 0 <= m <= m_k.

inline AlgebraElement make_S(const RingPtr& ring, int k, const Int& m,
                             int max_refine = kDefaultMaxRefine) {
    Int mk = m_k(ring, k, max_refine);
    if (k < 1 || m < 0 || m > mk)
        throw Error(ErrorCode::IndexRange, "make_S requires 1 <= k and 0 <= m <= m_k");
    GammaElement lambda_k = GammaElement::one(ring).mul_lambda_pow(k);
    GammaElement lo = lambda_k.mul_int(m), hi = lambda_k.mul_int(m + 1);
    // the last interval is truncated by the ambient unit: (m_k+1) lambda^k >= 1
    if (m == mk) {
        GammaElement one = GammaElement::one(ring);
        if (!(hi - one).is_zero()) hi = one;
    }
    GroupElement g{k, lo};
    return AlgebraElement::generator(StepFunction::indicator(lo, hi), g);
}

inline AlgebraElement make_P(const RingPtr& ring, int k, const Int& m,
                             int max_refine = kDefaultMaxRefine) {
    AlgebraElement s = make_S(ring, k, m, max_refine);
    return s * s.adjoint();
}

// For lambda = 1/n: the n Cuntz isometries S_0, ..., S_{n-1}.
inline std::vector<AlgebraElement> cuntz_generators(const RingPtr& ring) {
    if (ring->kind() != SpecCase::Rational || ring->spec().p != 1)
        throw Error(ErrorCode::WrongCase, "cuntz_generators requires a rational spec with p = 1");
    std::vector<AlgebraElement> out;
    Int n = ring->spec().q;
    for (Int m = 0; m < n; ++m) out.push_back(make_S(ring, 1, m));
    return out;
}

// ---------------------------------------------------------------------------
// Rank-one module operators Theta^R_{x,y} z = x . Phi(y* z) on Q^lambda.

inline AlgebraElement rank_one(const AlgebraElement& x, const AlgebraElement& y,
                               const AlgebraElement& z) {
    if (!x.is_in_Q() || !y.is_in_Q() || !z.is_in_Q())
        throw Error(ErrorCode::NotInQ, "rank_one arguments must lie in Q^lambda");
    return x * (y.adjoint() * z).expectation_F();
}

} // namespace qlambda
