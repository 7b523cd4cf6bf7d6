#pragma once

#include <vector>

#include "qlambda/gamma.hpp"

namespace qlambda {

// Finitely supported step function with breakpoints in Gamma_lambda, value v_i
// on [b_{i-1}, b_i), zero outside [b_0, b_m). Canonical form: strictly
// increasing breakpoints, adjacent values differ, end values nonzero; the zero
// function stores nothing.
class StepFunction {
public:
    StepFunction() = default;
    explicit StepFunction(RingPtr ring) : ring_(std::move(ring)) {}

    static StepFunction zero(const RingPtr& ring) { return StepFunction(ring); }

    // chi_{[a,b)} scaled by value; the empty interval (a >= b) gives zero.
    static StepFunction indicator(const GammaElement& a, const GammaElement& b,
                                  const CScalar& value) {
        check_same_ring(a.ring(), b.ring());
        StepFunction f(a.ring());
        if (value.is_zero() || a.compare(b) >= 0) return f;
        f.breaks_ = {a, b};
        f.vals_ = {value};
        return f;
    }
    static StepFunction indicator(const GammaElement& a, const GammaElement& b) {
        return indicator(a, b, CScalar::one(a.ring()));
    }

    // Assumes strictly increasing breakpoints; canonicalizes values.
    static StepFunction make(RingPtr ring, std::vector<GammaElement> breaks,
                             std::vector<CScalar> vals) {
        StepFunction f(std::move(ring));
        f.breaks_ = std::move(breaks);
        f.vals_ = std::move(vals);
        f.canonicalize();
        return f;
    }

    const RingPtr& ring() const { return ring_; }
    bool is_zero() const { return vals_.empty(); }
    size_t pieces() const { return vals_.size(); }
    const std::vector<GammaElement>& breakpoints() const { return breaks_; }
    const std::vector<CScalar>& values() const { return vals_; }

    bool operator==(const StepFunction& o) const {
        return breaks_ == o.breaks_ && vals_ == o.vals_;
    }
    bool operator!=(const StepFunction& o) const { return !(*this == o); }

    // Value on the piece whose left endpoint is <= x < next breakpoint.
    CScalar value_at(const GammaElement& x) const {
        if (is_zero()) return CScalar::zero(ring_);
        // binary search: largest j with breaks_[j] <= x
        long lo = 0, hi = static_cast<long>(breaks_.size()) - 1, j = -1;
        while (lo <= hi) {
            long mid = (lo + hi) / 2;
            if (breaks_[mid].compare(x) <= 0) {
                j = mid;
                lo = mid + 1;
            } else {
                hi = mid - 1;
            }
        }
        if (j < 0 || j >= static_cast<long>(vals_.size())) return CScalar::zero(ring_);
        return vals_[j];
    }

    template <class Op>
    static StepFunction pointwise(const StepFunction& f, const StepFunction& g, Op op) {
        check_same_ring(f.ring_, g.ring_);
        // merged breakpoint list
        std::vector<GammaElement> merged;
        size_t i = 0, j = 0;
        while (i < f.breaks_.size() || j < g.breaks_.size()) {
            if (i == f.breaks_.size())
                merged.push_back(g.breaks_[j++]);
            else if (j == g.breaks_.size())
                merged.push_back(f.breaks_[i++]);
            else {
                int c = f.breaks_[i].compare(g.breaks_[j]);
                if (c < 0)
                    merged.push_back(f.breaks_[i++]);
                else if (c > 0)
                    merged.push_back(g.breaks_[j++]);
                else {
                    merged.push_back(f.breaks_[i++]);
                    ++j;
                }
            }
        }
        StepFunction out(f.ring_);
        if (merged.size() < 2) return out;
        std::vector<CScalar> vals;
        for (size_t t = 0; t + 1 < merged.size(); ++t)
            vals.push_back(op(f.value_at(merged[t]), g.value_at(merged[t])));
        out.breaks_ = std::move(merged);
        out.vals_ = std::move(vals);
        out.canonicalize();
        return out;
    }

    StepFunction operator+(const StepFunction& o) const {
        return pointwise(*this, o, [](const CScalar& a, const CScalar& b) { return a + b; });
    }
    StepFunction operator*(const StepFunction& o) const {
        return pointwise(*this, o, [](const CScalar& a, const CScalar& b) { return a * b; });
    }
    StepFunction operator-() const {
        StepFunction r = *this;
        for (auto& v : r.vals_) v = -v;
        return r;
    }
    StepFunction operator-(const StepFunction& o) const { return *this + (-o); }

    StepFunction scale(const CScalar& c) const {
        if (c.is_zero()) return zero(ring_);
        StepFunction r = *this;
        for (auto& v : r.vals_) v = v * c;
        r.canonicalize();
        return r;
    }

    StepFunction conj() const {
        StepFunction r = *this;
        for (auto& v : r.vals_) v = v.conj();
        return r;
    }

    // Affine pullback: breakpoints b -> lambda^n b + c, values unchanged
    // (alpha_g(f)(t) = f(g^{-1} t) maps the piece [b_{i-1}, b_i) to
    // [g b_{i-1}, g b_i); order is preserved because lambda^n > 0).
    StepFunction map_affine(int n, const GammaElement& c) const {
        StepFunction r = *this;
        for (auto& b : r.breaks_) b = b.mul_lambda_pow(n) + c;
        return r;
    }

    // restriction to [a, b)
    StepFunction restrict(const GammaElement& a, const GammaElement& b) const {
        return *this * indicator(a, b);
    }

    // Lebesgue integral: sum of v_i (b_i - b_{i-1}).
    CScalar integral() const {
        CScalar total = CScalar::zero(ring_);
        for (size_t i = 0; i < vals_.size(); ++i) {
            CScalar len = CScalar::of((breaks_[i + 1] - breaks_[i]).to_scalar());
            total = total + vals_[i] * len;
        }
        return total;
    }

    bool is_projection_function() const {
        return (*this * *this) == *this && conj() == *this;
    }

    std::string to_string() const;

private:
    void canonicalize() {
        if (ring_ == nullptr && !breaks_.empty()) ring_ = breaks_.front().ring();
        // merge adjacent equal values
        std::vector<GammaElement> nb;
        std::vector<CScalar> nv;
        for (size_t i = 0; i < vals_.size(); ++i) {
            if (!nv.empty() && nv.back() == vals_[i]) {
                nb.back() = breaks_[i + 1];
            } else {
                if (nv.empty()) nb.push_back(breaks_[i]);
                nv.push_back(vals_[i]);
                nb.push_back(breaks_[i + 1]);
            }
        }
        // trim zero ends
        size_t lo = 0, hi = nv.size();
        while (lo < hi && nv[lo].is_zero()) ++lo;
        while (hi > lo && nv[hi - 1].is_zero()) --hi;
        if (lo >= hi) {
            breaks_.clear();
            vals_.clear();
            return;
        }
        breaks_.assign(nb.begin() + lo, nb.begin() + hi + 1);
        vals_.assign(nv.begin() + lo, nv.begin() + hi);
    }

    RingPtr ring_;
    std::vector<GammaElement> breaks_;
    std::vector<CScalar> vals_;
};

inline std::string StepFunction::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (size_t i = 0; i < vals_.size(); ++i) {
        if (vals_[i].is_zero()) continue;
        if (!out.empty()) out += "+";
        if (!(vals_[i] == CScalar::one(ring_))) out += "(" + vals_[i].to_string() + ")*";
        out += "chi(" + breaks_[i].to_string() + "," + breaks_[i + 1].to_string() + ")";
    }
    return out;
}

} // namespace qlambda
