#pragma once

#include <vector>

#include "qlambda/algebra.hpp"

namespace qlambda {

// r x r matrix over the symbolic crossed-product algebra (one spec).
class MatrixElement {
public:
    MatrixElement() = default;
    MatrixElement(RingPtr ring, size_t r)
        : ring_(std::move(ring)), r_(r), ents_(r * r, AlgebraElement::zero(ring_)) {}

    static MatrixElement identity(const RingPtr& ring, size_t r) {
        MatrixElement m(ring, r);
        for (size_t i = 0; i < r; ++i) m.at(i, i) = AlgebraElement::unit_e(ring);
        return m;
    }
    static MatrixElement from_entry(const AlgebraElement& x) {
        MatrixElement m(x.ring(), 1);
        m.at(0, 0) = x;
        return m;
    }
    static MatrixElement from_entries(const RingPtr& ring, size_t r,
                                      std::vector<AlgebraElement> ents) {
        MatrixElement m(ring, r);
        if (ents.size() != r * r)
            throw Error(ErrorCode::Internal, "matrix entry count mismatch");
        m.ents_ = std::move(ents);
        return m;
    }

    const RingPtr& ring() const { return ring_; }
    size_t dim() const { return r_; }
    AlgebraElement& at(size_t i, size_t j) { return ents_[i * r_ + j]; }
    const AlgebraElement& at(size_t i, size_t j) const { return ents_[i * r_ + j]; }

    bool operator==(const MatrixElement& o) const { return r_ == o.r_ && ents_ == o.ents_; }
    bool operator!=(const MatrixElement& o) const { return !(*this == o); }

    MatrixElement operator+(const MatrixElement& o) const {
        require_same_shape(o);
        MatrixElement r = *this;
        for (size_t i = 0; i < ents_.size(); ++i) r.ents_[i] = r.ents_[i] + o.ents_[i];
        return r;
    }
    MatrixElement operator-(const MatrixElement& o) const {
        require_same_shape(o);
        MatrixElement r = *this;
        for (size_t i = 0; i < ents_.size(); ++i) r.ents_[i] = r.ents_[i] - o.ents_[i];
        return r;
    }
    MatrixElement operator*(const MatrixElement& o) const {
        require_same_shape(o);
        MatrixElement r(ring_, r_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < r_; ++j) {
                AlgebraElement acc = AlgebraElement::zero(ring_);
                for (size_t k = 0; k < r_; ++k) acc = acc + at(i, k) * o.at(k, j);
                r.at(i, j) = std::move(acc);
            }
        return r;
    }

    // conjugate-transpose of entry adjoints
    MatrixElement adjoint() const {
        MatrixElement r(ring_, r_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < r_; ++j) r.at(i, j) = at(j, i).adjoint();
        return r;
    }

    MatrixElement scale(const CScalar& c) const {
        MatrixElement r = *this;
        for (auto& e : r.ents_) e = e.scale(c);
        return r;
    }

    bool is_zero() const {
        for (const auto& e : ents_)
            if (!e.is_zero()) return false;
        return true;
    }

    // Un-normalized matrix trace of psi over the diagonal.
    CScalar trace_psi() const {
        CScalar t = CScalar::zero(ring_);
        for (size_t i = 0; i < r_; ++i) t = t + at(i, i).psi();
        return t;
    }

    MatrixElement phi_k(int k) const {
        MatrixElement r(ring_, r_);
        for (size_t i = 0; i < ents_.size(); ++i) r.ents_[i] = ents_[i].phi_k(k);
        return r;
    }

    std::map<int, MatrixElement> grade_decompose() const {
        std::map<int, MatrixElement> out;
        for (size_t i = 0; i < ents_.size(); ++i)
            for (const auto& [k, part] : ents_[i].grade_decompose()) {
                auto it = out.find(k);
                if (it == out.end()) it = out.emplace(k, MatrixElement(ring_, r_)).first;
                it->second.ents_[i] = part;
            }
        return out;
    }

    std::string to_string() const {
        std::string out = "[";
        for (size_t i = 0; i < r_; ++i) {
            out += (i ? ",[" : "[");
            for (size_t j = 0; j < r_; ++j) out += (j ? "," : "") + at(i, j).to_string();
            out += "]";
        }
        return out + "]";
    }

private:
    void require_same_shape(const MatrixElement& o) const {
        check_same_ring(ring_, o.ring_);
        if (r_ != o.r_) throw Error(ErrorCode::Internal, "matrix dimension mismatch");
    }

    RingPtr ring_;
    size_t r_ = 0;
    std::vector<AlgebraElement> ents_;
};

// ---------------------------------------------------------------------------
// [D, .] through the gauge grading: the grade-k component is scaled by k.

inline MatrixElement d_commutator(const MatrixElement& x) {
    MatrixElement out(x.ring(), x.dim());
    for (const auto& [k, part] : x.grade_decompose()) {
        if (k == 0) continue;
        out = out + part.scale(CScalar::from_rats(x.ring(), Rat(k), Rat(0)));
    }
    return out;
}

inline AlgebraElement d_commutator(const AlgebraElement& x) {
    return d_commutator(MatrixElement::from_entry(x)).at(0, 0);
}

// ---------------------------------------------------------------------------
// Modular condition. v sigma_t(v*) and v* sigma_t(v) must lie in F for all t;
// sigma_t scales the grade-l part by det^{it}, so with v = sum_k v_k this is
// equivalent to: vv*, v*v in F entrywise and all cross-grade products
// v_k v_l* = v_k* v_l = 0 for k != l.

inline bool is_modular_pi(const MatrixElement& v) {
    MatrixElement vs = v.adjoint();
    if (!((v * vs * v) == v))
        throw Error(ErrorCode::NotPartialIsometry, "v v* v != v");
    auto in_F = [](const MatrixElement& m) {
        for (size_t i = 0; i < m.dim(); ++i)
            for (size_t j = 0; j < m.dim(); ++j)
                if (!m.at(i, j).is_in_F()) return false;
        return true;
    };
    if (!in_F(v * vs) || !in_F(vs * v)) return false;
    auto parts = v.grade_decompose();
    for (auto it = parts.begin(); it != parts.end(); ++it)
        for (auto jt = std::next(it); jt != parts.end(); ++jt) {
            if (!(it->second * jt->second.adjoint()).is_zero()) return false;
            if (!(it->second.adjoint() * jt->second).is_zero()) return false;
        }
    return true;
}

inline bool is_modular_unitary(const MatrixElement& u) {
    MatrixElement id = MatrixElement::identity(u.ring(), u.dim());
    if (!((u * u.adjoint()) == id) || !((u.adjoint() * u) == id)) return false;
    return is_modular_pi(u);
}

// u_v = [[1 - v*v, v*], [v, 1 - vv*]], a modular unitary over the algebra.
inline MatrixElement modular_unitary_from_pi(const MatrixElement& v) {
    if (!is_modular_pi(v))
        throw Error(ErrorCode::NotModular, "v does not satisfy the modular condition");
    size_t r = v.dim();
    MatrixElement vs = v.adjoint();
    MatrixElement id = MatrixElement::identity(v.ring(), r);
    MatrixElement tl = id - vs * v, br = id - v * vs;
    MatrixElement u(v.ring(), 2 * r);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) {
            u.at(i, j) = tl.at(i, j);
            u.at(i, r + j) = vs.at(i, j);
            u.at(r + i, j) = v.at(i, j);
            u.at(r + i, r + j) = br.at(i, j);
        }
    return u;
}

// ---------------------------------------------------------------------------
// Spectral flow as the exact algebraic value tau.Phi(v [D, v*]), i.e. the
// un-normalized psi-trace of v d_commutator(v*). Always real; the imaginary
// part is asserted to vanish.

namespace detail {
inline LambdaScalar sf_value(const MatrixElement& v) {
    CScalar t = (v * d_commutator(v.adjoint())).trace_psi();
    if (!t.im.is_zero())
        throw Error(ErrorCode::Internal, "spectral flow value has nonzero imaginary part");
    return t.re;
}
} // namespace detail

inline LambdaScalar sf_partial_isometry(const MatrixElement& v) {
    if (!is_modular_pi(v))
        throw Error(ErrorCode::NotModular, "spectral flow requires a modular partial isometry");
    return detail::sf_value(v);
}

inline LambdaScalar sf_unitary(const MatrixElement& u) {
    if (!is_modular_unitary(u))
        throw Error(ErrorCode::NotModular, "spectral flow requires a modular unitary");
    return detail::sf_value(u);
}

// ---------------------------------------------------------------------------
// The two worked unitary families and tau of the range projections.

// u_{{k,m},{j,n}} built from v = S_{j,n} S_{k,m}^*; requires m < m_k, n < m_j.
inline MatrixElement build_u_double_index(const RingPtr& ring, int k, const Int& m, int j,
                                          const Int& n, int max_refine = kDefaultMaxRefine) {
    if (k < 1 || j < 1 || m < 0 || n < 0 || m >= m_k(ring, k, max_refine) ||
        n >= m_k(ring, j, max_refine))
        throw Error(ErrorCode::IndexRange,
                    "double-index family requires m < m_k and n < m_j");
    AlgebraElement skm = make_S(ring, k, m, max_refine);
    AlgebraElement sjn = make_S(ring, j, n, max_refine);
    return modular_unitary_from_pi(MatrixElement::from_entry(sjn * skm.adjoint()));
}

// u_{j,k} built from the leftover isometries v = S_{j,m_j} S_{k,m_k}^*.
inline MatrixElement build_u_leftover(const RingPtr& ring, int j, int k,
                                      int max_refine = kDefaultMaxRefine) {
    if (k < 1 || j < 1)
        throw Error(ErrorCode::IndexRange, "leftover family requires j, k >= 1");
    AlgebraElement sj = make_S(ring, j, m_k(ring, j, max_refine), max_refine);
    AlgebraElement sk = make_S(ring, k, m_k(ring, k, max_refine), max_refine);
    return modular_unitary_from_pi(MatrixElement::from_entry(sj * sk.adjoint()));
}

// tau(P_{k,m}) = psi(S_{k,m} S_{k,m}^*)
inline LambdaScalar tau_P(const RingPtr& ring, int k, const Int& m,
                          int max_refine = kDefaultMaxRefine) {
    CScalar t = make_P(ring, k, m, max_refine).psi();
    if (!t.im.is_zero()) throw Error(ErrorCode::Internal, "tau of a projection must be real");
    return t.re;
}

// ---------------------------------------------------------------------------
// Mapping-cone projection e_v(t); rational t keeps 1/(1+t^2) rational.

inline MatrixElement mapping_cone_projection(const MatrixElement& v, const Rat& t) {
    if (!is_modular_pi(v))
        throw Error(ErrorCode::NotModular, "e_v(t) requires a modular partial isometry");
    size_t r = v.dim();
    const RingPtr& ring = v.ring();
    Rat c = 1 / (1 + t * t); // 1/(1+t^2)
    Rat s = t * c;           // t/(1+t^2)
    MatrixElement vs = v.adjoint();
    MatrixElement id = MatrixElement::identity(ring, r);
    MatrixElement tl = id - (v * vs).scale(CScalar::from_rats(ring, c, Rat(0)));
    MatrixElement tr = v.scale(CScalar::from_rats(ring, Rat(0), Rat(-s)));
    MatrixElement bl = vs.scale(CScalar::from_rats(ring, Rat(0), s));
    MatrixElement br = (vs * v).scale(CScalar::from_rats(ring, c, Rat(0)));
    MatrixElement e(ring, 2 * r);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) {
            e.at(i, j) = tl.at(i, j);
            e.at(i, r + j) = tr.at(i, j);
            e.at(r + i, j) = bl.at(i, j);
            e.at(r + i, r + j) = br.at(i, j);
        }
    return e;
}

} // namespace qlambda
