#pragma once

#include <optional>
#include <string>

#include "qlambda/gamma.hpp"
#include "qlambda/int_matrix.hpp"

namespace qlambda {

enum class KMethod {
    ClosedFormRational,
    SnfPv,
    ClosedFormSqrt,
    ClosedFormTranscendental,
};

inline const char* k_method_name(KMethod m) {
    switch (m) {
    case KMethod::ClosedFormRational: return "CLOSED_FORM_RATIONAL";
    case KMethod::SnfPv: return "SNF_PV";
    case KMethod::ClosedFormSqrt: return "CLOSED_FORM_SQRT";
    case KMethod::ClosedFormTranscendental: return "CLOSED_FORM_TRANSCENDENTAL";
    }
    return "?";
}

// Audit trail for the SNF/Pimsner-Voiculescu route: the carrier maps
// id - lambda_* on K_0(A_0) (odd exterior powers) and on K_1(A_0) (even
// exterior powers with the invariant wedge^0 coordinate deleted), plus the
// Smith diagonals. The PV extension splits because both kernels are subgroups
// of finitely generated free groups, hence free.
struct PVIntermediates {
    IntMatrix m_odd;  // id - lambda_* on the odd carrier
    IntMatrix m_even; // id - lambda_* on the even (>= 2) carrier
    std::vector<Int> d_odd, d_even;
    size_t ker_odd = 0, ker_even = 0;
};

struct KTheoryResult {
    FGAbelianGroup k0, k1;
    KMethod method = KMethod::ClosedFormRational;
    std::optional<PVIntermediates> intermediates;
};

namespace detail {
inline IntMatrix carrier_map(const IntMatrix& L, bool odd) {
    std::vector<IntMatrix> blocks;
    for (size_t k = odd ? 1 : 2; k <= L.rows; k += 2) blocks.push_back(exterior_power(L, k));
    if (blocks.empty()) return IntMatrix(0, 0);
    return block_diag(blocks);
}

inline FGAbelianGroup group_from_snf(const SNFResult& s, size_t rows) {
    FGAbelianGroup g;
    size_t rank = s.rank();
    g.free_rank = rows - rank;
    for (const auto& d : s.diagonal())
        if (d >= 2) g.invariant_factors.push_back(d);
    return g;
}
} // namespace detail

// The K-group algorithm across all four lambda cases.
inline KTheoryResult k_groups(const LambdaSpec& spec) {
    ValidationReport rep = validate_spec(spec);
    if (!rep.ok)
        throw Error(rep.violations.front().code,
                    "k_groups needs a valid spec: " + rep.violations.front().message);

    KTheoryResult out;
    switch (spec.kind) {
    case SpecCase::Rational: {
        out.method = KMethod::ClosedFormRational;
        out.k0 = FGAbelianGroup::cyclic(spec.q - spec.p);
        out.k1 = FGAbelianGroup::trivial();
        break;
    }
    case SpecCase::SqrtReciprocal: {
        out.method = KMethod::ClosedFormSqrt;
        out.k0 = FGAbelianGroup::cyclic(spec.n - 1);
        out.k1 = out.k0;
        break;
    }
    case SpecCase::Transcendental: {
        out.method = KMethod::ClosedFormTranscendental;
        out.k0 = FGAbelianGroup::countably_infinite_free();
        out.k1 = out.k0;
        break;
    }
    case SpecCase::Algebraic: {
        out.method = KMethod::SnfPv;
        RingPtr ring = GammaRing::create(spec);
        IntMatrix L = lambda_matrix(ring);
        IntMatrix t_odd = detail::carrier_map(L, true);
        IntMatrix t_even = detail::carrier_map(L, false);
        IntMatrix m_odd = IntMatrix::identity(t_odd.rows) - t_odd;
        IntMatrix m_even = IntMatrix::identity(t_even.rows) - t_even;
        SNFResult s_odd = snf(m_odd), s_even = snf(m_even);

        FGAbelianGroup coker_odd = detail::group_from_snf(s_odd, m_odd.rows);
        FGAbelianGroup coker_even = detail::group_from_snf(s_even, m_even.rows);
        size_t ker_odd = m_odd.cols - s_odd.rank();
        size_t ker_even = m_even.cols - s_even.rank();

        // PV: K_0(Q) = coker(on K_0(A_0)) + Z^{ker(on K_1(A_0))} and dually
        out.k0 = coker_odd;
        out.k0.free_rank += ker_even;
        out.k1 = coker_even;
        out.k1.free_rank += ker_odd;

        PVIntermediates inter;
        inter.m_odd = std::move(m_odd);
        inter.m_even = std::move(m_even);
        inter.d_odd = s_odd.diagonal();
        inter.d_even = s_even.diagonal();
        inter.ker_odd = ker_odd;
        inter.ker_even = ker_even;
        out.intermediates = std::move(inter);
        break;
    }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Classification annotations.

struct ClassificationReport {
    std::optional<Int> stable_O_n; // set iff k1 trivial and k0 finite cyclic of order n-1
    std::optional<Int> unital_O_n; // rational case only (paper proves [1] generates)
    bool is_Q_N = false;
    bool cuntz_krieger_possible = false;
    std::string notes;

    bool operator==(const ClassificationReport& o) const {
        return stable_O_n == o.stable_O_n && unital_O_n == o.unital_O_n &&
               is_Q_N == o.is_Q_N && cuntz_krieger_possible == o.cuntz_krieger_possible &&
               notes == o.notes;
    }
};

inline ClassificationReport classify(const KTheoryResult& r, const LambdaSpec& spec) {
    ClassificationReport rep;
    if (r.k1.is_trivial() && r.k0.is_finite_cyclic()) {
        rep.stable_O_n = r.k0.torsion_order() + 1;
        if (spec.kind == SpecCase::Algebraic) {
            Int n = *rep.stable_O_n;
            bool congruent = (n % 4) == 3;
            rep.notes = "stable O_n with algebraic integer lambda: n = " + n.get_str() +
                        (congruent ? " satisfies" : " VIOLATES") + " n == 3 (mod 4)";
        }
    }
    if (spec.kind == SpecCase::Rational) rep.unital_O_n = spec.q - spec.p + 1;
    rep.is_Q_N = r.k0.countably_infinite_rank && r.k0.torsion_free() &&
                 r.k1.countably_infinite_rank && r.k1.torsion_free();
    rep.cuntz_krieger_possible = r.k1.torsion_free();
    return rep;
}

} // namespace qlambda
