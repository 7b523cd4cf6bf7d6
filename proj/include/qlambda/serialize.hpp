#pragma once

#include <json.hpp>

#include "qlambda/expr.hpp"
#include "qlambda/ktheory.hpp"

namespace qlambda {

using Json = nlohmann::json;

inline Json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return Json(v.get_si());
    return Json(v.get_str());
}
inline Int int_from_json(const Json& j) {
    if (j.is_string()) return Int(j.get<std::string>());
    return Int(j.get<long>());
}

// ---------------------------------------------------------------------------
// FGAbelianGroup <-> {"free_rank": <int or "inf">, "invariant_factors": [...]}

inline Json group_to_json(const FGAbelianGroup& g) {
    Json j;
    if (g.countably_infinite_rank)
        j["free_rank"] = "inf";
    else
        j["free_rank"] = g.free_rank;
    Json f = Json::array();
    for (const auto& d : g.invariant_factors) f.push_back(int_to_json(d));
    j["invariant_factors"] = std::move(f);
    return j;
}

inline FGAbelianGroup group_from_json(const Json& j) {
    FGAbelianGroup g;
    if (j.at("free_rank").is_string()) {
        if (j["free_rank"] != "inf") throw Error(ErrorCode::Parse, "bad free_rank");
        g.countably_infinite_rank = true;
    } else {
        g.free_rank = j["free_rank"].get<size_t>();
    }
    for (const auto& d : j.at("invariant_factors")) g.invariant_factors.push_back(int_from_json(d));
    return g;
}

// ---------------------------------------------------------------------------
// Exact scalars with decimal rendering. Decimal strings always carry an
// explicit error bound; the exact form is authoritative.

struct DecimalRendering {
    std::optional<std::string> decimal;
    std::string error_bound; // "0", "2^-k", or "unavailable"
};

inline DecimalRendering render_decimal(const LambdaScalar& x, unsigned bits) {
    for (unsigned b = bits; b >= 2; b = b / 2) {
        try {
            Rat r = x.approx(b);
            unsigned digits = static_cast<unsigned>(b * 0.30103) + 1;
            std::string dec = decimal_string(r, digits);
            // exact when the approximation is the value itself and the decimal
            // expansion terminates within the printed digits
            bool exact = false;
            if (x.payload().index() == 0 || (x == LambdaScalar::from_rat(x.ring(), r))) {
                Int den = r.get_den(), p10 = int_pow(Int(10), digits);
                exact = (p10 % den) == 0;
            }
            DecimalRendering out;
            out.decimal = dec;
            out.error_bound = exact ? "0" : ("2^-" + std::to_string(b > 0 ? b - 1 : 0));
            return out;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::PrecisionExhausted) throw;
            if (b <= 2) break;
        }
    }
    return {std::nullopt, "unavailable"};
}

inline Json scalar_to_json(const LambdaScalar& x, unsigned bits) {
    Json j;
    j["exact"] = x.to_string();
    DecimalRendering d = render_decimal(x, bits);
    j["decimal"] = d.decimal ? Json(*d.decimal) : Json(nullptr);
    j["error_bound"] = d.error_bound;
    return j;
}

inline LambdaScalar scalar_from_json(const Json& j, const RingPtr& ring) {
    return parse_lambda_scalar(j.at("exact").get<std::string>(), ring);
}

inline Json cscalar_to_json(const CScalar& x, unsigned bits) {
    Json j;
    j["re"] = scalar_to_json(x.re, bits);
    j["im"] = scalar_to_json(x.im, bits);
    return j;
}

inline CScalar cscalar_from_json(const Json& j, const RingPtr& ring) {
    return {scalar_from_json(j.at("re"), ring), scalar_from_json(j.at("im"), ring)};
}

// ---------------------------------------------------------------------------
// Matrices, K-theory results, classification, validation.

inline Json matrix_to_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (size_t i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (size_t j = 0; j < m.cols; ++j) row.push_back(int_to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline IntMatrix matrix_from_json(const Json& j) {
    size_t rows = j.size();
    size_t cols = rows ? j.at(0).size() : 0;
    IntMatrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t c = 0; c < cols; ++c) m.at(i, c) = int_from_json(j.at(i).at(c));
    return m;
}

inline Json diag_to_json(const std::vector<Int>& d) {
    Json out = Json::array();
    for (const auto& v : d) out.push_back(int_to_json(v));
    return out;
}

inline Json ktheory_to_json(const KTheoryResult& r) {
    Json j;
    j["k0"] = group_to_json(r.k0);
    j["k1"] = group_to_json(r.k1);
    j["method"] = k_method_name(r.method);
    if (r.intermediates) {
        Json inter;
        inter["m_odd"] = matrix_to_json(r.intermediates->m_odd);
        inter["m_even"] = matrix_to_json(r.intermediates->m_even);
        inter["snf_diag_odd"] = diag_to_json(r.intermediates->d_odd);
        inter["snf_diag_even"] = diag_to_json(r.intermediates->d_even);
        inter["ker_rank_odd"] = r.intermediates->ker_odd;
        inter["ker_rank_even"] = r.intermediates->ker_even;
        inter["splitting"] = "kernels are free, so the PV extension splits";
        j["intermediates"] = std::move(inter);
    } else {
        j["intermediates"] = nullptr;
    }
    return j;
}

inline KTheoryResult ktheory_from_json(const Json& j) {
    KTheoryResult r;
    r.k0 = group_from_json(j.at("k0"));
    r.k1 = group_from_json(j.at("k1"));
    std::string m = j.at("method").get<std::string>();
    if (m == "CLOSED_FORM_RATIONAL")
        r.method = KMethod::ClosedFormRational;
    else if (m == "SNF_PV")
        r.method = KMethod::SnfPv;
    else if (m == "CLOSED_FORM_SQRT")
        r.method = KMethod::ClosedFormSqrt;
    else if (m == "CLOSED_FORM_TRANSCENDENTAL")
        r.method = KMethod::ClosedFormTranscendental;
    else
        throw Error(ErrorCode::Parse, "unknown method " + m);
    if (!j.at("intermediates").is_null()) {
        PVIntermediates inter;
        const Json& ij = j["intermediates"];
        inter.m_odd = matrix_from_json(ij.at("m_odd"));
        inter.m_even = matrix_from_json(ij.at("m_even"));
        for (const auto& v : ij.at("snf_diag_odd")) inter.d_odd.push_back(int_from_json(v));
        for (const auto& v : ij.at("snf_diag_even")) inter.d_even.push_back(int_from_json(v));
        inter.ker_odd = ij.at("ker_rank_odd").get<size_t>();
        inter.ker_even = ij.at("ker_rank_even").get<size_t>();
        r.intermediates = std::move(inter);
    }
    return r;
}

inline Json classification_to_json(const ClassificationReport& c) {
    Json j;
    j["stable_O_n"] = c.stable_O_n ? int_to_json(*c.stable_O_n) : Json(nullptr);
    j["unital_O_n"] = c.unital_O_n ? int_to_json(*c.unital_O_n) : Json(nullptr);
    j["is_Q_N"] = c.is_Q_N;
    j["cuntz_krieger_possible"] = c.cuntz_krieger_possible;
    j["notes"] = c.notes;
    return j;
}

inline ClassificationReport classification_from_json(const Json& j) {
    ClassificationReport c;
    if (!j.at("stable_O_n").is_null()) c.stable_O_n = int_from_json(j["stable_O_n"]);
    if (!j.at("unital_O_n").is_null()) c.unital_O_n = int_from_json(j["unital_O_n"]);
    c.is_Q_N = j.at("is_Q_N").get<bool>();
    c.cuntz_krieger_possible = j.at("cuntz_krieger_possible").get<bool>();
    c.notes = j.at("notes").get<std::string>();
    return c;
}

inline Json validation_to_json(const ValidationReport& r) {
    Json j;
    j["ok"] = r.ok;
    Json v = Json::array();
    for (const auto& viol : r.violations)
        v.push_back({{"code", error_code_name(viol.code)}, {"message", viol.message}});
    j["violations"] = std::move(v);
    j["squarefree"] = r.squarefree;
    j["irreducibility"] = irreducibility_name(r.irreducibility);
    if (!r.detail.empty()) j["detail"] = r.detail;
    return j;
}

} // namespace qlambda
