#pragma once

#include <map>
#include <string>
#include <vector>

#include "qlambda/numeric.hpp"

namespace qlambda {

// Finitely generated abelian group in invariant-factor form. free_rank may be
// countably infinite (transcendental lambda).
struct FGAbelianGroup {
    bool countably_infinite_rank = false;
    size_t free_rank = 0;
    std::vector<Int> invariant_factors; // ascending, each >= 2, d_i | d_{i+1}

    bool is_trivial() const {
        return !countably_infinite_rank && free_rank == 0 && invariant_factors.empty();
    }
    bool torsion_free() const { return invariant_factors.empty(); }
    Int torsion_order() const {
        Int t = 1;
        for (const auto& d : invariant_factors) t *= d;
        return t;
    }
    // finite cyclic (including the trivial group)
    bool is_finite_cyclic() const {
        return !countably_infinite_rank && free_rank == 0 && invariant_factors.size() <= 1;
    }

    bool operator==(const FGAbelianGroup& o) const {
        return countably_infinite_rank == o.countably_infinite_rank &&
               (countably_infinite_rank || free_rank == o.free_rank) &&
               invariant_factors == o.invariant_factors;
    }
    bool operator!=(const FGAbelianGroup& o) const { return !(*this == o); }

    static FGAbelianGroup trivial() { return {}; }
    static FGAbelianGroup free(size_t rank) { return {false, rank, {}}; }
    static FGAbelianGroup countably_infinite_free() { return {true, 0, {}}; }
    static FGAbelianGroup cyclic(Int order) {
        FGAbelianGroup g;
        if (order < 0) order = -order;
        if (order >= 2) g.invariant_factors.push_back(order);
        return g;
    }

    std::string to_string() const {
        std::string out;
        if (countably_infinite_rank)
            out = "Z^inf";
        else if (free_rank == 1)
            out = "Z";
        else if (free_rank > 1)
            out = "Z^" + std::to_string(free_rank);
        for (const auto& d : invariant_factors) {
            if (!out.empty()) out += " + ";
            out += "Z/" + d.get_str();
        }
        return out.empty() ? "0" : out;
    }
};

namespace detail {
inline std::map<Int, std::vector<unsigned>> factor_exponents(const std::vector<Int>& orders) {
    std::map<Int, std::vector<unsigned>> exps;
    for (Int m : orders) {
        if (m < 0) m = -m;
        if (m <= 1) continue;
        for (Int p = 2; p * p <= m; ++p) {
            if (m % p != 0) continue;
            unsigned e = 0;
            while (m % p == 0) {
                m /= p;
                ++e;
            }
            exps[p].push_back(e);
        }
        if (m > 1) exps[m].push_back(1);
    }
    return exps;
}
} // namespace detail

// Direct sum of cyclic groups of the given orders plus a free part, regrouped
// into invariant-factor form by prime powers. Orders of absolute value <= 1
// contribute nothing.
inline FGAbelianGroup canonicalize(const std::vector<Int>& cyclic_orders, size_t rank) {
    auto exps = detail::factor_exponents(cyclic_orders);
    size_t m = 0;
    for (auto& [p, es] : exps) {
        std::sort(es.begin(), es.end(), std::greater<unsigned>());
        m = std::max(m, es.size());
    }
    std::vector<Int> factors(m, Int(1));
    // factors[m-1] receives every prime's largest exponent, and so on down
    for (const auto& [p, es] : exps)
        for (size_t j = 0; j < es.size(); ++j) factors[m - 1 - j] *= int_pow(p, es[j]);
    FGAbelianGroup g;
    g.free_rank = rank;
    for (auto& f : factors)
        if (f >= 2) g.invariant_factors.push_back(f);
    return g;
}

} // namespace qlambda
