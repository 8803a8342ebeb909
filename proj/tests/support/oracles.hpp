#pragma once

// Test-only reference computations and random generators. Nothing here calls
// into the code paths it is used to check.

#include <cstdint>
#include <algorithm>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "lct/fano_certifier.hpp"
#include "lct/lct_core.hpp"

namespace lct::testing {

/// Smallest (a+1)/b over qualifying records as an unreduced (num, den) pair,
/// compared by cross-multiplication. nullopt means +inf.
inline std::optional<std::pair<unsigned __int128, unsigned __int128>> naive_resolution_min(
    const ResolutionData& data)
{
    std::optional<std::pair<unsigned __int128, unsigned __int128>> best;
    for (const auto& d : data.divisors) {
        if (!d.meets_k || d.b == 0)
            continue;
        const unsigned __int128 num = static_cast<unsigned __int128>(d.a) + 1;
        const unsigned __int128 den = d.b;
        if (!best || num * best->second < best->first * den)
            best = std::make_pair(num, den);
    }
    return best;
}

inline ResolutionData random_resolution(std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> count(1, 8);
    std::uniform_int_distribution<std::uint64_t> value(0, 40);
    std::bernoulli_distribution meets(0.7);
    ResolutionData data;
    const std::size_t n = count(rng);
    while (data.divisors.size() < n) {
        DivisorRecord d{value(rng), value(rng), meets(rng)};
        if (d.a == 0 && d.b == 0)
            continue;
        data.divisors.push_back(d);
    }
    return data;
}

inline SpecPtr random_monomial(std::mt19937_64& rng, std::size_t max_vars = 4, std::uint64_t max_exp = 12)
{
    std::uniform_int_distribution<std::size_t> vars(1, max_vars);
    std::uniform_int_distribution<std::uint64_t> exp(0, max_exp);
    std::vector<std::uint64_t> e(vars(rng));
    do {
        for (auto& x : e)
            x = exp(rng);
    } while (std::all_of(e.begin(), e.end(), [](std::uint64_t x) { return x == 0; }));
    return make_monomial(e);
}

inline std::vector<std::uint64_t> random_orders(std::mt19937_64& rng, std::size_t count,
                                                std::uint64_t max_order = 20)
{
    std::uniform_int_distribution<std::uint64_t> order(1, max_order);
    std::vector<std::uint64_t> m(count);
    for (auto& x : m)
        x = order(rng);
    return m;
}

inline SpecPtr random_spec(std::mt19937_64& rng, int depth = 2)
{
    std::uniform_int_distribution<int> kind(0, depth > 0 ? 3 : 1);
    std::uniform_int_distribution<std::size_t> vars(1, 3);
    switch (kind(rng)) {
    case 0:
        return random_monomial(rng, 3);
    case 1:
        return make_diagonal(random_orders(rng, vars(rng)));
    case 2:
        return make_direct_sum(random_spec(rng, depth - 1), random_spec(rng, depth - 1));
    default: {
        // separated sums need single functions on each side
        auto side = [&] { return std::bernoulli_distribution(0.5)(rng) ? random_monomial(rng, 2) : make_diagonal({std::uniform_int_distribution<std::uint64_t>(1, 9)(rng)}); };
        return make_separated_sum(side(), side());
    }
    }
}

/// Exhaustive search over the exponent box [0, d/a_i]^4.
inline std::vector<fano::Exponents> brute_force_monomials(const fano::WeightSystem& w)
{
    std::vector<fano::Exponents> out;
    const auto& a = w.weights();
    const auto d = w.degree();
    for (std::int64_t e0 = 0; e0 <= d / a[0]; ++e0)
        for (std::int64_t e1 = 0; e1 <= d / a[1]; ++e1)
            for (std::int64_t e2 = 0; e2 <= d / a[2]; ++e2)
                for (std::int64_t e3 = 0; e3 <= d / a[3]; ++e3)
                    if (e0 * a[0] + e1 * a[1] + e2 * a[2] + e3 * a[3] == d)
                        out.push_back({static_cast<std::uint32_t>(e0), static_cast<std::uint32_t>(e1),
                                       static_cast<std::uint32_t>(e2), static_cast<std::uint32_t>(e3)});
    return out;
}

}  // namespace lct::testing
