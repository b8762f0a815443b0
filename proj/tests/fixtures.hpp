#pragma once

// Shared link fixtures for the test suites.

#include <random>
#include <string>
#include <vector>

#include "cft3m/link_model.hpp"
#include "oracles.hpp"

namespace cft3m::fixtures {

inline std::vector<std::string> names(std::vector<std::string> v) { return v; }

/// Two-component link with lk = 1.
inline LinkContext hopf() {
    return LinkContext({"K1", "K2"}, IntMatrix::from_rows({{0, 1}, {1, 0}}));
}

/// Hopf link plus an external probe knot with lk(K3,K1)=1, lk(K3,K2)=0.
inline LinkContext hopf_with_probe() {
    return LinkContext({"K1", "K2", "K3"},
                       IntMatrix::from_rows(
                           {{0, 1, 1}, {1, 0, 0}, {1, 0, 0}}));
}

/// Standard (2,2)-covering of the hopf link inside the probe truncation.
inline CoveringSpec hopf22(const LinkContext& ctx) {
    return standard_covering(ctx, names({"K1", "K2"}),
                             std::vector<Int>{2, 2});
}

/// Symmetric zero-diagonal linking matrix with |lk| <= max_lk.
inline LinkContext random_context(std::mt19937_64& eng, std::size_t s,
                                  long long max_lk) {
    IntMatrix m(s, s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j) {
            const Int v = testing::rand_range(eng, -max_lk, max_lk);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    std::vector<std::string> nm;
    for (std::size_t i = 0; i < s; ++i) nm.push_back("K" + std::to_string(i + 1));
    return LinkContext(std::move(nm), std::move(m));
}

} // namespace cft3m::fixtures
