#include "doctest.h"

#include "repmeta/subsets.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

using namespace repmeta;

TEST_CASE("lexicographic enumeration")
{
    const auto subsets = all_subsets(3, 2);
    const std::vector<std::vector<std::size_t>> expected{{0, 1}, {0, 2}, {1, 2}};
    CHECK(subsets == expected);
    CHECK(all_subsets(5, 4).size() == 5);
    CHECK(all_subsets(4, 4).size() == 1);
    CHECK(all_subsets(4, 1).size() == 4);
}

TEST_CASE("counts match binomial coefficients and subsets are distinct and sorted")
{
    CHECK(binomial(11, 5) == 462);
    for (std::size_t n = 1; n <= 12; ++n) {
        for (std::size_t k = 1; k <= n; ++k) {
            const auto subsets = all_subsets(n, k);
            CHECK(subsets.size() == binomial(n, k));
            CHECK(std::is_sorted(subsets.begin(), subsets.end()));
            std::set<std::vector<std::size_t>> unique(subsets.begin(), subsets.end());
            CHECK(unique.size() == subsets.size());
            for (const auto& s : subsets) {
                CHECK(s.size() == k);
                CHECK(std::adjacent_find(s.begin(), s.end(), std::greater_equal<>()) == s.end());
                CHECK(s.back() < n);
            }
        }
    }
}

TEST_CASE("binomial saturates instead of overflowing")
{
    CHECK(binomial(5, 7) == 0);
    CHECK(binomial(60, 30) == 118264581564861424ULL);
    CHECK(binomial(200, 100) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("invalid subset sizes")
{
    CHECK_THROWS_AS(SubsetEnumerator(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(SubsetEnumerator(3, 0), std::invalid_argument);
}
