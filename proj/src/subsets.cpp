#include "repmeta/subsets.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace repmeta {

std::uint64_t binomial(std::size_t n, std::size_t k) noexcept
{
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i is exact at every step; divide first via gcd
        // to delay overflow.
        std::uint64_t num = n - k + i;
        std::uint64_t den = i;
        const std::uint64_t g = std::gcd(result, den);
        result /= g;
        den /= g;
        num /= den;
        if (result > std::numeric_limits<std::uint64_t>::max() / num) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        result *= num;
    }
    return result;
}

SubsetEnumerator::SubsetEnumerator(std::size_t n, std::size_t k)
    : n_(n)
{
    if (k == 0 || k > n) throw std::invalid_argument("subset size must satisfy 0 < k <= n");
    indices_.resize(k);
    std::iota(indices_.begin(), indices_.end(), std::size_t{0});
}

bool SubsetEnumerator::next() noexcept
{
    const std::size_t k = indices_.size();
    std::size_t i = k;
    while (i > 0) {
        --i;
        if (indices_[i] < n_ - k + i) {
            ++indices_[i];
            for (std::size_t j = i + 1; j < k; ++j) indices_[j] = indices_[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<std::vector<std::size_t>> all_subsets(std::size_t n, std::size_t k)
{
    std::vector<std::vector<std::size_t>> out;
    SubsetEnumerator e(n, k);
    do {
        out.push_back(e.current());
    } while (e.next());
    return out;
}

} // namespace repmeta
