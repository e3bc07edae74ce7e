#ifndef REPMETA_SUBSETS_HPP
#define REPMETA_SUBSETS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace repmeta {

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k) noexcept;

/// Walks every size-k subset of {0, ..., n-1} in lexicographic order.
///
///     SubsetEnumerator e(5, 3);
///     do { use(e.current()); } while (e.next());
class SubsetEnumerator
{
public:
    /// Requires 0 < k <= n; throws std::invalid_argument otherwise.
    SubsetEnumerator(std::size_t n, std::size_t k);

    const std::vector<std::size_t>& current() const noexcept { return indices_; }

    /// Advance; false once the last subset has been visited.
    bool next() noexcept;

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return indices_.size(); }

private:
    std::size_t n_;
    std::vector<std::size_t> indices_;
};

/// Every size-k subset, materialized. Convenient for small n only.
std::vector<std::vector<std::size_t>> all_subsets(std::size_t n, std::size_t k);

} // namespace repmeta

#endif // REPMETA_SUBSETS_HPP
