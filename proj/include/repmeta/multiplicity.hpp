#ifndef REPMETA_MULTIPLICITY_HPP
#define REPMETA_MULTIPLICITY_HPP

#include <string>
#include <string_view>
#include <vector>

namespace repmeta {

struct Endpoint
{
    std::string label;
    double r_value = 0.0;
};

/// r-values of several primary endpoints. Throws InputError when empty or
/// when an r-value lies outside [0, 1].
class EndpointFamily
{
public:
    explicit EndpointFamily(std::vector<Endpoint> entries);

    /// Labels "1", "2", ... in input order.
    static EndpointFamily from_values(const std::vector<double>& r_values);

    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<Endpoint>& entries() const noexcept { return entries_; }

private:
    std::vector<Endpoint> entries_;
};

enum class AdjustMethod { bonferroni, bh };

std::string_view to_string(AdjustMethod method) noexcept;
AdjustMethod parse_adjust_method(std::string_view name);

/// min(1, M * r_i), input order.
std::vector<double> bonferroni_adjust(const EndpointFamily& family);

/// Benjamini-Hochberg: adjusted_(j) = min_{i >= j} M r_(i) / i on the sorted
/// list (stable for ties), capped at 1, returned in input order.
std::vector<double> bh_adjust(const EndpointFamily& family);

std::vector<double> adjust(const EndpointFamily& family, AdjustMethod method);

/// Labels whose adjusted value is <= alpha, in input order.
std::vector<std::string> declare(const EndpointFamily& family, const std::vector<double>& adjusted, double alpha);

} // namespace repmeta

#endif // REPMETA_MULTIPLICITY_HPP
