#include "repmeta/multiplicity.hpp"

#include "repmeta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace repmeta {

EndpointFamily::EndpointFamily(std::vector<Endpoint> entries)
    : entries_(std::move(entries))
{
    if (entries_.empty()) throw InputError("endpoint family is empty");
    for (const Endpoint& e : entries_) {
        if (!(e.r_value >= 0.0 && e.r_value <= 1.0)) {
            throw InputError("r-value for endpoint '" + e.label + "' must lie in [0, 1]");
        }
    }
}

EndpointFamily EndpointFamily::from_values(const std::vector<double>& r_values)
{
    std::vector<Endpoint> entries;
    entries.reserve(r_values.size());
    for (std::size_t i = 0; i < r_values.size(); ++i) entries.push_back({std::to_string(i + 1), r_values[i]});
    return EndpointFamily(std::move(entries));
}

std::string_view to_string(AdjustMethod method) noexcept
{
    return method == AdjustMethod::bh ? "bh" : "bonferroni";
}

AdjustMethod parse_adjust_method(std::string_view name)
{
    if (name == "bh") return AdjustMethod::bh;
    if (name == "bonferroni") return AdjustMethod::bonferroni;
    throw InputError("unknown adjustment method '" + std::string(name) + "' (expected bh or bonferroni)");
}

std::vector<double> bonferroni_adjust(const EndpointFamily& family)
{
    const double m = static_cast<double>(family.size());
    std::vector<double> out;
    out.reserve(family.size());
    for (const Endpoint& e : family.entries()) out.push_back(std::min(1.0, m * e.r_value));
    return out;
}

std::vector<double> bh_adjust(const EndpointFamily& family)
{
    const auto& entries = family.entries();
    const std::size_t m = entries.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return entries[a].r_value < entries[b].r_value; });

    std::vector<double> out(m);
    double running = 1.0;
    for (std::size_t rank = m; rank-- > 0;) {
        const std::size_t i = order[rank];
        // The top rank is exact; m * r / m can round below r.
        const double candidate = rank + 1 == m ? entries[i].r_value
                                               : static_cast<double>(m) * entries[i].r_value / static_cast<double>(rank + 1);
        running = std::min(running, candidate);
        out[i] = running;
    }
    return out;
}

std::vector<double> adjust(const EndpointFamily& family, AdjustMethod method)
{
    return method == AdjustMethod::bh ? bh_adjust(family) : bonferroni_adjust(family);
}

std::vector<std::string> declare(const EndpointFamily& family, const std::vector<double>& adjusted, double alpha)
{
    if (adjusted.size() != family.size()) throw InputError("adjusted values do not match the family size");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < adjusted.size(); ++i) {
        if (adjusted[i] <= alpha) out.push_back(family.entries()[i].label);
    }
    return out;
}

} // namespace repmeta
