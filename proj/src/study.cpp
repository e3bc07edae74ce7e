#include "repmeta/study.hpp"

#include "repmeta/errors.hpp"

#include <cmath>
#include <unordered_set>

namespace repmeta {

StudySet::StudySet(std::vector<Study> studies, Measure measure)
    : studies_(std::move(studies))
    , measure_(measure)
{
    std::unordered_set<std::string> seen;
    effects_.reserve(studies_.size());
    ses_.reserve(studies_.size());
    for (const Study& s : studies_) {
        if (!std::isfinite(s.effect) || !std::isfinite(s.se) || !(s.se > 0.0)) {
            throw InputError("invalid study '" + s.label + "': effect must be finite and se positive");
        }
        if (!seen.insert(s.label).second) {
            throw InputError("duplicate study label '" + s.label + "'");
        }
        effects_.push_back(s.effect);
        ses_.push_back(s.se);
    }
}

std::vector<std::string> StudySet::labels(std::span<const std::size_t> indices) const
{
    std::vector<std::string> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) out.push_back(studies_.at(i).label);
    return out;
}

} // namespace repmeta
