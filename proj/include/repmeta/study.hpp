#ifndef REPMETA_STUDY_HPP
#define REPMETA_STUDY_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace repmeta {

/// Scale the estimates were originally reported on. Ratio measures are held
/// on the log scale internally, so the null value is always 0.
enum class Measure { ratio, difference };

/// One study's estimate on the additive analysis scale.
struct Study
{
    std::string label;
    double effect = 0.0;
    double se = 1.0;
};

/// An ordered, validated collection of studies with unique labels.
class StudySet
{
public:
    StudySet() = default;

    /// Throws InputError on an invalid study or duplicate label.
    explicit StudySet(std::vector<Study> studies, Measure measure = Measure::difference);

    std::size_t size() const noexcept { return studies_.size(); }
    bool empty() const noexcept { return studies_.empty(); }
    Measure measure() const noexcept { return measure_; }

    const Study& operator[](std::size_t i) const { return studies_[i]; }
    const std::vector<Study>& studies() const noexcept { return studies_; }

    std::span<const double> effects() const noexcept { return effects_; }
    std::span<const double> ses() const noexcept { return ses_; }

    /// Labels of the given indices, in index order.
    std::vector<std::string> labels(std::span<const std::size_t> indices) const;

private:
    std::vector<Study> studies_;
    std::vector<double> effects_;
    std::vector<double> ses_;
    Measure measure_ = Measure::difference;
};

} // namespace repmeta

#endif // REPMETA_STUDY_HPP
