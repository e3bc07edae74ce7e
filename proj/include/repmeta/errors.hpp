#ifndef REPMETA_ERRORS_HPP
#define REPMETA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace repmeta {

// Bad user data: malformed CSV, non-finite estimates, duplicate labels.
class InputError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Inputs are well formed but the requested analysis is not defined for them
// (too few studies, u out of range, non-significant meta-analysis, ...).
class PreconditionError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// The number of subsets to enumerate exceeds the configured cap.
class EnumerationCapError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace repmeta

#endif // REPMETA_ERRORS_HPP
