#pragma once

#include <stdexcept>
#include <string>

namespace gsf {

/// Mismatched vector lengths or an invalid instance shape.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation required state the object does not have (e.g. unevaluated solution).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Invalid configuration: unknown preset, broken size vector, bad parameter range.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Interaction requested from a row that is all zeros.
class DisabledInteractionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Restricted-mating construction produced a point with no neighbor.
class IsolationError : public std::invalid_argument {
public:
    IsolationError(std::size_t point, const std::string& what)
        : std::invalid_argument(what), point_(point) {}
    [[nodiscard]] std::size_t point() const noexcept { return point_; }

private:
    std::size_t point_;
};

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateReferenceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedDimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gsf
