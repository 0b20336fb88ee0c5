#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bimlog {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was applied to the wrong geometry variant.
class KindError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside its documented range.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input geometry collapses to something lower-dimensional.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// A loop that must be planar is not, within tolerance.
class PlanarityError : public Error {
public:
    using Error::Error;
};

/// A structural invariant does not hold; the message names the rule.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A reference points at an element that does not exist (or is dead).
class ReferenceError : public Error {
public:
    using Error::Error;
};

/// Text does not match the grammar. Carries the byte offset of the failure.
class FormatError : public Error {
public:
    FormatError(const std::string& message, std::size_t offset)
        : Error(message + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_ = 0;
};

/// A scenario step violates tag discipline or is infeasible.
class ScenarioError : public Error {
public:
    ScenarioError(const std::string& message, std::size_t step_index)
        : Error("step " + std::to_string(step_index) + ": " + message), step_index_(step_index) {}

    explicit ScenarioError(const std::string& message) : Error(message), step_index_(0) {}

    std::size_t step_index() const { return step_index_; }

private:
    std::size_t step_index_ = 0;
};

/// A stream or file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace bimlog
