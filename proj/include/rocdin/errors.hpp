#pragma once

#include <stdexcept>
#include <string>

namespace rocdin {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument or parameter (bad distribution parameters, p outside [0,1], ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Operation applied to a curve kind that does not support it.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(what) {}
};

/// Integrand returned NaN/inf strictly inside the working interval.
class NonFiniteIntegrandError : public Error {
public:
    NonFiniteIntegrandError(const std::string& what, double where)
        : Error(what), location(where) {}
    double location;
};

/// Two independent computation routes for the same quantity disagree beyond
/// what their combined error estimates allow.
class DisagreementError : public Error {
public:
    explicit DisagreementError(const std::string& what) : Error(what) {}
};

/// Likelihood ratio with a vanishing denominator density.
class ZeroDenominatorError : public Error {
public:
    explicit ZeroDenominatorError(const std::string& what) : Error(what) {}
};

/// Requested metric is not defined for this input (e.g. dinegentropy of an
/// empirical curve with no densities).
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& what) : Error(what) {}
};

/// CSV ingestion errors carry the 1-based line number of the offending row.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line_no) : Error(what), line(line_no) {}
    int line;
};

class MalformedRowError : public ParseError {
public:
    MalformedRowError(const std::string& what, int line_no) : ParseError(what, line_no) {}
};

class UnknownLabelError : public ParseError {
public:
    UnknownLabelError(const std::string& what, int line_no) : ParseError(what, line_no) {}
};

/// Dataset has no rows for one of the two classes.
class EmptyClassError : public Error {
public:
    explicit EmptyClassError(const std::string& what) : Error(what) {}
};

/// Kernel density estimation needs a minimum sample and nonzero spread.
class TooFewPointsError : public Error {
public:
    explicit TooFewPointsError(const std::string& what) : Error(what) {}
};

} // namespace rocdin
