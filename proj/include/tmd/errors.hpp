#pragma once

#include <stdexcept>
#include <string>

namespace tmd {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Per-mode tail mass beyond the cutoff is too large for the requested amplitudes.
class TruncationError : public Error {
public:
    using Error::Error;
};

// A Gauss-type factor diverged. The evolution is still regular; only the chart broke.
class ChartSingularity : public Error {
public:
    ChartSingularity(const std::string& what, double time) : Error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class ConditionViolated : public Error {
public:
    using Error::Error;
};

class SeriesDivergence : public Error {
public:
    using Error::Error;
};

class StepUnderflow : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace tmd
