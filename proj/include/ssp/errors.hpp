#pragma once

#include <stdexcept>
#include <string>

namespace ssp {

// Precondition violations on indices, dimensions and parameters.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// More columns requested than measurements available (|Omega| > m).
class OverCompleteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A recovery method produced no support at all.
class EmptyEstimateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// s1 <= s2 in the epsilon1 threshold formula.
class DegenerateGapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input (signal, measurement, config files).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A file could not be opened for reading or writing.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ssp
