#pragma once

#include <stdexcept>
#include <string>

namespace rpd {

// Input text that does not follow its schema (config JSON, CSV, wire lines).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Well-formed input that breaks a domain rule (min >= max, T > L, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace rpd
