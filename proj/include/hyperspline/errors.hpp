#pragma once

#include <stdexcept>
#include <string>

namespace hyperspline {

// Bad input: wrong model tag, schema violation, broken invariant in a
// loaded document. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical agreement or tolerance failure: canonicalization stuck near a
// boundary, residual blowup, oracle mismatch. Maps to CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hyperspline
