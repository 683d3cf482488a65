#pragma once

#include <stdexcept>
#include <string>

namespace symdyn {

// Malformed or out-of-contract input (bad file, unknown symbol, length
// mismatch). CLI maps this to exit code 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical precondition failed (sequence not in the required set,
// bracket applied to mismatched sequences, non-hyperbolic matrix, ...).
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Work would exceed the configured resource budget.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace symdyn
