#pragma once

#include <stdexcept>
#include <string>

namespace xchain {

// Malformed input: unknown ids, bad configuration, parse failures.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Well-formed input that violates a domain rule (disconnected topology,
// invalid block, refused transform).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BlockRejected : public DomainError {
public:
    using DomainError::DomainError;
};

class TransformRefused : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace xchain
