#pragma once

#include <stdexcept>
#include <string>

namespace kext {

// All recoverable failures are typed exceptions so callers (and tests) can
// distinguish them. Non-halting machine runs are *data*, not errors.

struct MalformedPair : std::runtime_error {
  explicit MalformedPair(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientBits : std::runtime_error {
  explicit InsufficientBits(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetTooLarge : std::runtime_error {
  explicit BudgetTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct TooLargeForExhaustive : std::runtime_error {
  explicit TooLargeForExhaustive(const std::string& what) : std::runtime_error(what) {}
};

struct TooLargeForExact : std::runtime_error {
  explicit TooLargeForExact(const std::string& what) : std::runtime_error(what) {}
};

struct ExponentOutOfRange : std::runtime_error {
  explicit ExponentOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct NotADistribution : std::runtime_error {
  explicit NotADistribution(const std::string& what) : std::runtime_error(what) {}
};

struct DomainMismatch : std::runtime_error {
  explicit DomainMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NotPrime : std::runtime_error {
  explicit NotPrime(const std::string& what) : std::runtime_error(what) {}
};

struct DegreeTooLarge : std::runtime_error {
  explicit DegreeTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct DesignInfeasible : std::runtime_error {
  explicit DesignInfeasible(const std::string& what) : std::runtime_error(what) {}
};

struct IndexOutOfRange : std::runtime_error {
  explicit IndexOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct MissingProfile : std::runtime_error {
  explicit MissingProfile(const std::string& what) : std::runtime_error(what) {}
};

struct NotAMember : std::runtime_error {
  explicit NotAMember(const std::string& what) : std::runtime_error(what) {}
};

struct LevelOutOfRange : std::runtime_error {
  explicit LevelOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct OrdinalOutOfRange : std::runtime_error {
  explicit OrdinalOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct InvariantViolation : std::runtime_error {
  explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kext
