#pragma once

#include <stdexcept>
#include <string>

namespace scanlab {

/// Input outside the mathematical domain of an operation (empty cluster, bad radius, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A requested object is too large to build (node count overflow, enumeration guard).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Invalid or inconsistent configuration. `key()` names the offending setting when known.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  explicit ConfigError(const std::string& what) : ConfigError(std::string{}, what) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A distribution parameter left its admissible range (e.g. a Bernoulli success probability of 1).
class ParameterRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Two control points of a curve violate the Hoelder bound |g(x)-g(y)| <= kappa |x-y|^alpha.
class HolderViolation : public DomainError {
 public:
  HolderViolation(std::size_t first, std::size_t second, const std::string& what)
      : DomainError(what), first_(first), second_(second) {}

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

 private:
  std::size_t first_;
  std::size_t second_;
};

}  // namespace scanlab
