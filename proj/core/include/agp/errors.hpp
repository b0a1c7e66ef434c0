#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>

namespace agp {

/// A model, policy or grid parameter violates its domain. `field()` names the
/// offending parameter using the dotted config path where one exists.
class InvalidParameter : public std::invalid_argument {
 public:
  InvalidParameter(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// An infinite series could not be truncated safely within the index cap.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation exceeded one of its safety caps (repairs or purchases).
class SimulationCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wraps a failure raised inside one Monte Carlo replication; `cause()` holds
/// the original exception.
class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(std::size_t replication, const std::string& what,
                   std::exception_ptr cause = nullptr)
      : std::runtime_error("replication " + std::to_string(replication) + ": " + what),
        replication_(replication),
        cause_(std::move(cause)) {}

  std::size_t replication() const noexcept { return replication_; }
  std::exception_ptr cause() const noexcept { return cause_; }

 private:
  std::size_t replication_;
  std::exception_ptr cause_;
};

}  // namespace agp
