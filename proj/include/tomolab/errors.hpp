#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace tomolab {

// Bad argument values: missing axes, out-of-range orders, non-SPD covariances.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A documented precondition was violated by the caller.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Integration blew up or produced non-finite values.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, std::optional<long> step = std::nullopt)
      : std::runtime_error(what), step_(step) {}

  std::optional<long> step() const { return step_; }

 private:
  std::optional<long> step_;
};

}  // namespace tomolab
