#ifndef QDRG_ERRORS_HPP
#define QDRG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qdrg {

// Base for every failure raised by the library.  `anchor` names the identity
// or stage that failed so the CLI can print it next to the message.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, std::string anchor = {}) : std::runtime_error(what), anchor_(std::move(anchor)) {}
  const std::string& anchor() const noexcept { return anchor_; }

 private:
  std::string anchor_;
};

// Bad user input: malformed graph spec, invalid parameters, unknown vertex.
class UsageError : public Error {
 public:
  using Error::Error;
};

// A verified identity did not hold.
class VerificationError : public Error {
 public:
  VerificationError(const std::string& what, std::string anchor, double residual = 0.0)
      : Error(what, std::move(anchor)), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Resource guard tripped: dimension cap, retry exhaustion.
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdrg

#endif  // QDRG_ERRORS_HPP
