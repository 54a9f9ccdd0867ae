#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace anyon {

enum class ErrorKind {
  Config,             // schema or range violation in user input
  Domain,             // argument outside the mathematical domain of an operation
  Singular,           // evaluation at a kernel singularity
  GridMismatch,       // operands live on different grids
  NonFinite,          // NaN/Inf encountered in a field
  BlowUp,             // time integration produced non-finite values
  BoundaryViolation,  // mass reached the outer frame of the box
  Budget,             // tensor dimension above the configured budget
  KrylovBreakdown,    // exponential propagator could not meet its tolerance
  Invariant,          // a monitored invariant was violated
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Emits a warning. Warnings go to stderr unless a WarningCapture is active on
// the calling thread, in which case they are recorded there instead.
void warn(std::string message);

class WarningCapture {
 public:
  WarningCapture();
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool contains(std::string_view needle) const;

 private:
  friend void warn(std::string message);
  std::vector<std::string> messages_;
  WarningCapture* previous_;
};

// Silences stderr output of warnings process-wide (captured warnings are
// still recorded).
void set_quiet(bool quiet);

}  // namespace anyon
