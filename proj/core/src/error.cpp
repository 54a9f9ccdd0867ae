#include "anyon/error.hpp"

#include <atomic>
#include <iostream>

namespace anyon {

namespace {
thread_local WarningCapture* active_capture = nullptr;
std::atomic<bool> quiet_flag{false};
}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::GridMismatch: return "grid-mismatch";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::BlowUp: return "blow-up";
    case ErrorKind::BoundaryViolation: return "boundary-violation";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::KrylovBreakdown: return "krylov-breakdown";
    case ErrorKind::Invariant: return "invariant";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

void warn(std::string message) {
  if (active_capture != nullptr) {
    active_capture->messages_.push_back(std::move(message));
    return;
  }
  if (!quiet_flag.load(std::memory_order_relaxed)) {
    std::cerr << "[warn] " << message << '\n';
  }
}

WarningCapture::WarningCapture() : previous_(active_capture) { active_capture = this; }

WarningCapture::~WarningCapture() {
  active_capture = previous_;
  // Forward to an enclosing capture so nested scopes do not swallow messages.
  if (previous_ != nullptr) {
    for (auto& m : messages_) previous_->messages_.push_back(m);
  }
}

bool WarningCapture::contains(std::string_view needle) const {
  for (const auto& m : messages_) {
    if (m.find(needle) != std::string::npos) return true;
  }
  return false;
}

void set_quiet(bool quiet) { quiet_flag.store(quiet, std::memory_order_relaxed); }

}  // namespace anyon
