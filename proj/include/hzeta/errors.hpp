#pragma once

#include <stdexcept>
#include <string>

namespace hzeta {

enum class errc {
  pole_at_one,
  diverges_at_one,
  non_simple_root,
  overflow,
  precondition_violated,
  empty_window,
  unreachable,
  precision_exhausted,
  thin_class,
  boundary_too_close_to_zero,
  unsupported_alpha,
  invalid_argument,
};

inline const char* errc_name(errc e) {
  switch (e) {
    case errc::pole_at_one: return "PoleAtOne";
    case errc::diverges_at_one: return "DivergesAtOne";
    case errc::non_simple_root: return "NonSimpleRoot";
    case errc::overflow: return "Overflow";
    case errc::precondition_violated: return "PreconditionViolated";
    case errc::empty_window: return "EmptyWindow";
    case errc::unreachable: return "Unreachable";
    case errc::precision_exhausted: return "PrecisionExhausted";
    case errc::thin_class: return "ThinClass";
    case errc::boundary_too_close_to_zero: return "BoundaryTooCloseToZero";
    case errc::unsupported_alpha: return "UnsupportedAlpha";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

// Domain error carrying a machine-readable kind. The CLI maps these to exit
// status 2; invalid_argument is treated as a usage error (exit 1).
class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& what)
      : std::runtime_error(std::string(errc_name(kind)) + ": " + what), kind_(kind) {}

  errc kind() const noexcept { return kind_; }

 private:
  errc kind_;
};

}  // namespace hzeta
