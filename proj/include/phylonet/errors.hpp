#pragma once

#include <stdexcept>
#include <string>

namespace phylonet {

enum class ErrorKind {
  Disconnected,
  BadDegree,
  Loop,
  Improper,
  BadLabeling,
  SyntaxError,
  WouldDisconnect,
  WouldCreateLoop,
  WouldBeImproper,
  NotATriangle,
  NotAdjacent,
  InvalidMove,
  MovesCancel,
  NotApplicable,
  NotDisplayed,
  ConstraintViolated,
  CapExceeded,
  DisconnectedSpace,
  LabelMismatch,
  InvalidParameter,
  FixtureFailed,
  RewriteFailed,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::BadDegree: return "BadDegree";
    case ErrorKind::Loop: return "Loop";
    case ErrorKind::Improper: return "Improper";
    case ErrorKind::BadLabeling: return "BadLabeling";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::WouldDisconnect: return "WouldDisconnect";
    case ErrorKind::WouldCreateLoop: return "WouldCreateLoop";
    case ErrorKind::WouldBeImproper: return "WouldBeImproper";
    case ErrorKind::NotATriangle: return "NotATriangle";
    case ErrorKind::NotAdjacent: return "NotAdjacent";
    case ErrorKind::InvalidMove: return "InvalidMove";
    case ErrorKind::MovesCancel: return "MovesCancel";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::NotDisplayed: return "NotDisplayed";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::DisconnectedSpace: return "DisconnectedSpace";
    case ErrorKind::LabelMismatch: return "LabelMismatch";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::FixtureFailed: return "FixtureFailed";
    case ErrorKind::RewriteFailed: return "RewriteFailed";
  }
  return "Unknown";
}

// Every domain failure in the library is reported with this type; `kind()`
// identifies the violated condition and `witness()` the offending vertex or
// edge id when there is one (-1 otherwise).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, int witness = -1)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        witness_(witness) {}

  ErrorKind kind() const noexcept { return kind_; }
  int witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  int witness_;
};

}  // namespace phylonet
