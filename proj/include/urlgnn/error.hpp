// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace urlgnn {

enum class ErrorKind {
  EmptyUrl,
  EmptyGraph,
  ShapeMismatch,
  NotScalarLoss,
  FileNotFound,
  BadHeader,
  UnknownLabel,
  EmptyClass,
  TooFewSamples,
  BadTarget,
  LengthMismatch,
  DegenerateLabels,
  IncompatibleCheckpoint,
  BadConfig,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyUrl: return "EmptyUrl";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotScalarLoss: return "NotScalarLoss";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::BadHeader: return "BadHeader";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::EmptyClass: return "EmptyClass";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::BadTarget: return "BadTarget";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DegenerateLabels: return "DegenerateLabels";
    case ErrorKind::IncompatibleCheckpoint: return "IncompatibleCheckpoint";
    case ErrorKind::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace urlgnn
