// Copyright 2026 The quorumlens Authors. Licensed under the Apache License,
// Version 2.0. See http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace quorumlens {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad files, schema violations, invariant violations.
class InputError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its domain (e.g. a Byzantine node where an
// honest one is required).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A configured resource limit was hit. Operations whose result type carries a
// Verdict report this in-band instead of throwing.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

enum class Verdict { holds, violated, budget_exceeded };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::budget_exceeded: return "budget_exceeded";
  }
  return "?";
}

}  // namespace quorumlens
