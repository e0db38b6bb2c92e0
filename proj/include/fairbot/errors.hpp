/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace fairbot {

/// Base of every error raised by the library. The CLI maps these onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FAIRBOT_DEFINE_ERROR(Name)            \
  class Name : public Error {                 \
   public:                                    \
    explicit Name(const std::string & what)   \
        : Error(#Name ": " + what) {}         \
  };

FAIRBOT_DEFINE_ERROR(NotPositiveDefinite)
FAIRBOT_DEFINE_ERROR(DimensionMismatch)
FAIRBOT_DEFINE_ERROR(TooFewMembers)
FAIRBOT_DEFINE_ERROR(DomainError)
FAIRBOT_DEFINE_ERROR(ConvergenceFailure)
FAIRBOT_DEFINE_ERROR(EmptySample)
FAIRBOT_DEFINE_ERROR(ParseError)
FAIRBOT_DEFINE_ERROR(SchemaError)
FAIRBOT_DEFINE_ERROR(NonFiniteValue)
FAIRBOT_DEFINE_ERROR(SubsampleTooLarge)
FAIRBOT_DEFINE_ERROR(MissingObservation)

#undef FAIRBOT_DEFINE_ERROR

}  // namespace fairbot
