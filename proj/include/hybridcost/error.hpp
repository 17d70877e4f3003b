#pragma once

#include <stdexcept>
#include <string>

namespace hybridcost {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Partition count, pid numbering or runtime table does not match what an
// operation needs.
class ProfileShapeError : public Error {
 public:
  using Error::Error;
};

// A VM config was passed where a serverless one is required, or vice versa.
class KindError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// No candidate setup meets the SLO.
class InfeasibleError : public Error {
 public:
  InfeasibleError() : Error("No configuration meets SLO.") {}
  using Error::Error;
};

// Input file could not be read or parsed; message carries file/line context.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hybridcost
