#pragma once

#include <stdexcept>
#include <string>

namespace sinrcast {

// Every failure the library reports derives from Error so callers can catch
// one type; the subclasses name the contract that was broken.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Duplicate positions or IDs, bad ID domain.
class InvalidNetwork : public Error {
 public:
  using Error::Error;
};

// A protocol's input precondition does not hold (e.g. granularity bound).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A node program broke the execution model (asleep transmitter, two leaders
// handed to LeadIncrease in one box, ...).
class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

class UnsupportedParameters : public Error {
 public:
  using Error::Error;
};

// Receiver listed among the transmitters of the same round.
class UndefinedReceiver : public Error {
 public:
  using Error::Error;
};

// Communication graph not connected at the radius the protocol relies on.
class InadmissibleNetwork : public Error {
 public:
  using Error::Error;
};

class GenerationFailure : public Error {
 public:
  using Error::Error;
};

// Exhaustive selector verification would not finish in reasonable time.
class RefuseToEnumerate : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace sinrcast
