#pragma once

#include <stdexcept>
#include <string>

namespace incfl {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: dimension mismatches, empty inputs, out-of-range indices.
class InvalidInputError : public Error {
public:
  using Error::Error;
};

// Wire-format violations detected while decoding a message buffer.
class MalformedMessageError : public Error {
public:
  using Error::Error;
};

// A routing instance admits no feasible association.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

// An exact method was asked to handle an instance beyond its guard limit.
class SizeGuardError : public Error {
public:
  using Error::Error;
};

// Configuration file / scenario parameter problems.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace incfl
