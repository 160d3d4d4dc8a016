#pragma once

#include <stdexcept>
#include <string>

namespace justify {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed document: wrong shape, missing keys, wrong types.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Well-formed document whose content breaks a cross-reference or
// uniqueness rule.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// CSV header/row problems.
class FormatError : public Error {
 public:
  using Error::Error;
};

class CorruptIndexError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace justify
