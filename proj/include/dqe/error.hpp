#pragma once

#include <stdexcept>
#include <string>

namespace dqe {

// Base for all library errors. Subtypes map to distinct CLI outcomes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input files: CSV cells, schema sidecars, model documents.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Caller handed an id, path or argument that does not resolve.
class InputError : public Error {
 public:
  using Error::Error;
};

// Repository I/O failures, including a held writer lock.
class StorageError : public Error {
 public:
  using Error::Error;
};

// A declared metric has no measurement in the pool. Distinct from a
// failing verdict: the value is unknown, not out of range.
class MeasurementMissingError : public Error {
 public:
  using Error::Error;
};

}  // namespace dqe
