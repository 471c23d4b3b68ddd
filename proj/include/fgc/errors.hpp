//
// Project fgcompress - Copyright 2026 The fgcompress Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FGC_ERRORS_HPP_
#define FGC_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fgc {

class Error: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (bad SMILES, bad tables, inconsistent state).
class DataError: public Error {
public:
  using Error::Error;
};

class LexError: public DataError {
public:
  LexError(std::string message, std::size_t offset)
      : DataError(message + " at byte " + std::to_string(offset)),
        offset_(offset) { }

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class UnknownMetaSymbol: public DataError {
public:
  using DataError::DataError;
};

class UnknownSymbol: public DataError {
public:
  using DataError::DataError;
};

class DomainError: public Error {
public:
  using Error::Error;
};

class DegenerateVocabulary: public DomainError {
public:
  using DomainError::DomainError;
};

class StateMismatch: public Error {
public:
  using Error::Error;
};

class EmptyCorpus: public DataError {
public:
  using DataError::DataError;
};

class TooFewRows: public DataError {
public:
  using DataError::DataError;
};

class SingularSystem: public DataError {
public:
  using DataError::DataError;
};

class TooFewPairs: public DataError {
public:
  using DataError::DataError;
};

class IoError: public DataError {
public:
  using DataError::DataError;
};

class AllLinesInvalid: public DataError {
public:
  using DataError::DataError;
};

class VersionMismatch: public DataError {
public:
  using DataError::DataError;
};

class ChecksumMismatch: public DataError {
public:
  using DataError::DataError;
};

}  // namespace fgc

#endif  // FGC_ERRORS_HPP_
