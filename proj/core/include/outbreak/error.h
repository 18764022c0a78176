// Copyright 2026 The Outbreak Wiki Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OUTBREAK_ERROR_H_
#define OUTBREAK_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace outbreak {

// Base class for every error raised by the library. Errors derived from
// this class describe bad input data or an unreachable resource; the CLI
// maps them to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Network failure after all retries. Carries the last continuation token so
// an interrupted fetch can be resumed by hand.
class TransportError : public Error {
 public:
  TransportError(const std::string &message, std::string continuation)
      : Error(message + " (last continuation: " +
              (continuation.empty() ? "<none>" : continuation) + ")"),
        continuation_(std::move(continuation)) {}
  const std::string &continuation() const { return continuation_; }

 private:
  std::string continuation_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Malformed input (API payload, TSV, CSV, model file). When the location is
// known it is part of the message: a line number or an offending fragment.
class ParseError : public Error {
 public:
  using Error::Error;
};

class LoadError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Broken IOB structure or mismatched gold/predicted shapes.
class StructureError : public Error {
 public:
  StructureError(const std::string &message, std::size_t position)
      : Error(message), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class TrainingError : public Error {
 public:
  TrainingError(const std::string &message, int iteration)
      : Error(message + " at iteration " + std::to_string(iteration)),
        message_(message),
        iteration_(iteration) {}
  // Message without the iteration suffix.
  const std::string &message() const { return message_; }
  int iteration() const { return iteration_; }

 private:
  std::string message_;
  int iteration_;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace outbreak

#endif  // OUTBREAK_ERROR_H_
