/*
 * Copyright 2026 The A3 Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef A3_ERROR_H_
#define A3_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace a3 {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape disagreement between two operands. `where` names the operation or
// layer; expected/actual are rendered as "rows x cols" or plain counts.
class DimensionError : public Error {
 public:
  DimensionError(const std::string& where, const std::string& expected,
                 const std::string& actual)
      : Error(where + ": expected " + expected + ", got " + actual),
        where_(where),
        expected_(expected),
        actual_(actual) {}

  const std::string& where() const { return where_; }
  const std::string& expected() const { return expected_; }
  const std::string& actual() const { return actual_; }

 private:
  std::string where_;
  std::string expected_;
  std::string actual_;
};

// An operation was invoked on an object that is not ready for it
// (unfitted forest, untrained VAE, backprop without a forward pass).
class StateError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated input file. `offset` is the byte (binary formats)
// or line number (text formats) where parsing failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& path, std::size_t offset,
              const std::string& what)
      : Error(path + " @" + std::to_string(offset) + ": " + what),
        path_(path),
        offset_(offset) {}

  const std::string& path() const { return path_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string path_;
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace a3

#endif  // A3_ERROR_H_
