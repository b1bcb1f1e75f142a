/*
 * Copyright 2026 The polygam Authors.
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

#ifndef POLYGAM_ERRORS_H_
#define POLYGAM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace polygam {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user configuration (hyper-parameters, constraints, run config).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (CSV content, feature mismatch).
class DataError : public Error {
 public:
  using Error::Error;
};

// Model file that cannot be read back (version, schema, numbers).
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

// Training produced a non-finite quantity.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace polygam

#endif  // POLYGAM_ERRORS_H_
