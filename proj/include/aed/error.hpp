// Copyright 2026 The aedkit Authors.
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

#ifndef AED_ERROR_HPP_
#define AED_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace aed {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or method/task mismatch. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data. CLI exit code 3.
class DataError : public Error {
 public:
  using Error::Error;
};

// Structural problem inside one document of a corpus.
class ValidationError : public DataError {
 public:
  ValidationError(std::string doc_id, const std::string& what)
      : DataError("document '" + doc_id + "': " + what),
        doc_id_(std::move(doc_id)) {}

  const std::string& doc_id() const { return doc_id_; }

 private:
  std::string doc_id_;
};

}  // namespace aed

#endif  // AED_ERROR_HPP_
