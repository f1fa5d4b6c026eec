// Copyright 2026 The rbarray Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RBARRAY_ERRORS_H_
#define RBARRAY_ERRORS_H_

#include <stdexcept>
#include <string>

namespace rbarray {

/// Argument outside an operation's domain (bad angle, probability, empty input, ...).
class DomainError : public std::invalid_argument {
   public:
    explicit DomainError(const std::string &what) : std::invalid_argument(what) {}
};

/// Internal tables disagree with each other. Signals a transcription bug, not bad input.
class IntegrityError : public std::logic_error {
   public:
    explicit IntegrityError(const std::string &what) : std::logic_error(what) {}
};

/// A configuration field failed validation. `field()` names the offending key path.
class ValidationError : public DomainError {
   public:
    ValidationError(std::string field, const std::string &what)
        : DomainError(field + ": " + what), field_(std::move(field)) {}
    const std::string &field() const { return field_; }

   private:
    std::string field_;
};

}  // namespace rbarray

#endif  // RBARRAY_ERRORS_H_
