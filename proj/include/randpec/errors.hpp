// Copyright 2026 The randpec Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace randpec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
   public:
    using Error::Error;
};

class InvalidLocality : public Error {
   public:
    using Error::Error;
};

/// Operand shapes do not line up (basis size vs Kossakowski order, etc).
class ShapeError : public Error {
   public:
    using Error::Error;
};

/// An input violates a documented precondition (non-unitary U, bad spec).
class ValidationError : public Error {
   public:
    using Error::Error;
};

/// exp(tA) cannot be formed: non-finite input or the required squaring count overflows.
class ScalingFailure : public Error {
   public:
    using Error::Error;
};

class NonInvertibleChannel : public Error {
   public:
    NonInvertibleChannel(const std::string &what, double condition_estimate)
        : Error(what), condition_estimate_(condition_estimate) {}
    double condition_estimate() const noexcept { return condition_estimate_; }

   private:
    double condition_estimate_;
};

class EigensolverError : public Error {
   public:
    using Error::Error;
};

class BinningError : public Error {
   public:
    using Error::Error;
};

class DegenerateInput : public Error {
   public:
    using Error::Error;
};

}  // namespace randpec
