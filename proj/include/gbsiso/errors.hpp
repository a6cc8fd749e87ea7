// Copyright 2026 The gbsiso Authors
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

namespace gbsiso {

/// Malformed graph6 or edge-list input.
class ParseError : public std::runtime_error {
   public:
    ParseError(const std::string &what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    explicit ParseError(const std::string &what) : std::runtime_error(what), offset_(0) {}

    std::size_t offset() const { return offset_; }

   private:
    std::size_t offset_;
};

/// Eigensolver failure, non-real moments, and similar floating point breakdowns.
class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A graph cannot be mapped onto sampler parameters (zero matrix, spectral radius >= 1, ...).
class EncodingError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An exponential-cost routine was asked to run beyond its size guard.
class GuardError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fock-space oracle could not resolve the state at the requested cutoff.
class OracleInconclusive : public std::runtime_error {
   public:
    OracleInconclusive(const std::string &what, double tail) : std::runtime_error(what), tail_(tail) {}
    double tail_norm() const { return tail_; }

   private:
    double tail_;
};

}  // namespace gbsiso
