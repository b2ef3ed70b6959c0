// SPDX-License-Identifier: Apache-2.0
//
// tbf-engine: triple-beam fingerprint engine for massive MIMO-OFDM localization
// Copyright (C) 2026 The tbf-engine authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace tbf {

// Root of every error thrown by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument value (negative variance, length mismatch, bad gamma ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Physical parameter outside its admissible range (cyclic prefix, Doppler grid, TB bins).
class RangeError : public Error {
public:
    using Error::Error;
};

// Tensor/matrix extents disagree.
class ShapeError : public Error {
public:
    using Error::Error;
};

// A materialization request exceeds its configured cap.
class SizeError : public Error {
public:
    using Error::Error;
};

// Zero-norm or otherwise degenerate input (zero fingerprint, coincident estimates).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

// JSON configuration or manifest does not match its schema; message carries the field path.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace tbf
