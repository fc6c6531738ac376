/*
   Copyright 2026 The hbtsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace hbt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidGeometry : public Error {
public:
    using Error::Error;
};

/// Inputs outside the domain of a formula (non-classical moments, |gamma| > 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A correlation could not be normalized because a mean intensity is zero.
class NormalizationError : public Error {
public:
    using Error::Error;
};

class UnpolarizedInput : public Error {
public:
    using Error::Error;
};

class UndefinedVisibility : public Error {
public:
    using Error::Error;
};

/// Malformed frame or sidecar file; the message names the file and byte offset.
class ParseError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace hbt
