// Copyright 2026 The INCE Authors
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

#ifndef INCE__ERRORS_HPP_
#define INCE__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ince
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  explicit Error(const std::string & what) : std::runtime_error(what) {}
  /// Short machine-readable category, e.g. "contract" or "numeric".
  virtual const char * kind() const noexcept { return "error"; }
};

/// A caller broke a documented precondition (bad shape, bad index, bad argument).
class ContractError : public Error
{
public:
  using Error::Error;
  const char * kind() const noexcept override { return "contract"; }
};

/// NaN/Inf or a failed factorization.
class NumericError : public Error
{
public:
  using Error::Error;
  const char * kind() const noexcept override { return "numeric"; }
};

class SchemaError : public Error
{
public:
  using Error::Error;
  const char * kind() const noexcept override { return "schema"; }
};

class ParseError : public Error
{
public:
  using Error::Error;
  const char * kind() const noexcept override { return "parse"; }
};

class IoError : public Error
{
public:
  using Error::Error;
  const char * kind() const noexcept override { return "io"; }
};

class CheckpointError : public Error
{
public:
  using Error::Error;
  const char * kind() const noexcept override { return "checkpoint"; }
};

class UnsupportedError : public Error
{
public:
  using Error::Error;
  const char * kind() const noexcept override { return "unsupported"; }
};

}  // namespace ince

#endif  // INCE__ERRORS_HPP_
