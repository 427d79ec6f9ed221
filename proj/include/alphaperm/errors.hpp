// SPDX-License-Identifier: Apache-2.0
//! \file alphaperm/errors.hpp
#pragma once

#include <stdexcept>
#include <string>

namespace alphaperm
{

//! Base class of every error thrown by the library.
class error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! An input exceeds a configured enumeration cap or a dimension limit.
class size_error : public error
{
  public:
    using error::error;
};

//! The matrix graph has a shape the requested algorithm does not support
//! (for example a cycle where a *-forest is required).
class structure_error : public error
{
  public:
    using error::error;
};

//! A parameter lies outside the mathematical domain of an operation.
class domain_error : public error
{
  public:
    using error::error;
};

//! An internal identity failed. Signals a bug or a violated precondition.
class internal_error : public error
{
  public:
    using error::error;
};

} // namespace alphaperm
