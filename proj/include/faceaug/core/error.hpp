/*
 * faceaug - Geometric face data augmentation from a single image and a 3D face mesh.
 *
 * File: include/faceaug/core/error.hpp
 *
 * Copyright 2026 The faceaug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#ifndef FACEAUG_CORE_ERROR_HPP
#define FACEAUG_CORE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace faceaug {

/**
 * Base class of every exception thrown by the library.
 */
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/**
 * Malformed input text (OBJ, manifest, CSV, config). Carries the 1-based line number when known,
 * 0 otherwise.
 */
class ParseError : public Error
{
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A documented precondition of an operation does not hold.
class InvalidArgument : public Error
{
public:
    using Error::Error;
};

/// A numerically degenerate configuration (collinear points, rank-deficient systems, zero-size boxes).
class DegenerateInput : public Error
{
public:
    using Error::Error;
};

/// An operating point below the resolution supported by the data (e.g. FAR < 1/#imposters).
class UnsupportedOperatingPoint : public Error
{
public:
    using Error::Error;
};

} // namespace faceaug

#endif // FACEAUG_CORE_ERROR_HPP
