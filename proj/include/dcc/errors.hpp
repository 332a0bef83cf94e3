// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace dcc {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Geometry parameters breach a physical constraint (spacing, separation, dims).
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

// Point pair unusable by the diffraction kernel (r = 0 or non-forward).
class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class SymbolOutOfRange : public Error {
public:
    using Error::Error;
};

// Exhaustive codebook enumeration refused (> 2^20 entries).
class SearchSpaceTooLarge : public Error {
public:
    using Error::Error;
};

// Trellis state count above the decoder bound (2^16).
class StateSpaceTooLarge : public Error {
public:
    using Error::Error;
};

class UnknownVariant : public Error {
public:
    using Error::Error;
};

class NumericalSingularity : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

// Two codewords coincide; the code is non-injective.
class ZeroDistance : public Error {
public:
    using Error::Error;
};

class FileFormatError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Search space bounds admit no valid geometry.
class InfeasibleSpace : public Error {
public:
    using Error::Error;
};

// A documented precondition was violated by the caller.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

} // namespace dcc
