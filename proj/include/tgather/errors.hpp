#pragma once

#include <stdexcept>
#include <string>

namespace tgather
{

// Base class of every error raised by the library.
class GatherError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Torus dimensions outside the supported model.
class InvalidDims : public GatherError
{
public:
    using GatherError::GatherError;
};

// A caller broke the documented precondition of an operation.
class PreconditionError : public GatherError
{
public:
    using GatherError::GatherError;
};

// An election met two candidates with equal views.
class TieError : public GatherError
{
public:
    using GatherError::GatherError;
};

// The protocol reached a state it has no rule for.
class ModelViolation : public GatherError
{
public:
    using GatherError::GatherError;
};

// An initial configuration the algorithm does not accept (symmetric, periodic, towers).
class InputRejected : public GatherError
{
public:
    using GatherError::GatherError;
};

// An exhaustive search would exceed the configured state-space guard.
class FeasibilityError : public GatherError
{
public:
    using GatherError::GatherError;
};

// Malformed scenario or trace text.
class ParseError : public GatherError
{
public:
    using GatherError::GatherError;
};

} // namespace tgather
